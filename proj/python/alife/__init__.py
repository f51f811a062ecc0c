"""Lip-reading pipeline: snake localisation, voting tracker, geometric features, fused classifier."""

from ._alife import (
    AlifeError,
    Model,
    analyze,
    derive_omega,
    evaluate,
    extract,
    load_sequence,
    localize,
    normalize,
    recognize,
    synthesize,
    track,
    train,
)

__all__ = [
    "AlifeError",
    "Model",
    "analyze",
    "derive_omega",
    "evaluate",
    "extract",
    "load_sequence",
    "localize",
    "normalize",
    "recognize",
    "synthesize",
    "track",
    "train",
]
