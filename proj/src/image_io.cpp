#include <png.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "alife/error.hpp"
#include "alife/imaging.hpp"

namespace fs = std::filesystem;

namespace alife {

namespace {

std::string lower_ext(const fs::path& p) {
  std::string e = p.extension().string();
  std::transform(e.begin(), e.end(), e.begin(), [](unsigned char c) { return std::tolower(c); });
  return e;
}

bool is_frame_file(const fs::path& p) {
  const std::string e = lower_ext(p);
  return e == ".pgm" || e == ".png";
}

float luminance(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  return static_cast<float>(std::lround(0.299 * r + 0.587 * g + 0.114 * b));
}

// Reads one whitespace-delimited PGM header token, skipping '#' comments.
std::string pgm_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  return tok;
}

Frame load_pgm(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open frame file: " + path.string());
  if (pgm_token(in) != "P5") throw Error("not a binary PGM (P5) file: " + path.string());
  int w = 0, h = 0, maxval = 0;
  try {
    w = std::stoi(pgm_token(in));
    h = std::stoi(pgm_token(in));
    maxval = std::stoi(pgm_token(in));
  } catch (const std::exception&) {
    throw Error("malformed PGM header: " + path.string());
  }
  if (w <= 0 || h <= 0) throw Error("malformed PGM header: " + path.string());
  if (maxval <= 0 || maxval > 255) {
    throw Error("unsupported bit depth (maxval " + std::to_string(maxval) + "): " + path.string());
  }
  std::vector<unsigned char> raw(static_cast<std::size_t>(w) * h);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (in.gcount() != static_cast<std::streamsize>(raw.size())) {
    throw Error("truncated PGM pixel data: " + path.string());
  }
  std::vector<float> data(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    data[i] = maxval == 255 ? raw[i] : std::round(raw[i] * 255.0f / maxval);
  }
  return Frame(w, h, std::move(data));
}

Frame load_png(const fs::path& path) {
  png_image img{};
  img.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&img, path.string().c_str())) {
    throw Error("cannot read PNG " + path.string() + ": " + img.message);
  }
  if (img.format & PNG_FORMAT_FLAG_LINEAR) {
    png_image_free(&img);
    throw Error("unsupported bit depth (16-bit PNG): " + path.string());
  }
  const bool colour = (img.format & PNG_FORMAT_FLAG_COLOR) != 0;
  img.format = colour ? PNG_FORMAT_RGBA : PNG_FORMAT_GRAY;
  const int channels = colour ? 4 : 1;
  std::vector<png_byte> buf(PNG_IMAGE_SIZE(img));
  if (!png_image_finish_read(&img, nullptr, buf.data(), 0, nullptr)) {
    std::string msg = img.message;
    png_image_free(&img);
    throw Error("cannot decode PNG " + path.string() + ": " + msg);
  }
  const int w = static_cast<int>(img.width);
  const int h = static_cast<int>(img.height);
  std::vector<float> data(static_cast<std::size_t>(w) * h);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const png_byte* px = &buf[i * channels];
    data[i] = colour ? luminance(px[0], px[1], px[2]) : static_cast<float>(px[0]);
  }
  return Frame(w, h, std::move(data));
}

std::vector<std::uint8_t> quantize(const Frame& f) {
  std::vector<std::uint8_t> out(f.pixels().size());
  std::transform(f.pixels().begin(), f.pixels().end(), out.begin(),
                 [](float v) { return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0f, 255.0f))); });
  return out;
}

void write_png(const fs::path& path, int w, int h, png_uint_32 format, const void* data) {
  png_image img{};
  img.version = PNG_IMAGE_VERSION;
  img.width = static_cast<png_uint_32>(w);
  img.height = static_cast<png_uint_32>(h);
  img.format = format;
  if (!png_image_write_to_file(&img, path.string().c_str(), 0, data, 0, nullptr)) {
    throw Error("cannot write PNG " + path.string() + ": " + img.message);
  }
}

}  // namespace

Frame load_frame(const fs::path& path) {
  if (!fs::exists(path)) throw Error("frame file not found: " + path.string());
  const std::string e = lower_ext(path);
  if (e == ".pgm") return load_pgm(path);
  if (e == ".png") return load_png(path);
  throw Error("unsupported frame format: " + path.string());
}

void save_pgm(const Frame& f, const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << "P5\n" << f.width() << ' ' << f.height() << "\n255\n";
  const auto bytes = quantize(f);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

void save_png(const Frame& f, const fs::path& path) {
  const auto bytes = quantize(f);
  write_png(path, f.width(), f.height(), PNG_FORMAT_GRAY, bytes.data());
}

void save_annotated_png(const Frame& f, std::span<const PixelPoint> markers, Rgb colour,
                        const fs::path& path) {
  const auto grey = quantize(f);
  std::vector<std::uint8_t> rgb(grey.size() * 3);
  for (std::size_t i = 0; i < grey.size(); ++i) rgb[3 * i] = rgb[3 * i + 1] = rgb[3 * i + 2] = grey[i];
  auto paint = [&](int x, int y) {
    if (x < 0 || y < 0 || x >= f.width() || y >= f.height()) return;
    const std::size_t i = 3 * (static_cast<std::size_t>(y) * f.width() + x);
    rgb[i] = colour.r;
    rgb[i + 1] = colour.g;
    rgb[i + 2] = colour.b;
  };
  for (const auto& m : markers) {
    for (int d = -3; d <= 3; ++d) {
      paint(m.x + d, m.y);
      paint(m.x, m.y + d);
    }
  }
  write_png(path, f.width(), f.height(), PNG_FORMAT_RGB, rgb.data());
}

std::vector<fs::path> list_sequence(const fs::path& path) {
  if (!fs::exists(path)) throw Error("sequence path not found: " + path.string());
  std::vector<fs::path> files;
  if (fs::is_directory(path)) {
    for (const auto& entry : fs::directory_iterator(path)) {
      if (entry.is_regular_file() && is_frame_file(entry.path())) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end(),
              [](const fs::path& a, const fs::path& b) { return a.filename().string() < b.filename().string(); });
  } else {
    std::ifstream in(path);
    if (!in) throw Error("cannot open sequence manifest: " + path.string());
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line.front() == '#') continue;
      fs::path p(line);
      files.push_back(p.is_relative() ? path.parent_path() / p : p);
    }
  }
  if (files.empty()) throw Error("no frames found in " + path.string());
  return files;
}

std::vector<Frame> load_sequence(const fs::path& path) {
  std::vector<Frame> frames;
  for (const auto& file : list_sequence(path)) {
    Frame f = load_frame(file);
    if (!frames.empty() && (f.width() != frames.front().width() || f.height() != frames.front().height())) {
      std::ostringstream msg;
      msg << "frame size mismatch: " << file.string() << " is " << f.width() << "x" << f.height()
          << ", expected " << frames.front().width() << "x" << frames.front().height();
      throw Error(msg.str());
    }
    frames.push_back(std::move(f));
  }
  return frames;
}

}  // namespace alife
