#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "alife/cli.hpp"
#include "helpers.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "alife");
  std::vector<const char*> argv;
  for (auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = alife::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string first_line(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  return line;
}

}  // namespace

TEST_CASE("usage errors exit with 2") {
  const auto none = cli({});
  CHECK(none.code == 2);
  CHECK(none.err.find("Usage") != std::string::npos);
  CHECK(cli({"dance"}).code == 2);
  CHECK(cli({"localize", "--no-such-flag"}).code == 2);
  CHECK(cli({"synth"}).code == 2);
  CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("runtime failures exit with 1") {
  testutil::TempDir dir("clifail");
  std::ofstream(dir.path / "junk.pgm") << "not an image";
  const auto r = cli({"localize", (dir.path / "junk.pgm").string()});
  CHECK(r.code == 1);
  CHECK(r.err.find("alife: error:") != std::string::npos);
  CHECK(cli({"localize", (dir.path / "junk.pgm").string(), "--set", "snake.zz=1"}).code == 1);
}

TEST_CASE("stage by stage chain") {
  testutil::TempDir dir("chain");
  const auto d = dir.path;
  REQUIRE(cli({"synth", "-o", (d / "utt").string(), "--class", "BA", "--impulse", "0.05"}).code == 0);
  CHECK(fs::exists(d / "utt" / "frame_034.pgm"));
  CHECK(first_line(d / "utt" / "truth.csv") == "frame,poi_name,x,y,dark_count");

  const auto loc = cli({"localize", (d / "utt" / "frame_000.pgm").string(), "-o", (d / "pois.txt").string(),
                        "--annotate", (d / "loc.png").string()});
  REQUIRE(loc.code == 0);
  const std::string pois = slurp(d / "pois.txt");
  CHECK(pois.find("left_corner=") != std::string::npos);
  CHECK(pois.find("sweeps=") != std::string::npos);
  CHECK(fs::exists(d / "loc.png"));

  REQUIRE(cli({"track", (d / "utt").string(), "--pois", (d / "pois.txt").string(), "-o", (d / "track.csv").string()})
              .code == 0);
  CHECK(first_line(d / "track.csv") == "frame,poi_name,x,y,votes,margin");
  REQUIRE(cli({"extract", (d / "utt").string(), "--track", (d / "track.csv").string(), "-o",
               (d / "features.csv").string()})
              .code == 0);
  CHECK(first_line(d / "features.csv") == "frame,dh,dv,da,dark_count,s_dark");
  REQUIRE(cli({"normalize", (d / "features.csv").string(), "-o", (d / "curves.csv").string()}).code == 0);
  CHECK(first_line(d / "curves.csv").rfind("feature_id,v0,", 0) == 0);

  const auto manual = cli({"track", (d / "utt").string(), "--left", "52,60", "--right", "108,60", "--upper", "80,53",
                           "--lower", "80,69", "--method", "ssd"});
  CHECK(manual.code == 0);
  CHECK(manual.out.rfind("frame,poi_name", 0) == 0);
}

TEST_CASE("synth, train, recognize and evaluate") {
  testutil::TempDir dir("corpus");
  const auto d = dir.path;
  REQUIRE(cli({"synth", "-o", (d / "c").string(), "--per-class", "6", "--seed", "3"}).code == 0);
  const auto manifest = (d / "c" / "manifest.csv").string();
  REQUIRE(fs::exists(manifest));

  const auto ev = cli({"evaluate", manifest, "--csv", (d / "report.csv").string()});
  REQUIRE(ev.code == 0);
  CHECK(ev.out.find("Overall recognition rate:") != std::string::npos);
  CHECK(first_line(d / "report.csv") == "true_class,BA,BI,BOU,train,test,rate");

  REQUIRE(cli({"train", manifest, "-o", (d / "m.alife").string()}).code == 0);
  const auto rec = cli({"recognize", (d / "c" / "BI_002").string(), "-m", (d / "m.alife").string(), "--csv",
                        (d / "rec.csv").string()});
  REQUIRE(rec.code == 0);
  CHECK(rec.out.find("winner: ") != std::string::npos);
  CHECK(rec.out.find("input,winner,P_BA,P_BI,P_BOU") != std::string::npos);
  CHECK(first_line(d / "rec.csv") == "input,winner,P_BA,P_BI,P_BOU");

  const auto bad = cli({"recognize", (d / "c" / "BI_002").string(), "-m", (d / "m.alife").string(), "--omega", "15"});
  CHECK(bad.code == 1);
  CHECK(bad.err.find("omega mismatch") != std::string::npos);

  const auto u1 = cli({"evaluate", manifest, "--scorer", "uniform", "--seed", "4"});
  const auto u2 = cli({"evaluate", manifest, "--scorer", "uniform", "--seed", "4"});
  CHECK(u1.code == 0);
  CHECK(u1.out == u2.out);
}

TEST_CASE("the installed binary follows the same exit codes") {
  const char* path = std::getenv("ALIFE_CLI_PATH");
  if (!path) return;
  const std::string bin = std::string("\"") + path + "\"";
  auto status = [](const std::string& cmd) {
    const int raw = std::system((cmd + " >/dev/null 2>&1").c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  CHECK(status(bin) == 2);
  CHECK(status(bin + " nonsense") == 2);
  CHECK(status(bin + " localize /definitely/missing.pgm") == 2);
  testutil::TempDir dir("bin");
  std::ofstream(dir.path / "x.pgm") << "garbage";
  CHECK(status(bin + " localize " + (dir.path / "x.pgm").string()) == 1);
  CHECK(status(bin + " synth -o " + (dir.path / "s").string() + " --class BOU --frames 5") == 0);
}
