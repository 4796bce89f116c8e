#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

#include "mixer/error.hpp"
#include "mixer/run.hpp"
#include "mixer/spec.hpp"

using namespace mixer;
using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::ok;
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("mixer_cli_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path / name) << text;
    return (path / name).string();
  }
};

struct Shell {
  int status = -1;
  std::string out;
};

// Runs the CLI with stdout captured and stderr discarded.
Shell cli(const std::string& args) {
  const std::string cmd = std::string(MIXER_CLI) + " " + args + " 2>/dev/null";
  Shell r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int raw = ::pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

RunConfig config(const std::string& command, const std::string& group) {
  RunConfig c;
  c.command = command;
  c.group = group;
  return c;
}

}  // namespace

TEST_CASE("group spec grammar") {
  CHECK(parse_spec("A:5").kind == GroupKind::alternating);
  CHECK(parse_spec("A:5").degree == 5);
  CHECK(parse_spec("S:4").kind == GroupKind::symmetric);
  CHECK(parse_spec("SL2:5").q == 5);
  CHECK(parse_spec("PSL2:8").kind == GroupKind::psl2);
  CHECK(parse_spec("PSL2:9").field.modulus == std::vector<std::uint32_t>{1, 0, 1});
  CHECK(code_of([] { (void)parse_spec("X:2"); }) == Errc::spec_syntax);
  CHECK(code_of([] { (void)parse_spec("A5"); }) == Errc::spec_syntax);
  CHECK(code_of([] { (void)parse_spec("A:"); }) == Errc::spec_syntax);
  CHECK(code_of([] { (void)parse_spec("A:x"); }) == Errc::spec_syntax);
  CHECK(code_of([] { (void)parse_spec("PSL2:6"); }) == Errc::unsupported_parameters);
  CHECK(code_of([] { (void)parse_spec("A:2"); }) == Errc::unsupported_parameters);
  CHECK(code_of([] { (void)parse_spec("A:12", 1000); }) == Errc::cap_exceeded);
  CHECK(code_of([] { (void)parse_spec("permgen:/nonexistent/gens.txt"); }) == Errc::io_error);
}

TEST_CASE("generator files") {
  TempDir dir;
  const auto perm = dir.write("s5.txt", "(1 2 3 4 5)\n(1 2)\n");
  const auto spec = parse_spec("permgen:" + perm);
  const auto g = GroupTable::build(spec);
  CHECK(g.order() == 120);
  CHECK(spec.label() == "permgen:" + perm);
  const auto mat = dir.write("sl2.txt", "1,1,0,1\n0,1,4,0\n");
  CHECK(GroupTable::build(parse_spec("matgen:" + mat + ",q=5")).order() == 120);
  const auto bad = dir.write("bad.txt", "(1 2\n");
  CHECK(code_of([&] { (void)parse_spec("permgen:" + bad); }) == Errc::spec_syntax);
  CHECK(code_of([&] { (void)parse_spec("matgen:" + mat); }) == Errc::spec_syntax);
}

TEST_CASE("element and class syntax") {
  const auto g = GroupTable::build(parse_spec("A:5"));
  const auto cd = conj_classes(g);
  const Index c = parse_element("(1 2 3 4 5)", g);
  CHECK(g.describe(c) == "(1 2 3 4 5)");
  CHECK(parse_element("e", g) == 0);
  CHECK(parse_element("()", g) == 0);
  CHECK(parse_element("7", g) == 7);
  CHECK(parse_element("hex:" + g.hex(c), g) == c);
  CHECK(parse_class("(1 3 5 2 4)", g, cd) == cd.class_of[parse_element("(1 3 5 2 4)", g)]);
  CHECK(parse_class("2", g, cd) == 2);
  CHECK(code_of([&] { (void)parse_element("(1 2)", g); }) == Errc::invalid_argument);
  CHECK(code_of([&] { (void)parse_element("60", g); }) == Errc::invalid_argument);
  CHECK(code_of([&] { (void)parse_class("9", g, cd); }) == Errc::invalid_argument);

  const auto m = GroupTable::build(parse_spec("PSL2:7"));
  const Index x = parse_element("[1,1;0,1]", m);
  CHECK(parse_element("1,1,0,1", m) == x);
  // -M names the same element of PSL2.
  CHECK(parse_element("6,6,0,6", m) == x);
}

TEST_CASE("run reports are deterministic") {
  auto c = config("interleave", "S:3");
  c.seed = 5;
  const auto a = run(c);
  const auto b = run(c);
  CHECK(a.json == b.json);
  const auto j = json::parse(a.json);
  CHECK(j["schema_version"] == kSchemaVersion);
  CHECK(j["total"] == 324);
  CHECK(j["mode"] == "exact");

  auto s = config("survey", "A:5");
  s.seed = 1;
  s.deltas = {1.0};
  const auto r = run(s);
  CHECK(r.json == run(s).json);
  std::istringstream csv(r.csv);
  std::string header;
  std::getline(csv, header);
  CHECK(header == "xclass,yclass,weight,N,l1,coverage");
  std::size_t rows = 0;
  for (std::string line; std::getline(csv, line);) rows += !line.empty();
  CHECK(rows == 25);
}

TEST_CASE("sampling commands require a seed") {
  CHECK(code_of([] { (void)run(config("survey", "A:5")); }) == Errc::invalid_argument);
  CHECK(code_of([] { (void)run(config("interleave", "S:3")); }) == Errc::invalid_argument);
  CHECK(code_of([] { (void)run(config("nosuch", "S:3")); }) == Errc::spec_syntax);
}

TEST_CASE("config JSON round trip") {
  auto c = config("interleave", "A:5");
  c.seed = 9;
  c.arity = 3;
  c.alpha = 0.25;
  c.beta = 0.75;
  c.mc_samples = 20000;
  const auto back = run_config_from_json(run_config_to_json(c));
  CHECK(back.command == "interleave");
  CHECK(back.seed == c.seed);
  CHECK(back.arity == 3);
  CHECK(back.alpha == 0.25);
  CHECK(back.beta == c.beta);
  CHECK(back.mc_samples == 20000);
  CHECK(golden_file_name(back) == golden_file_name(c));
  CHECK(code_of([] { (void)run_config_from_json(R"({"command":"zeta","group":"A:5","bogus":1})"); }) ==
        Errc::spec_syntax);
  CHECK(code_of([] { (void)run_config_from_json("{"); }) == Errc::spec_syntax);
}

TEST_CASE("golden file names") {
  auto c = config("interleave", "A:5");
  c.seed = 3;
  CHECK(golden_file_name(c) == "interleave-t2-a0.5-b0.5-exact__A_5__3.json");
  CHECK(golden_file_name(config("thompson", "PSL2:8")) == "thompson__PSL2_8__noseed.json");
}

TEST_CASE("golden diff") {
  CHECK(golden_diff(R"({"a":1.0,"b":[1,2]})", R"({"a":1.0000000000001,"b":[1,2]})").empty());
  CHECK_FALSE(golden_diff(R"({"a":1.0})", R"({"a":1.001})").empty());
  CHECK_FALSE(golden_diff(R"({"a":1.0})", R"({"a":1.0,"c":2})").empty());
  CHECK_FALSE(golden_diff(R"({"b":[1,2]})", R"({"b":[1,2,3]})").empty());
  CHECK_FALSE(golden_diff(R"({"s":"x"})", R"({"s":"y"})").empty());
  CHECK(golden_diff(R"({"n":null})", R"({"n":null})").empty());
}

TEST_CASE("golden write, compare and drift") {
  TempDir dir;
  auto c = config("zeta", "A:5");
  c.s_values = {0.0, 1.0};
  c.golden_dir = dir.path.string();
  c.golden = GoldenMode::write;
  const auto w = run(c);
  CHECK(fs::exists(w.golden_path));
  c.golden = GoldenMode::compare;
  CHECK(run(c).json == w.json);
  std::string text;
  {
    std::ifstream in(w.golden_path);
    text.assign(std::istreambuf_iterator<char>(in), {});
  }
  const auto pos = text.find("2.1166");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 6, "2.1266");
  std::ofstream(w.golden_path) << text;
  CHECK(code_of([&] { (void)run(c); }) == Errc::golden_mismatch);
  auto missing = c;
  missing.s_values = {3.0};
  CHECK(code_of([&] { (void)run(missing); }) == Errc::io_error);
}

TEST_CASE("checked-in goldens still match") {
  struct Case {
    std::string command;
    std::string group;
    std::optional<std::uint64_t> seed;
  };
  for (const auto& k : std::vector<Case>{{"chartable", "A:5", {}},
                                         {"chartable", "PSL2:7", {}},
                                         {"zetatrend", "", {}},
                                         {"mixpair", "A:5", {}},
                                         {"thompson", "PSL2:8", {}},
                                         {"charbound", "A:5", {}},
                                         {"interleave", "S:3", 1},
                                         {"interleave", "A:5", 1},
                                         {"survey", "PSL2:11", 1}}) {
    auto c = config(k.command, k.group);
    c.seed = k.seed;
    c.golden_dir = MIXER_GOLDEN_DIR;
    c.golden = GoldenMode::compare;
    if (k.command == "zetatrend") c.groups = {"A:7", "A:8", "A:9"};
    if (k.command == "mixpair") c.x = c.y = "3";
    if (k.command == "survey") c.deltas = {0.1, 0.5, 1.0, 2.0};
    CAPTURE(golden_file_name(c));
    CHECK(code_of([&] { (void)run(c); }) == Errc::ok);
  }
}

TEST_CASE("command-line exit codes and output") {
  auto r = cli("zeta A:5 --s 0,-2");
  CHECK(r.status == 0);
  const auto j = json::parse(r.out);
  CHECK(j["values"][0]["zeta"] == 5.0);
  CHECK(j["values"][1]["zeta"] == 60.0);

  CHECK(cli("zeta PSL2:6").status == 3);
  CHECK(cli("zeta A:2").status == 3);
  CHECK(cli("zeta X:2").status == 2);
  CHECK(cli("zeta").status == 2);
  CHECK(cli("nosuch A:5").status == 2);
  CHECK(cli("survey A:5").status == 13);
  CHECK(cli("zeta A:12 --max-order 1000").status == 6);
  CHECK(cli("interleave S:3 --seed 1 --t 2 --mc 100").status == 13);
  CHECK(cli("mixpair A:5 --x 0 --y 9").status == 13);

  const auto s1 = cli("survey A:5 --seed 4 --format csv");
  const auto s2 = cli("survey A:5 --seed 4 --format csv");
  CHECK(s1.status == 0);
  CHECK(s1.out == s2.out);
  CHECK(s1.out.rfind("xclass,yclass", 0) == 0);

  TempDir dir;
  const auto w = cli("zeta A:5 --golden write --golden-dir " + dir.path.string());
  CHECK(w.status == 0);
  CHECK(cli("zeta A:5 --golden compare --golden-dir " + dir.path.string()).status == 0);
  const auto file = dir.path / "zeta-s1__A_5__noseed.json";
  REQUIRE(fs::exists(file));
  std::ofstream(file) << R"({"schema_version": 1})";
  CHECK(cli("zeta A:5 --golden compare --golden-dir " + dir.path.string()).status == 16);

  const auto out = dir.path / "reports";
  CHECK(cli("thompson A:5 --out-dir " + out.string()).status == 0);
  CHECK(fs::exists(out / "thompson__A_5__noseed.json"));
  CHECK(fs::exists(out / "thompson__A_5__noseed.meta.json"));
}

TEST_CASE("command-line advantage run") {
  TempDir dir;
  const auto g = GroupTable::build(parse_spec("S:3"));
  // A with everything, split on the first coordinate of a.
  std::string a0 = "t=2 group=S:3\n";
  std::string a1 = a0;
  std::string full = a0;
  for (int x = 0; x < 6; ++x) {
    for (int y = 0; y < 6; ++y) {
      (x < 3 ? a0 : a1) += std::to_string(x) + "," + std::to_string(y) + "\n";
      full += std::to_string(x) + "," + std::to_string(y) + "\n";
    }
  }
  dir.write("a0.txt", a0);
  dir.write("a1.txt", a1);
  dir.write("full.txt", full);
  const auto proto = dir.write("p.txt", "1,a0.txt,full.txt\n0,a1.txt,full.txt\n");
  const auto r = cli("advantage S:3 --protocol " + proto + " --g e --h \"(1 2 3)\" --seed 2 --samples 20000 --exact");
  REQUIRE(r.status == 0);
  const auto j = json::parse(r.out);
  CHECK(j["exact"]["advantage"] == 0.0);
  const auto uncovered = dir.write("u.txt", "1,a0.txt,full.txt\n");
  CHECK(cli("advantage S:3 --protocol " + uncovered + " --g e --h 1 --seed 2 --samples 20000").status == 12);
  (void)g;
}
