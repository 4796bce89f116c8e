// Command-line front end. Everything goes through the C API in mixer.h.
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mixer/mixer.h"

namespace {

using json = nlohmann::json;

struct Common {
  std::string group;
  std::vector<std::string> groups;
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
  std::string out_dir;
  std::string golden;
  std::string golden_dir = "golden/v1";
  std::optional<std::uint64_t> max_order;
  std::optional<std::uint64_t> loop_budget;
  std::string format = "json";
};

struct Options {
  Common common;
  std::vector<double> s{1.0};
  std::string x;
  std::string y;
  std::string coupling = "independent";
  std::vector<double> deltas{1.0};
  std::uint64_t sweep_limit = 100000;
  std::uint64_t survey_samples = 100000;
  std::uint32_t t = 2;
  double alpha = 0.5;
  std::optional<double> beta;
  bool exact = false;
  std::uint64_t mc = 0;
  std::string set_a;
  std::string set_b;
  std::string protocol;
  std::string g;
  std::string h;
  std::uint64_t samples = 100000;
  bool advantage_exact = false;
};

void add_common(CLI::App* sub, Common& c, bool many_groups) {
  if (many_groups) {
    sub->add_option("groups", c.groups, "Group specs, e.g. A:7 A:8 A:9")->required();
  } else {
    sub->add_option("group", c.group, "Group spec: A:<n> S:<n> SL2:<q> PSL2:<q> permgen:<file> matgen:<file>,q=<q>")
        ->required();
  }
  sub->add_option("--seed", c.seed, "64-bit seed (required by sampling commands)");
  sub->add_option("--threads", c.threads, "Worker threads (0 = all cores)");
  sub->add_option("--out-dir", c.out_dir, "Write report files here instead of stdout");
  sub->add_option("--golden", c.golden, "Golden mode")->check(CLI::IsMember({"write", "compare"}));
  sub->add_option("--golden-dir", c.golden_dir, "Golden file directory");
  sub->add_option("--max-order", c.max_order, "Cap on |G| (default MIXER_MAX_ORDER or 2000000)");
  sub->add_option("--format", c.format, "What to print on stdout")->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--loop-budget", c.loop_budget, "Cap on brute-force loops (default MIXER_LOOP_BUDGET or 1e9)");
}

json make_config(const std::string& command, const Options& o) {
  const Common& c = o.common;
  json j;
  j["command"] = command;
  j["group"] = c.group;
  if (!c.groups.empty()) j["groups"] = c.groups;
  if (c.seed) j["seed"] = *c.seed;
  j["threads"] = c.threads;
  if (c.max_order) j["max_order"] = *c.max_order;
  if (c.loop_budget) j["loop_budget"] = *c.loop_budget;
  j["s"] = o.s;
  j["x"] = o.x;
  j["y"] = o.y;
  j["coupling"] = o.coupling;
  j["deltas"] = o.deltas;
  j["sweep_limit"] = o.sweep_limit;
  j["survey_samples"] = o.survey_samples;
  j["t"] = o.t;
  j["alpha"] = o.alpha;
  if (o.beta) j["beta"] = *o.beta;
  j["mc_samples"] = o.exact ? 0 : o.mc;
  j["set_a"] = o.set_a;
  j["set_b"] = o.set_b;
  j["protocol"] = o.protocol;
  j["g"] = o.g;
  j["h"] = o.h;
  j["advantage_samples"] = o.samples;
  j["advantage_exact"] = o.advantage_exact;
  j["golden"] = c.golden.empty() ? "off" : c.golden;
  j["golden_dir"] = c.golden_dir;
  return j;
}

std::string take(char* s) {
  std::string out = s == nullptr ? "" : s;
  mixer_string_free(s);
  return out;
}

bool write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  f << text;
  return static_cast<bool>(f);
}

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

int execute(const std::string& command, const Options& o) {
  const json config = make_config(command, o);
  const std::string config_text = config.dump();
  char* report = nullptr;
  char* csv = nullptr;
  const auto start = std::chrono::steady_clock::now();
  const int status = mixer_run(config_text.c_str(), &report, &csv);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (status != MIXER_OK) {
    std::cerr << "error[" << mixer_status_name(status) << "]: " << mixer_last_error() << "\n";
    return status;
  }
  const std::string report_text = take(report);
  const std::string csv_text = take(csv);

  if (o.common.out_dir.empty()) {
    if (o.common.format == "csv") {
      if (csv_text.empty()) {
        std::cerr << "error[invalid_argument]: " << command << " has no CSV output\n";
        return MIXER_E_INVALID_ARGUMENT;
      }
      std::cout << csv_text;
    } else {
      std::cout << report_text;
    }
    return 0;
  }
  char* name_raw = nullptr;
  if (mixer_golden_name(config_text.c_str(), &name_raw) != MIXER_OK) {
    std::cerr << "error: " << mixer_last_error() << "\n";
    return MIXER_E_INTERNAL;
  }
  std::string stem = take(name_raw);
  stem = stem.substr(0, stem.size() - 5);  // drop .json
  const std::filesystem::path dir(o.common.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  bool ok = write_file(dir / (stem + ".json"), report_text);
  if (!csv_text.empty()) ok = ok && write_file(dir / (stem + ".csv"), csv_text);
  // Timestamps stay out of the report so equal configs give equal bytes.
  json meta = {{"created_utc", utc_now()}, {"seconds", seconds}, {"version", mixer_version()}, {"config", config}};
  ok = ok && write_file(dir / (stem + ".meta.json"), meta.dump(2) + "\n");
  if (!ok) {
    std::cerr << "error[io_error]: cannot write reports to " << dir << "\n";
    return MIXER_E_IO;
  }
  std::cout << (dir / (stem + ".json")).string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Character tables, class-product mixing and interleaved products of finite groups"};
  app.require_subcommand(1);
  Options o;
  std::string chosen;

  auto* chartable = app.add_subcommand("chartable", "Conjugacy classes, Dixon-Schneider table, orthogonality check");
  add_common(chartable, o.common, false);

  auto* zeta = app.add_subcommand("zeta", "Witten zeta values");
  add_common(zeta, o.common, false);
  zeta->add_option("--s", o.s, "Exponents")->delimiter(',');

  auto* zetatrend = app.add_subcommand("zetatrend", "Normalized zeta excess over a family");
  add_common(zetatrend, o.common, true);
  zetatrend->add_option("--s", o.s, "Exponent")->delimiter(',');

  auto* mixpair = app.add_subcommand("mixpair", "Distribution of x'y' over conjugates");
  add_common(mixpair, o.common, false);
  mixpair->add_option("--x", o.x, "Class index or element")->required();
  mixpair->add_option("--y", o.y, "Class index or element")->required();

  auto* survey = app.add_subcommand("survey", "Survey of N = |G| ||p_{x,y}||^2 under a coupling");
  add_common(survey, o.common, false);
  survey->add_option("--coupling", o.coupling, "independent | diagonal | transinv:<elt> | bijfile:<path>");
  survey->add_option("--deltas", o.deltas, "Thresholds delta for Prob[N <= 1 + delta]")->delimiter(',');
  survey->add_option("--sweep-limit", o.sweep_limit, "Sweep every x when |G| is at most this");
  survey->add_option("--samples", o.survey_samples, "Draws when sampling");

  auto* thompson = app.add_subcommand("thompson", "Exhaustive search for a class C with C^2 = G");
  add_common(thompson, o.common, false);

  auto* charbound = app.add_subcommand("charbound", "Share of x with |chi(x)| <= chi(1)^(s/2) against 2 - zeta(s)");
  add_common(charbound, o.common, false);
  charbound->add_option("--s", o.s, "Exponent")->delimiter(',');

  auto* interleave = app.add_subcommand("interleave", "Distribution of interleaved products a.b");
  add_common(interleave, o.common, false);
  interleave->add_option("--t", o.t, "Arity");
  interleave->add_option("--alpha", o.alpha, "Density of A");
  interleave->add_option("--beta", o.beta, "Density of B (defaults to alpha)");
  auto* exact_flag = interleave->add_flag("--exact", o.exact, "Exact counting (default)");
  interleave->add_option("--mc", o.mc, "Monte Carlo with this many samples")->excludes(exact_flag);
  interleave->add_option("--a", o.set_a, "Tuple-set file for A");
  interleave->add_option("--b", o.set_b, "Tuple-set file for B");

  auto* advantage = app.add_subcommand("advantage", "Distinguishing advantage of a rectangle protocol");
  advantage->set_help_flag("--help", "Print this help message and exit");  // frees -h for --h
  add_common(advantage, o.common, false);
  advantage->add_option("--protocol", o.protocol, "Protocol file")->required();
  advantage->add_option("--g", o.g, "First target element")->required();
  advantage->add_option("--h", o.h, "Second target element")->required();
  advantage->add_option("--samples", o.samples, "Fiber draws per target");
  advantage->add_flag("--exact", o.advantage_exact, "Also compute exact p_g, p_h and the rectangle inequality");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : MIXER_E_SPEC_SYNTAX;
  }
  for (auto* sub : app.get_subcommands()) chosen = sub->get_name();
  return execute(chosen, o);
}
