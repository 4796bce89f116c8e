#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mixer/config.hpp"

namespace mixer {

inline constexpr int kSchemaVersion = 1;

enum class GoldenMode { off, write, compare };

/// One pipeline invocation. Identical configs give byte-identical reports.
struct RunConfig {
  std::string command;  // chartable zeta zetatrend mixpair survey thompson charbound interleave advantage
  std::string group;
  std::vector<std::string> groups;  // zetatrend family
  std::optional<std::uint64_t> seed;
  std::uint64_t max_order = default_max_order();
  std::uint64_t loop_budget = default_loop_budget();
  unsigned threads = 0;

  std::vector<double> s_values{1.0};  // zeta; zetatrend and charbound use the first

  std::string x;
  std::string y;

  std::string coupling = "independent";  // independent | diagonal | transinv:<elt> | bijfile:<path>
  std::vector<double> deltas{1.0};
  std::uint64_t sweep_limit = 100'000;
  std::uint64_t survey_samples = 100'000;

  std::uint32_t arity = 2;
  double alpha = 0.5;
  std::optional<double> beta;  // defaults to alpha
  std::uint64_t mc_samples = 0;  // 0 selects the exact path
  std::string set_a;             // optional tuple-set files
  std::string set_b;

  std::string protocol;
  std::string g;
  std::string h;
  std::uint64_t advantage_samples = 100'000;
  bool advantage_exact = false;

  GoldenMode golden = GoldenMode::off;
  std::string golden_dir = "golden/v1";
};

struct RunOutput {
  std::string json;
  std::string csv;  // survey only
  std::string golden_path;
};

/// Throws mixer::Error; GoldenMismatch when a compare run drifts.
RunOutput run(const RunConfig& config);

/// Parses the JSON form used by the C API. Unknown keys are rejected.
RunConfig run_config_from_json(const std::string& text);
std::string run_config_to_json(const RunConfig& config);

/// `<command>[-params]__<group>__<seed>.json`, with unsafe characters replaced.
std::string golden_file_name(const RunConfig& config);

/// First differing path, or empty when the documents agree. Numbers compare
/// within max(abs_tol, rel_tol * |expected|); everything else exactly.
std::string golden_diff(const std::string& expected, const std::string& actual, double rel_tol = 1e-9,
                        double abs_tol = 1e-12);

}  // namespace mixer
