#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "mixer/characters.hpp"
#include "mixer/classes.hpp"
#include "mixer/config.hpp"
#include "mixer/group.hpp"

namespace mixer {

/// The class function g -> p_{x,y}(g): probability that g = x'y' for
/// independent uniform conjugates x' of x and y' of y. `values[k]` is the
/// per-element probability on class k, so sum_k |C_k| values[k] = 1.
struct PairDistribution {
  std::uint32_t x_class = 0;
  std::uint32_t y_class = 0;
  std::uint64_t group_order = 0;
  std::vector<std::uint64_t> class_sizes;
  std::vector<double> values;
  bool exact = false;  // true when produced by brute-force counting

  // Exact path only: pairs (u, v) in C_x x C_y with uv in C_k.
  std::vector<std::uint64_t> pair_counts;
  std::uint64_t total_pairs = 0;

  // Numeric path only: float-lift negatives that were clamped to zero.
  std::size_t clamped = 0;
  double most_negative = 0.0;
};

/// Frobenius formula: |G|^-1 sum_chi chi(x) chi(y) chi(g^-1) / chi(1).
PairDistribution p_char(std::uint32_t x_class, std::uint32_t y_class, const CharacterTable& table,
                        const ClassData& classes);

/// Definitional oracle: counts all |C_x| |C_y| products.
/// Throws LoopBudgetExceeded when that count exceeds `loop_budget`.
PairDistribution p_brute(std::uint32_t x_class, std::uint32_t y_class, const GroupTable& group,
                         const ClassData& classes, std::uint64_t loop_budget = default_loop_budget());

/// sum_g p(g)^2.
double l2_sq(const PairDistribution& p);
/// |G|^-1 sum_chi |chi(x)|^2 |chi(y)|^2 / chi(1)^2.
double l2_sq_char(std::uint32_t x_class, std::uint32_t y_class, const CharacterTable& table);

struct UniformDistance {
  double l1 = 0.0;
  double l2_sq = 0.0;  // sum_g (p(g) - 1/|G|)^2, summed directly
  double linf = 0.0;
};

UniformDistance dist_to_uniform(const PairDistribution& p);

inline constexpr double kNumericSupportThreshold = 1e-10;

struct Coverage {
  std::uint64_t support = 0;  // |x^G y^G|
  double fraction = 0.0;
  bool numeric = false;  // support decided by the 1e-10 threshold
};

Coverage coverage(const PairDistribution& p);

struct ThompsonResult {
  std::uint32_t best_class = 0;
  std::uint64_t best_coverage = 0;
  double fraction = 0.0;
  bool witness = false;  // some class C has C^2 = G
  std::vector<std::uint64_t> class_coverage;  // |C_x^2| for every class
};

/// Exact |(x^G)^2| for every class: g_l is covered iff some u in x^G has
/// u^-1 g_l in x^G.
ThompsonResult thompson_search(const GroupTable& group, const ClassData& classes);

/// Joint distribution of (x, y) with uniform marginals.
struct Coupling {
  enum class Kind { independent, diagonal, translated_inverse, bijection };
  Kind kind = Kind::independent;
  Index translate = 0;         // a, for y = x^-1 a
  std::vector<Index> mapping;  // y = mapping[x] for bijection couplings
  std::string source;          // bijection file path, for descriptors

  static Coupling independent() { return {}; }
  static Coupling diagonal() { return {Kind::diagonal, 0, {}, {}}; }
  static Coupling translated_inverse(Index a) { return {Kind::translated_inverse, a, {}, {}}; }
  /// Throws InvalidArgument unless `mapping` is a permutation of [0, |G|).
  static Coupling bijection(std::vector<Index> mapping, std::size_t group_order, std::string source = {});

  std::string describe(const GroupTable& group) const;
};

struct SurveyRecord {
  std::uint32_t x_class = 0;
  std::uint32_t y_class = 0;
  std::uint64_t count = 0;  // weight numerator; weight = count / SurveyReport::denominator
  double weight = 0.0;
  double norm = 0.0;  // N = |G| ||p_{x,y}||_2^2
  double l1 = 0.0;
  double coverage = 0.0;
};

struct SurveyThreshold {
  double delta = 0.0;
  double probability = 0.0;  // weighted Prob[N <= 1 + delta]
};

inline constexpr const char* kNormalizationNote =
    "N = |G| * ||p_{x,y}||_2^2; thresholds 1 + delta are bounds on N (N = 1 for the uniform distribution)";

struct SurveyReport {
  std::string coupling;
  std::vector<SurveyRecord> records;  // one per class pair, ordered by (x_class, y_class)
  std::uint64_t denominator = 1;
  std::vector<SurveyThreshold> thresholds;
  std::vector<std::pair<double, double>> quantiles;  // (level, N)
  double mean_norm = 0.0;
  bool sampling_fallback = false;
  std::uint64_t samples = 0;
  std::string normalization_note = kNormalizationNote;
};

struct SurveyOptions {
  std::uint64_t seed = 0;
  std::uint64_t exact_sweep_limit = 100'000;  // sweep every x when |G| <= this
  std::uint64_t samples = 100'000;            // draws otherwise (at least 1e5)
};

SurveyReport survey(const GroupTable& group, const ClassData& classes, const CharacterTable& table,
                    const Coupling& coupling, const std::vector<double>& deltas, const SurveyOptions& options = {});

struct CharBoundResult {
  double s = 0.0;
  double fraction = 0.0;     // class-size weighted share of x with |chi(x)| <= chi(1)^(s/2) for all chi
  double lower_bound = 0.0;  // 2 - zeta_G(s)
  bool asserted = false;     // bound below 1, so the inequality is checked
};

/// Throws BoundViolation if fraction <= 2 - zeta_G(s) while that bound is below 1.
CharBoundResult char_bound_fraction(const ClassData& classes, const CharacterTable& table, double s);

}  // namespace mixer
