#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mixer/characters.hpp"
#include "mixer/config.hpp"
#include "mixer/group.hpp"
#include "mixer/random.hpp"

namespace mixer {

/// a1 b1 a2 b2 ... at bt. Throws ArityMismatch when the lengths differ.
Index interleave_product(const GroupTable& group, std::span<const Index> a, std::span<const Index> b);

/// A subset of G^t stored as sorted, unique codes sum_i a_i |G|^(t-i).
class TupleSet {
 public:
  enum class Mode { explicit_list, seeded_random };

  /// Throws InvalidArgument on duplicates, out-of-range indices or an empty list.
  static TupleSet from_tuples(std::uint32_t arity, Index group_order, const std::vector<std::vector<Index>>& tuples);
  static TupleSet from_codes(std::uint32_t arity, Index group_order, std::vector<std::uint64_t> codes);
  /// Exactly round(alpha |G|^t) tuples (at least one), chosen by selection
  /// sampling from RandomStream(seed, stream). Reproducible from its inputs.
  static TupleSet seeded_random(std::uint32_t arity, Index group_order, double alpha, std::uint64_t seed,
                                std::uint64_t stream = 0);
  static TupleSet full(std::uint32_t arity, Index group_order);

  std::uint32_t arity() const { return arity_; }
  Index group_order() const { return order_; }
  Mode mode() const { return mode_; }
  double target_density() const { return target_; }
  std::uint64_t seed() const { return seed_; }

  std::uint64_t size() const { return codes_.size(); }
  /// |G|^t
  std::uint64_t universe() const { return universe_; }
  double density() const { return static_cast<double>(size()) / static_cast<double>(universe_); }
  const std::vector<std::uint64_t>& codes() const { return codes_; }

  std::uint64_t encode(std::span<const Index> tuple) const;
  void decode(std::uint64_t code, std::span<Index> out) const;
  std::vector<Index> tuple(std::size_t i) const;
  bool contains_code(std::uint64_t code) const;
  bool contains(std::span<const Index> tuple) const { return contains_code(encode(tuple)); }

  /// G^t minus this set; throws InvalidArgument when that is empty.
  TupleSet complement() const;

 private:
  TupleSet() = default;
  std::uint32_t arity_ = 0;
  Index order_ = 0;
  std::uint64_t universe_ = 0;
  Mode mode_ = Mode::explicit_list;
  double target_ = 0.0;
  std::uint64_t seed_ = 0;
  std::vector<std::uint64_t> codes_;
};

/// Header `t=<t> group=<label>`, then one comma-separated tuple per line.
TupleSet read_tuple_set(const std::string& path, const GroupTable& group);
void write_tuple_set(const std::string& path, const TupleSet& set, const GroupTable& group);

enum class EstimateMode { exact, montecarlo };

/// Distribution of a.b for uniform a in A, b in B.
struct InterleaveEstimate {
  EstimateMode mode = EstimateMode::exact;
  std::string method;  // brute | fourier | montecarlo
  std::uint32_t arity = 0;
  Index group_order = 0;
  std::uint64_t size_a = 0;
  std::uint64_t size_b = 0;
  /// Exact: pairs with a.b = g. Monte Carlo: hits.
  std::vector<std::uint64_t> counts;
  /// |A||B| (exact) or the sample count.
  std::uint64_t total = 0;
  std::vector<double> probabilities;
  std::vector<double> std_errors;  // Monte Carlo only
  double linf_deviation = 0.0;
  Index worst_element = 0;
};

enum class ExactMethod { automatic, brute, fourier };

struct ExactOptions {
  std::uint64_t loop_budget = default_loop_budget();
  ExactMethod method = ExactMethod::automatic;
};

/// Brute-force enumeration of A x B; throws LoopBudgetExceeded past the budget.
InterleaveEstimate exact_distribution(const GroupTable& group, const TupleSet& a, const TupleSet& b,
                                      std::uint64_t loop_budget = default_loop_budget());

/// Brute force within the budget, otherwise exact counting through the
/// irreducible representations over GF(P) with P > |A||B|:
///   count(g) = |G|^-1 sum_rho d_rho tr(rho(g^-1) A^(rho) B^(rho))
/// where the transforms of 1_A and 1_B over G^t are contracted along the
/// interleaving pattern.
InterleaveEstimate exact_distribution(const GroupData& data, const TupleSet& a, const TupleSet& b,
                                      const ExactOptions& options = {});

/// Uniform draws from A and B in blocks of independent substreams. samples >= 10^4.
InterleaveEstimate mc_distribution(const GroupTable& group, const TupleSet& a, const TupleSet& b,
                                   std::uint64_t samples, const RandomStream& stream);

/// Implied-exponent table for the bound shapes
///   bounded rank: D alpha beta |G| = |G|^(-c t)
///   Lie type:     D alpha beta |G| = q^(-c r t)
///   alternating:  D alpha beta |G| = n^(-c t)
struct DeviationReport {
  double deviation = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  std::uint32_t arity = 0;
  double normalized = 0.0;  // D alpha beta |G|
  bool uniform = false;     // D == 0; every exponent is +infinity
  std::string family;       // alternating | symmetric | lie | other
  double base = 0.0;        // n, q^r or |G|
  double c_hat = 0.0;       // exponent for the family's own shape
  double c_bounded_rank = 0.0;
  /// A or B is a single tuple. At this extreme the normalized quantity is
  /// tiny because alpha beta is, so c_hat says nothing about mixing.
  bool degenerate = false;
};

DeviationReport deviation_report(const InterleaveEstimate& estimate, double alpha, double beta,
                                 const GroupSpec& spec);

struct FiberDraw {
  std::vector<Index> a;
  std::vector<Index> b;
};

/// Uniform on {(a, b) : a.b = g}: a and b_1..b_{t-1} free, b_t solved.
FiberDraw fiber_sample(const GroupTable& group, Index g, std::uint32_t arity, RandomStream& stream);

struct Rectangle {
  TupleSet a;
  TupleSet b;
  int bit = 0;
};

/// A deterministic protocol given by the rectangles of its transcript partition.
class RectangleProtocol {
 public:
  explicit RectangleProtocol(std::vector<Rectangle> rectangles);

  std::uint32_t arity() const { return arity_; }
  Index group_order() const { return order_; }
  const std::vector<Rectangle>& rectangles() const { return rectangles_; }
  /// ceil(log2(number of rectangles))
  std::uint32_t bit_budget() const;
  /// First rectangle containing (a, b).
  std::optional<std::size_t> locate(std::span<const Index> a, std::span<const Index> b) const;

  struct Validation {
    bool disjoint = true;
    bool covers = false;  // total area equals |G|^(2t)
    long double area = 0;
  };
  /// Exact pairwise disjointness and total area.
  Validation validate_exact() const;

 private:
  std::vector<Rectangle> rectangles_;
  std::uint32_t arity_ = 0;
  Index order_ = 0;
};

/// Lines `bit,<Afile>,<Bfile>`; relative paths resolve against the protocol file.
RectangleProtocol read_protocol(const std::string& path, const GroupTable& group);

struct AdvantageEstimate {
  double p_g = 0.0;
  double p_h = 0.0;
  double advantage = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
  std::uint32_t bit_budget = 0;
};

/// Estimates p_g = Prob[P(a, b) = 1 | a.b = g] through fiber_sample.
/// Throws UncoveredProbe when a draw lies in no rectangle.
AdvantageEstimate advantage(const GroupTable& group, const RectangleProtocol& protocol, Index g, Index h,
                            std::uint64_t samples, const RandomStream& stream);

/// Exact p_g, p_h from per-rectangle exact distributions, together with
///   assembled = sum_i alpha_i beta_i |G| |Prob_i(g) - Prob_i(h)|
///   max_normalized = max_i D_i alpha_i beta_i |G|
/// so that advantage <= assembled <= 2 * rectangles * max_normalized.
struct ExactAdvantage {
  double p_g = 0.0;
  double p_h = 0.0;
  double advantage = 0.0;
  double assembled = 0.0;
  double max_normalized = 0.0;
  std::uint32_t bit_budget = 0;
  double budget_bound = 0.0;    // 2^c max_normalized
  double triangle_bound = 0.0;  // 2 * 2^c max_normalized
};

/// Throws InvalidArgument when the rectangles do not partition G^t x G^t.
ExactAdvantage advantage_exact(const GroupData& data, const RectangleProtocol& protocol, Index g, Index h,
                               const ExactOptions& options = {});

}  // namespace mixer
