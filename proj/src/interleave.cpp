#include "mixer/interleave.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "mixer/error.hpp"
#include "mixer/modarith.hpp"
#include "mixer/parallel.hpp"
#include "mixer/representations.hpp"

namespace mixer {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

constexpr u64 kMaxUniverse = u64{1} << 40;
constexpr u64 kMaxStoredTuples = u64{1} << 26;
constexpr u64 kBlock = u64{1} << 16;
// Below this many pairs brute force is cheaper than building representations.
constexpr u64 kSmallPairs = u64{1} << 22;

u64 checked_universe(std::uint32_t arity, Index order) {
  if (arity < 2) fail(Errc::invalid_argument, "tuple sets need arity t >= 2");
  if (order == 0) fail(Errc::invalid_argument, "empty group");
  u128 u = 1;
  for (std::uint32_t i = 0; i < arity; ++i) {
    u *= order;
    if (u > kMaxUniverse) fail(Errc::cap_exceeded, "|G|^t exceeds 2^40");
  }
  return static_cast<u64>(u);
}

std::vector<u64> powers(Index order, std::uint32_t arity) {
  std::vector<u64> p(arity + 1, 1);
  for (std::uint32_t i = 1; i <= arity; ++i) p[i] = p[i - 1] * order;
  return p;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

u64 parse_u64(const std::string& s, const std::string& where) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
    fail(Errc::spec_syntax, "expected a non-negative integer in " + where + ", got '" + s + "'");
  }
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    fail(Errc::spec_syntax, "integer out of range in " + where);
  }
}

void finish_estimate(InterleaveEstimate& e) {
  const double uniform = 1.0 / static_cast<double>(e.group_order);
  e.probabilities.assign(e.group_order, 0.0);
  for (Index g = 0; g < e.group_order; ++g) {
    e.probabilities[g] = static_cast<double>(e.counts[g]) / static_cast<double>(e.total);
  }
  if (e.mode == EstimateMode::exact) {
    // |count |G| - total| / (total |G|) with the numerator in integers, so a
    // perfectly uniform count vector gives exactly 0.
    u128 worst = 0;
    for (Index g = 0; g < e.group_order; ++g) {
      const u128 lhs = static_cast<u128>(e.counts[g]) * e.group_order;
      const u128 diff = lhs > e.total ? lhs - e.total : e.total - lhs;
      if (diff > worst) {
        worst = diff;
        e.worst_element = g;
      }
    }
    e.linf_deviation = static_cast<double>(static_cast<long double>(worst) /
                                           (static_cast<long double>(e.total) * e.group_order));
    e.std_errors.assign(e.group_order, 0.0);
  } else {
    e.linf_deviation = 0.0;
    e.std_errors.assign(e.group_order, 0.0);
    const double n = static_cast<double>(e.total);
    for (Index g = 0; g < e.group_order; ++g) {
      const double p = e.probabilities[g];
      e.std_errors[g] = std::sqrt(p * (1.0 - p) / n);
      const double dev = std::abs(p - uniform);
      if (dev > e.linf_deviation) {
        e.linf_deviation = dev;
        e.worst_element = g;
      }
    }
  }
}

void check_pair(const TupleSet& a, const TupleSet& b, Index order) {
  if (a.arity() != b.arity()) fail(Errc::arity_mismatch, "A and B have different arities");
  if (a.group_order() != order || b.group_order() != order) {
    fail(Errc::mixed_groups, "tuple set was built for a group of another order");
  }
}

// Accumulates products of residues below p in 128 bits, reducing only when
// another product could overflow.
class LazySum {
 public:
  explicit LazySum(u64 p) : p_(p) {
    const u128 sq = static_cast<u128>(p - 1) * (p - 1);
    const u128 room = (~u128{0} - p) / (sq == 0 ? 1 : sq);
    limit_ = room > (u128{1} << 30) ? (1U << 30) : static_cast<std::uint32_t>(room);
    if (limit_ == 0) limit_ = 1;
  }
  void reset() {
    acc_ = 0;
    n_ = 0;
  }
  void add(u64 a, u64 b) {
    acc_ += static_cast<u128>(a) * b;
    if (++n_ == limit_) {
      acc_ %= p_;
      n_ = 0;
    }
  }
  u64 value() const { return static_cast<u64>(acc_ % p_); }

 private:
  u64 p_;
  std::uint32_t limit_;
  u128 acc_ = 0;
  std::uint32_t n_ = 0;
};

// Transform of 1_S over G^t for one representation: entry with digits
// (p1 q1 ... pt qt), p1 most significant, is sum_{s in S} prod_i rho(s_i)[p_i][q_i].
std::vector<u64> transform(const TupleSet& set, const ModularRepresentation& rep,
                           const std::vector<u64>& rho_t, u64 p) {
  const u64 n = set.group_order();
  const std::uint32_t t = set.arity();
  const u64 d2 = rep.degree * rep.degree;
  const auto pw = powers(static_cast<Index>(n), t);

  // Step 1: fold the first coordinate from the sparse list.
  std::vector<u64> cur(pw[t - 1] * d2, 0);
  for (u64 code : set.codes()) {
    const u64 first = code / pw[t - 1];
    const u64 rest = code % pw[t - 1];
    const u64* m = rep.matrix(static_cast<Index>(first));
    u64* dst = cur.data() + rest * d2;
    for (u64 k = 0; k < d2; ++k) {
      u64 v = dst[k] + m[k];
      if (v >= p) v -= p;
      dst[k] = v;
    }
  }

  LazySum sum(p);
  std::vector<u64> column(n);
  u64 stride = d2;
  for (std::uint32_t i = 2; i <= t; ++i) {
    const u64 rows = pw[t - i];
    std::vector<u64> next(rows * stride * d2, 0);
    for (u64 r = 0; r < rows; ++r) {
      for (u64 acc = 0; acc < stride; ++acc) {
        bool any = false;
        for (u64 g = 0; g < n; ++g) {
          column[g] = cur[(g * rows + r) * stride + acc];
          any = any || column[g] != 0;
        }
        if (!any) continue;
        u64* dst = next.data() + (r * stride + acc) * d2;
        for (u64 k = 0; k < d2; ++k) {
          const u64* rho_k = rho_t.data() + k * n;
          sum.reset();
          for (u64 g = 0; g < n; ++g) {
            if (column[g] != 0) sum.add(column[g], rho_k[g]);
          }
          dst[k] = sum.value();
        }
      }
    }
    cur = std::move(next);
    stride *= d2;
  }
  return cur;
}

std::vector<u64> fourier_counts(const GroupData& data, const TupleSet& a, const TupleSet& b) {
  const GroupTable& group = data.group;
  const u64 n = group.order();
  const std::uint32_t t = a.arity();
  const u128 pairs = static_cast<u128>(a.size()) * b.size();
  if (pairs >= (u128{1} << 61)) fail(Errc::loop_budget_exceeded, "|A||B| too large for exact counting");
  if (n > 4096) fail(Errc::loop_budget_exceeded, "group too large for the representation path");

  u64 dmax = 1;
  for (u64 d : data.table.degrees) dmax = std::max(dmax, d);
  const auto pw = powers(static_cast<Index>(n), t);
  long double workspace = 0;
  long double d2i = 1;
  for (std::uint32_t i = 1; i <= t; ++i) {
    d2i *= static_cast<long double>(dmax * dmax);
    workspace = std::max(workspace, static_cast<long double>(pw[t - i]) * d2i);
  }
  if (workspace > static_cast<long double>(u64{1} << 26)) {
    fail(Errc::loop_budget_exceeded, "representation workspace exceeds 2^26 entries");
  }

  const u64 lower = std::max<u64>(static_cast<u64>(pairs) + 1, n + 1);
  const u64 p = modp::least_prime_one_mod(data.table.exponent, lower, u64{1} << 62);
  if (p == 0) fail(Errc::no_suitable_prime, "no prime 1 mod the exponent above |A||B|");
  const ModularIrreps irreps = build_modular_irreps(group, data.classes, data.table, p);

  std::vector<u64> total(n, 0);
  for (const auto& rep : irreps.reps) {
    const u64 d = rep.degree;
    const u64 d2 = d * d;
    std::vector<u64> rho_t(d2 * n);
    for (u64 g = 0; g < n; ++g) {
      for (u64 k = 0; k < d2; ++k) rho_t[k * n + g] = rep.matrix(static_cast<Index>(g))[k];
    }
    const auto ha = transform(a, rep, rho_t, p);
    const auto hb = transform(b, rep, rho_t, p);
    // M[i][j] = sum_k ha[i D + k] hb[k d + j], D = d^(2t-1)
    const u64 inner = ha.size() / d;
    std::vector<u64> m(d2);
    LazySum sum(p);
    for (u64 i = 0; i < d; ++i) {
      for (u64 j = 0; j < d; ++j) {
        sum.reset();
        for (u64 k = 0; k < inner; ++k) sum.add(ha[i * inner + k], hb[k * d + j]);
        m[i * d + j] = sum.value();
      }
    }
    for (u64 g = 0; g < n; ++g) {
      const u64* r = rep.matrix(group.inv(static_cast<Index>(g)));
      sum.reset();
      for (u64 i = 0; i < d; ++i) {
        for (u64 j = 0; j < d; ++j) sum.add(r[i * d + j], m[j * d + i]);
      }
      total[g] = modp::add(total[g], modp::mul(sum.value(), d % p, p), p);
    }
  }
  const u64 n_inv = modp::inv(n % p, p);
  u128 check = 0;
  for (auto& c : total) {
    c = modp::mul(c, n_inv, p);
    check += c;
  }
  if (check != pairs) fail(Errc::internal, "representation counts do not sum to |A||B|");
  return total;
}

}  // namespace

Index interleave_product(const GroupTable& group, std::span<const Index> a, std::span<const Index> b) {
  if (a.size() != b.size()) {
    fail(Errc::arity_mismatch,
         "interleave arities differ: " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  }
  Index x = group.identity();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] >= group.order() || b[i] >= group.order()) fail(Errc::invalid_argument, "element index out of range");
    x = group.mul(group.mul(x, a[i]), b[i]);
  }
  return x;
}

TupleSet TupleSet::from_codes(std::uint32_t arity, Index group_order, std::vector<u64> codes) {
  TupleSet s;
  s.arity_ = arity;
  s.order_ = group_order;
  s.universe_ = checked_universe(arity, group_order);
  if (codes.empty()) fail(Errc::invalid_argument, "tuple set must be nonempty");
  if (codes.size() > kMaxStoredTuples) fail(Errc::cap_exceeded, "tuple set larger than 2^26");
  std::sort(codes.begin(), codes.end());
  if (std::adjacent_find(codes.begin(), codes.end()) != codes.end()) {
    fail(Errc::invalid_argument, "tuple set contains duplicate tuples");
  }
  if (codes.back() >= s.universe_) fail(Errc::invalid_argument, "tuple code out of range");
  s.codes_ = std::move(codes);
  return s;
}

TupleSet TupleSet::from_tuples(std::uint32_t arity, Index group_order, const std::vector<std::vector<Index>>& tuples) {
  const u64 universe = checked_universe(arity, group_order);
  (void)universe;
  std::vector<u64> codes;
  codes.reserve(tuples.size());
  for (const auto& tup : tuples) {
    if (tup.size() != arity) {
      fail(Errc::arity_mismatch, "tuple of length " + std::to_string(tup.size()) + " in a set of arity " +
                                     std::to_string(arity));
    }
    u64 code = 0;
    for (Index x : tup) {
      if (x >= group_order) fail(Errc::invalid_argument, "element index " + std::to_string(x) + " out of range");
      code = code * group_order + x;
    }
    codes.push_back(code);
  }
  return from_codes(arity, group_order, std::move(codes));
}

TupleSet TupleSet::seeded_random(std::uint32_t arity, Index group_order, double alpha, u64 seed, u64 stream) {
  if (!(alpha > 0.0) || alpha > 1.0) fail(Errc::invalid_argument, "density must lie in (0, 1]");
  const u64 universe = checked_universe(arity, group_order);
  if (universe > (u64{1} << 32)) fail(Errc::cap_exceeded, "seeded tuple sets need |G|^t <= 2^32");
  u64 want = static_cast<u64>(std::llround(alpha * static_cast<double>(universe)));
  want = std::clamp<u64>(want, 1, universe);
  if (want > kMaxStoredTuples) fail(Errc::cap_exceeded, "tuple set larger than 2^26");

  // Selection sampling: keep code i with probability (want - kept) / (universe - i).
  RandomStream rng(seed, stream);
  std::vector<u64> codes;
  codes.reserve(want);
  for (u64 i = 0; i < universe && codes.size() < want; ++i) {
    if (rng.uniform_index(universe - i) < want - codes.size()) codes.push_back(i);
  }
  TupleSet s = from_codes(arity, group_order, std::move(codes));
  s.mode_ = Mode::seeded_random;
  s.target_ = alpha;
  s.seed_ = seed;
  return s;
}

TupleSet TupleSet::full(std::uint32_t arity, Index group_order) {
  const u64 universe = checked_universe(arity, group_order);
  if (universe > kMaxStoredTuples) fail(Errc::cap_exceeded, "tuple set larger than 2^26");
  std::vector<u64> codes(universe);
  for (u64 i = 0; i < universe; ++i) codes[i] = i;
  TupleSet s = from_codes(arity, group_order, std::move(codes));
  s.target_ = 1.0;
  return s;
}

u64 TupleSet::encode(std::span<const Index> tuple) const {
  if (tuple.size() != arity_) fail(Errc::arity_mismatch, "tuple length does not match the set arity");
  u64 code = 0;
  for (Index x : tuple) {
    if (x >= order_) fail(Errc::invalid_argument, "element index out of range");
    code = code * order_ + x;
  }
  return code;
}

void TupleSet::decode(u64 code, std::span<Index> out) const {
  for (std::size_t i = arity_; i-- > 0;) {
    out[i] = static_cast<Index>(code % order_);
    code /= order_;
  }
}

std::vector<Index> TupleSet::tuple(std::size_t i) const {
  std::vector<Index> out(arity_);
  decode(codes_.at(i), out);
  return out;
}

bool TupleSet::contains_code(u64 code) const { return std::binary_search(codes_.begin(), codes_.end(), code); }

TupleSet TupleSet::complement() const {
  if (size() == universe_) fail(Errc::invalid_argument, "complement of the full set is empty");
  if (universe_ - size() > kMaxStoredTuples) fail(Errc::cap_exceeded, "tuple set larger than 2^26");
  std::vector<u64> out;
  out.reserve(universe_ - size());
  std::size_t j = 0;
  for (u64 c = 0; c < universe_; ++c) {
    if (j < codes_.size() && codes_[j] == c) {
      ++j;
    } else {
      out.push_back(c);
    }
  }
  return from_codes(arity_, order_, std::move(out));
}

TupleSet read_tuple_set(const std::string& path, const GroupTable& group) {
  std::ifstream in(path);
  if (!in) fail(Errc::io_error, "cannot open tuple-set file " + path);
  std::string line;
  std::uint32_t arity = 0;
  bool header = false;
  std::vector<std::vector<Index>> tuples;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const std::string where = path + ":" + std::to_string(lineno);
    if (!header) {
      std::istringstream hs(line);
      std::string tok;
      std::string label;
      while (hs >> tok) {
        if (tok.rfind("t=", 0) == 0) {
          arity = static_cast<std::uint32_t>(parse_u64(tok.substr(2), where));
        } else if (tok.rfind("group=", 0) == 0) {
          label = tok.substr(6);
        } else {
          fail(Errc::spec_syntax, "unexpected header token '" + tok + "' in " + where);
        }
      }
      if (arity == 0) fail(Errc::spec_syntax, "missing t=<t> header in " + where);
      if (!label.empty() && label != group.spec().label() && label != group.spec().text) {
        fail(Errc::mixed_groups, "tuple set " + path + " is for group " + label + ", not " + group.spec().label());
      }
      header = true;
      continue;
    }
    std::vector<Index> tup;
    for (const auto& f : split(line, ',')) {
      const u64 v = parse_u64(f, where);
      if (v >= group.order()) fail(Errc::invalid_argument, "element index out of range in " + where);
      tup.push_back(static_cast<Index>(v));
    }
    if (tup.size() != arity) fail(Errc::arity_mismatch, "tuple length differs from t in " + where);
    tuples.push_back(std::move(tup));
  }
  if (!header) fail(Errc::spec_syntax, "tuple-set file " + path + " has no header");
  return TupleSet::from_tuples(arity, group.order(), tuples);
}

void write_tuple_set(const std::string& path, const TupleSet& set, const GroupTable& group) {
  std::ofstream out(path);
  if (!out) fail(Errc::io_error, "cannot write " + path);
  out << "t=" << set.arity() << " group=" << group.spec().label() << "\n";
  std::vector<Index> tup(set.arity());
  for (u64 code : set.codes()) {
    set.decode(code, tup);
    for (std::size_t i = 0; i < tup.size(); ++i) out << (i ? "," : "") << tup[i];
    out << "\n";
  }
  if (!out) fail(Errc::io_error, "write failed for " + path);
}

InterleaveEstimate exact_distribution(const GroupTable& group, const TupleSet& a, const TupleSet& b,
                                      u64 loop_budget) {
  check_pair(a, b, group.order());
  const u128 pairs = static_cast<u128>(a.size()) * b.size();
  if (pairs > loop_budget) {
    fail(Errc::loop_budget_exceeded, "|A||B| = " + std::to_string(static_cast<u64>(std::min<u128>(pairs, ~u64{0}))) +
                                         " exceeds the loop budget " + std::to_string(loop_budget));
  }
  const Index n = group.order();
  const std::uint32_t t = a.arity();
  const std::size_t chunks = std::min<std::size_t>(a.size(), 64);
  std::vector<std::vector<u64>> partial(chunks, std::vector<u64>(n, 0));
  parallel_for(chunks, [&](std::size_t c) {
    const std::size_t lo = a.size() * c / chunks;
    const std::size_t hi = a.size() * (c + 1) / chunks;
    std::vector<Index> ta(t);
    std::vector<Index> tb(t);
    auto& counts = partial[c];
    for (std::size_t i = lo; i < hi; ++i) {
      a.decode(a.codes()[i], ta);
      for (u64 code : b.codes()) {
        b.decode(code, tb);
        Index x = ta[0];
        for (std::uint32_t k = 0; k < t; ++k) {
          x = group.mul(x, tb[k]);
          if (k + 1 < t) x = group.mul(x, ta[k + 1]);
        }
        ++counts[x];
      }
    }
  });
  InterleaveEstimate e;
  e.mode = EstimateMode::exact;
  e.method = "brute";
  e.arity = t;
  e.group_order = n;
  e.size_a = a.size();
  e.size_b = b.size();
  e.total = static_cast<u64>(pairs);
  e.counts.assign(n, 0);
  for (const auto& p : partial) {
    for (Index g = 0; g < n; ++g) e.counts[g] += p[g];
  }
  finish_estimate(e);
  return e;
}

InterleaveEstimate exact_distribution(const GroupData& data, const TupleSet& a, const TupleSet& b,
                                      const ExactOptions& options) {
  check_pair(a, b, data.group.order());
  const u128 pairs = static_cast<u128>(a.size()) * b.size();
  if (options.method == ExactMethod::brute) return exact_distribution(data.group, a, b, options.loop_budget);
  if (options.method == ExactMethod::automatic) {
    if (pairs <= kSmallPairs) return exact_distribution(data.group, a, b, options.loop_budget);
    try {
      return exact_distribution(data, a, b, ExactOptions{options.loop_budget, ExactMethod::fourier});
    } catch (const Error& err) {
      if (err.code() != Errc::loop_budget_exceeded && err.code() != Errc::no_representation) throw;
      if (pairs > options.loop_budget) throw;
      return exact_distribution(data.group, a, b, options.loop_budget);
    }
  }

  InterleaveEstimate e;
  e.mode = EstimateMode::exact;
  e.method = "fourier";
  e.arity = a.arity();
  e.group_order = data.group.order();
  e.size_a = a.size();
  e.size_b = b.size();
  e.counts = fourier_counts(data, a, b);
  e.total = static_cast<u64>(pairs);
  finish_estimate(e);
  return e;
}

InterleaveEstimate mc_distribution(const GroupTable& group, const TupleSet& a, const TupleSet& b, u64 samples,
                                   const RandomStream& stream) {
  check_pair(a, b, group.order());
  if (samples < 10000) fail(Errc::invalid_argument, "Monte Carlo needs at least 10^4 samples");
  const Index n = group.order();
  const std::uint32_t t = a.arity();
  const u64 blocks = (samples + kBlock - 1) / kBlock;
  std::vector<std::vector<u64>> partial(blocks);
  parallel_for(blocks, [&](std::size_t blk) {
    RandomStream rng = stream.split(blk);
    const u64 count = std::min(kBlock, samples - blk * kBlock);
    std::vector<u64> counts(n, 0);
    std::vector<Index> ta(t);
    std::vector<Index> tb(t);
    for (u64 s = 0; s < count; ++s) {
      a.decode(a.codes()[rng.uniform_index(a.size())], ta);
      b.decode(b.codes()[rng.uniform_index(b.size())], tb);
      ++counts[interleave_product(group, ta, tb)];
    }
    partial[blk] = std::move(counts);
  });
  InterleaveEstimate e;
  e.mode = EstimateMode::montecarlo;
  e.method = "montecarlo";
  e.arity = t;
  e.group_order = n;
  e.size_a = a.size();
  e.size_b = b.size();
  e.total = samples;
  e.counts.assign(n, 0);
  for (const auto& p : partial) {
    for (Index g = 0; g < n; ++g) e.counts[g] += p[g];
  }
  finish_estimate(e);
  return e;
}

DeviationReport deviation_report(const InterleaveEstimate& estimate, double alpha, double beta,
                                 const GroupSpec& spec) {
  DeviationReport r;
  r.deviation = estimate.linf_deviation;
  r.alpha = alpha;
  r.beta = beta;
  r.arity = estimate.arity;
  const double order = static_cast<double>(estimate.group_order);
  r.normalized = r.deviation * alpha * beta * order;
  r.degenerate = estimate.size_a == 1 || estimate.size_b == 1;
  switch (spec.kind) {
    case GroupKind::alternating:
      r.family = "alternating";
      r.base = spec.degree;
      break;
    case GroupKind::symmetric:
      r.family = "symmetric";
      r.base = spec.degree;
      break;
    case GroupKind::sl2:
    case GroupKind::psl2:
      r.family = "lie";
      r.base = spec.q;  // rank 1
      break;
    default:
      r.family = "other";
      r.base = order;
      break;
  }
  r.uniform = r.deviation == 0.0;
  const double t = estimate.arity;
  if (r.uniform) {
    r.c_hat = std::numeric_limits<double>::infinity();
    r.c_bounded_rank = std::numeric_limits<double>::infinity();
  } else {
    const double log_x = std::log(r.normalized);
    r.c_hat = -log_x / (t * std::log(r.base));
    r.c_bounded_rank = -log_x / (t * std::log(order));
  }
  return r;
}

FiberDraw fiber_sample(const GroupTable& group, Index g, std::uint32_t arity, RandomStream& stream) {
  if (arity < 1) fail(Errc::invalid_argument, "fiber sampling needs t >= 1");
  if (g >= group.order()) fail(Errc::invalid_argument, "target element out of range");
  FiberDraw d;
  d.a.resize(arity);
  d.b.resize(arity);
  Index prefix = group.identity();
  for (std::uint32_t i = 0; i < arity; ++i) {
    d.a[i] = group.random_element(stream);
    prefix = group.mul(prefix, d.a[i]);
    if (i + 1 < arity) {
      d.b[i] = group.random_element(stream);
      prefix = group.mul(prefix, d.b[i]);
    }
  }
  d.b[arity - 1] = group.mul(group.inv(prefix), g);
  return d;
}

RectangleProtocol::RectangleProtocol(std::vector<Rectangle> rectangles) : rectangles_(std::move(rectangles)) {
  if (rectangles_.empty()) fail(Errc::invalid_argument, "protocol has no rectangles");
  arity_ = rectangles_[0].a.arity();
  order_ = rectangles_[0].a.group_order();
  for (const auto& r : rectangles_) {
    if (r.a.arity() != arity_ || r.b.arity() != arity_) fail(Errc::arity_mismatch, "rectangles differ in arity");
    if (r.a.group_order() != order_ || r.b.group_order() != order_) {
      fail(Errc::mixed_groups, "rectangles are over different groups");
    }
    if (r.bit != 0 && r.bit != 1) fail(Errc::invalid_argument, "rectangle output bit must be 0 or 1");
  }
}

std::uint32_t RectangleProtocol::bit_budget() const {
  std::uint32_t c = 0;
  while ((u64{1} << c) < rectangles_.size()) ++c;
  return c;
}

std::optional<std::size_t> RectangleProtocol::locate(std::span<const Index> a, std::span<const Index> b) const {
  const u64 ca = rectangles_[0].a.encode(a);
  const u64 cb = rectangles_[0].b.encode(b);
  for (std::size_t i = 0; i < rectangles_.size(); ++i) {
    if (rectangles_[i].a.contains_code(ca) && rectangles_[i].b.contains_code(cb)) return i;
  }
  return std::nullopt;
}

RectangleProtocol::Validation RectangleProtocol::validate_exact() const {
  auto intersects = [](const TupleSet& x, const TupleSet& y) {
    const auto& cx = x.codes();
    const auto& cy = y.codes();
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < cx.size() && j < cy.size()) {
      if (cx[i] == cy[j]) return true;
      if (cx[i] < cy[j]) {
        ++i;
      } else {
        ++j;
      }
    }
    return false;
  };
  Validation v;
  for (std::size_t i = 0; i < rectangles_.size(); ++i) {
    const auto& ri = rectangles_[i];
    v.area += static_cast<long double>(ri.a.size()) * static_cast<long double>(ri.b.size());
    for (std::size_t j = i + 1; j < rectangles_.size() && v.disjoint; ++j) {
      const auto& rj = rectangles_[j];
      if (intersects(ri.a, rj.a) && intersects(ri.b, rj.b)) v.disjoint = false;
    }
  }
  const long double u = static_cast<long double>(rectangles_[0].a.universe());
  v.covers = v.area == u * u;
  return v;
}

RectangleProtocol read_protocol(const std::string& path, const GroupTable& group) {
  std::ifstream in(path);
  if (!in) fail(Errc::io_error, "cannot open protocol file " + path);
  const auto dir = std::filesystem::path(path).parent_path();
  auto resolve = [&](const std::string& f) {
    const std::filesystem::path fp(f);
    return fp.is_absolute() ? fp.string() : (dir / fp).string();
  };
  std::vector<Rectangle> rects;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto fields = split(line, ',');
    const std::string where = path + ":" + std::to_string(lineno);
    if (fields.size() != 3) fail(Errc::spec_syntax, "expected bit,<Afile>,<Bfile> in " + where);
    const u64 bit = parse_u64(fields[0], where);
    if (bit > 1) fail(Errc::spec_syntax, "output bit must be 0 or 1 in " + where);
    rects.push_back(Rectangle{read_tuple_set(resolve(fields[1]), group), read_tuple_set(resolve(fields[2]), group),
                              static_cast<int>(bit)});
  }
  return RectangleProtocol(std::move(rects));
}

AdvantageEstimate advantage(const GroupTable& group, const RectangleProtocol& protocol, Index g, Index h,
                            u64 samples, const RandomStream& stream) {
  if (protocol.group_order() != group.order()) fail(Errc::mixed_groups, "protocol is over another group");
  if (samples == 0) fail(Errc::invalid_argument, "advantage needs at least one sample");
  const std::uint32_t t = protocol.arity();
  auto estimate = [&](Index target, const RandomStream& base) {
    const u64 blocks = (samples + kBlock - 1) / kBlock;
    std::vector<u64> ones(blocks, 0);
    parallel_for(blocks, [&](std::size_t blk) {
      RandomStream rng = base.split(blk);
      const u64 count = std::min(kBlock, samples - blk * kBlock);
      u64 hits = 0;
      for (u64 s = 0; s < count; ++s) {
        const FiberDraw d = fiber_sample(group, target, t, rng);
        const auto where = protocol.locate(d.a, d.b);
        if (!where) {
          std::string msg = "probe lies in no rectangle: a=(";
          for (std::size_t i = 0; i < t; ++i) msg += (i ? " " : "") + group.describe(d.a[i]);
          msg += ") b=(";
          for (std::size_t i = 0; i < t; ++i) msg += (i ? " " : "") + group.describe(d.b[i]);
          fail(Errc::uncovered_probe, msg + ")");
        }
        hits += static_cast<u64>(protocol.rectangles()[*where].bit);
      }
      ones[blk] = hits;
    });
    u64 total = 0;
    for (u64 x : ones) total += x;
    return static_cast<double>(total) / static_cast<double>(samples);
  };
  AdvantageEstimate r;
  r.samples = samples;
  r.bit_budget = protocol.bit_budget();
  r.p_g = estimate(g, stream.split(0));
  r.p_h = estimate(h, stream.split(1));
  r.advantage = std::abs(r.p_g - r.p_h);
  const double n = static_cast<double>(samples);
  r.std_error = std::sqrt(r.p_g * (1 - r.p_g) / n + r.p_h * (1 - r.p_h) / n);
  return r;
}

ExactAdvantage advantage_exact(const GroupData& data, const RectangleProtocol& protocol, Index g, Index h,
                               const ExactOptions& options) {
  const auto check = protocol.validate_exact();
  if (!check.disjoint || !check.covers) fail(Errc::invalid_argument, "rectangles do not partition G^t x G^t");
  const Index n = data.group.order();
  if (g >= n || h >= n) fail(Errc::invalid_argument, "target element out of range");
  // Each fiber has |G|^(2t-1) points.
  long double fiber = 1;
  for (std::uint32_t i = 0; i + 1 < 2 * protocol.arity(); ++i) fiber *= n;
  long double ones_g = 0;
  long double ones_h = 0;
  ExactAdvantage r;
  for (const auto& rect : protocol.rectangles()) {
    const auto e = exact_distribution(data, rect.a, rect.b, options);
    if (rect.bit == 1) {
      ones_g += e.counts[g];
      ones_h += e.counts[h];
    }
    const double ab_g = rect.a.density() * rect.b.density() * n;
    r.assembled += ab_g * std::abs(e.probabilities[g] - e.probabilities[h]);
    r.max_normalized = std::max(r.max_normalized, e.linf_deviation * ab_g);
  }
  r.p_g = static_cast<double>(ones_g / fiber);
  r.p_h = static_cast<double>(ones_h / fiber);
  r.advantage = static_cast<double>(std::abs(ones_g - ones_h) / fiber);
  r.bit_budget = protocol.bit_budget();
  r.budget_bound = std::ldexp(r.max_normalized, static_cast<int>(r.bit_budget));
  r.triangle_bound = 2.0 * r.budget_bound;
  return r;
}

}  // namespace mixer
