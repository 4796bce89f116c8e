// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <boost/math/distributions/chi_squared.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mixer/error.hpp"
#include "mixer/interleave.hpp"
#include "mixer/mixing.hpp"
#include "mixer/run.hpp"
#include "oracles.hpp"

using namespace mixer;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

std::vector<GroupSpec> table_groups() {
  return {GroupSpec::alternating(5), GroupSpec::alternating(6), GroupSpec::alternating(7), GroupSpec::symmetric(4),
          GroupSpec::psl2(7), GroupSpec::psl2(11), GroupSpec::psl2(13)};
}

// Every group any criterion touches.
std::vector<GroupSpec> all_test_groups() {
  auto v = table_groups();
  for (auto s : {GroupSpec::symmetric(3), GroupSpec::alternating(8), GroupSpec::alternating(9), GroupSpec::psl2(5),
                 GroupSpec::psl2(8), GroupSpec::psl2(9), GroupSpec::psl2(17), GroupSpec::psl2(19), GroupSpec::sl2(5)}) {
    v.push_back(s);
  }
  return v;
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

const GroupData& cached(const GroupSpec& spec) {
  static std::map<std::string, GroupData> cache;
  auto it = cache.find(spec.label());
  if (it == cache.end()) it = cache.emplace(spec.label(), build_group_data(spec)).first;
  return it->second;
}

Outcome c1_tables() {
  Outcome o;
  double worst = 0.0;
  for (const auto& spec : table_groups()) {
    const auto& d = cached(spec);
    const double n = d.group.order();
    const auto rep = verify_orthogonality(d.table, d.classes);
    worst = std::max(worst, std::max(rep.row_residual, rep.column_residual) / n);
    o.require(rep.row_residual < 1e-8 * n && rep.column_residual < 1e-8 * n, spec.label() + " residual");
    std::uint64_t sq = 0;
    for (auto deg : d.table.degrees) sq += deg * deg;
    o.require(sq == d.group.order(), spec.label() + " sum of squared degrees");
    const auto again = build_group_data(spec).table;
    o.require(again.degrees == d.table.degrees &&
                  std::memcmp(again.values.data(), d.table.values.data(),
                              d.table.values.size() * sizeof(d.table.values[0])) == 0,
              spec.label() + " not deterministic");
  }
  o.detail = o.pass ? "7 groups, max residual/|G| = " + fmt(worst) + ", rebuilt tables bit-identical" : o.detail;
  return o;
}

Outcome c2_zeta() {
  Outcome o;
  for (const auto& spec : all_test_groups()) {
    const auto& d = cached(spec);
    const double k = d.classes.count();
    const double n = d.group.order();
    o.require(std::abs(witten_zeta(d.table, 0.0) - k) <= 1e-6 * k, spec.label() + " zeta(0)");
    o.require(std::abs(witten_zeta(d.table, -2.0) - n) <= 1e-6 * n, spec.label() + " zeta(-2)");
  }
  if (o.pass) o.detail = std::to_string(all_test_groups().size()) + " groups";
  return o;
}

Outcome c3_dual_path() {
  Outcome o;
  double worst = 0.0;
  std::size_t pairs = 0;
  for (const auto& spec : {GroupSpec::alternating(5), GroupSpec::symmetric(4), GroupSpec::symmetric(3), GroupSpec::psl2(7)}) {
    const auto& d = cached(spec);
    for (std::uint32_t x = 0; x < d.classes.count(); ++x) {
      for (std::uint32_t y = 0; y < d.classes.count(); ++y) {
        const double b = l2_sq(p_brute(x, y, d.group, d.classes));
        const double c = l2_sq_char(x, y, d.table);
        const double rel = std::abs(b - c) / std::abs(b);
        worst = std::max(worst, rel);
        o.require(rel <= 1e-9, spec.label() + " pair " + std::to_string(x) + "," + std::to_string(y));
        ++pairs;
      }
    }
  }
  if (o.pass) o.detail = std::to_string(pairs) + " class pairs, max rel diff " + fmt(worst);
  return o;
}

Outcome c4_distances() {
  Outcome o;
  std::size_t count = 0;
  double worst = 0.0;
  for (const auto& spec : all_test_groups()) {
    const auto& d = cached(spec);
    const double n = d.group.order();
    const bool brute = n <= 2520;
    for (std::uint32_t x = 0; x < d.classes.count(); ++x) {
      for (std::uint32_t y = 0; y < d.classes.count(); ++y) {
        std::vector<PairDistribution> ps{p_char(x, y, d.table, d.classes)};
        if (brute) ps.push_back(p_brute(x, y, d.group, d.classes));
        for (const auto& p : ps) {
          const auto dist = dist_to_uniform(p);
          const double gap = std::abs(dist.l2_sq - (l2_sq(p) - 1.0 / n));
          worst = std::max(worst, gap);
          o.require(gap <= 1e-12, spec.label() + " l2 identity");
          o.require(dist.l1 <= std::sqrt(n) * std::sqrt(dist.l2_sq) + 1e-12, spec.label() + " Cauchy-Schwarz");
          ++count;
        }
      }
    }
  }
  if (o.pass) o.detail = std::to_string(count) + " distributions, max identity gap " + fmt(worst);
  return o;
}

Outcome c5_frozen() {
  Outcome o;
  const auto& d = cached(GroupSpec::alternating(5));
  const std::uint32_t c = d.classes.class_of[d.group.index_of_raw(parse_cycles("(1 2 3 4 5)", 5))];
  const auto inv = oracle::raw_inverses(d.group);
  const auto counts = oracle::conjugate_product_counts(d.group, d.classes.representatives[c],
                                                       d.classes.representatives[c], inv);
  std::uint64_t sq = 0;
  for (auto v : counts) sq += v * v;
  o.require(sq * 8640 == 265ULL * 60 * 60 * 60 * 60, "oracle does not give 265/8640");
  const double frozen = 265.0 / 8640.0;
  const double b = l2_sq(p_brute(c, c, d.group, d.classes));
  const double ch = l2_sq_char(c, c, d.table);
  o.require(std::abs(b - frozen) <= 1e-9 * frozen, "brute " + fmt(b));
  o.require(std::abs(ch - frozen) <= 1e-9 * frozen, "char " + fmt(ch));
  if (o.pass) o.detail = "oracle, brute and character paths all give 265/8640 = " + fmt(frozen);
  return o;
}

Outcome c6_thompson() {
  Outcome o;
  std::vector<GroupSpec> specs;
  for (std::uint32_t n = 5; n <= 9; ++n) specs.push_back(GroupSpec::alternating(n));
  for (std::uint32_t q : {5U, 7U, 8U, 9U, 11U, 13U}) specs.push_back(GroupSpec::psl2(q));
  for (const auto& spec : specs) {
    const auto& d = cached(spec);
    const auto t = thompson_search(d.group, d.classes);
    o.require(t.witness && t.best_coverage == d.group.order(), spec.label() + " has no class C with C^2 = G");
  }
  if (o.pass) o.detail = "witness found in all " + std::to_string(specs.size()) + " groups";
  return o;
}

Outcome c7_char_bound() {
  Outcome o;
  double margin = 1.0;
  for (const auto& spec : all_test_groups()) {
    const auto& d = cached(spec);
    try {
      const auto r = char_bound_fraction(d.classes, d.table, 1.0);
      if (r.asserted) {
        o.require(r.fraction > r.lower_bound, spec.label());
        margin = std::min(margin, r.fraction - r.lower_bound);
      }
    } catch (const Error& e) {
      o.require(false, spec.label() + ": " + e.what());
    }
  }
  if (o.pass) o.detail = "all groups, least margin " + fmt(margin);
  return o;
}

double survey_at_one(const GroupSpec& spec) {
  const auto& d = cached(spec);
  return survey(d.group, d.classes, d.table, Coupling::independent(), {1.0}).thresholds[0].probability;
}

bool golden_ok(RunConfig c, std::string& why) {
  c.golden = GoldenMode::compare;
  c.golden_dir = MIXER_GOLDEN_DIR;
  try {
    (void)run(c);
    return true;
  } catch (const Error& e) {
    why = golden_file_name(c) + ": " + e.what();
    return false;
  }
}

Outcome c8_survey_trend() {
  Outcome o;
  std::string line;
  for (const auto& family : {std::vector<GroupSpec>{GroupSpec::psl2(7), GroupSpec::psl2(11), GroupSpec::psl2(13),
                                                    GroupSpec::psl2(17), GroupSpec::psl2(19)},
                             std::vector<GroupSpec>{GroupSpec::alternating(5), GroupSpec::alternating(6),
                                                    GroupSpec::alternating(7), GroupSpec::alternating(8),
                                                    GroupSpec::alternating(9)}}) {
    double prev = 0.0;
    for (const auto& spec : family) {
      const double p = survey_at_one(spec);
      o.require(p >= prev - 0.05, spec.label() + " drops to " + fmt(p));
      prev = std::max(prev, p);
      line += spec.label() + "=" + fmt(p) + " ";
      RunConfig c;
      c.command = "survey";
      c.group = spec.label();
      c.seed = 1;
      c.deltas = {0.1, 0.5, 1.0, 2.0};
      std::string why;
      o.require(golden_ok(c, why), why);
    }
  }
  if (o.pass) o.detail = "Prob[N<=2]: " + line + "(goldens match)";
  return o;
}

Outcome c9_coupling() {
  Outcome o;
  std::size_t runs = 0;
  for (const auto& spec : {GroupSpec::alternating(5), GroupSpec::psl2(11)}) {
    const auto& d = cached(spec);
    const auto inv = oracle::raw_inverses(d.group);
    RandomStream rng(2024, 7);
    const std::vector<double> deltas{0.1, 0.5, 1.0, 2.0};
    for (int trial = 0; trial < 3; ++trial) {
      const Index a = d.group.random_element(rng);
      const auto rep = survey(d.group, d.classes, d.table, Coupling::translated_inverse(a), deltas);
      std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint64_t> counts;
      for (Index x = 0; x < d.group.order(); ++x) {
        ++counts[{d.classes.class_of[x], d.classes.class_of[oracle::raw_mul(d.group, inv[x], a)]}];
      }
      bool same = rep.records.size() == counts.size();
      std::size_t i = 0;
      for (const auto& [pair, c] : counts) {
        if (!same) break;
        same = rep.records[i].x_class == pair.first && rep.records[i].y_class == pair.second &&
               rep.records[i].count == c;
        ++i;
      }
      for (std::size_t t = 0; t < deltas.size() && same; ++t) {
        std::uint64_t hit = 0;
        for (const auto& [pair, c] : counts) {
          if (static_cast<double>(d.group.order()) * l2_sq_char(pair.first, pair.second, d.table) <= 1.0 + deltas[t]) {
            hit += c;
          }
        }
        same = rep.thresholds[t].probability == static_cast<double>(hit) / static_cast<double>(d.group.order());
      }
      o.require(same, spec.label() + " a = " + d.group.describe(a));
      ++runs;
    }
  }
  if (o.pass) o.detail = std::to_string(runs) + " translated-inverse surveys reproduced bit-identically";
  return o;
}

Outcome c10_interleave() {
  Outcome o;
  const auto& d = cached(GroupSpec::alternating(5));
  for (std::uint32_t t : {2U, 3U}) {
    const auto f = TupleSet::full(t, 60);
    const auto e = exact_distribution(d, f, f);
    o.require(e.linf_deviation == 0.0, "full set at t = " + std::to_string(t) + " not exactly uniform");
  }
  double prev = 2.0;
  std::string line;
  for (std::uint32_t t : {2U, 3U, 4U}) {
    RunConfig c;
    c.command = "interleave";
    c.group = "A:5";
    c.seed = 1;
    c.arity = t;
    c.alpha = 0.5;
    const auto j = nlohmann::json::parse(run(c).json);
    const double dev = j["linf_deviation"].get<double>();
    const auto& rep = j["deviation_report"];
    const double c_hat = rep["c_hat"].is_null() ? INFINITY : rep["c_hat"].get<double>();
    o.require(c_hat > 0.0, "c_hat <= 0 at t = " + std::to_string(t));
    o.require(dev <= prev, "deviation increases at t = " + std::to_string(t));
    prev = dev;
    std::string why;
    o.require(golden_ok(c, why), why);
    line += "t=" + std::to_string(t) + " D=" + fmt(dev) + " c=" + fmt(c_hat) + " ";
  }
  if (o.pass) o.detail = "full sets D = 0; " + line + "(goldens match)";
  return o;
}

Outcome c11_fiber() {
  Outcome o;
  std::string line;
  for (const auto& spec : {GroupSpec::symmetric(3), GroupSpec::alternating(5)}) {
    const auto& g = cached(spec).group;
    const Index n = g.order();
    RandomStream rng(11, 5);
    const Index target = 1;
    std::vector<double> counts(static_cast<std::size_t>(n) * n * n, 0.0);
    const int draws = 1'000'000;
    bool consistent = true;
    for (int i = 0; i < draws; ++i) {
      const auto fd = fiber_sample(g, target, 2, rng);
      consistent = consistent && interleave_product(g, fd.a, fd.b) == target;
      counts[(static_cast<std::size_t>(fd.a[0]) * n + fd.a[1]) * n + fd.b[0]] += 1.0;
    }
    const double expected = static_cast<double>(draws) / counts.size();
    double stat = 0.0;
    for (double c : counts) stat += (c - expected) * (c - expected) / expected;
    const double p = boost::math::cdf(boost::math::complement(boost::math::chi_squared(counts.size() - 1.0), stat));
    o.require(consistent, spec.label() + " draw with a.b != g");
    o.require(p > 1e-3, spec.label() + " chi-square p = " + fmt(p));
    line += spec.label() + " p=" + fmt(p) + " ";
  }
  if (o.pass) o.detail = line + "(10^6 draws each, every draw in the fiber)";
  return o;
}

// Prob[bit = 1 | a.b = g] over the whole fiber.
double fiber_probability(const GroupTable& grp, const RectangleProtocol& p, Index g) {
  const Index n = grp.order();
  std::uint64_t ones = 0;
  std::uint64_t total = 0;
  for (Index a0 = 0; a0 < n; ++a0) {
    for (Index a1 = 0; a1 < n; ++a1) {
      for (Index b0 = 0; b0 < n; ++b0) {
        const Index pre = oracle::raw_mul(grp, oracle::raw_mul(grp, a0, b0), a1);
        const Index b1 = grp.mul(grp.inv(pre), g);
        const std::vector<Index> a{a0, a1};
        const std::vector<Index> b{b0, b1};
        const auto r = p.locate(a, b);
        if (!r) return -1.0;
        ones += p.rectangles()[*r].bit == 1;
        ++total;
      }
    }
  }
  return static_cast<double>(ones) / static_cast<double>(total);
}

Outcome c12_advantage() {
  Outcome o;
  const auto& d = cached(GroupSpec::symmetric(3));
  const auto f = TupleSet::full(2, 6);
  std::vector<std::pair<std::string, RectangleProtocol>> protocols;
  protocols.emplace_back("const1", RectangleProtocol({Rectangle{f, f, 1}}));
  protocols.emplace_back("const0", RectangleProtocol({Rectangle{f, f, 0}}));
  for (std::uint64_t s = 1; s <= 3; ++s) {
    const auto a = TupleSet::seeded_random(2, 6, 0.5, s, 0);
    const auto b = TupleSet::seeded_random(2, 6, 0.5, s, 1);
    protocols.emplace_back("two" + std::to_string(s), RectangleProtocol({Rectangle{a, f, 1}, Rectangle{a.complement(), f, 0}}));
    protocols.emplace_back("four" + std::to_string(s),
                           RectangleProtocol({Rectangle{a, b, 1}, Rectangle{a, b.complement(), 0},
                                              Rectangle{a.complement(), b, 0},
                                              Rectangle{a.complement(), b.complement(), 1}}));
  }
  const Index g = 0;
  const Index h = d.group.index_of_raw(parse_cycles("(1 2 3)", 3));
  double worst_z = 0.0;
  for (const auto& [name, p] : protocols) {
    const auto ex = advantage_exact(d, p, g, h);
    o.require(ex.advantage <= ex.assembled + 1e-12 && ex.assembled <= ex.triangle_bound + 1e-12,
              name + " violates the rectangle inequality");
    if (name.rfind("const", 0) == 0) {
      const auto mc = advantage(d.group, p, g, h, 100'000, RandomStream(1, 3));
      o.require(mc.advantage == 0.0 && ex.advantage == 0.0, name + " has nonzero advantage");
    }
    if (name.rfind("two", 0) == 0) {
      const double pg = fiber_probability(d.group, p, g);
      const double ph = fiber_probability(d.group, p, h);
      const auto mc = advantage(d.group, p, g, h, 100'000, RandomStream(1, 3));
      const double sg = std::sqrt(pg * (1 - pg) / mc.samples);
      const double sh = std::sqrt(ph * (1 - ph) / mc.samples);
      worst_z = std::max({worst_z, std::abs(mc.p_g - pg) / sg, std::abs(mc.p_h - ph) / sh});
      o.require(std::abs(mc.p_g - pg) <= 4 * sg && std::abs(mc.p_h - ph) <= 4 * sh, name + " outside 4 sigma");
      o.require(std::abs(ex.p_g - pg) < 1e-12 && std::abs(ex.p_h - ph) < 1e-12, name + " exact path disagrees");
    }
  }
  if (o.pass) {
    o.detail = std::to_string(protocols.size()) + " protocols; constants give 0; two-rectangle MC within " +
               fmt(worst_z) + " sigma of exhaustive";
  }
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"character tables valid", c1_tables},
      {"zeta special values", c2_zeta},
      {"brute and character l2 agree", c3_dual_path},
      {"distance identities", c4_distances},
      {"frozen A_5 5-cycle norm", c5_frozen},
      {"Thompson witnesses", c6_thompson},
      {"character bound inequality", c7_char_bound},
      {"survey trend and goldens", c8_survey_trend},
      {"translated-inverse coupling", c9_coupling},
      {"interleave exactness and decay", c10_interleave},
      {"fiber sampler uniformity", c11_fiber},
      {"advantage experiment", c12_advantage},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !o.pass;
    std::printf("%s %2zu %-32s %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
