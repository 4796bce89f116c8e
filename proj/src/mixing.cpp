#include "mixer/mixing.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "mixer/error.hpp"
#include "mixer/parallel.hpp"
#include "mixer/random.hpp"

namespace mixer {

namespace {

void check_class(std::uint32_t cls, std::size_t k) {
  if (cls >= k) fail(Errc::invalid_argument, "class index " + std::to_string(cls) + " out of range (k = " + std::to_string(k) + ")");
}

}  // namespace

PairDistribution p_char(std::uint32_t x_class, std::uint32_t y_class, const CharacterTable& table,
                        const ClassData& classes) {
  const std::size_t k = table.count();
  check_class(x_class, k);
  check_class(y_class, k);
  PairDistribution p;
  p.x_class = x_class;
  p.y_class = y_class;
  p.group_order = table.order;
  p.class_sizes = table.class_sizes;
  p.values.resize(k);
  const double order = static_cast<double>(table.order);
  for (std::size_t c = 0; c < k; ++c) {
    const std::uint32_t inv_c = classes.inverse_class[c];
    std::complex<double> acc = 0.0;
    for (std::size_t chi = 0; chi < k; ++chi) {
      acc += table.value(chi, x_class) * table.value(chi, y_class) * table.value(chi, inv_c) /
             static_cast<double>(table.degrees[chi]);
    }
    double v = acc.real() / order;
    if (v < 0.0) {
      ++p.clamped;
      p.most_negative = std::min(p.most_negative, v);
      v = 0.0;
    }
    p.values[c] = v;
  }
  return p;
}

PairDistribution p_brute(std::uint32_t x_class, std::uint32_t y_class, const GroupTable& group,
                         const ClassData& classes, std::uint64_t loop_budget) {
  const std::size_t k = classes.count();
  check_class(x_class, k);
  check_class(y_class, k);
  const std::uint64_t pairs = classes.sizes[x_class] * classes.sizes[y_class];
  if (pairs > loop_budget) {
    fail(Errc::loop_budget_exceeded, std::to_string(pairs) + " products exceed the loop budget " + std::to_string(loop_budget));
  }
  PairDistribution p;
  p.x_class = x_class;
  p.y_class = y_class;
  p.group_order = classes.group_order;
  p.class_sizes = classes.sizes;
  p.exact = true;
  p.pair_counts.assign(k, 0);
  p.total_pairs = pairs;
  for (Index u : classes.class_members(x_class)) {
    for (Index v : classes.class_members(y_class)) ++p.pair_counts[classes.class_of[group.mul(u, v)]];
  }
  p.values.resize(k);
  for (std::size_t c = 0; c < k; ++c) {
    p.values[c] = static_cast<double>(p.pair_counts[c]) / (static_cast<double>(pairs) * static_cast<double>(classes.sizes[c]));
  }
  return p;
}

double l2_sq(const PairDistribution& p) {
  double s = 0.0;
  for (std::size_t c = 0; c < p.values.size(); ++c) s += static_cast<double>(p.class_sizes[c]) * p.values[c] * p.values[c];
  return s;
}

double l2_sq_char(std::uint32_t x_class, std::uint32_t y_class, const CharacterTable& table) {
  check_class(x_class, table.count());
  check_class(y_class, table.count());
  double s = 0.0;
  for (std::size_t chi = 0; chi < table.count(); ++chi) {
    const double d = static_cast<double>(table.degrees[chi]);
    s += std::norm(table.value(chi, x_class)) * std::norm(table.value(chi, y_class)) / (d * d);
  }
  return s / static_cast<double>(table.order);
}

UniformDistance dist_to_uniform(const PairDistribution& p) {
  UniformDistance d;
  const double u = 1.0 / static_cast<double>(p.group_order);
  for (std::size_t c = 0; c < p.values.size(); ++c) {
    const double diff = std::abs(p.values[c] - u);
    const double size = static_cast<double>(p.class_sizes[c]);
    d.l1 += size * diff;
    d.l2_sq += size * diff * diff;
    d.linf = std::max(d.linf, diff);
  }
  return d;
}

Coverage coverage(const PairDistribution& p) {
  Coverage c;
  c.numeric = !p.exact;
  for (std::size_t k = 0; k < p.values.size(); ++k) {
    const bool hit = p.exact ? p.pair_counts[k] > 0 : p.values[k] > kNumericSupportThreshold;
    if (hit) c.support += p.class_sizes[k];
  }
  c.fraction = static_cast<double>(c.support) / static_cast<double>(p.group_order);
  return c;
}

ThompsonResult thompson_search(const GroupTable& group, const ClassData& classes) {
  const std::size_t k = classes.count();
  ThompsonResult r;
  r.class_coverage.assign(k, 0);
  parallel_for(k, [&](std::size_t x) {
    std::uint64_t covered = 0;
    const auto members = classes.class_members(static_cast<std::uint32_t>(x));
    for (std::size_t l = 0; l < k; ++l) {
      const Index target = classes.representatives[l];
      for (Index u : members) {
        if (classes.class_of[group.mul(group.inv(u), target)] == x) {
          covered += classes.sizes[l];
          break;
        }
      }
    }
    r.class_coverage[x] = covered;
  });
  for (std::size_t x = 0; x < k; ++x) {
    if (r.class_coverage[x] > r.best_coverage) {
      r.best_coverage = r.class_coverage[x];
      r.best_class = static_cast<std::uint32_t>(x);
    }
  }
  r.fraction = static_cast<double>(r.best_coverage) / static_cast<double>(group.order());
  r.witness = r.best_coverage == group.order();
  return r;
}

Coupling Coupling::bijection(std::vector<Index> mapping, std::size_t group_order, std::string source) {
  if (mapping.size() != group_order) fail(Errc::invalid_argument, "bijection must list one image per element");
  std::vector<bool> hit(group_order, false);
  for (Index y : mapping) {
    if (y >= group_order || hit[y]) fail(Errc::invalid_argument, "bijection table is not a permutation");
    hit[y] = true;
  }
  return {Kind::bijection, 0, std::move(mapping), std::move(source)};
}

std::string Coupling::describe(const GroupTable& group) const {
  switch (kind) {
    case Kind::independent: return "independent";
    case Kind::diagonal: return "diagonal";
    case Kind::translated_inverse: return "transinv:" + group.describe(translate);
    case Kind::bijection: return "bijfile:" + source;
  }
  return "?";
}

SurveyReport survey(const GroupTable& group, const ClassData& classes, const CharacterTable& table,
                    const Coupling& coupling, const std::vector<double>& deltas, const SurveyOptions& options) {
  const std::size_t k = classes.count();
  const std::uint64_t order = group.order();
  SurveyReport rep;
  rep.coupling = coupling.describe(group);

  // Class-pair counts: weight of (i, j) is count / denominator.
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint64_t> counts;
  switch (coupling.kind) {
    case Coupling::Kind::independent:
      rep.denominator = order * order;
      for (std::uint32_t i = 0; i < k; ++i) {
        for (std::uint32_t j = 0; j < k; ++j) counts[{i, j}] = classes.sizes[i] * classes.sizes[j];
      }
      break;
    case Coupling::Kind::diagonal:
      rep.denominator = order;
      for (std::uint32_t i = 0; i < k; ++i) counts[{i, i}] = classes.sizes[i];
      break;
    case Coupling::Kind::translated_inverse:
    case Coupling::Kind::bijection: {
      if (coupling.kind == Coupling::Kind::translated_inverse && coupling.translate >= order) {
        fail(Errc::invalid_argument, "translation element out of range");
      }
      if (coupling.kind == Coupling::Kind::bijection && coupling.mapping.size() != order) {
        fail(Errc::invalid_argument, "bijection does not match the group order");
      }
      auto partner = [&](Index x) {
        return coupling.kind == Coupling::Kind::bijection ? coupling.mapping[x]
                                                          : group.mul(group.inv(x), coupling.translate);
      };
      if (order <= options.exact_sweep_limit) {
        rep.denominator = order;
        for (Index x = 0; x < order; ++x) ++counts[{classes.class_of[x], classes.class_of[partner(x)]}];
      } else {
        rep.sampling_fallback = true;
        rep.samples = std::max<std::uint64_t>(options.samples, 100'000);
        rep.denominator = rep.samples;
        RandomStream stream(options.seed);
        for (std::uint64_t s = 0; s < rep.samples; ++s) {
          const Index x = group.random_element(stream);
          ++counts[{classes.class_of[x], classes.class_of[partner(x)]}];
        }
      }
      break;
    }
  }

  rep.records.reserve(counts.size());
  for (const auto& [pair, count] : counts) {
    SurveyRecord r;
    r.x_class = pair.first;
    r.y_class = pair.second;
    r.count = count;
    r.weight = static_cast<double>(count) / static_cast<double>(rep.denominator);
    rep.records.push_back(r);
  }
  parallel_for(rep.records.size(), [&](std::size_t idx) {
    auto& r = rep.records[idx];
    r.norm = static_cast<double>(order) * l2_sq_char(r.x_class, r.y_class, table);
    const auto p = p_char(r.x_class, r.y_class, table, classes);
    r.l1 = dist_to_uniform(p).l1;
    r.coverage = coverage(p).fraction;
  });

  for (double delta : deltas) {
    std::uint64_t hit = 0;
    for (const auto& r : rep.records) {
      if (r.norm <= 1.0 + delta) hit += r.count;
    }
    rep.thresholds.push_back({delta, static_cast<double>(hit) / static_cast<double>(rep.denominator)});
  }

  double mean = 0.0;
  for (const auto& r : rep.records) mean += static_cast<double>(r.count) * r.norm;
  rep.mean_norm = mean / static_cast<double>(rep.denominator);

  std::vector<std::size_t> by_norm(rep.records.size());
  for (std::size_t i = 0; i < by_norm.size(); ++i) by_norm[i] = i;
  std::stable_sort(by_norm.begin(), by_norm.end(),
                   [&](std::size_t a, std::size_t b) { return rep.records[a].norm < rep.records[b].norm; });
  for (double level : {0.5, 0.9, 0.99}) {
    std::uint64_t cumulative = 0;
    const double needed = level * static_cast<double>(rep.denominator);
    double value = by_norm.empty() ? 0.0 : rep.records[by_norm.back()].norm;
    for (std::size_t i : by_norm) {
      cumulative += rep.records[i].count;
      if (static_cast<double>(cumulative) >= needed) {
        value = rep.records[i].norm;
        break;
      }
    }
    rep.quantiles.emplace_back(level, value);
  }
  return rep;
}

CharBoundResult char_bound_fraction(const ClassData& classes, const CharacterTable& table, double s) {
  if (!(s > 0.0)) fail(Errc::invalid_argument, "s must be positive");
  const std::size_t k = table.count();
  CharBoundResult r;
  r.s = s;
  std::uint64_t good = 0;
  for (std::size_t x = 0; x < k; ++x) {
    bool ok = true;
    for (std::size_t chi = 0; chi < k && ok; ++chi) {
      const double bound = std::pow(static_cast<double>(table.degrees[chi]), s / 2.0);
      ok = std::abs(table.value(chi, x)) <= bound * (1.0 + 1e-9);
    }
    if (ok) good += classes.sizes[x];
  }
  r.fraction = static_cast<double>(good) / static_cast<double>(classes.group_order);
  r.lower_bound = 2.0 - witten_zeta(table, s);
  r.asserted = r.lower_bound < 1.0;
  if (r.asserted && !(r.fraction > r.lower_bound)) {
    std::ostringstream os;
    os << "character bound fraction " << r.fraction << " does not exceed 2 - zeta(" << s << ") = " << r.lower_bound;
    fail(Errc::bound_violation, os.str());
  }
  return r;
}

}  // namespace mixer
