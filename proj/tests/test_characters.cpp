#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>

#include "mixer/characters.hpp"
#include "mixer/error.hpp"
#include "oracles.hpp"

using namespace mixer;

namespace {

std::vector<std::uint64_t> sorted_degrees(const CharacterTable& t) {
  auto d = t.degrees;
  std::sort(d.begin(), d.end());
  return d;
}

// Row index of `values` (one per class) in the table, or -1.
int find_row(const CharacterTable& t, const std::vector<double>& values) {
  for (std::size_t r = 0; r < t.count(); ++r) {
    bool same = true;
    for (std::size_t c = 0; c < t.count(); ++c) {
      same = same && std::abs(t.value(r, c) - std::complex<double>(values[c], 0.0)) < 1e-9;
    }
    if (same) return static_cast<int>(r);
  }
  return -1;
}

std::vector<GroupSpec> table_groups() {
  return {GroupSpec::symmetric(3), GroupSpec::symmetric(4), GroupSpec::alternating(5), GroupSpec::symmetric(5),
          GroupSpec::alternating(6), GroupSpec::alternating(7), GroupSpec::psl2(7), GroupSpec::psl2(8),
          GroupSpec::psl2(11), GroupSpec::psl2(13), GroupSpec::sl2(5), GroupSpec::sl2(7), GroupSpec::psl2(9)};
}

}  // namespace

TEST_CASE("structure constants against a double loop") {
  for (const auto& spec : {GroupSpec::symmetric(3), GroupSpec::symmetric(4), GroupSpec::alternating(5), GroupSpec::psl2(7)}) {
    const auto g = GroupTable::build(spec);
    const auto cd = conj_classes(g);
    const auto sc = structure_constants(g, cd);
    const std::size_t k = cd.count();
    CAPTURE(spec.label());
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        std::vector<std::uint64_t> hits(k, 0);
        for (Index u : cd.class_members(i)) {
          for (Index v : cd.class_members(j)) {
            const Index w = oracle::raw_mul(g, u, v);
            for (std::size_t l = 0; l < k; ++l) hits[l] += w == cd.representatives[l];
          }
        }
        std::uint64_t row = 0;
        for (std::size_t l = 0; l < k; ++l) {
          CHECK(sc.at(i, j, l) == hits[l]);
          row += cd.sizes[l] * sc.at(i, j, l);
        }
        CHECK(row == cd.sizes[i] * cd.sizes[j]);
        CHECK(sc.at(0, i, j) == (i == j ? 1U : 0U));
      }
    }
  }
}

TEST_CASE("S_3 transpositions square to the identity three ways") {
  const auto g = GroupTable::build(GroupSpec::symmetric(3));
  const auto cd = conj_classes(g);
  const auto sc = structure_constants(g, cd);
  const std::uint32_t t = cd.class_of[g.index_of_raw(parse_cycles("(1 2)", 3))];
  CHECK(sc.at(t, t, 0) == 3);
}

TEST_CASE("degree multisets") {
  using D = std::vector<std::uint64_t>;
  CHECK(sorted_degrees(build_group_data(GroupSpec::alternating(5)).table) == D{1, 3, 3, 4, 5});
  CHECK(sorted_degrees(build_group_data(GroupSpec::psl2(7)).table) == D{1, 3, 3, 6, 7, 8});
  CHECK(sorted_degrees(build_group_data(GroupSpec::symmetric(3)).table) == D{1, 1, 2});
  CHECK(sorted_degrees(build_group_data(GroupSpec::symmetric(4)).table) == D{1, 1, 2, 3, 3});
  CHECK(sorted_degrees(build_group_data(GroupSpec::alternating(6)).table) == D{1, 5, 5, 8, 8, 9, 10});
  CHECK(sorted_degrees(build_group_data(GroupSpec::sl2(5)).table) == D{1, 2, 2, 3, 3, 4, 4, 5, 6});
  CHECK(sorted_degrees(build_group_data(GroupSpec::psl2(8)).table) == D{1, 7, 7, 7, 7, 8, 9, 9, 9});
}

TEST_CASE("table invariants on every test group") {
  for (const auto& spec : table_groups()) {
    const auto data = build_group_data(spec);
    const auto& t = data.table;
    const std::uint64_t n = data.group.order();
    CAPTURE(spec.label());
    REQUIRE(t.count() == data.classes.count());
    std::uint64_t sum_sq = 0;
    for (std::size_t r = 0; r < t.count(); ++r) {
      sum_sq += t.degrees[r] * t.degrees[r];
      CHECK(n % t.degrees[r] == 0);
      CHECK(t.value(r, 0).real() == static_cast<double>(t.degrees[r]));
      CHECK(std::abs(t.value(r, 0).imag()) < 1e-10);
      CHECK(t.value(0, r) == std::complex<double>(1.0, 0.0));
    }
    CHECK(sum_sq == n);
    CHECK(std::is_sorted(t.degrees.begin(), t.degrees.end()));
    const auto rep = verify_orthogonality(t, data.classes);
    CHECK(rep.pass);
    CHECK(rep.row_residual < 1e-8 * n);
    CHECK(rep.column_residual < 1e-8 * n);
    // Column orthogonality at the identity: sum chi(1)^2 = |G|.
    double col = 0.0;
    for (std::size_t r = 0; r < t.count(); ++r) col += std::norm(t.value(r, 0));
    CHECK(col == doctest::Approx(static_cast<double>(n)).epsilon(1e-12));
  }
}

TEST_CASE("fixed-point characters appear as rows") {
  // A 2-transitive action has permutation character 1 + chi with chi irreducible.
  for (const auto& spec : {GroupSpec::symmetric(3), GroupSpec::symmetric(4), GroupSpec::alternating(5),
                           GroupSpec::alternating(6), GroupSpec::symmetric(5), GroupSpec::alternating(7)}) {
    const auto data = build_group_data(spec);
    CAPTURE(spec.label());
    std::vector<double> chi;
    std::vector<double> sign;
    for (Index rep : data.classes.representatives) {
      const auto e = data.group.entries(rep);
      int fixed = 0;
      std::vector<bool> seen(e.size(), false);
      int cycles = 0;
      for (std::size_t i = 0; i < e.size(); ++i) {
        fixed += e[i] == i;
        if (seen[i]) continue;
        ++cycles;
        for (std::size_t j = i; !seen[j]; j = e[j]) seen[j] = true;
      }
      chi.push_back(fixed - 1.0);
      sign.push_back((e.size() - cycles) % 2 == 0 ? 1.0 : -1.0);
    }
    CHECK(find_row(data.table, chi) >= 0);
    if (spec.kind == GroupKind::symmetric) CHECK(find_row(data.table, sign) >= 0);
  }
}

TEST_CASE("Steinberg character of PSL2(q) from fixed points on the projective line") {
  for (std::uint32_t q : {5U, 7U, 8U, 9U, 11U, 13U}) {
    const auto data = build_group_data(GroupSpec::psl2(q));
    const auto& f = *data.group.field();
    CAPTURE(q);
    std::vector<double> st;
    for (Index rep : data.classes.representatives) {
      const auto m = data.group.entries(rep);
      const std::uint32_t a = m[0], b = m[1], c = m[2], d = m[3];
      // (x:y) is fixed iff (ax + by) y = (cx + dy) x.
      auto fixed = [&](std::uint32_t x, std::uint32_t y) {
        return f.mul(f.add(f.mul(a, x), f.mul(b, y)), y) == f.mul(f.add(f.mul(c, x), f.mul(d, y)), x);
      };
      int count = fixed(1, 0) ? 1 : 0;
      for (std::uint32_t x = 0; x < q; ++x) count += fixed(x, 1);
      st.push_back(count - 1.0);
    }
    const int row = find_row(data.table, st);
    REQUIRE(row >= 0);
    CHECK(data.table.degrees[row] == q);
  }
}

TEST_CASE("orthogonality check rejects a perturbed table") {
  auto data = build_group_data(GroupSpec::alternating(5));
  CHECK(verify_orthogonality(data.table, data.classes).pass);
  CHECK(verify_orthogonality(data.table, data.classes).row_residual < 1e-8 * 60);
  data.table.value(2, 3) += 1e-3;
  const auto rep = verify_orthogonality(data.table, data.classes);
  CHECK_FALSE(rep.pass);
}

TEST_CASE("trivial group has a 1x1 table") {
  const auto data = build_group_data(GroupSpec::generated({Permutation{0, 1, 2}}, 3));
  CHECK(data.table.count() == 1);
  CHECK(data.table.degrees[0] == 1);
  const auto rep = verify_orthogonality(data.table, data.classes);
  CHECK(rep.row_residual == 0.0);
  CHECK(rep.column_residual == 0.0);
  CHECK(witten_zeta(data.table, 1.0) == 1.0);
}

TEST_CASE("zeta special values") {
  for (const auto& spec : table_groups()) {
    const auto data = build_group_data(spec);
    CAPTURE(spec.label());
    CHECK(witten_zeta(data.table, 0.0) == static_cast<double>(data.classes.count()));
    CHECK(witten_zeta(data.table, -2.0) == static_cast<double>(data.group.order()));
    double prev = witten_zeta(data.table, -1.0);
    for (double s = -0.5; s <= 4.0; s += 0.5) {
      const double z = witten_zeta(data.table, s);
      CHECK(z < prev);
      prev = z;
    }
  }
  const auto a5 = build_group_data(GroupSpec::alternating(5));
  CHECK(witten_zeta(a5.table, 2.0) == doctest::Approx(4769.0 / 3600.0).epsilon(1e-15));
  CHECK(witten_zeta(a5.table, 1.0) == doctest::Approx(1.0 + 2.0 / 3 + 1.0 / 4 + 1.0 / 5).epsilon(1e-15));
}

TEST_CASE("normalized zeta excess for alternating groups stays within a factor 8") {
  const auto rows = zeta_trend({GroupSpec::alternating(7), GroupSpec::alternating(8), GroupSpec::alternating(9),
                                GroupSpec::alternating(10)},
                               1.0);
  REQUIRE(rows.size() == 4);
  double lo = rows[0].normalized_excess;
  double hi = lo;
  for (const auto& r : rows) {
    CHECK(r.normalizer == doctest::Approx(std::stod(r.group.substr(2))));
    CHECK(r.normalized_excess == doctest::Approx(r.excess * r.normalizer));
    lo = std::min(lo, r.normalized_excess);
    hi = std::max(hi, r.normalized_excess);
  }
  CHECK(hi <= 8.0 * lo);
  CHECK(rows[0].normalized_excess == doctest::Approx(4.566666666666667).epsilon(1e-12));
  CHECK(rows[1].normalized_excess == doctest::Approx(4.509126984126983).epsilon(1e-12));
  CHECK(rows[2].normalized_excess == doctest::Approx(4.1799603174603135).epsilon(1e-12));
  CHECK(rows[3].normalized_excess == doctest::Approx(2.8784501763668446).epsilon(1e-12));
}

TEST_CASE("normalized zeta excess for PSL2(q) at s = 2 stays bounded") {
  std::vector<GroupSpec> family;
  for (std::uint32_t q : {5U, 7U, 9U, 11U, 13U, 17U, 19U}) family.push_back(GroupSpec::psl2(q));
  const auto rows = zeta_trend(family, 2.0);
  REQUIRE(rows.size() == family.size());
  double lo = rows[0].normalized_excess;
  double hi = lo;
  for (const auto& r : rows) {
    lo = std::min(lo, r.normalized_excess);
    hi = std::max(hi, r.normalized_excess);
  }
  CHECK(lo > 0.0);
  CHECK(hi <= 8.0 * lo);
  // Frozen from the first run. The excess creeps up like q/2 because about
  // q/2 characters have degree near q.
  const std::vector<double> golden{8.118055555555559, 14.015625000000002, 10.821250000000012, 14.780555555555557,
                                   13.143282312925153, 15.327353395061788, 17.980370370370345};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].normalized_excess == doctest::Approx(golden[i]).epsilon(1e-12));
    CHECK(rows[i].normalized_excess <= static_cast<double>(rows[i].normalizer));
  }

  const auto one = zeta_trend({GroupSpec::psl2(7)}, 2.0);
  REQUIRE(one.size() == 1);
  CHECK(one[0].normalizer == 49.0);
  CHECK(one[0].normalized_excess == doctest::Approx((one[0].zeta - 1.0) * 49.0));
}

TEST_CASE("Dixon output is bit-identical across builds") {
  for (const auto& spec : {GroupSpec::alternating(6), GroupSpec::psl2(13), GroupSpec::sl2(7)}) {
    const auto a = build_group_data(spec).table;
    const auto b = build_group_data(spec).table;
    CAPTURE(spec.label());
    CHECK(a.prime == b.prime);
    CHECK(a.degrees == b.degrees);
    CHECK(a.multiplicities == b.multiplicities);
    CHECK(std::memcmp(a.values.data(), b.values.data(), a.values.size() * sizeof(a.values[0])) == 0);
  }
}

TEST_CASE("Dixon prime is the least admissible one") {
  for (const auto& spec : {GroupSpec::alternating(5), GroupSpec::psl2(7), GroupSpec::alternating(6)}) {
    const auto data = build_group_data(spec);
    const std::uint64_t e = data.classes.exponent;
    const double floor_value = 2.0 * std::sqrt(static_cast<double>(data.group.order()));
    auto is_prime = [](std::uint64_t n) {
      if (n < 2) return false;
      for (std::uint64_t d = 2; d * d <= n; ++d) if (n % d == 0) return false;
      return true;
    };
    std::uint64_t p = 1;
    while (!(is_prime(p) && p % e == 1 && static_cast<double>(p) > floor_value)) p += 1;
    CAPTURE(spec.label());
    CHECK(data.table.prime == p);
  }
}
