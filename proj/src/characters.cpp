#include "mixer/characters.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "linalg_modp.hpp"
#include "mixer/error.hpp"
#include "mixer/modarith.hpp"
#include "mixer/parallel.hpp"

namespace mixer {

StructureConstants structure_constants(const GroupTable& group, const ClassData& classes) {
  StructureConstants sc;
  const std::size_t k = classes.count();
  sc.k = k;
  sc.values.assign(k * k * k, 0);
  // Each target class l owns the slice a[.][.][l].
  parallel_for(k, [&](std::size_t l) {
    const Index target = classes.representatives[l];
    for (std::size_t i = 0; i < k; ++i) {
      for (Index u : classes.class_members(static_cast<std::uint32_t>(i))) {
        const std::uint32_t j = classes.class_of[group.mul(group.inv(u), target)];
        ++sc.values[(i * k + j) * k + l];
      }
    }
  });
  return sc;
}

namespace {

using modp::u64;

std::complex<double> root_of_unity(std::uint64_t l, std::uint64_t o) {
  l %= o;
  if (l == 0) return {1.0, 0.0};
  if (2 * l == o) return {-1.0, 0.0};
  if (4 * l == o) return {0.0, 1.0};
  if (4 * l == 3 * o) return {0.0, -1.0};
  if (2 * l > o) return std::conj(root_of_unity(o - l, o));
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(l) / static_cast<double>(o);
  return {std::cos(angle), std::sin(angle)};
}

// Sum of m_l * exp(2 pi i l / o), pairing l with o - l so that real
// characters come out with an exactly zero imaginary part.
std::complex<double> lift_value(const std::vector<std::uint32_t>& m) {
  const std::size_t o = m.size();
  double re = 0.0;
  double im = 0.0;
  for (std::size_t l = 0; 2 * l <= o; ++l) {
    const std::size_t partner = (o - l) % o;
    const auto z = root_of_unity(l, o);
    if (partner == l) {
      re += m[l] * z.real();
      im += m[l] * z.imag();
    } else {
      re += (static_cast<double>(m[l]) + m[partner]) * z.real();
      im += (static_cast<double>(m[l]) - m[partner]) * z.imag();
    }
  }
  return {re, im};
}

struct Subspace {
  modp::Mat basis;  // rows in RREF
  std::vector<std::size_t> pivots;
};

// Splits W into eigenspaces of the class matrix M (restricted to W).
std::vector<Subspace> split_subspace(const Subspace& w, const modp::Mat& m, u64 p) {
  const std::size_t d = w.basis.size();
  const std::size_t k = m.size();
  modp::Mat restricted(d, modp::Row(d, 0));
  for (std::size_t r = 0; r < d; ++r) {
    modp::Row image(k, 0);
    for (std::size_t row = 0; row < k; ++row) {
      u64 acc = 0;
      for (std::size_t c = 0; c < k; ++c) {
        if (m[row][c] != 0 && w.basis[r][c] != 0) acc = modp::add(acc, modp::mul(m[row][c], w.basis[r][c], p), p);
      }
      image[row] = acc;
    }
    for (std::size_t s = 0; s < d; ++s) restricted[s][r] = image[w.pivots[s]];
  }
  const auto eigenvalues = modp::roots(modp::charpoly(restricted, p), p);
  std::vector<Subspace> parts;
  std::size_t total = 0;
  for (u64 lambda : eigenvalues) {
    modp::Mat shifted = restricted;
    for (std::size_t i = 0; i < d; ++i) shifted[i][i] = modp::sub(shifted[i][i], lambda, p);
    const modp::Mat coords = modp::kernel(shifted, p);
    Subspace part;
    for (const auto& c : coords) {
      modp::Row v(k, 0);
      for (std::size_t r = 0; r < d; ++r) {
        if (c[r] == 0) continue;
        for (std::size_t j = 0; j < k; ++j) v[j] = modp::add(v[j], modp::mul(c[r], w.basis[r][j], p), p);
      }
      part.basis.push_back(std::move(v));
    }
    part.pivots = modp::rref(part.basis, p);
    total += part.basis.size();
    parts.push_back(std::move(part));
  }
  if (total != d) {
    fail(Errc::eigensplit_failure, "class matrix is not diagonalizable on a block of dimension " + std::to_string(d));
  }
  return parts;
}

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

}  // namespace

CharacterTable dixon_char_table(const ClassData& classes, const StructureConstants& constants,
                                std::string group_label) {
  const std::size_t k = classes.count();
  const std::uint64_t order = classes.group_order;
  const std::uint64_t e = classes.exponent;

  // (1) least prime P = 1 mod e above 2 sqrt|G|.
  const u64 bound = static_cast<u64>(std::floor(2.0 * std::sqrt(static_cast<double>(order))));
  const u64 p = modp::least_prime_one_mod(e, bound, 1ULL << 31U);
  if (p == 0) fail(Errc::no_suitable_prime, "no prime = 1 mod " + std::to_string(e) + " below 2^31");

  // (2) class matrices (M_i)_{jl} = a[i][j][l] mod P.
  std::vector<modp::Mat> mats(k, modp::Mat(k, modp::Row(k, 0)));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      for (std::size_t l = 0; l < k; ++l) mats[i][j][l] = constants.at(i, j, l) % p;
    }
  }

  // (3) simultaneous eigenspace splitting.
  Subspace whole;
  whole.basis.assign(k, modp::Row(k, 0));
  for (std::size_t i = 0; i < k; ++i) whole.basis[i][i] = 1;
  whole.pivots.resize(k);
  std::iota(whole.pivots.begin(), whole.pivots.end(), 0);
  std::vector<Subspace> done;
  std::vector<Subspace> pending;
  (k == 1 ? done : pending).push_back(std::move(whole));
  for (std::size_t i = 1; i < k && !pending.empty(); ++i) {
    std::vector<Subspace> next;
    for (const auto& w : pending) {
      for (auto& part : split_subspace(w, mats[i], p)) {
        (part.basis.size() == 1 ? done : next).push_back(std::move(part));
      }
    }
    pending = std::move(next);
  }
  if (!pending.empty()) {
    fail(Errc::eigensplit_failure, "splitting stalled on a block of dimension " + std::to_string(pending.front().basis.size()));
  }
  if (done.size() != k) fail(Errc::eigensplit_failure, "found " + std::to_string(done.size()) + " common eigenvectors, expected " + std::to_string(k));

  const u64 root_e = modp::pow(modp::primitive_root(p), (p - 1) / e, p);
  const std::uint64_t max_degree = isqrt(order);

  struct Row {
    std::uint64_t degree;
    std::vector<std::complex<double>> values;
    std::vector<std::vector<std::uint32_t>> mult;
  };
  std::vector<Row> rows;
  for (const auto& part : done) {
    const auto& w = part.basis[0];
    if (w[0] != 1) fail(Errc::eigensplit_failure, "common eigenvector vanishes on the identity class");
    // (4) degree from sum_i w_i w_{i*} / |C_i| = |G| / chi(1)^2.
    u64 s = 0;
    for (std::size_t i = 0; i < k; ++i) {
      s = modp::add(s, modp::mul(modp::mul(w[i], w[classes.inverse_class[i]], p), modp::inv(classes.sizes[i] % p, p), p), p);
    }
    if (s == 0) fail(Errc::eigensplit_failure, "degenerate norm for a common eigenvector");
    const u64 d2 = modp::mul(order % p, modp::inv(s, p), p);
    std::uint64_t degree = 0;
    for (std::uint64_t d = 1; d <= max_degree; ++d) {
      if (d * d % p == d2) {
        degree = d;
        break;
      }
    }
    if (degree == 0 || order % degree != 0) fail(Errc::eigensplit_failure, "degree recovery failed");

    std::vector<u64> chi_mod(k);
    for (std::size_t j = 0; j < k; ++j) {
      chi_mod[j] = modp::mul(modp::mul(w[j], degree % p, p), modp::inv(classes.sizes[j] % p, p), p);
    }
    // (5) eigenvalue multiplicities by Fourier inversion over <g_j>.
    Row row{degree, std::vector<std::complex<double>>(k), std::vector<std::vector<std::uint32_t>>(k)};
    for (std::size_t j = 0; j < k; ++j) {
      const std::uint32_t o = classes.element_orders[j];
      const u64 z = modp::pow(root_e, e / o, p);
      const u64 z_inv = modp::inv(z, p);
      const u64 o_inv = modp::inv(o % p, p);
      std::vector<std::uint32_t> mult(o);
      std::uint64_t total = 0;
      for (std::uint32_t l = 0; l < o; ++l) {
        const u64 step = modp::pow(z_inv, l, p);
        u64 acc = 0;
        u64 twist = 1;
        for (std::uint32_t m = 0; m < o; ++m) {
          acc = modp::add(acc, modp::mul(chi_mod[classes.power_maps[j][m]], twist, p), p);
          twist = modp::mul(twist, step, p);
        }
        acc = modp::mul(acc, o_inv, p);
        if (acc > degree) fail(Errc::eigensplit_failure, "eigenvalue multiplicity out of range");
        mult[l] = static_cast<std::uint32_t>(acc);
        total += acc;
      }
      if (total != degree) fail(Errc::eigensplit_failure, "eigenvalue multiplicities do not sum to the degree");
      row.values[j] = lift_value(mult);
      row.mult[j] = std::move(mult);
    }
    rows.push_back(std::move(row));
  }

  // (6) deterministic ordering.
  auto quantize = [](double v) { return std::llround(v * 1e9); };
  std::sort(rows.begin(), rows.end(), [&](const Row& a, const Row& b) {
    if (a.degree != b.degree) return a.degree < b.degree;
    for (std::size_t j = 0; j < k; ++j) {
      const auto ar = quantize(a.values[j].real());
      const auto br = quantize(b.values[j].real());
      if (ar != br) return ar > br;
      const auto ai = quantize(a.values[j].imag());
      const auto bi = quantize(b.values[j].imag());
      if (ai != bi) return ai > bi;
    }
    return false;
  });

  CharacterTable table;
  table.group = std::move(group_label);
  table.order = order;
  table.class_sizes = classes.sizes;
  table.element_orders = classes.element_orders;
  table.exponent = e;
  table.prime = p;
  std::uint64_t sum_sq = 0;
  for (auto& row : rows) {
    table.degrees.push_back(row.degree);
    sum_sq += row.degree * row.degree;
    table.values.insert(table.values.end(), row.values.begin(), row.values.end());
    for (auto& m : row.mult) table.multiplicities.push_back(std::move(m));
  }
  if (sum_sq != order) fail(Errc::eigensplit_failure, "sum of squared degrees differs from |G|");
  for (std::size_t j = 0; j < k; ++j) {
    if (table.value(0, j) != std::complex<double>(1.0, 0.0)) fail(Errc::internal, "first row is not the trivial character");
  }
  const auto report = verify_orthogonality(table, classes);
  table.row_residual = report.row_residual;
  table.column_residual = report.column_residual;
  return table;
}

OrthogonalityReport verify_orthogonality(const CharacterTable& table, const ClassData& classes) {
  const std::size_t k = table.count();
  const double order = static_cast<double>(classes.group_order);
  OrthogonalityReport rep;
  rep.tolerance = 1e-8 * order;
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      std::complex<double> row = 0.0;
      std::complex<double> col = 0.0;
      for (std::size_t c = 0; c < k; ++c) {
        row += static_cast<double>(classes.sizes[c]) * table.value(a, c) * std::conj(table.value(b, c));
        col += table.value(c, a) * std::conj(table.value(c, b));
      }
      const double row_expect = a == b ? order : 0.0;
      const double col_expect = a == b ? order / static_cast<double>(classes.sizes[a]) : 0.0;
      rep.row_residual = std::max(rep.row_residual, std::abs(row - row_expect));
      rep.column_residual = std::max(rep.column_residual, std::abs(col - col_expect));
    }
  }
  rep.pass = rep.row_residual < rep.tolerance && rep.column_residual < rep.tolerance;
  return rep;
}

double witten_zeta(const CharacterTable& table, double s) {
  double z = 0.0;
  for (auto d : table.degrees) z += std::pow(static_cast<double>(d), -s);
  return z;
}

ZetaTrendRow zeta_trend_row(const GroupSpec& spec, const CharacterTable& table, double s) {
  ZetaTrendRow row;
  row.group = spec.label();
  row.order = table.order;
  row.classes = table.count();
  row.zeta = witten_zeta(table, s);
  row.excess = row.zeta - 1.0;
  switch (spec.kind) {
    case GroupKind::alternating:
    case GroupKind::symmetric: row.normalizer = std::pow(static_cast<double>(spec.degree), s); break;
    case GroupKind::sl2:
    case GroupKind::psl2: row.normalizer = std::pow(static_cast<double>(spec.q), s); break;
    default: row.normalizer = 1.0; break;
  }
  row.normalized_excess = row.excess * row.normalizer;
  return row;
}

std::vector<ZetaTrendRow> zeta_trend(const std::vector<GroupSpec>& family, double s) {
  std::vector<ZetaTrendRow> rows;
  for (const auto& spec : family) {
    const GroupData data = build_group_data(spec);
    rows.push_back(zeta_trend_row(spec, data.table, s));
  }
  return rows;
}

GroupData build_group_data(const GroupSpec& spec) {
  GroupTable group = GroupTable::build(spec);
  ClassData classes = conj_classes(group);
  const StructureConstants sc = structure_constants(group, classes);
  CharacterTable table = dixon_char_table(classes, sc, spec.label());
  return GroupData{std::move(group), std::move(classes), std::move(table)};
}

}  // namespace mixer
