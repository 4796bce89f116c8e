#include "mixer/representations.hpp"

#include "linalg_modp.hpp"
#include "mixer/error.hpp"
#include "mixer/modarith.hpp"

namespace mixer {

using modp::u64;

namespace {

// Incrementally maintained reduced echelon basis with unit pivots.
struct Echelon {
  Echelon(std::size_t n, u64 p) : n(n), p(p) {}
  std::size_t n;
  u64 p;
  std::vector<std::vector<u64>> rows;
  std::vector<std::size_t> pivots;

  bool insert(std::vector<u64> r) {
    for (std::size_t b = 0; b < rows.size(); ++b) {
      const u64 f = r[pivots[b]];
      if (f == 0) continue;
      for (std::size_t h = 0; h < n; ++h) r[h] = modp::sub(r[h], modp::mul(f, rows[b][h], p), p);
    }
    std::size_t piv = 0;
    while (piv < n && r[piv] == 0) ++piv;
    if (piv == n) return false;
    const u64 iv = modp::inv(r[piv], p);
    for (auto& val : r) val = modp::mul(val, iv, p);
    for (std::size_t b = 0; b < rows.size(); ++b) {
      const u64 f = rows[b][piv];
      if (f == 0) continue;
      for (std::size_t h = 0; h < n; ++h) rows[b][h] = modp::sub(rows[b][h], modp::mul(f, r[h], p), p);
    }
    rows.push_back(std::move(r));
    pivots.push_back(piv);
    return true;
  }
};

}  // namespace

std::vector<std::vector<u64>> reduce_characters(const CharacterTable& table, u64 p) {
  const std::uint64_t e = table.exponent;
  if (!modp::is_prime(p) || (p - 1) % e != 0) {
    fail(Errc::invalid_argument, "prime " + std::to_string(p) + " is not 1 mod the exponent " + std::to_string(e));
  }
  const u64 root_e = modp::pow(modp::primitive_root(p), (p - 1) / e, p);
  const std::size_t k = table.count();
  std::vector<std::vector<u64>> out(k, std::vector<u64>(k, 0));
  for (std::size_t chi = 0; chi < k; ++chi) {
    for (std::size_t j = 0; j < k; ++j) {
      const auto& m = table.eigen_multiplicities(chi, j);
      const u64 z = modp::pow(root_e, e / m.size(), p);
      u64 acc = 0;
      u64 zl = 1;
      for (std::size_t l = 0; l < m.size(); ++l) {
        acc = modp::add(acc, modp::mul(m[l] % p, zl, p), p);
        zl = modp::mul(zl, z, p);
      }
      out[chi][j] = acc;
    }
  }
  return out;
}

ModularIrreps build_modular_irreps(const GroupTable& group, const ClassData& classes, const CharacterTable& table,
                                   u64 p) {
  const Index n = group.order();
  if (n > 20000) fail(Errc::no_representation, "group too large for regular-representation vectors");
  ModularIrreps out;
  out.prime = p;
  out.characters = reduce_characters(table, p);
  const std::size_t k = table.count();
  const std::uint64_t e = table.exponent;
  const u64 root_e = modp::pow(modp::primitive_root(p), (p - 1) / e, p);
  const u64 n_inv = modp::inv(n % p, p);

  for (std::size_t chi = 0; chi < k; ++chi) {
    const auto& chi_p = out.characters[chi];
    const std::uint64_t d = table.degrees[chi];
    ModularRepresentation rep;
    rep.degree = d;
    rep.matrices.resize(static_cast<std::size_t>(n) * d * d);
    if (d == 1) {
      for (Index g = 0; g < n; ++g) rep.matrices[g] = chi_p[classes.class_of[g]];
      out.reps.push_back(std::move(rep));
      continue;
    }

    // Witness: class j and eigenvalue index l of least multiplicity.
    std::size_t wj = k;
    std::size_t wl = 0;
    std::uint32_t wm = UINT32_MAX;
    for (std::size_t j = 1; j < k && wm > 1; ++j) {
      const auto& m = table.eigen_multiplicities(chi, j);
      for (std::size_t l = 0; l < m.size(); ++l) {
        if (m[l] > 0 && m[l] < wm) {
          wj = j;
          wl = l;
          wm = m[l];
        }
      }
    }
    if (wj == k) fail(Errc::no_representation, "no eigenvalue witness for a character of degree " + std::to_string(d));

    const Index x = classes.representatives[wj];
    const std::uint32_t o = classes.element_orders[wj];
    const u64 z = modp::pow(root_e, e / o, p);
    const u64 z_inv_l = modp::inv(modp::pow(z, wl, p), p);
    const u64 o_inv = modp::inv(o % p, p);
    const u64 d_over_n = modp::mul(d % p, n_inv, p);

    // e_chi(g) = d/|G| chi(g^-1)
    std::vector<u64> e_chi(n);
    for (Index g = 0; g < n; ++g) e_chi[g] = modp::mul(d_over_n, chi_p[classes.inverse_class[classes.class_of[g]]], p);
    // eps(x^i) = lambda(x^i)^-1 / o
    std::vector<Index> x_pow(o);
    x_pow[0] = 0;
    for (std::uint32_t i = 1; i < o; ++i) x_pow[i] = group.mul(x_pow[i - 1], x);
    std::vector<u64> eps(o);
    u64 c = o_inv;
    for (std::uint32_t i = 0; i < o; ++i) {
      eps[i] = c;
      c = modp::mul(c, z_inv_l, p);
    }
    // w = e_chi * eps, w(h) = sum_i eps(x^i) e_chi(h x^-i)
    std::vector<u64> w(n, 0);
    for (Index h = 0; h < n; ++h) {
      u64 acc = 0;
      for (std::uint32_t i = 0; i < o; ++i) {
        acc = modp::add(acc, modp::mul(eps[i], e_chi[group.mul(h, group.inv(x_pow[i]))], p), p);
      }
      w[h] = acc;
    }

    auto left_translate = [&](const std::vector<u64>& v, Index g) {
      const Index g_inv = group.inv(g);
      std::vector<u64> out_v(n);
      for (Index h = 0; h < n; ++h) out_v[h] = v[group.mul(g_inv, h)];
      return out_v;
    };

    // Left ideal L = F[G] w, dimension d * wm, as a reduced echelon basis.
    Echelon ideal(n, p);
    for (Index g = 0; g < n && ideal.rows.size() < d * wm; ++g) ideal.insert(left_translate(w, g));
    if (ideal.rows.size() != d * wm) fail(Errc::no_representation, "left ideal has the wrong dimension");

    Echelon module(n, p);
    if (wm == 1) {
      module = std::move(ideal);
    } else {
      // L is wm copies of the irreducible module. Right multiplication by
      // r = eps y eps commutes with the left action, so its eigenspaces are
      // submodules; one of dimension d is irreducible.
      const std::size_t dim = ideal.rows.size();
      bool found = false;
      for (Index y = 1; y < n && !found; ++y) {
        // r(x^i y x^j) += eps_i eps_j
        std::vector<std::pair<Index, u64>> r;
        for (std::uint32_t i = 0; i < o; ++i) {
          for (std::uint32_t j = 0; j < o; ++j) {
            r.emplace_back(group.mul(group.mul(x_pow[i], y), x_pow[j]), modp::mul(eps[i], eps[j], p));
          }
        }
        modp::Mat rmat(dim, modp::Row(dim, 0));
        std::vector<std::vector<u64>> images(dim);
        for (std::size_t col = 0; col < dim; ++col) {
          const auto& v = ideal.rows[col];
          // (v * r)(h) = sum_{(t, c)} v(h t^-1) c
          std::vector<u64> img(n, 0);
          for (Index h = 0; h < n; ++h) {
            u64 acc = 0;
            for (const auto& [t, coef] : r) acc = modp::add(acc, modp::mul(v[group.mul(h, group.inv(t))], coef, p), p);
            img[h] = acc;
          }
          for (std::size_t row = 0; row < dim; ++row) rmat[row][col] = img[ideal.pivots[row]];
        }
        for (u64 mu : modp::roots(modp::charpoly(rmat, p), p)) {
          modp::Mat shifted = rmat;
          for (std::size_t i = 0; i < dim; ++i) shifted[i][i] = modp::sub(shifted[i][i], mu, p);
          auto ker = modp::kernel(shifted, p);
          if (ker.size() != d) continue;
          Echelon sub(n, p);
          for (const auto& coords : ker) {
            std::vector<u64> v(n, 0);
            for (std::size_t b = 0; b < dim; ++b) {
              if (coords[b] == 0) continue;
              for (Index h = 0; h < n; ++h) v[h] = modp::add(v[h], modp::mul(coords[b], ideal.rows[b][h], p), p);
            }
            sub.insert(std::move(v));
          }
          module = std::move(sub);
          found = true;
          break;
        }
      }
      if (!found) fail(Errc::no_representation, "could not split a homogeneous left ideal");
    }
    if (module.rows.size() != d) fail(Errc::no_representation, "module has the wrong dimension");

    // Echelon basis b_r with unit pivots: coordinate s of v is v[pivot_s],
    // so rho(g)[s][r] = (g.b_r)[pivot_s] = b_r(g^-1 pivot_s).
    for (Index g = 0; g < n; ++g) {
      const Index g_inv = group.inv(g);
      std::uint64_t* m = rep.matrices.data() + static_cast<std::size_t>(g) * d * d;
      for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t s = 0; s < d; ++s) {
          m[s * d + r] = module.rows[r][group.mul(g_inv, static_cast<Index>(module.pivots[s]))];
        }
      }
    }
    out.reps.push_back(std::move(rep));
  }

  // Verification: traces match, and rho(s) rho(g) = rho(s g) on generators.
  for (std::size_t chi = 0; chi < k; ++chi) {
    const auto& rep = out.reps[chi];
    const std::size_t d = rep.degree;
    for (Index g = 0; g < n; ++g) {
      u64 tr = 0;
      for (std::size_t i = 0; i < d; ++i) tr = modp::add(tr, rep.matrix(g)[i * d + i], p);
      if (tr != out.characters[chi][classes.class_of[g]]) fail(Errc::no_representation, "trace check failed");
    }
    for (Index s : group.generators()) {
      for (Index g = 0; g < n; ++g) {
        const auto* a = rep.matrix(s);
        const auto* b = rep.matrix(g);
        const auto* c = rep.matrix(group.mul(s, g));
        for (std::size_t i = 0; i < d; ++i) {
          for (std::size_t j = 0; j < d; ++j) {
            u64 acc = 0;
            for (std::size_t l = 0; l < d; ++l) acc = modp::add(acc, modp::mul(a[i * d + l], b[l * d + j], p), p);
            if (acc != c[i * d + j]) fail(Errc::no_representation, "homomorphism check failed");
          }
        }
      }
    }
  }
  return out;
}

}  // namespace mixer
