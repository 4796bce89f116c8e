#include "linalg_modp.hpp"

#include <algorithm>
#include <functional>

namespace mixer::modp {

namespace {

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

// Quotient and remainder of a by b (b nonzero).
void divmod(Poly a, const Poly& b, u64 p, Poly& quot, Poly& rem) {
  trim(a);
  const std::size_t db = b.size() - 1;
  const u64 lead_inv = inv(b.back(), p);
  quot.assign(a.size() > db ? a.size() - db : 0, 0);
  while (!a.empty() && a.size() > db) {
    const u64 c = mul(a.back(), lead_inv, p);
    const std::size_t shift = a.size() - 1 - db;
    quot[shift] = c;
    for (std::size_t i = 0; i <= db; ++i) a[shift + i] = sub(a[shift + i], mul(c, b[i], p), p);
    trim(a);
  }
  rem = std::move(a);
}

Poly pmod(const Poly& a, const Poly& b, u64 p) {
  Poly q;
  Poly r;
  divmod(a, b, p, q, r);
  return r;
}

Poly mulmod(const Poly& a, const Poly& b, const Poly& f, u64 p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = add(r[i + j], mul(a[i], b[j], p), p);
  }
  return pmod(r, f, p);
}

Poly powmod(Poly base, u64 e, const Poly& f, u64 p) {
  Poly result{1};
  result = pmod(result, f, p);
  base = pmod(base, f, p);
  while (e > 0) {
    if (e & 1U) result = mulmod(result, base, f, p);
    base = mulmod(base, base, f, p);
    e >>= 1U;
  }
  return result;
}

Poly gcd(Poly a, Poly b, u64 p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = pmod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    const u64 li = inv(a.back(), p);
    for (auto& c : a) c = mul(c, li, p);
  }
  return a;
}

Poly psub(Poly a, const Poly& b, u64 p) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = sub(a[i], b[i], p);
  trim(a);
  return a;
}

}  // namespace

std::vector<std::size_t> rref(Mat& m, u64 p) {
  std::vector<std::size_t> pivots;
  if (m.empty()) return pivots;
  const std::size_t cols = m[0].size();
  std::size_t row = 0;
  for (std::size_t c = 0; c < cols && row < m.size(); ++c) {
    std::size_t sel = row;
    while (sel < m.size() && m[sel][c] == 0) ++sel;
    if (sel == m.size()) continue;
    std::swap(m[row], m[sel]);
    const u64 iv = inv(m[row][c], p);
    for (auto& v : m[row]) v = mul(v, iv, p);
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == row || m[r][c] == 0) continue;
      const u64 f = m[r][c];
      for (std::size_t j = c; j < cols; ++j) m[r][j] = sub(m[r][j], mul(f, m[row][j], p), p);
    }
    pivots.push_back(c);
    ++row;
  }
  m.resize(row);
  return pivots;
}

Mat kernel(Mat a, u64 p) {
  if (a.empty()) return {};
  const std::size_t cols = a[0].size();
  const auto pivots = rref(a, p);
  std::vector<bool> is_pivot(cols, false);
  for (auto c : pivots) is_pivot[c] = true;
  Mat basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    Row v(cols, 0);
    v[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = neg(a[r][free], p);
    basis.push_back(std::move(v));
  }
  return basis;
}

Poly charpoly(Mat h, u64 p) {
  const std::size_t n = h.size();
  // Reduce to upper Hessenberg form by similarity transforms.
  for (std::size_t j = 0; j + 2 < n; ++j) {
    std::size_t i = j + 1;
    while (i < n && h[i][j] == 0) ++i;
    if (i == n) continue;
    if (i != j + 1) {
      std::swap(h[i], h[j + 1]);
      for (std::size_t r = 0; r < n; ++r) std::swap(h[r][i], h[r][j + 1]);
    }
    const u64 piv_inv = inv(h[j + 1][j], p);
    for (std::size_t r = j + 2; r < n; ++r) {
      const u64 u = mul(h[r][j], piv_inv, p);
      if (u == 0) continue;
      for (std::size_t c = 0; c < n; ++c) h[r][c] = sub(h[r][c], mul(u, h[j + 1][c], p), p);
      for (std::size_t c = 0; c < n; ++c) h[c][j + 1] = add(h[c][j + 1], mul(u, h[c][r], p), p);
    }
  }
  // p_m = (x - h[m-1][m-1]) p_{m-1} - sum_{i<m} h[i-1][m-1] (prod_{j=i+1}^{m} h[j-1][j-2]) p_{i-1}
  std::vector<Poly> ps(n + 1);
  ps[0] = {1};
  for (std::size_t m = 1; m <= n; ++m) {
    Poly next(m + 1, 0);
    for (std::size_t d = 0; d < ps[m - 1].size(); ++d) {
      next[d + 1] = add(next[d + 1], ps[m - 1][d], p);
      next[d] = sub(next[d], mul(h[m - 1][m - 1], ps[m - 1][d], p), p);
    }
    u64 prod = 1;
    for (std::size_t i = m - 1; i >= 1; --i) {
      prod = mul(prod, h[i][i - 1], p);
      if (prod == 0) break;
      const u64 c = mul(h[i - 1][m - 1], prod, p);
      for (std::size_t d = 0; d < ps[i - 1].size(); ++d) next[d] = sub(next[d], mul(c, ps[i - 1][d], p), p);
    }
    ps[m] = std::move(next);
  }
  return ps[n];
}

std::vector<u64> roots(const Poly& f_in, u64 p) {
  Poly f = f_in;
  trim(f);
  std::vector<u64> out;
  if (f.size() <= 1) return out;
  // Product of the distinct linear factors.
  const Poly x{0, 1};
  Poly g = gcd(f, psub(powmod(x, p, f, p), x, p), p);
  std::function<void(const Poly&, u64)> split = [&](const Poly& h, u64 seed) {
    if (h.size() <= 1) return;
    if (h.size() == 2) {
      out.push_back(mul(neg(h[0], p), inv(h[1], p), p));
      return;
    }
    if (p == 2) {  // h divides x(x+1)
      out.push_back(0);
      out.push_back(1);
      return;
    }
    for (u64 a = seed;; ++a) {
      Poly shifted{a % p, 1};
      Poly t = psub(powmod(shifted, (p - 1) / 2, h, p), Poly{1}, p);
      Poly d = gcd(h, t, p);
      if (d.size() > 1 && d.size() < h.size()) {
        Poly q;
        Poly r;
        divmod(h, d, p, q, r);
        split(d, a + 1);
        split(q, a + 1);
        return;
      }
    }
  };
  split(g, 0);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace mixer::modp
