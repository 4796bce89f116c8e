#include "mixer/finite_field.hpp"

#include <sstream>

#include "mixer/error.hpp"
#include "mixer/modarith.hpp"

namespace mixer {

namespace {

using Poly = std::vector<std::uint64_t>;  // low degree first, coefficients mod p

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly poly_mod(Poly a, const Poly& f, std::uint64_t p) {
  trim(a);
  const std::size_t df = f.size() - 1;
  const std::uint64_t lead_inv = modp::inv(f.back(), p);
  while (a.size() > df) {
    const std::uint64_t c = modp::mul(a.back(), lead_inv, p);
    const std::size_t shift = a.size() - 1 - df;
    for (std::size_t i = 0; i <= df; ++i) {
      a[shift + i] = modp::sub(a[shift + i], modp::mul(c, f[i], p), p);
    }
    trim(a);
  }
  return a;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& f, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      r[i + j] = modp::add(r[i + j], modp::mul(a[i], b[j], p), p);
    }
  }
  return poly_mod(std::move(r), f, p);
}

Poly poly_powmod(Poly base, std::uint64_t e, const Poly& f, std::uint64_t p) {
  Poly result{1};
  base = poly_mod(std::move(base), f, p);
  while (e > 0) {
    if (e & 1U) result = poly_mulmod(result, base, f, p);
    base = poly_mulmod(base, base, f, p);
    e >>= 1U;
  }
  return result;
}

Poly poly_gcd(Poly a, Poly b, std::uint64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

Poly poly_sub(Poly a, const Poly& b, std::uint64_t p) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = modp::sub(a[i], b[i], p);
  trim(a);
  return a;
}

}  // namespace

std::uint32_t FiniteFieldSpec::size() const {
  std::uint32_t q = 1;
  for (std::uint32_t i = 0; i < k; ++i) q *= p;
  return q;
}

std::string FiniteFieldSpec::modulus_string() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t d = modulus.size(); d-- > 0;) {
    if (modulus[d] == 0) continue;
    if (!first) os << " + ";
    first = false;
    if (modulus[d] != 1 || d == 0) os << modulus[d];
    if (d >= 1) os << "x";
    if (d >= 2) os << "^" << d;
  }
  return os.str();
}

bool is_irreducible(const std::vector<std::uint32_t>& monic, std::uint32_t p) {
  const std::size_t k = monic.size() - 1;
  if (k == 0 || monic.back() != 1) return false;
  if (k == 1) return true;
  Poly f(monic.begin(), monic.end());
  if (k <= 3) {
    for (std::uint64_t r = 0; r < p; ++r) {
      std::uint64_t v = 0;
      for (std::size_t d = f.size(); d-- > 0;) v = modp::add(modp::mul(v, r, p), f[d], p);
      if (v == 0) return false;
    }
  }
  const Poly x{0, 1};
  // frob[j] = x^(p^j) mod f
  std::vector<Poly> frob{poly_mod(x, f, p)};
  for (std::size_t j = 1; j <= k; ++j) frob.push_back(poly_powmod(frob.back(), p, f, p));
  if (poly_sub(frob[k], frob[0], p).size() != 0) return false;
  for (std::uint64_t r : modp::prime_factors(k)) {
    Poly g = poly_gcd(f, poly_sub(frob[k / r], x, p), p);
    if (g.size() != 1) return false;
  }
  return true;
}

bool prime_power(std::uint32_t q, std::uint32_t& p, std::uint32_t& k) {
  if (q < 2) return false;
  const auto factors = modp::prime_factors(q);
  if (factors.size() != 1) return false;
  p = static_cast<std::uint32_t>(factors.front());
  k = 0;
  for (std::uint32_t r = q; r > 1; r /= p) ++k;
  return true;
}

FiniteFieldSpec ff_make(std::uint32_t p, std::uint32_t k) {
  if (!modp::is_prime(p)) fail(Errc::non_prime_characteristic, "characteristic " + std::to_string(p) + " is not prime");
  if (k == 0) fail(Errc::unsupported_parameters, "extension degree must be positive");
  std::uint64_t q = 1;
  for (std::uint32_t i = 0; i < k; ++i) {
    q *= p;
    if (q > (1ULL << 20)) fail(Errc::unsupported_parameters, "field size exceeds 2^20");
  }
  FiniteFieldSpec spec{p, k, {}};
  if (k == 1) {
    spec.modulus = {0, 1};
    return spec;
  }
  std::vector<std::uint32_t> coeffs(k + 1, 0);
  coeffs[k] = 1;
  for (std::uint64_t m = 0; m < q; ++m) {
    std::uint64_t r = m;
    for (std::uint32_t i = 0; i < k; ++i) {
      coeffs[i] = static_cast<std::uint32_t>(r % p);
      r /= p;
    }
    if (coeffs[0] == 0) continue;  // divisible by x
    if (is_irreducible(coeffs, p)) {
      spec.modulus = coeffs;
      return spec;
    }
  }
  fail(Errc::no_irreducible_found, "no irreducible polynomial of degree " + std::to_string(k) + " over GF(" + std::to_string(p) + ")");
}

FiniteField::FiniteField(FiniteFieldSpec spec) : spec_(std::move(spec)), q_(spec_.size()) {
  const std::uint32_t p = spec_.p;
  const std::uint32_t k = spec_.k;
  auto digits = [&](Elem a) {
    Poly d(k, 0);
    for (std::uint32_t i = 0; i < k; ++i) {
      d[i] = a % p;
      a /= p;
    }
    return d;
  };
  auto encode = [&](const Poly& d) {
    Elem a = 0;
    for (std::size_t i = d.size(); i-- > 0;) a = a * p + static_cast<Elem>(d[i]);
    return a;
  };

  neg_.resize(q_);
  for (Elem a = 0; a < q_; ++a) {
    Poly d = digits(a);
    for (auto& c : d) c = modp::neg(c, p);
    neg_[a] = encode(d);
  }

  Poly f(spec_.modulus.begin(), spec_.modulus.end());
  auto poly_mul_elem = [&](Elem a, Elem b) -> Elem {
    if (k == 1) return static_cast<Elem>(static_cast<std::uint64_t>(a) * b % p);
    Poly r = poly_mulmod(digits(a), digits(b), f, p);
    r.resize(k, 0);
    return encode(r);
  };

  exp_.assign(q_ - 1, 0);
  log_.assign(q_, 0);
  if (q_ == 2) {
    exp_[0] = 1;
  } else {
    bool found = false;
    for (Elem g = 2; g < q_ && !found; ++g) {
      Elem x = 1;
      std::uint32_t i = 0;
      for (; i < q_ - 1; ++i) {
        if (i > 0 && x == 1) break;
        exp_[i] = x;
        x = poly_mul_elem(x, g);
      }
      found = (i == q_ - 1 && x == 1);
    }
    if (!found) fail(Errc::internal, "no primitive element found");
  }
  for (std::uint32_t i = 0; i < q_ - 1; ++i) log_[exp_[i]] = i;

  if (q_ <= 1024) {
    add_table_.resize(static_cast<std::size_t>(q_) * q_);
    for (Elem a = 0; a < q_; ++a) {
      Poly da = digits(a);
      for (Elem b = 0; b < q_; ++b) {
        Poly db = digits(b);
        for (std::uint32_t i = 0; i < k; ++i) db[i] = modp::add(db[i], da[i], p);
        add_table_[static_cast<std::size_t>(a) * q_ + b] = encode(db);
      }
    }
  }
}

FiniteField::Elem FiniteField::add(Elem a, Elem b) const {
  if (!add_table_.empty()) return add_table_[static_cast<std::size_t>(a) * q_ + b];
  const std::uint32_t p = spec_.p;
  Elem result = 0;
  Elem scale = 1;
  for (std::uint32_t i = 0; i < spec_.k; ++i) {
    result += ((a % p + b % p) % p) * scale;
    a /= p;
    b /= p;
    scale *= p;
  }
  return result;
}

FiniteField::Elem FiniteField::inv(Elem a) const {
  if (a == 0) fail(Errc::invalid_argument, "inverse of zero field element");
  const std::uint32_t l = log_[a];
  return exp_[l == 0 ? 0 : q_ - 1 - l];
}

}  // namespace mixer
