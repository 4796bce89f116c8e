#include "mixer/modarith.hpp"

#include <numeric>

namespace mixer::modp {

u64 pow(u64 base, u64 exp, u64 p) {
  u64 result = 1 % p;
  base %= p;
  while (exp > 0) {
    if (exp & 1U) result = mul(result, base, p);
    base = mul(base, base, p);
    exp >>= 1U;
  }
  return result;
}

u64 inv(u64 a, u64 p) { return pow(a, p - 2, p); }

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 small : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % small == 0) return n == small;
  }
  u64 d = n - 1;
  int r = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++r;
  }
  // Deterministic witness set for all 64-bit n.
  for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    u64 x = pow(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < r; ++i) {
      x = mul(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::vector<u64> prime_factors(u64 n) {
  std::vector<u64> out;
  for (u64 f = 2; f * f <= n; ++f) {
    if (n % f == 0) {
      out.push_back(f);
      while (n % f == 0) n /= f;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

u64 primitive_root(u64 p) {
  if (p == 2) return 1;
  const auto factors = prime_factors(p - 1);
  for (u64 g = 2; g < p; ++g) {
    bool ok = true;
    for (u64 f : factors) {
      if (pow(g, (p - 1) / f, p) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
  return 0;
}

u64 least_prime_one_mod(u64 modulus, u64 lower_bound, u64 limit) {
  u64 candidate = (lower_bound / modulus) * modulus + 1;
  while (candidate <= lower_bound) candidate += modulus;
  for (; candidate < limit; candidate += modulus) {
    if (is_prime(candidate)) return candidate;
  }
  return 0;
}

}  // namespace mixer::modp
