#pragma once

#include <cstdint>
#include <vector>

// Arithmetic modulo a prime below 2^62. Products go through 128-bit
// intermediates, so the same helpers serve the small Dixon primes and the
// large counting primes used by the interleave module.
namespace mixer::modp {

using u64 = std::uint64_t;

inline u64 add(u64 a, u64 b, u64 p) {
  u64 s = a + b;
  return s >= p ? s - p : s;
}
inline u64 sub(u64 a, u64 b, u64 p) { return a >= b ? a - b : a + p - b; }
inline u64 neg(u64 a, u64 p) { return a == 0 ? 0 : p - a; }
inline u64 mul(u64 a, u64 b, u64 p) {
  return static_cast<u64>(static_cast<unsigned __int128>(a) * b % p);
}

u64 pow(u64 base, u64 exp, u64 p);
u64 inv(u64 a, u64 p);  // a != 0 mod p

bool is_prime(u64 n);
std::vector<u64> prime_factors(u64 n);  // distinct, ascending

// Smallest generator of the multiplicative group mod p.
u64 primitive_root(u64 p);

// Least prime P with P % modulus == 1 and P > lower_bound; 0 if none below limit.
u64 least_prime_one_mod(u64 modulus, u64 lower_bound, u64 limit);

}  // namespace mixer::modp
