#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mixer {

/// GF(p^k) description. The modulus is monic, stored low degree first
/// (length k + 1). For k == 1 the modulus is the placeholder `x`.
struct FiniteFieldSpec {
  std::uint32_t p = 0;
  std::uint32_t k = 0;
  std::vector<std::uint32_t> modulus;

  std::uint32_t size() const;
  std::string modulus_string() const;
  bool operator==(const FiniteFieldSpec&) const = default;
};

/// Builds GF(p^k) with the least irreducible monic modulus, ordering
/// candidates by their coefficient vectors read from degree k-1 down to 0.
/// Throws NonPrimeCharacteristic, UnsupportedParameters (p^k > 2^20 or k == 0).
FiniteFieldSpec ff_make(std::uint32_t p, std::uint32_t k);

/// Rabin's test: x^(p^k) == x mod f and gcd(x^(p^(k/r)) - x, f) == 1 for
/// every prime r | k. Low-degree moduli are also checked for roots.
bool is_irreducible(const std::vector<std::uint32_t>& monic, std::uint32_t p);

/// Splits q into (p, k) with q == p^k; returns false if q is not a prime power.
bool prime_power(std::uint32_t q, std::uint32_t& p, std::uint32_t& k);

/// Table-driven arithmetic on GF(q). Elements are the integers
/// c0 + c1 p + ... + c_{k-1} p^{k-1} of their polynomial coordinates, which
/// also fixes the total order used for canonical forms.
class FiniteField {
 public:
  using Elem = std::uint32_t;

  explicit FiniteField(FiniteFieldSpec spec);

  const FiniteFieldSpec& spec() const { return spec_; }
  std::uint32_t q() const { return q_; }
  std::uint32_t characteristic() const { return spec_.p; }

  Elem add(Elem a, Elem b) const;
  Elem sub(Elem a, Elem b) const { return add(a, neg_[b]); }
  Elem neg(Elem a) const { return neg_[a]; }
  Elem mul(Elem a, Elem b) const {
    if (a == 0 || b == 0) return 0;
    std::uint32_t s = log_[a] + log_[b];
    if (s >= q_ - 1) s -= q_ - 1;
    return exp_[s];
  }
  Elem inv(Elem a) const;  // a != 0
  Elem primitive() const { return exp_.size() > 1 ? exp_[1] : 1; }

 private:
  FiniteFieldSpec spec_;
  std::uint32_t q_;
  std::vector<Elem> neg_;
  std::vector<Elem> exp_;
  std::vector<std::uint32_t> log_;
  std::vector<Elem> add_table_;  // q*q entries for small fields
};

}  // namespace mixer
