#pragma once

#include <cstdint>
#include <vector>

#include "mixer/modarith.hpp"

// Dense linear algebra and univariate polynomials over GF(p).
namespace mixer::modp {

using Row = std::vector<u64>;
using Mat = std::vector<Row>;
using Poly = std::vector<u64>;  // low degree first

/// In-place reduced row echelon form; zero rows are dropped. Returns pivots.
std::vector<std::size_t> rref(Mat& m, u64 p);

/// Basis of {x : a x = 0} for a square or rectangular matrix a.
Mat kernel(Mat a, u64 p);

/// Characteristic polynomial det(xI - a), monic, via Hessenberg reduction.
Poly charpoly(Mat a, u64 p);

/// Distinct roots in GF(p), ascending.
std::vector<u64> roots(const Poly& f, u64 p);

}  // namespace mixer::modp
