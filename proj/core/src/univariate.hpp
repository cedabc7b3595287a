#pragma once

// Dense univariate polynomials used internally by gcd, resultant and
// root-finding code. Coefficients are stored low degree first.

#include <complex>
#include <cstdint>
#include <vector>

#include "bimero/gaussian_rational.hpp"

namespace bimero::detail {

using UPoly = std::vector<GaussianRational>;

void trim(UPoly& p);
int degree(const UPoly& p);  // -1 for zero
bool is_zero(const UPoly& p);
UPoly add(const UPoly& a, const UPoly& b);
UPoly sub(const UPoly& a, const UPoly& b);
UPoly mul(const UPoly& a, const UPoly& b);
UPoly scale(const UPoly& a, const GaussianRational& c);
/// Quotient and remainder over the field Q(i).
void divmod(const UPoly& a, const UPoly& b, UPoly& q, UPoly& r);
UPoly monic(const UPoly& a);
/// Monic gcd; gcd(0, 0) = 0.
UPoly gcd(const UPoly& a, const UPoly& b);
UPoly derivative(const UPoly& a);
GaussianRational evaluate(const UPoly& a, const GaussianRational& x);
UPoly squarefree_part(const UPoly& a);
/// Interpolating polynomial through (xs[i], ys[i]).
UPoly interpolate(const std::vector<GaussianRational>& xs, const std::vector<GaussianRational>& ys);
/// Determinant by Gaussian elimination over Q(i); `m` is row-major n x n.
GaussianRational determinant(std::vector<GaussianRational> m, int n);

std::vector<std::complex<double>> to_complex(const UPoly& p);
/// All complex roots (with multiplicity) of a nonconstant polynomial.
std::vector<std::complex<double>> roots(const std::vector<std::complex<double>>& coeffs);

// Arithmetic modulo the prime kModPrime = 1 (mod 4), with i mapped to a fixed
// square root of -1.
inline constexpr std::uint64_t kModPrime = 4611686018427387817ULL;
inline constexpr std::uint64_t kModSqrtMinusOne = 120863620846201794ULL;

using ModPoly = std::vector<std::uint64_t>;

std::uint64_t mod_mul(std::uint64_t a, std::uint64_t b);
std::uint64_t mod_add(std::uint64_t a, std::uint64_t b);
std::uint64_t mod_sub(std::uint64_t a, std::uint64_t b);
std::uint64_t mod_inv(std::uint64_t a);
/// Reduction of a Gaussian rational; false if a denominator vanishes mod p.
bool mod_reduce(const GaussianRational& c, std::uint64_t& out);
int mod_degree(const ModPoly& p);
ModPoly mod_gcd(ModPoly a, ModPoly b);

}  // namespace bimero::detail
