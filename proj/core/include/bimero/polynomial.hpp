#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bimero/gaussian_rational.hpp"
#include "bimero/projective.hpp"

namespace bimero {

using Exponent = std::array<int, 3>;

/// Lexicographic order, largest exponent first (x > y > z).
struct LexGreater {
  bool operator()(const Exponent& a, const Exponent& b) const { return a > b; }
};

/// Sparse homogeneous polynomial in x, y, z over Q(i). Every stored exponent
/// sums to degree() and no zero coefficient is stored.
class HomogeneousPolynomial {
 public:
  using Terms = std::map<Exponent, GaussianRational, LexGreater>;

  HomogeneousPolynomial() = default;
  explicit HomogeneousPolynomial(int degree);

  static HomogeneousPolynomial constant(const GaussianRational& c);
  static HomogeneousPolynomial variable(int index);
  static HomogeneousPolynomial monomial(const Exponent& e, const GaussianRational& c);

  int degree() const noexcept { return degree_; }
  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_constant() const noexcept { return degree_ == 0 && !terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }

  /// Adds c * x^e; throws InvalidArgument if e does not sum to degree().
  void add_term(const Exponent& e, const GaussianRational& c);
  GaussianRational coefficient(const Exponent& e) const;

  /// Leading term in lexicographic order; requires a nonzero polynomial.
  const std::pair<const Exponent, GaussianRational>& leading_term() const;

  GaussianRational evaluate(const std::array<GaussianRational, 3>& p) const;
  Complex evaluate(const Vec3& p) const;

  HomogeneousPolynomial derivative(int var) const;
  /// this(g0, g1, g2); the g's must share one degree.
  HomogeneousPolynomial substitute(const std::array<HomogeneousPolynomial, 3>& g) const;
  /// Linear change of variables x_i -> sum_j m[i][j] x_j.
  HomogeneousPolynomial linear_substitute(const std::array<std::array<GaussianRational, 3>, 3>& m) const;
  HomogeneousPolynomial pow(int k) const;
  /// Scaled so that the leading coefficient is 1.
  HomogeneousPolynomial monic() const;
  /// Smallest exponent of each variable over all terms.
  Exponent monomial_content() const;

  std::size_t max_coefficient_bits() const;
  std::string to_string() const;

  HomogeneousPolynomial& operator+=(const HomogeneousPolynomial& o);
  HomogeneousPolynomial& operator-=(const HomogeneousPolynomial& o);
  HomogeneousPolynomial& operator*=(const GaussianRational& c);

  friend HomogeneousPolynomial operator+(HomogeneousPolynomial a, const HomogeneousPolynomial& b) { return a += b; }
  friend HomogeneousPolynomial operator-(HomogeneousPolynomial a, const HomogeneousPolynomial& b) { return a -= b; }
  friend HomogeneousPolynomial operator*(HomogeneousPolynomial a, const GaussianRational& c) { return a *= c; }
  friend HomogeneousPolynomial operator*(const GaussianRational& c, HomogeneousPolynomial a) { return a *= c; }
  friend HomogeneousPolynomial operator*(const HomogeneousPolynomial& a, const HomogeneousPolynomial& b);
  friend bool operator==(const HomogeneousPolynomial& a, const HomogeneousPolynomial& b) {
    return a.is_zero() ? b.is_zero() : (a.degree_ == b.degree_ && a.terms_ == b.terms_);
  }
  friend bool operator!=(const HomogeneousPolynomial& a, const HomogeneousPolynomial& b) { return !(a == b); }

 private:
  int degree_ = 0;
  Terms terms_;
};

/// Quotient a / b when b divides a exactly, std::nullopt otherwise.
std::optional<HomogeneousPolynomial> divide_exact(const HomogeneousPolynomial& a, const HomogeneousPolynomial& b);

/// Greatest common divisor over Q(i), monic in lexicographic order. Both inputs nonzero.
HomogeneousPolynomial poly_gcd(const HomogeneousPolynomial& a, const HomogeneousPolynomial& b);

/// Squarefree decomposition of a nonzero polynomial. Monomial factors x, y, z are
/// split off as separate linear factors; the remaining parts are the products of
/// irreducible factors of equal multiplicity. Constants are dropped.
std::vector<std::pair<HomogeneousPolynomial, int>> squarefree_factorization(const HomogeneousPolynomial& p);

/// Fast rigorous check used before the exact gcd: true only if gcd(a, b) = 1,
/// decided via restrictions to lines modulo a prime. A false result is inconclusive.
bool coprime_by_modular_restriction(const HomogeneousPolynomial& a, const HomogeneousPolynomial& b);

}  // namespace bimero
