#pragma once

#include <array>
#include <vector>

#include "bimero/polynomial.hpp"
#include "bimero/projective.hpp"

namespace bimero {

/// Double-precision copy of a HomogeneousPolynomial for fast evaluation with
/// first and second derivatives.
class NumericPolynomial {
 public:
  NumericPolynomial() = default;
  explicit NumericPolynomial(const HomogeneousPolynomial& p);

  int degree() const noexcept { return degree_; }
  Complex evaluate(const Vec3& z) const;
  Vec3 gradient(const Vec3& z) const;
  Mat3 hessian(const Vec3& z) const;
  /// Sum of coefficient moduli (a scale for relative vanishing tests).
  double coefficient_norm() const noexcept { return coef_norm_; }

 private:
  struct Term {
    Exponent e;
    Complex c;
  };
  int degree_ = 0;
  std::vector<Term> terms_;
  double coef_norm_ = 0.0;
};

/// Homogeneous lift F = (F0, F1, F2) of a rational map, evaluated in doubles.
class NumericMap {
 public:
  NumericMap() = default;
  explicit NumericMap(const std::array<HomogeneousPolynomial, 3>& components);

  int degree() const noexcept { return components_[0].degree(); }
  Vec3 evaluate(const Vec3& z) const;
  /// Rows are components, columns are variables.
  Mat3 jacobian(const Vec3& z) const;
  const NumericPolynomial& component(int i) const { return components_[i]; }
  double coefficient_norm() const noexcept { return coef_norm_; }

 private:
  std::array<NumericPolynomial, 3> components_;
  double coef_norm_ = 0.0;
};

}  // namespace bimero
