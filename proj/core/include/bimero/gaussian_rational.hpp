#pragma once

#include <gmpxx.h>

#include <complex>
#include <cstddef>
#include <string>

namespace bimero {

/// Exact element of Q(i); both parts are kept in canonical (reduced, positive
/// denominator) form by GMP.
class GaussianRational {
 public:
  GaussianRational() = default;
  GaussianRational(long re) : re_(re) {}  // NOLINT(google-explicit-constructor)
  GaussianRational(mpq_class re, mpq_class im = 0);

  /// Builds from the four integer parts; throws ZeroDenominator.
  static GaussianRational from_parts(const mpz_class& re_num, const mpz_class& re_den,
                                     const mpz_class& im_num, const mpz_class& im_den);
  static GaussianRational i() { return {mpq_class(0), mpq_class(1)}; }

  const mpq_class& re() const noexcept { return re_; }
  const mpq_class& im() const noexcept { return im_; }

  bool is_zero() const noexcept { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_one() const noexcept { return re_ == 1 && sgn(im_) == 0; }

  GaussianRational conj() const { return {re_, -im_}; }
  /// |z|^2, exact.
  mpq_class norm() const { return re_ * re_ + im_ * im_; }
  std::complex<double> to_complex() const { return {re_.get_d(), im_.get_d()}; }

  /// Largest bit length among the four integer parts.
  std::size_t bit_size() const;

  std::string to_string() const;

  GaussianRational& operator+=(const GaussianRational& o);
  GaussianRational& operator-=(const GaussianRational& o);
  GaussianRational& operator*=(const GaussianRational& o);
  GaussianRational& operator/=(const GaussianRational& o);

  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
  friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
  friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }
  friend GaussianRational operator-(const GaussianRational& a) { return {-a.re_, -a.im_}; }

  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }

 private:
  mpq_class re_{0};
  mpq_class im_{0};
};

/// Best rational approximation with denominator at most `max_den` (continued fractions).
mpq_class rationalize(double value, long max_den);

}  // namespace bimero
