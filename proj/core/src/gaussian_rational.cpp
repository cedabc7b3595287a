#include "bimero/gaussian_rational.hpp"

#include <cmath>

#include "bimero/error.hpp"

namespace bimero {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::ZeroDenominator: return "ZeroDenominator";
    case ErrorCode::NumericUnderflow: return "NumericUnderflow";
    case ErrorCode::CoefficientOverflow: return "CoefficientOverflow";
    case ErrorCode::PositiveDimensionalLocus: return "PositiveDimensionalLocus";
    case ErrorCode::MissingInverse: return "MissingInverse";
    case ErrorCode::TooCloseToIndeterminacy: return "TooCloseToIndeterminacy";
    case ErrorCode::NoExpansion: return "NoExpansion";
    case ErrorCode::DegenerateNormalization: return "DegenerateNormalization";
    case ErrorCode::SimpleEigenvalueViolated: return "SimpleEigenvalueViolated";
    case ErrorCode::OrbitHitIndeterminacy: return "OrbitHitIndeterminacy";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::NonPositiveT: return "NonPositiveT";
    case ErrorCode::PremiseViolated: return "PremiseViolated";
    case ErrorCode::ChartMeetsExceptionalSet: return "ChartMeetsExceptionalSet";
    case ErrorCode::NoSaddlesFound: return "NoSaddlesFound";
    case ErrorCode::AllOrbitsExcluded: return "AllOrbitsExcluded";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

GaussianRational::GaussianRational(mpq_class re, mpq_class im) : re_(std::move(re)), im_(std::move(im)) {
  re_.canonicalize();
  im_.canonicalize();
}

GaussianRational GaussianRational::from_parts(const mpz_class& re_num, const mpz_class& re_den,
                                              const mpz_class& im_num, const mpz_class& im_den) {
  if (sgn(re_den) == 0 || sgn(im_den) == 0) {
    throw Error(ErrorCode::ZeroDenominator, "zero denominator in Gaussian rational");
  }
  mpq_class re(re_num, re_den);
  mpq_class im(im_num, im_den);
  return {re, im};
}

namespace {
std::size_t bits(const mpz_class& z) { return sgn(z) == 0 ? 0 : mpz_sizeinbase(z.get_mpz_t(), 2); }
}  // namespace

std::size_t GaussianRational::bit_size() const {
  std::size_t b = bits(re_.get_num());
  b = std::max(b, bits(re_.get_den()));
  b = std::max(b, bits(im_.get_num()));
  b = std::max(b, bits(im_.get_den()));
  return b;
}

std::string GaussianRational::to_string() const {
  if (sgn(im_) == 0) return re_.get_str();
  if (sgn(re_) == 0) return im_.get_str() + "i";
  std::string s = re_.get_str();
  if (sgn(im_) > 0) s += "+";
  return s + im_.get_str() + "i";
}

GaussianRational& GaussianRational::operator+=(const GaussianRational& o) {
  re_ += o.re_;
  im_ += o.im_;
  return *this;
}

GaussianRational& GaussianRational::operator-=(const GaussianRational& o) {
  re_ -= o.re_;
  im_ -= o.im_;
  return *this;
}

GaussianRational& GaussianRational::operator*=(const GaussianRational& o) {
  if (sgn(im_) == 0 && sgn(o.im_) == 0) {
    re_ *= o.re_;
    return *this;
  }
  mpq_class re = re_ * o.re_ - im_ * o.im_;
  mpq_class im = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

GaussianRational& GaussianRational::operator/=(const GaussianRational& o) {
  if (o.is_zero()) throw Error(ErrorCode::ZeroDenominator, "division by zero Gaussian rational");
  if (sgn(o.im_) == 0) {
    re_ /= o.re_;
    im_ /= o.re_;
    return *this;
  }
  const mpq_class n = o.norm();
  mpq_class re = (re_ * o.re_ + im_ * o.im_) / n;
  mpq_class im = (im_ * o.re_ - re_ * o.im_) / n;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

mpq_class rationalize(double value, long max_den) {
  // Continued fraction convergents p/q of value.
  const bool neg = value < 0;
  double x = std::fabs(value);
  mpz_class p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  for (int iter = 0; iter < 64; ++iter) {
    const double a = std::floor(x);
    if (a > 1e15) break;
    const mpz_class ai = static_cast<long>(a);
    mpz_class p2 = ai * p1 + p0;
    mpz_class q2 = ai * q1 + q0;
    if (q2 > max_den) break;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    const double frac = x - a;
    if (frac < 1e-15) break;
    x = 1.0 / frac;
  }
  if (sgn(q1) == 0) return mpq_class(0);
  mpq_class r(neg ? mpz_class(-p1) : p1, q1);
  r.canonicalize();
  return r;
}

}  // namespace bimero
