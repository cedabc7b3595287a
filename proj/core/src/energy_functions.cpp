#include <cmath>
#include <numbers>

#include "bimero/energy.hpp"
#include "bimero/error.hpp"

namespace bimero::functions {
namespace {

constexpr double kPi = std::numbers::pi;

double smoothstep_down(double t) {
  if (t <= 0) return 1;
  if (t >= 1) return 0;
  return 1 - t * t * t * (10 - 15 * t + 6 * t * t);
}

double smoothstep_down_slope(double t) {
  if (t <= 0 || t >= 1) return 0;
  return -30 * t * t * (1 - t) * (1 - t);
}

}  // namespace

FormField euclidean_form() {
  return [](const Vec2&) -> Mat2 { return Mat2::Identity() / 2.0; };
}

FormField constant_form(const Mat2& a) {
  return [a](const Vec2&) { return a; };
}

FormField ddc_log_form(const Vec2& a, double eps) {
  return [a, eps](const Vec2& z) -> Mat2 {
    const Vec2 w = z - a;
    const double s = w.squaredNorm() + eps * eps;
    if (s == 0) return Mat2::Zero();
    return (Mat2::Identity() / s - w.conjugate() * w.transpose() / (s * s)) / (2 * kPi);
  };
}

SmoothFunction constant(double c) {
  return {[c](const Vec2&) { return c; }, [](const Vec2&) -> Vec2 { return Vec2::Zero(); },
          [](const Vec2&) -> Mat2 { return Mat2::Zero(); }};
}

SmoothFunction real_coordinate(int k) {
  if (k != 0 && k != 1) throw Error(ErrorCode::InvalidArgument, "coordinate index must be 0 or 1");
  return {[k](const Vec2& z) { return z(k).real(); },
          [k](const Vec2&) -> Vec2 {
            Vec2 g = Vec2::Zero();
            g(k) = 0.5;
            return g;
          },
          [](const Vec2&) -> Mat2 { return Mat2::Zero(); }};
}

SmoothFunction log_distance(const Vec2& a) {
  return {[a](const Vec2& z) {
            const double r = (z - a).norm();
            return r == 0 ? -INFINITY : std::log(r);
          },
          [a](const Vec2& z) -> Vec2 {
            const Vec2 w = z - a;
            const double s = w.squaredNorm();
            if (s == 0) return Vec2::Zero();
            return 0.5 * w.conjugate() / s;
          },
          [a](const Vec2& z) -> Mat2 {
            const Vec2 w = z - a;
            const double s = w.squaredNorm();
            if (s == 0) return Mat2::Zero();
            return 0.5 * (Mat2::Identity() / s - w.conjugate() * w.transpose() / (s * s));
          }};
}

SmoothFunction cutoff_log(const Vec2& s, double radius) {
  auto chi = [radius](double r) { return smoothstep_down((r - radius / 4) / (0.75 * radius)); };
  auto chi_slope = [radius](double r) {
    return smoothstep_down_slope((r - radius / 4) / (0.75 * radius)) / (0.75 * radius);
  };
  SmoothFunction f;
  f.value = [s, chi](const Vec2& z) {
    const double r = (z - s).norm();
    return r == 0 ? -INFINITY : chi(r) * std::log(r);
  };
  f.gradient = [s, chi, chi_slope](const Vec2& z) -> Vec2 {
    const Vec2 w = z - s;
    const double r = w.norm();
    if (r == 0) return Vec2::Zero();
    const double df = chi_slope(r) * std::log(r) + chi(r) / r;
    return df * w.conjugate() / (2 * r);
  };
  return f;
}

SmoothFunction bump(const Vec2& s, double radius) {
  const double r2 = radius * radius;
  return {[s, r2](const Vec2& z) {
            const double p = (z - s).squaredNorm() / r2;
            return p >= 1 ? 0.0 : std::pow(1 - p, 4);
          },
          [s, r2](const Vec2& z) -> Vec2 {
            const Vec2 w = z - s;
            const double p = w.squaredNorm() / r2;
            if (p >= 1) return Vec2::Zero();
            return -4 * std::pow(1 - p, 3) * w.conjugate() / r2;
          },
          [s, r2](const Vec2& z) -> Mat2 {
            const Vec2 w = z - s;
            const double p = w.squaredNorm() / r2;
            if (p >= 1) return Mat2::Zero();
            return 12 * std::pow(1 - p, 2) * (w.conjugate() * w.transpose()) / (r2 * r2) -
                   4 * std::pow(1 - p, 3) * Mat2::Identity() / r2;
          }};
}

SmoothFunction sum(const SmoothFunction& a, const SmoothFunction& b, double scale_b) {
  SmoothFunction f;
  f.value = [a, b, scale_b](const Vec2& z) { return a.value(z) + scale_b * b.value(z); };
  f.gradient = [a, b, scale_b](const Vec2& z) -> Vec2 { return a.gradient(z) + scale_b * b.gradient(z); };
  if (a.levi && b.levi) {
    f.levi = [a, b, scale_b](const Vec2& z) -> Mat2 { return a.levi(z) + scale_b * b.levi(z); };
  }
  return f;
}

SmoothFunction trig_polynomial(std::vector<TrigMode> modes, double c) {
  auto phase = [](const TrigMode& m, const Vec2& z) {
    return 2 * kPi *
           (m.k[0] * z(0).real() + m.k[1] * z(0).imag() + m.k[2] * z(1).real() + m.k[3] * z(1).imag());
  };
  auto kappa = [](const TrigMode& m) { return Vec2(Complex(m.k[0], -m.k[1]), Complex(m.k[2], -m.k[3])); };
  SmoothFunction f;
  f.value = [modes, c, phase](const Vec2& z) {
    double v = c;
    for (const auto& m : modes) {
      const double t = phase(m, z);
      v += m.a * std::cos(t) + m.b * std::sin(t);
    }
    return v;
  };
  f.gradient = [modes, phase, kappa](const Vec2& z) -> Vec2 {
    Vec2 g = Vec2::Zero();
    for (const auto& m : modes) {
      const double t = phase(m, z);
      g += kPi * (-m.a * std::sin(t) + m.b * std::cos(t)) * kappa(m);
    }
    return g;
  };
  f.levi = [modes, phase, kappa](const Vec2& z) -> Mat2 {
    Mat2 l = Mat2::Zero();
    for (const auto& m : modes) {
      const double t = phase(m, z);
      const Vec2 k = kappa(m);
      l -= kPi * kPi * (m.a * std::cos(t) + m.b * std::sin(t)) * (k * k.adjoint());
    }
    return l;
  };
  return f;
}

}  // namespace bimero::functions
