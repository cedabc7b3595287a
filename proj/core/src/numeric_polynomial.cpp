#include "bimero/numeric_polynomial.hpp"

#include <algorithm>

namespace bimero {
namespace {

// powers[v][k] = z_v^k for k <= degree
std::array<std::array<Complex, 64>, 3> powers_of(const Vec3& z, int degree) {
  std::array<std::array<Complex, 64>, 3> pw{};
  for (int v = 0; v < 3; ++v) {
    pw[v][0] = 1.0;
    for (int k = 1; k <= degree; ++k) pw[v][k] = pw[v][k - 1] * z(v);
  }
  return pw;
}

}  // namespace

NumericPolynomial::NumericPolynomial(const HomogeneousPolynomial& p) : degree_(p.degree()) {
  terms_.reserve(p.size());
  for (const auto& [e, c] : p.terms()) {
    terms_.push_back({e, c.to_complex()});
    coef_norm_ += std::abs(c.to_complex());
  }
}

Complex NumericPolynomial::evaluate(const Vec3& z) const {
  if (degree_ >= 64) {
    Complex acc = 0;
    for (const auto& t : terms_) acc += t.c * std::pow(z(0), t.e[0]) * std::pow(z(1), t.e[1]) * std::pow(z(2), t.e[2]);
    return acc;
  }
  const auto pw = powers_of(z, degree_);
  Complex acc = 0;
  for (const auto& t : terms_) acc += t.c * pw[0][t.e[0]] * pw[1][t.e[1]] * pw[2][t.e[2]];
  return acc;
}

Vec3 NumericPolynomial::gradient(const Vec3& z) const {
  Vec3 g = Vec3::Zero();
  if (degree_ == 0) return g;
  const auto pw = powers_of(z, std::min(degree_, 63));
  for (const auto& t : terms_) {
    for (int v = 0; v < 3; ++v) {
      if (t.e[v] == 0) continue;
      Complex m = t.c * static_cast<double>(t.e[v]);
      for (int u = 0; u < 3; ++u) m *= pw[u][u == v ? t.e[u] - 1 : t.e[u]];
      g(v) += m;
    }
  }
  return g;
}

Mat3 NumericPolynomial::hessian(const Vec3& z) const {
  Mat3 h = Mat3::Zero();
  if (degree_ < 2) return h;
  const auto pw = powers_of(z, std::min(degree_, 63));
  for (const auto& t : terms_) {
    for (int a = 0; a < 3; ++a) {
      for (int b = a; b < 3; ++b) {
        Exponent e = t.e;
        double factor = e[a];
        e[a] -= 1;
        if (e[a] < 0) continue;
        factor *= e[b];
        e[b] -= 1;
        if (e[b] < 0) continue;
        const Complex m = t.c * factor * pw[0][e[0]] * pw[1][e[1]] * pw[2][e[2]];
        h(a, b) += m;
        if (a != b) h(b, a) += m;
      }
    }
  }
  return h;
}

NumericMap::NumericMap(const std::array<HomogeneousPolynomial, 3>& components) {
  for (int i = 0; i < 3; ++i) {
    components_[i] = NumericPolynomial(components[i]);
    coef_norm_ = std::max(coef_norm_, components_[i].coefficient_norm());
  }
}

Vec3 NumericMap::evaluate(const Vec3& z) const {
  return Vec3(components_[0].evaluate(z), components_[1].evaluate(z), components_[2].evaluate(z));
}

Mat3 NumericMap::jacobian(const Vec3& z) const {
  Mat3 j;
  for (int i = 0; i < 3; ++i) j.row(i) = components_[i].gradient(z).transpose();
  return j;
}

}  // namespace bimero
