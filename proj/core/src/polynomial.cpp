#include "bimero/polynomial.hpp"

#include <algorithm>

#include "bimero/error.hpp"

namespace bimero {

HomogeneousPolynomial::HomogeneousPolynomial(int degree) : degree_(degree) {
  if (degree < 0) throw Error(ErrorCode::InvalidArgument, "negative polynomial degree");
}

HomogeneousPolynomial HomogeneousPolynomial::constant(const GaussianRational& c) {
  HomogeneousPolynomial p(0);
  p.add_term({0, 0, 0}, c);
  return p;
}

HomogeneousPolynomial HomogeneousPolynomial::variable(int index) {
  HomogeneousPolynomial p(1);
  Exponent e{0, 0, 0};
  e.at(index) = 1;
  p.add_term(e, GaussianRational(1));
  return p;
}

HomogeneousPolynomial HomogeneousPolynomial::monomial(const Exponent& e, const GaussianRational& c) {
  HomogeneousPolynomial p(e[0] + e[1] + e[2]);
  p.add_term(e, c);
  return p;
}

void HomogeneousPolynomial::add_term(const Exponent& e, const GaussianRational& c) {
  if (e[0] < 0 || e[1] < 0 || e[2] < 0 || e[0] + e[1] + e[2] != degree_) {
    throw Error(ErrorCode::InvalidArgument, "exponent triple does not sum to the polynomial degree");
  }
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

GaussianRational HomogeneousPolynomial::coefficient(const Exponent& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? GaussianRational() : it->second;
}

const std::pair<const Exponent, GaussianRational>& HomogeneousPolynomial::leading_term() const {
  if (terms_.empty()) throw Error(ErrorCode::InvalidArgument, "leading term of the zero polynomial");
  return *terms_.begin();
}

GaussianRational HomogeneousPolynomial::evaluate(const std::array<GaussianRational, 3>& p) const {
  // Cache powers of each coordinate.
  std::array<std::vector<GaussianRational>, 3> pw;
  for (int v = 0; v < 3; ++v) {
    pw[v].reserve(degree_ + 1);
    pw[v].emplace_back(1);
    for (int k = 1; k <= degree_; ++k) pw[v].push_back(pw[v].back() * p[v]);
  }
  GaussianRational acc;
  for (const auto& [e, c] : terms_) acc += c * pw[0][e[0]] * pw[1][e[1]] * pw[2][e[2]];
  return acc;
}

Complex HomogeneousPolynomial::evaluate(const Vec3& p) const {
  Complex acc = 0;
  for (const auto& [e, c] : terms_) {
    Complex m = c.to_complex();
    for (int v = 0; v < 3; ++v) {
      for (int k = 0; k < e[v]; ++k) m *= p(v);
    }
    acc += m;
  }
  return acc;
}

HomogeneousPolynomial HomogeneousPolynomial::derivative(int var) const {
  if (degree_ == 0) return HomogeneousPolynomial(0);
  HomogeneousPolynomial r(degree_ - 1);
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    Exponent f = e;
    f[var] -= 1;
    r.add_term(f, c * GaussianRational(static_cast<long>(e[var])));
  }
  return r;
}

HomogeneousPolynomial operator*(const HomogeneousPolynomial& a, const HomogeneousPolynomial& b) {
  HomogeneousPolynomial r(a.degree_ + b.degree_);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      r.add_term({ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]}, ca * cb);
    }
  }
  return r;
}

HomogeneousPolynomial HomogeneousPolynomial::pow(int k) const {
  HomogeneousPolynomial result = constant(GaussianRational(1));
  HomogeneousPolynomial base = *this;
  while (k > 0) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k) base = base * base;
  }
  return result;
}

HomogeneousPolynomial HomogeneousPolynomial::substitute(const std::array<HomogeneousPolynomial, 3>& g) const {
  const int dg = std::max({g[0].degree(), g[1].degree(), g[2].degree()});
  for (const auto& gi : g) {
    if (!gi.is_zero() && gi.degree() != dg) {
      throw Error(ErrorCode::InvalidArgument, "substituted polynomials must share a degree");
    }
  }
  std::array<std::vector<HomogeneousPolynomial>, 3> pw;
  for (int v = 0; v < 3; ++v) {
    pw[v].push_back(constant(GaussianRational(1)));
    for (int k = 1; k <= degree_; ++k) {
      pw[v].push_back(g[v].is_zero() ? HomogeneousPolynomial(k * dg) : pw[v].back() * g[v]);
    }
  }
  HomogeneousPolynomial r(degree_ * dg);
  for (const auto& [e, c] : terms_) {
    const auto& a = pw[0][e[0]];
    const auto& b = pw[1][e[1]];
    const auto& d = pw[2][e[2]];
    if (a.is_zero() || b.is_zero() || d.is_zero()) continue;
    HomogeneousPolynomial t = a * b;
    t = t * d;
    for (const auto& [et, ct] : t.terms_) r.add_term(et, c * ct);
  }
  return r;
}

HomogeneousPolynomial HomogeneousPolynomial::linear_substitute(
    const std::array<std::array<GaussianRational, 3>, 3>& m) const {
  std::array<HomogeneousPolynomial, 3> g;
  for (int i = 0; i < 3; ++i) {
    g[i] = HomogeneousPolynomial(1);
    for (int j = 0; j < 3; ++j) {
      Exponent e{0, 0, 0};
      e[j] = 1;
      g[i].add_term(e, m[i][j]);
    }
  }
  return substitute(g);
}

HomogeneousPolynomial HomogeneousPolynomial::monic() const {
  if (is_zero()) return *this;
  const GaussianRational inv = GaussianRational(1) / leading_term().second;
  HomogeneousPolynomial r = *this;
  r *= inv;
  return r;
}

Exponent HomogeneousPolynomial::monomial_content() const {
  Exponent m{degree_, degree_, degree_};
  for (const auto& [e, c] : terms_) {
    for (int v = 0; v < 3; ++v) m[v] = std::min(m[v], e[v]);
  }
  if (terms_.empty()) m = {0, 0, 0};
  return m;
}

std::size_t HomogeneousPolynomial::max_coefficient_bits() const {
  std::size_t b = 0;
  for (const auto& [e, c] : terms_) b = std::max(b, c.bit_size());
  return b;
}

std::string HomogeneousPolynomial::to_string() const {
  if (terms_.empty()) return "0";
  static const char* names[3] = {"x", "y", "z"};
  std::string s;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    std::string coef = c.to_string();
    if (sgn(c.re()) != 0 && sgn(c.im()) != 0) coef = "(" + coef + ")";
    std::string mono;
    for (int v = 0; v < 3; ++v) {
      if (e[v] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += names[v];
      if (e[v] > 1) mono += "^" + std::to_string(e[v]);
    }
    std::string term;
    if (mono.empty()) {
      term = coef;
    } else if (c.is_one()) {
      term = mono;
    } else if (c == GaussianRational(-1)) {
      term = "-" + mono;
    } else {
      term = coef + "*" + mono;
    }
    if (!first && term[0] != '-') s += "+";
    s += term;
    first = false;
  }
  return s;
}

HomogeneousPolynomial& HomogeneousPolynomial::operator+=(const HomogeneousPolynomial& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) {
    *this = o;
    return *this;
  }
  if (o.degree_ != degree_) throw Error(ErrorCode::InvalidArgument, "adding polynomials of different degrees");
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

HomogeneousPolynomial& HomogeneousPolynomial::operator-=(const HomogeneousPolynomial& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) {
    *this = o;
    *this *= GaussianRational(-1);
    return *this;
  }
  if (o.degree_ != degree_) throw Error(ErrorCode::InvalidArgument, "subtracting polynomials of different degrees");
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

HomogeneousPolynomial& HomogeneousPolynomial::operator*=(const GaussianRational& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

std::optional<HomogeneousPolynomial> divide_exact(const HomogeneousPolynomial& a, const HomogeneousPolynomial& b) {
  if (b.is_zero()) throw Error(ErrorCode::ZeroDenominator, "division by the zero polynomial");
  if (a.is_zero()) return HomogeneousPolynomial(0);
  if (a.degree() < b.degree()) return std::nullopt;
  HomogeneousPolynomial q(a.degree() - b.degree());
  HomogeneousPolynomial r = a;
  const auto& [lb_e, lb_c] = b.leading_term();
  const GaussianRational inv = GaussianRational(1) / lb_c;
  while (!r.is_zero()) {
    const auto [le, lc] = r.leading_term();
    Exponent qe{le[0] - lb_e[0], le[1] - lb_e[1], le[2] - lb_e[2]};
    if (qe[0] < 0 || qe[1] < 0 || qe[2] < 0) return std::nullopt;
    const GaussianRational qc = lc * inv;
    q.add_term(qe, qc);
    for (const auto& [eb, cb] : b.terms()) {
      r.add_term({qe[0] + eb[0], qe[1] + eb[1], qe[2] + eb[2]}, -(qc * cb));
    }
  }
  return q;
}

}  // namespace bimero
