// Multivariate gcd over Q(i): a modular coprimality test on random lines,
// then an exact primitive-PRS gcd on the z = 1 dehomogenization.

#include <algorithm>

#include "bimero/error.hpp"
#include "bimero/polynomial.hpp"
#include "univariate.hpp"

namespace bimero {
namespace {

using detail::UPoly;
// Polynomial in y whose coefficients are polynomials in x.
using BPoly = std::vector<UPoly>;

void btrim(BPoly& p) {
  for (auto& c : p) detail::trim(c);
  while (!p.empty() && detail::is_zero(p.back())) p.pop_back();
}

int bdeg(const BPoly& p) { return static_cast<int>(p.size()) - 1; }

BPoly dehomogenize(const HomogeneousPolynomial& a) {
  BPoly r;
  for (const auto& [e, c] : a.terms()) {
    if (static_cast<int>(r.size()) <= e[1]) r.resize(e[1] + 1);
    auto& u = r[e[1]];
    if (static_cast<int>(u.size()) <= e[0]) u.resize(e[0] + 1);
    u[e[0]] += c;
  }
  btrim(r);
  return r;
}

HomogeneousPolynomial homogenize(const BPoly& p, int extra_z) {
  int total = 0;
  for (int j = 0; j <= bdeg(p); ++j) {
    const int dx = detail::degree(p[j]);
    if (dx >= 0) total = std::max(total, dx + j);
  }
  HomogeneousPolynomial h(total + extra_z);
  for (int j = 0; j <= bdeg(p); ++j) {
    for (int i = 0; i <= detail::degree(p[j]); ++i) {
      if (!p[j][i].is_zero()) h.add_term({i, j, total - i - j + extra_z}, p[j][i]);
    }
  }
  return h;
}

UPoly content(const BPoly& p) {
  UPoly g;
  for (const auto& c : p) {
    g = detail::gcd(g, c);
    if (detail::degree(g) == 0) break;
  }
  return g;
}

BPoly divide_by(const BPoly& p, const UPoly& d) {
  BPoly r(p.size());
  for (std::size_t j = 0; j < p.size(); ++j) {
    UPoly q, rem;
    detail::divmod(p[j], d, q, rem);
    r[j] = std::move(q);
  }
  btrim(r);
  return r;
}

// Primitive part, scaled so the x-leading coefficient of the y-leading coefficient is 1.
BPoly primitive(const BPoly& p) {
  BPoly r = divide_by(p, content(p));
  if (r.empty()) return r;
  const UPoly& lc = r.back();
  const GaussianRational s = GaussianRational(1) / lc[detail::degree(lc)];
  for (auto& c : r) c = detail::scale(c, s);
  btrim(r);
  return r;
}

BPoly pseudo_remainder(BPoly a, const BPoly& b) {
  const int db = bdeg(b);
  const UPoly& lb = b.back();
  while (!a.empty() && bdeg(a) >= db) {
    const int shift = bdeg(a) - db;
    const UPoly la = a.back();
    for (auto& c : a) c = detail::mul(c, lb);
    for (int j = 0; j <= db; ++j) a[j + shift] = detail::sub(a[j + shift], detail::mul(la, b[j]));
    btrim(a);
  }
  return a;
}

BPoly bivariate_gcd(const BPoly& a0, const BPoly& b0) {
  const UPoly cg = detail::gcd(content(a0), content(b0));
  BPoly a = primitive(a0);
  BPoly b = primitive(b0);
  if (bdeg(a) < bdeg(b)) std::swap(a, b);
  BPoly g;
  if (bdeg(b) == 0) {
    g = BPoly{UPoly{GaussianRational(1)}};
  } else {
    while (true) {
      BPoly r = pseudo_remainder(a, b);
      if (r.empty()) {
        g = primitive(b);
        break;
      }
      if (bdeg(r) == 0) {
        g = BPoly{UPoly{GaussianRational(1)}};
        break;
      }
      a = std::move(b);
      b = primitive(r);
    }
  }
  for (auto& c : g) c = detail::mul(c, cg);
  btrim(g);
  return g;
}

// Restriction of a to the line s -> p + s q, reduced modulo the prime.
bool restrict_mod(const HomogeneousPolynomial& a, const std::array<long, 3>& p, const std::array<long, 3>& q,
                  detail::ModPoly& out) {
  using namespace detail;
  const int d = a.degree();
  std::array<std::vector<ModPoly>, 3> pw;
  for (int v = 0; v < 3; ++v) {
    const std::uint64_t pv = static_cast<std::uint64_t>((p[v] % static_cast<long>(kModPrime) + kModPrime)) % kModPrime;
    const std::uint64_t qv = static_cast<std::uint64_t>((q[v] % static_cast<long>(kModPrime) + kModPrime)) % kModPrime;
    pw[v].push_back(ModPoly{1});
    for (int k = 1; k <= d; ++k) {
      const ModPoly& prev = pw[v].back();
      ModPoly next(prev.size() + 1, 0);
      for (std::size_t i = 0; i < prev.size(); ++i) {
        next[i] = mod_add(next[i], mod_mul(prev[i], pv));
        next[i + 1] = mod_add(next[i + 1], mod_mul(prev[i], qv));
      }
      pw[v].push_back(std::move(next));
    }
  }
  out.assign(d + 1, 0);
  for (const auto& [e, c] : a.terms()) {
    std::uint64_t cm;
    if (!mod_reduce(c, cm)) return false;
    // product of the three power polynomials
    ModPoly t = pw[0][e[0]];
    for (int v = 1; v < 3; ++v) {
      const ModPoly& f = pw[v][e[v]];
      ModPoly prod(t.size() + f.size() - 1, 0);
      for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] == 0) continue;
        for (std::size_t j = 0; j < f.size(); ++j) prod[i + j] = mod_add(prod[i + j], mod_mul(t[i], f[j]));
      }
      t = std::move(prod);
    }
    for (std::size_t i = 0; i < t.size() && i < out.size(); ++i) out[i] = mod_add(out[i], mod_mul(cm, t[i]));
  }
  return true;
}

HomogeneousPolynomial one() { return HomogeneousPolynomial::constant(GaussianRational(1)); }

}  // namespace

bool coprime_by_modular_restriction(const HomogeneousPolynomial& a, const HomogeneousPolynomial& b) {
  static constexpr std::array<std::array<long, 3>, 3> kBase = {{{3, -7, 11}, {-5, 2, 13}, {17, 4, -9}}};
  static constexpr std::array<std::array<long, 3>, 3> kDir = {{{2, 19, -23}, {29, -6, 1}, {-3, 31, 8}}};
  for (int line = 0; line < 3; ++line) {
    detail::ModPoly ra, rb;
    if (!restrict_mod(a, kBase[line], kDir[line], ra) || !restrict_mod(b, kBase[line], kDir[line], rb)) continue;
    if (detail::mod_degree(ra) != a.degree() || detail::mod_degree(rb) != b.degree()) continue;
    if (detail::mod_degree(detail::mod_gcd(ra, rb)) == 0) return true;
  }
  return false;
}

HomogeneousPolynomial poly_gcd(const HomogeneousPolynomial& a, const HomogeneousPolynomial& b) {
  if (a.is_zero() && b.is_zero()) throw Error(ErrorCode::InvalidArgument, "gcd of two zero polynomials");
  if (a.is_zero()) return b.monic();
  if (b.is_zero()) return a.monic();
  if (a.degree() == 0 || b.degree() == 0) return one();
  if (coprime_by_modular_restriction(a, b)) return one();

  const int zpow = std::min(a.monomial_content()[2], b.monomial_content()[2]);
  const BPoly g = bivariate_gcd(dehomogenize(a), dehomogenize(b));
  HomogeneousPolynomial result = homogenize(g, zpow).monic();
  if (!divide_exact(a, result) || !divide_exact(b, result)) {
    throw Error(ErrorCode::InvalidArgument, "internal error: gcd candidate does not divide its inputs");
  }
  return result;
}

std::vector<std::pair<HomogeneousPolynomial, int>> squarefree_factorization(const HomogeneousPolynomial& p) {
  if (p.is_zero()) throw Error(ErrorCode::InvalidArgument, "factorization of the zero polynomial");
  std::vector<std::pair<HomogeneousPolynomial, int>> out;
  const Exponent mono = p.monomial_content();
  HomogeneousPolynomial rest = p;
  for (int v = 0; v < 3; ++v) {
    if (mono[v] == 0) continue;
    Exponent e{0, 0, 0};
    e[v] = mono[v];
    rest = *divide_exact(rest, HomogeneousPolynomial::monomial(e, GaussianRational(1)));
    out.emplace_back(HomogeneousPolynomial::variable(v), mono[v]);
  }
  auto derivative_gcd = [](const HomogeneousPolynomial& f) {
    if (f.degree() == 0) return one();
    HomogeneousPolynomial g = f;
    for (int v = 0; v < 3 && g.degree() > 0; ++v) {
      const HomogeneousPolynomial d = f.derivative(v);
      if (!d.is_zero()) g = poly_gcd(g, d);
    }
    return g.monic();
  };
  auto radical = [&](const HomogeneousPolynomial& f) {
    if (f.degree() == 0) return one();
    return divide_exact(f, derivative_gcd(f))->monic();
  };
  HomogeneousPolynomial current = rest.monic();
  HomogeneousPolynomial w = radical(current);
  for (int k = 1; current.degree() > 0; ++k) {
    const HomogeneousPolynomial next = derivative_gcd(current);
    const HomogeneousPolynomial w_next = radical(next);
    const HomogeneousPolynomial s = divide_exact(w, w_next)->monic();
    if (s.degree() > 0) out.emplace_back(s, k);
    current = next;
    w = w_next;
  }
  return out;
}

}  // namespace bimero
