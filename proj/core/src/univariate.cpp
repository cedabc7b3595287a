#include "univariate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bimero/error.hpp"

namespace bimero::detail {

void trim(UPoly& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}

int degree(const UPoly& p) {
  for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i) {
    if (!p[i].is_zero()) return i;
  }
  return -1;
}

bool is_zero(const UPoly& p) { return degree(p) < 0; }

UPoly add(const UPoly& a, const UPoly& b) {
  UPoly r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  trim(r);
  return r;
}

UPoly sub(const UPoly& a, const UPoly& b) {
  UPoly r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  trim(r);
  return r;
}

UPoly mul(const UPoly& a, const UPoly& b) {
  if (is_zero(a) || is_zero(b)) return {};
  UPoly r(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (!b[j].is_zero()) r[i + j] += a[i] * b[j];
    }
  }
  trim(r);
  return r;
}

UPoly scale(const UPoly& a, const GaussianRational& c) {
  if (c.is_zero()) return {};
  UPoly r = a;
  for (auto& v : r) v *= c;
  trim(r);
  return r;
}

void divmod(const UPoly& a, const UPoly& b, UPoly& q, UPoly& r) {
  const int db = degree(b);
  if (db < 0) throw Error(ErrorCode::ZeroDenominator, "polynomial division by zero");
  r = a;
  trim(r);
  q.assign(std::max(0, degree(r) - db + 1), GaussianRational());
  const GaussianRational inv_lead = GaussianRational(1) / b[db];
  for (int dr = degree(r); dr >= db; dr = degree(r)) {
    const GaussianRational coef = r[dr] * inv_lead;
    q[dr - db] = coef;
    for (int i = 0; i <= db; ++i) {
      if (!b[i].is_zero()) r[dr - db + i] -= coef * b[i];
    }
    r[dr] = GaussianRational();
    trim(r);
  }
  trim(q);
}

UPoly monic(const UPoly& a) {
  const int d = degree(a);
  if (d < 0) return {};
  return scale(a, GaussianRational(1) / a[d]);
}

UPoly gcd(const UPoly& a, const UPoly& b) {
  UPoly x = a, y = b;
  trim(x);
  trim(y);
  while (!is_zero(y)) {
    UPoly q, r;
    divmod(x, y, q, r);
    x = std::move(y);
    y = monic(r);
  }
  return monic(x);
}

UPoly derivative(const UPoly& a) {
  if (a.size() <= 1) return {};
  UPoly r(a.size() - 1);
  for (std::size_t i = 1; i < a.size(); ++i) r[i - 1] = a[i] * GaussianRational(static_cast<long>(i));
  trim(r);
  return r;
}

GaussianRational evaluate(const UPoly& a, const GaussianRational& x) {
  GaussianRational acc;
  for (auto it = a.rbegin(); it != a.rend(); ++it) {
    acc *= x;
    acc += *it;
  }
  return acc;
}

UPoly squarefree_part(const UPoly& a) {
  if (degree(a) <= 0) return monic(a);
  const UPoly g = gcd(a, derivative(a));
  UPoly q, r;
  divmod(a, g, q, r);
  return monic(q);
}

UPoly interpolate(const std::vector<GaussianRational>& xs, const std::vector<GaussianRational>& ys) {
  // Newton divided differences.
  const std::size_t n = xs.size();
  std::vector<GaussianRational> c = ys;
  for (std::size_t j = 1; j < n; ++j) {
    for (std::size_t i = n - 1; i >= j; --i) {
      c[i] = (c[i] - c[i - 1]) / (xs[i] - xs[i - j]);
      if (i == j) break;
    }
  }
  UPoly result{c[n - 1]};
  for (std::size_t k = n - 1; k-- > 0;) {
    result = mul(result, UPoly{-xs[k], GaussianRational(1)});
    result = add(result, UPoly{c[k]});
  }
  trim(result);
  return result;
}

GaussianRational determinant(std::vector<GaussianRational> m, int n) {
  GaussianRational det(1);
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int row = col; row < n; ++row) {
      if (!m[row * n + col].is_zero()) {
        pivot = row;
        break;
      }
    }
    if (pivot < 0) return GaussianRational();
    if (pivot != col) {
      for (int k = 0; k < n; ++k) std::swap(m[pivot * n + k], m[col * n + k]);
      det = -det;
    }
    const GaussianRational p = m[col * n + col];
    det *= p;
    for (int row = col + 1; row < n; ++row) {
      if (m[row * n + col].is_zero()) continue;
      const GaussianRational f = m[row * n + col] / p;
      for (int k = col; k < n; ++k) m[row * n + k] -= f * m[col * n + k];
    }
  }
  return det;
}

std::vector<std::complex<double>> to_complex(const UPoly& p) {
  std::vector<std::complex<double>> r;
  r.reserve(p.size());
  for (const auto& c : p) r.push_back(c.to_complex());
  return r;
}

std::vector<std::complex<double>> roots(const std::vector<std::complex<double>>& coeffs_in) {
  using C = std::complex<double>;
  std::vector<C> a = coeffs_in;
  while (!a.empty() && a.back() == C(0)) a.pop_back();
  const int n = static_cast<int>(a.size()) - 1;
  if (n < 1) return {};
  const C lead = a[n];
  for (auto& v : a) v /= lead;
  double bound = 0;
  for (int i = 0; i < n; ++i) bound = std::max(bound, std::abs(a[i]));
  bound = 1 + bound;
  // Aberth-Ehrlich iteration from points on a circle.
  std::vector<C> z(n);
  for (int k = 0; k < n; ++k) {
    const double ang = 2 * std::numbers::pi * (k + 0.25) / n + 0.4;
    z[k] = std::polar(0.5 * bound, ang);
  }
  auto eval = [&](C x, C& d) {
    C p = a[n];
    d = 0;
    for (int i = n - 1; i >= 0; --i) {
      d = d * x + p;
      p = p * x + a[i];
    }
    return p;
  };
  for (int iter = 0; iter < 500; ++iter) {
    double max_step = 0;
    for (int k = 0; k < n; ++k) {
      C d;
      const C p = eval(z[k], d);
      if (p == C(0)) continue;
      const C ratio = p / d;
      C s = 0;
      for (int j = 0; j < n; ++j) {
        if (j != k) s += 1.0 / (z[k] - z[j]);
      }
      const C step = ratio / (1.0 - ratio * s);
      z[k] -= step;
      max_step = std::max(max_step, std::abs(step) / std::max(1.0, std::abs(z[k])));
    }
    if (max_step < 1e-16) break;
  }
  return z;
}

__extension__ using u128 = unsigned __int128;

std::uint64_t mod_mul(std::uint64_t a, std::uint64_t b) {
  return static_cast<std::uint64_t>((static_cast<u128>(a) * b) % kModPrime);
}

std::uint64_t mod_add(std::uint64_t a, std::uint64_t b) {
  const std::uint64_t s = a + b;
  return s >= kModPrime ? s - kModPrime : s;
}

std::uint64_t mod_sub(std::uint64_t a, std::uint64_t b) { return a >= b ? a - b : a + kModPrime - b; }

std::uint64_t mod_inv(std::uint64_t a) {
  std::uint64_t result = 1, base = a, e = kModPrime - 2;
  while (e) {
    if (e & 1) result = mod_mul(result, base);
    base = mod_mul(base, base);
    e >>= 1;
  }
  return result;
}

namespace {
std::uint64_t mod_reduce_z(const mpz_class& z) {
  static_assert(sizeof(unsigned long) == sizeof(std::uint64_t));
  return mpz_fdiv_ui(z.get_mpz_t(), kModPrime);
}
}  // namespace

bool mod_reduce(const GaussianRational& c, std::uint64_t& out) {
  const std::uint64_t re_den = mod_reduce_z(c.re().get_den());
  const std::uint64_t im_den = mod_reduce_z(c.im().get_den());
  if (re_den == 0 || im_den == 0) return false;
  const std::uint64_t re = mod_mul(mod_reduce_z(c.re().get_num()), mod_inv(re_den));
  const std::uint64_t im = mod_mul(mod_reduce_z(c.im().get_num()), mod_inv(im_den));
  out = mod_add(re, mod_mul(im, kModSqrtMinusOne));
  return true;
}

int mod_degree(const ModPoly& p) {
  for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i) {
    if (p[i] != 0) return i;
  }
  return -1;
}

ModPoly mod_gcd(ModPoly a, ModPoly b) {
  while (mod_degree(b) >= 0) {
    const int db = mod_degree(b);
    const std::uint64_t inv = mod_inv(b[db]);
    for (int da = mod_degree(a); da >= db; da = mod_degree(a)) {
      const std::uint64_t f = mod_mul(a[da], inv);
      for (int i = 0; i <= db; ++i) a[da - db + i] = mod_sub(a[da - db + i], mod_mul(f, b[i]));
    }
    std::swap(a, b);
  }
  return a;
}

}  // namespace bimero::detail
