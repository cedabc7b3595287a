#include "bimero/corpus.hpp"

#include <cctype>
#include <string>

#include "bimero/error.hpp"

namespace bimero {
namespace {

class PolyParser {
 public:
  explicit PolyParser(std::string_view s) : s_(s) {}

  HomogeneousPolynomial parse() {
    std::vector<std::pair<Exponent, GaussianRational>> terms;
    skip();
    if (at_end()) fail("empty polynomial");
    bool first = true;
    while (!at_end()) {
      GaussianRational sign(1);
      if (peek() == '+' || peek() == '-') {
        if (peek() == '-') sign = GaussianRational(-1);
        ++pos_;
        skip();
      } else if (!first) {
        fail("expected '+' or '-'");
      }
      first = false;
      auto [e, c] = term();
      terms.emplace_back(e, sign * c);
      skip();
    }
    const int d = terms.front().first[0] + terms.front().first[1] + terms.front().first[2];
    HomogeneousPolynomial p(d);
    for (const auto& [e, c] : terms) {
      if (e[0] + e[1] + e[2] != d) throw Error(ErrorCode::InvalidArgument, "terms of different degree");
      p += HomogeneousPolynomial::monomial(e, c);
    }
    return p;
  }

 private:
  std::pair<Exponent, GaussianRational> term() {
    Exponent e{0, 0, 0};
    GaussianRational c(1);
    while (true) {
      skip();
      const char ch = peek();
      if (std::isdigit(static_cast<unsigned char>(ch))) {
        mpz_class num(integer());
        mpz_class den(1);
        skip();
        if (peek() == '/') {
          ++pos_;
          skip();
          den = mpz_class(integer());
          if (den == 0) fail("zero denominator");
        }
        c *= GaussianRational(mpq_class(num, den));
      } else if (ch == 'i') {
        ++pos_;
        c *= GaussianRational::i();
      } else if (ch == 'x' || ch == 'y' || ch == 'z') {
        ++pos_;
        int k = 1;
        skip();
        if (peek() == '^') {
          ++pos_;
          skip();
          k = std::stoi(integer());
        }
        e[ch - 'x'] += k;
      } else {
        fail("expected a number, 'i' or a variable");
      }
      skip();
      if (peek() != '*') break;
      ++pos_;
    }
    return {e, c};
  }

  std::string integer() {
    const std::size_t start = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected digits");
    return std::string(s_.substr(start, pos_ - start));
  }

  void skip() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool at_end() const { return pos_ >= s_.size(); }
  char peek() const { return at_end() ? '\0' : s_[pos_]; }
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(1, pos_ + 1, what); }

  std::string_view s_;
  std::size_t pos_ = 0;
};

PolyTriple triple(std::string_view a, std::string_view b, std::string_view c) {
  return {parse_polynomial(a), parse_polynomial(b), parse_polynomial(c)};
}

}  // namespace

HomogeneousPolynomial parse_polynomial(std::string_view text) { return PolyParser(text).parse(); }

namespace corpus {

RationalSurfaceMap cremona() {
  return RationalSurfaceMap("cremona", triple("y*z", "x*z", "x*y"), triple("y*z", "x*z", "x*y"));
}

RationalSurfaceMap henon(const GaussianRational& c, const GaussianRational& delta) {
  const auto x = HomogeneousPolynomial::variable(0);
  const auto y = HomogeneousPolynomial::variable(1);
  const auto z = HomogeneousPolynomial::variable(2);
  PolyTriple fwd{y * z, y * y + c * (z * z) - delta * (x * z), z * z};
  PolyTriple inv{x * x + c * (z * z) - y * z, delta * (x * z), delta * (z * z)};
  return RationalSurfaceMap("henon", fwd, inv);
}

RationalSurfaceMap linear() {
  return RationalSurfaceMap("linear", triple("x + 2*y - z", "y + 3*z", "2*x - y + z"),
                            triple("4*x - y + 7*z", "6*x + 3*y - 3*z", "-2*x + 5*y + z"));
}

RationalSurfaceMap lsigma() {
  return RationalSurfaceMap(
      "lsigma", triple("y*z + 2*x*z - x*y", "x*z + 3*x*y", "2*y*z - x*z + x*y"),
      triple("-12*x^2 + 24*x*y + 12*x*z + 15*y^2 - 12*y*z - 3*z^2",
             "-8*x^2 + 22*x*y - 10*x*z - 5*y^2 + 34*y*z + 7*z^2",
             "24*x^2 + 6*x*y + 30*x*z - 3*y^2 + 24*y*z - 21*z^2"));
}

RationalSurfaceMap diagonal() {
  return RationalSurfaceMap("diagonal", triple("4*x", "y", "2*z"), triple("x", "4*y", "2*z"));
}

RationalSurfaceMap unitary() {
  return RationalSurfaceMap("unitary", triple("y", "i*z", "x"), triple("z", "x", "-i*y"));
}

}  // namespace corpus
}  // namespace bimero
