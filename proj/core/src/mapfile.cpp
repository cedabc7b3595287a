#include "bimero/mapfile.hpp"

#include <fmt/format.h>

#include <fstream>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

#include "bimero/error.hpp"
#include "json.hpp"

namespace bimero {

namespace {

using nlohmann::json;

// Input iterator over a buffer that publishes how far the lexer has read.
struct CountingIterator {
  using iterator_category = std::input_iterator_tag;
  using value_type = char;
  using difference_type = std::ptrdiff_t;
  using pointer = const char*;
  using reference = const char&;

  const char* cur = nullptr;
  std::size_t* consumed = nullptr;

  reference operator*() const { return *cur; }
  CountingIterator& operator++() {
    ++cur;
    ++*consumed;
    return *this;
  }
  CountingIterator operator++(int) {
    auto t = *this;
    ++*this;
    return t;
  }
  bool operator==(const CountingIterator& o) const { return cur == o.cur; }
  bool operator!=(const CountingIterator& o) const { return cur != o.cur; }
};

// Records the byte offset of every value by JSON pointer.
class PositionIndex : public nlohmann::json_sax<json> {
 public:
  PositionIndex(std::string_view text, const std::size_t* consumed) : text_(text), consumed_(consumed) {}

  std::map<std::string, std::size_t> offsets;

  bool null() override { return scalar(*consumed_ - 4); }
  bool boolean(bool v) override { return scalar(*consumed_ - (v ? 4 : 5)); }
  bool number_integer(number_integer_t) override { return scalar(number_start()); }
  bool number_unsigned(number_unsigned_t) override { return scalar(number_start()); }
  bool number_float(number_float_t, const string_t&) override { return scalar(number_start()); }
  bool string(string_t&) override { return scalar(string_start()); }
  bool binary(binary_t&) override { return scalar(*consumed_); }
  bool start_object(std::size_t) override { return open(false); }
  bool key(string_t& k) override {
    frames_.back().key = k;
    return true;
  }
  bool end_object() override { return close(); }
  bool start_array(std::size_t) override { return open(true); }
  bool end_array() override { return close(); }
  bool parse_error(std::size_t position, const std::string& last_token,
                   const nlohmann::detail::exception& e) override {
    const std::size_t read = position > 0 ? position - 1 : 0;
    error_offset = read >= last_token.size() ? read + 1 - last_token.size() : 0;
    error_message = e.what();
    return false;
  }

  std::optional<std::size_t> error_offset;
  std::string error_message;

 private:
  struct Frame {
    bool array;
    std::size_t index = 0;
    std::string key;
  };

  std::string pointer() const {
    std::string p;
    for (const auto& f : frames_) p += "/" + (f.array ? std::to_string(f.index) : f.key);
    return p;
  }
  void advance() {
    if (!frames_.empty() && frames_.back().array) ++frames_.back().index;
  }
  bool scalar(std::size_t at) {
    offsets.emplace(pointer(), at);
    advance();
    return true;
  }
  bool open(bool array) {
    offsets.emplace(pointer(), *consumed_ - 1);
    frames_.push_back(Frame{array, 0, {}});
    return true;
  }
  bool close() {
    frames_.pop_back();
    advance();
    return true;
  }
  // numbers are read one character past their end
  std::size_t number_start() const {
    std::size_t p = *consumed_ - 1;
    while (p > 0 && std::string_view("0123456789+-.eE").find(text_[p - 1]) != std::string_view::npos) --p;
    return p;
  }
  std::size_t string_start() const {
    std::size_t p = *consumed_ - 1;
    while (p > 0) {
      --p;
      if (text_[p] == '"' && (p == 0 || text_[p - 1] != '\\')) break;
    }
    return p;
  }

  std::string_view text_;
  const std::size_t* consumed_;
  std::vector<Frame> frames_;
};

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  json parse() {
    std::size_t consumed = 0;
    CountingIterator first{text_.data(), &consumed};
    CountingIterator last{text_.data() + text_.size(), &consumed};
    PositionIndex index(text_, &consumed);
    if (!json::sax_parse(first, last, &index)) fail_at(index.error_offset.value_or(0), strip(index.error_message));
    offsets_ = std::move(index.offsets);
    return json::parse(text_.begin(), text_.end());
  }

  [[noreturn]] void fail(const std::string& pointer, const std::string& message) const {
    std::string p = pointer;
    while (!offsets_.count(p) && !p.empty()) p = p.substr(0, p.rfind('/'));
    fail_at(offsets_.count(p) ? offsets_.at(p) : 0, message + " (at " + (pointer.empty() ? "/" : pointer) + ")");
  }

 private:
  [[noreturn]] void fail_at(std::size_t byte, const std::string& message) const {
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i < byte && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError(line, column, message);
  }
  static std::string strip(const std::string& what) {
    const auto pos = what.find("]: ");
    return pos == std::string::npos ? what : what.substr(pos + 3);
  }

  std::string_view text_;
  std::map<std::string, std::size_t> offsets_;
};

mpz_class integer(const Reader& r, const json& v, const std::string& at) {
  if (v.is_number_integer()) {
    return v.is_number_unsigned() ? mpz_class(std::to_string(v.get<unsigned long long>()))
                                  : mpz_class(std::to_string(v.get<long long>()));
  }
  if (v.is_string()) {
    const auto& s = v.get_ref<const std::string&>();
    const std::size_t digits = s.find_first_not_of("+-") == 1 ? 1 : 0;
    if (s.size() > digits && s.find_first_not_of("0123456789", digits) == std::string::npos) return mpz_class(s);
  }
  r.fail(at, "expected an integer");
}

long small_integer(const Reader& r, const json& v, const std::string& at) {
  if (!v.is_number_integer()) r.fail(at, "expected an integer");
  return v.get<long>();
}

HomogeneousPolynomial polynomial(const Reader& r, const json& terms, const std::string& at, int& degree) {
  if (!terms.is_array()) r.fail(at, "polynomial must be a list of terms");
  std::vector<std::pair<Exponent, GaussianRational>> parsed;
  for (std::size_t t = 0; t < terms.size(); ++t) {
    const std::string tat = at + "/" + std::to_string(t);
    const json& term = terms[t];
    if (!term.is_array() || term.size() != 7) r.fail(tat, "term must be [i, j, k, re_num, re_den, im_num, im_den]");
    Exponent e{};
    for (int k = 0; k < 3; ++k) {
      const long v = small_integer(r, term[k], tat + "/" + std::to_string(k));
      if (v < 0 || v > 64) r.fail(tat + "/" + std::to_string(k), "exponent out of range");
      e[k] = static_cast<int>(v);
    }
    const int d = e[0] + e[1] + e[2];
    if (degree < 0) degree = d;
    if (d != degree) r.fail(tat, fmt::format("exponents sum to {} but the degree is {}", d, degree));
    mpz_class parts[4];
    for (int k = 0; k < 4; ++k) parts[k] = integer(r, term[3 + k], tat + "/" + std::to_string(3 + k));
    if (parts[1] == 0) r.fail(tat + "/4", "zero denominator");
    if (parts[3] == 0) r.fail(tat + "/6", "zero denominator");
    mpq_class re(parts[0], parts[1]), im(parts[2], parts[3]);
    re.canonicalize();
    im.canonicalize();
    parsed.emplace_back(e, GaussianRational(re, im));
  }
  if (degree < 0) r.fail(at, "polynomial has no terms");
  HomogeneousPolynomial p(degree);
  for (const auto& [e, c] : parsed) p.add_term(e, c);
  return p;
}

PolyTriple triple(const Reader& r, const json& v, const std::string& at, int degree) {
  if (!v.is_array() || v.size() != 3) r.fail(at, "expected three polynomials");
  PolyTriple out;
  for (int i = 0; i < 3; ++i) {
    int d = degree;
    out[i] = polynomial(r, v[i], at + "/" + std::to_string(i), d);
    degree = d;
  }
  return out;
}

IntMatrix int_matrix(const Reader& r, const json& v, const std::string& at, int rank) {
  if (!v.is_array() || static_cast<int>(v.size()) != rank) r.fail(at, fmt::format("expected {} rows", rank));
  IntMatrix m(rank, rank);
  for (int i = 0; i < rank; ++i) {
    const std::string rat = at + "/" + std::to_string(i);
    if (!v[i].is_array() || static_cast<int>(v[i].size()) != rank) r.fail(rat, fmt::format("expected {} entries", rank));
    for (int j = 0; j < rank; ++j) m(i, j) = small_integer(r, v[i][j], rat + "/" + std::to_string(j));
  }
  return m;
}

IntVector int_vector(const Reader& r, const json& v, const std::string& at, int rank) {
  if (!v.is_array() || static_cast<int>(v.size()) != rank) r.fail(at, fmt::format("expected {} entries", rank));
  IntVector out(rank);
  for (int i = 0; i < rank; ++i) out(i) = small_integer(r, v[i], at + "/" + std::to_string(i));
  return out;
}

const json& field(const Reader& r, const json& obj, const char* name) {
  if (!obj.contains(name)) r.fail("", std::string("missing field '") + name + "'");
  return obj.at(name);
}

CohomologyLattice lattice(const Reader& r, const json& v) {
  if (!v.is_object()) r.fail("/lattice", "lattice must be an object");
  CohomologyLattice l;
  const long rank = small_integer(r, field(r, v, "rank"), "/lattice/rank");
  if (rank < 1 || rank > 64) r.fail("/lattice/rank", "rank out of range");
  l.rank = static_cast<int>(rank);
  l.Q = int_matrix(r, field(r, v, "Q"), "/lattice/Q", l.rank);
  l.Mf = int_matrix(r, field(r, v, "Mf"), "/lattice/Mf", l.rank);
  l.Mfinv = int_matrix(r, field(r, v, "Mfinv"), "/lattice/Mfinv", l.rank);
  const json& curves = field(r, v, "curve_classes");
  if (!curves.is_array()) r.fail("/lattice/curve_classes", "expected a list of classes");
  for (std::size_t i = 0; i < curves.size(); ++i) {
    l.curve_classes.push_back(int_vector(r, curves[i], "/lattice/curve_classes/" + std::to_string(i), l.rank));
  }
  l.beta_class = int_vector(r, field(r, v, "beta_class"), "/lattice/beta_class", l.rank);
  if (auto bad = l.violation()) r.fail("/lattice", "invalid lattice: " + *bad);
  return l;
}

std::string integer_text(const mpz_class& v) {
  return v.fits_slong_p() ? v.get_str() : "\"" + v.get_str() + "\"";
}

std::string triple_text(const PolyTriple& t) {
  std::string out = "[\n";
  for (int i = 0; i < 3; ++i) {
    out += "    [\n";
    std::size_t n = 0;
    for (const auto& [e, c] : t[i].terms()) {
      out += fmt::format("      [{}, {}, {}, {}, {}, {}, {}]{}\n", e[0], e[1], e[2], integer_text(c.re().get_num()),
                         integer_text(c.re().get_den()), integer_text(c.im().get_num()),
                         integer_text(c.im().get_den()), ++n < t[i].size() ? "," : "");
    }
    out += i < 2 ? "    ],\n" : "    ]\n";
  }
  return out + "  ]";
}

std::string row_text(const IntVector& v) {
  std::string out = "[";
  for (int i = 0; i < v.size(); ++i) out += (i ? ", " : "") + std::to_string(v(i));
  return out + "]";
}

std::string matrix_text(const IntMatrix& m) {
  std::string out = "[";
  for (int i = 0; i < m.rows(); ++i) out += (i ? ", " : "") + row_text(m.row(i).transpose());
  return out + "]";
}

}  // namespace

RationalSurfaceMap MapFile::to_map() const { return RationalSurfaceMap(name, forward, inverse); }

MapFile parse_map_file(std::string_view text) {
  Reader r(text);
  const json doc = r.parse();
  if (!doc.is_object()) r.fail("", "top level must be an object");
  MapFile file;
  const json& name = field(r, doc, "name");
  if (!name.is_string()) r.fail("/name", "name must be a string");
  file.name = name.get<std::string>();
  const long degree = small_integer(r, field(r, doc, "degree"), "/degree");
  if (degree < 1 || degree > 64) r.fail("/degree", "degree out of range");
  file.degree = static_cast<int>(degree);
  file.forward = triple(r, field(r, doc, "forward"), "/forward", file.degree);
  if (doc.contains("inverse") && !doc.at("inverse").is_null()) {
    file.inverse = triple(r, doc.at("inverse"), "/inverse", -1);
  }
  if (doc.contains("lattice") && !doc.at("lattice").is_null()) file.lattice = lattice(r, doc.at("lattice"));
  try {
    (void)file.to_map();
  } catch (const Error& e) {
    r.fail("/forward", e.what());
  }
  return file;
}

MapFile load_map_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read map file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_map_file(buf.str());
}

MapFile to_map_file(const RationalSurfaceMap& f, std::optional<CohomologyLattice> lattice) {
  MapFile file;
  file.name = f.name();
  file.degree = f.degree();
  file.forward = f.forward();
  file.inverse = f.inverse();
  file.lattice = std::move(lattice);
  return file;
}

std::string serialize_map_file(const MapFile& file) {
  std::string out = "{\n";
  out += "  \"name\": " + json(file.name).dump() + ",\n";
  out += fmt::format("  \"degree\": {},\n", file.degree);
  out += "  \"forward\": " + triple_text(file.forward);
  if (file.inverse) out += ",\n  \"inverse\": " + triple_text(*file.inverse);
  if (file.lattice) {
    const auto& l = *file.lattice;
    out += ",\n  \"lattice\": {\n";
    out += fmt::format("    \"rank\": {},\n", l.rank);
    out += "    \"Q\": " + matrix_text(l.Q) + ",\n";
    out += "    \"Mf\": " + matrix_text(l.Mf) + ",\n";
    out += "    \"Mfinv\": " + matrix_text(l.Mfinv) + ",\n";
    out += "    \"curve_classes\": [";
    for (std::size_t i = 0; i < l.curve_classes.size(); ++i) out += (i ? ", " : "") + row_text(l.curve_classes[i]);
    out += "],\n";
    out += "    \"beta_class\": " + row_text(l.beta_class) + "\n  }";
  }
  return out + "\n}\n";
}

}  // namespace bimero
