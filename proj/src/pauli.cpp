#include "qecm/pauli.hpp"

#include <bit>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <optional>

namespace qecm::pauli {

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expr parse_expr() {
    Expr e;
    skip_ws();
    double sign = 1.0;
    if (peek() == '-' && !starts_number(pos_)) {
      sign = -1.0;
      ++pos_;
    }
    e.terms.push_back(parse_term(sign));
    for (;;) {
      skip_ws();
      if (at_end()) break;
      const char op = peek();
      if (op != '+' && op != '-') throw ParseError(pos_, std::string("expected '+' or '-', got '") + op + "'");
      ++pos_;
      e.terms.push_back(parse_term(op == '-' ? -1.0 : 1.0));
    }
    const std::size_t n = e.terms.front().letters.size();
    for (const auto& t : e.terms) {
      if (t.letters.size() != n) {
        throw Error(ErrorKind::MixedArity, "term '" + t.letters + "' has " + std::to_string(t.letters.size()) +
                                               " letters, expected " + std::to_string(n));
      }
    }
    return e;
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  static bool is_letter(char c) { return c == 'I' || c == 'X' || c == 'Y' || c == 'Z'; }

  bool starts_number(std::size_t p) const {
    if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
    return p < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[p])) || text_[p] == '.');
  }

  std::optional<double> read_number() {
    if (!starts_number(pos_)) return std::nullopt;
    const char* first = text_.data() + pos_;
    const char* last = text_.data() + text_.size();
    if (*first == '+') ++first;  // from_chars rejects a leading '+'
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{}) throw ParseError(pos_, "malformed number");
    pos_ = static_cast<std::size_t>(ptr - text_.data());
    return value;
  }

  // Tries to read `coeff '*'`; restores position and returns nullopt if absent.
  std::optional<cplx> try_coefficient() {
    const std::size_t start = pos_;
    std::optional<cplx> c;
    if (peek() == '(') {
      ++pos_;
      skip_ws();
      c = read_complex();
      skip_ws();
      if (!c || peek() != ')') throw ParseError(pos_, "expected ')' after complex coefficient");
      ++pos_;
    } else {
      c = read_complex();
    }
    if (!c) {
      pos_ = start;
      return std::nullopt;
    }
    skip_ws();
    if (peek() != '*') throw ParseError(pos_, "expected '*' after coefficient");
    ++pos_;
    return c;
  }

  std::optional<cplx> read_complex() {
    auto first = read_number();
    if (!first) {
      if (peek() == 'i') {  // bare "i"
        ++pos_;
        return cplx{0.0, 1.0};
      }
      return std::nullopt;
    }
    if (peek() == 'i') {
      ++pos_;
      return cplx{0.0, *first};
    }
    const std::size_t save = pos_;
    if ((peek() == '+' || peek() == '-') && starts_number(pos_)) {
      auto second = read_number();
      if (second && peek() == 'i') {
        ++pos_;
        return cplx{*first, *second};
      }
      pos_ = save;
    }
    return cplx{*first, 0.0};
  }

  Term parse_term(double sign) {
    skip_ws();
    Term t;
    if (auto c = try_coefficient()) t.coefficient = *c;
    t.coefficient *= sign;
    skip_ws();
    const std::size_t start = pos_;
    while (!at_end() && is_letter(peek())) t.letters.push_back(text_[pos_++]);
    if (t.letters.empty()) {
      if (at_end()) throw ParseError(pos_, "unexpected end of input, expected Pauli letters");
      throw ParseError(start, std::string("expected Pauli letters, got '") + peek() + "'");
    }
    return t;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

Expr parse(std::string_view text) { return Parser(text).parse_expr(); }

std::string render(const Expr& e) {
  std::string out;
  for (std::size_t k = 0; k < e.terms.size(); ++k) {
    const auto& t = e.terms[k];
    cplx c = t.coefficient;
    if (k > 0) {
      if (c.imag() == 0.0 && std::signbit(c.real())) {
        out += " - ";
        c = -c;
      } else {
        out += " + ";
      }
    }
    if (c.imag() == 0.0) {
      out += format_real(c.real());
    } else {
      out += "(" + format_real(c.real()) + (std::signbit(c.imag()) ? "-" : "+") +
             format_real(std::abs(c.imag())) + "i)";
    }
    out += "*" + t.letters;
  }
  return out;
}

Matrix single(char letter) {
  const cplx i{0.0, 1.0};
  switch (letter) {
    case 'I': return Matrix(2, {1.0, 0.0, 0.0, 1.0});
    case 'X': return Matrix(2, {0.0, 1.0, 1.0, 0.0});
    case 'Y': return Matrix(2, {0.0, -i, i, 0.0});
    case 'Z': return Matrix(2, {1.0, 0.0, 0.0, -1.0});
    default: throw Error(ErrorKind::InvalidConfig, std::string("not a Pauli letter: ") + letter);
  }
}

std::string on_site(char letter, std::size_t qubit, std::size_t num_qubits) {
  if (qubit < 1 || qubit > num_qubits) {
    throw Error(ErrorKind::BadIndex,
                "qubit " + std::to_string(qubit) + " out of range 1.." + std::to_string(num_qubits));
  }
  std::string s(num_qubits, 'I');
  s[qubit - 1] = letter;
  return s;
}

namespace {

constexpr std::size_t kMaxQubits = 10;

// Adds coeff * P into m, where P is the Pauli string. P is a signed
// permutation: column = row ^ xmask, phase from the Y/Z letters.
void accumulate(Matrix& m, std::string_view letters, cplx coeff) {
  const std::size_t n = letters.size();
  std::size_t xmask = 0, zmask = 0;
  int ycount = 0;
  for (std::size_t q = 0; q < n; ++q) {
    const std::size_t bit = std::size_t{1} << (n - 1 - q);
    switch (letters[q]) {
      case 'I': break;
      case 'X': xmask |= bit; break;
      case 'Z': zmask |= bit; break;
      case 'Y': xmask |= bit; zmask |= bit; ++ycount; break;
      default: throw Error(ErrorKind::InvalidConfig, std::string("not a Pauli letter: ") + letters[q]);
    }
  }
  // Y = i X Z, so each Y contributes a factor i; sign from Z acting on the column index.
  static const cplx ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const cplx base = coeff * ipow[ycount % 4];
  for (std::size_t row = 0; row < m.dim(); ++row) {
    const std::size_t col = row ^ xmask;
    const bool negative = std::popcount(col & zmask) & 1;
    m(row, col) += negative ? -base : base;
  }
}

}  // namespace

Matrix materialize(const Expr& e) {
  if (e.terms.empty()) throw Error(ErrorKind::InvalidConfig, "empty Pauli expression");
  const std::size_t n = e.num_qubits();
  if (n > kMaxQubits) {
    throw Error(ErrorKind::DimensionOverflow, std::to_string(n) + " qubits exceeds " + std::to_string(kMaxQubits));
  }
  Matrix m(std::size_t{1} << n);
  for (const auto& t : e.terms) {
    if (t.letters.size() != n) throw Error(ErrorKind::MixedArity, "term '" + t.letters + "'");
    accumulate(m, t.letters, t.coefficient);
  }
  return m;
}

Matrix materialize(std::string_view letters) {
  return materialize(Expr{{Term{cplx{1.0, 0.0}, std::string(letters)}}});
}

}  // namespace qecm::pauli
