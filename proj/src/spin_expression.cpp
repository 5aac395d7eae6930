// Spin-1 matrices and a small recursive-descent evaluator for polynomials in them.
//
//   expr    := ['+'|'-'] term (('+'|'-') term)*
//   term    := power (['*'] power)*
//   power   := primary ['^' integer]
//   primary := number | Sx | Sy | Sz | I | i | '(' expr ')'

#include <cctype>
#include <cstdlib>
#include <string>

#include "exposure_lab/error.hpp"
#include "exposure_lab/statespace.hpp"

namespace exposure_lab::statespace {

using qmat::Complex;
using qmat::ComplexMatrix;

namespace {

const Complex kI(0.0, 1.0);

ComplexMatrix sx_matrix() {
  ComplexMatrix m = ComplexMatrix::Zero(3, 3);
  m(1, 2) = -kI;
  m(2, 1) = kI;
  return m;
}

ComplexMatrix sy_matrix() {
  ComplexMatrix m = ComplexMatrix::Zero(3, 3);
  m(0, 2) = kI;
  m(2, 0) = -kI;
  return m;
}

ComplexMatrix sz_matrix() {
  ComplexMatrix m = ComplexMatrix::Zero(3, 3);
  m(0, 1) = -kI;
  m(1, 0) = kI;
  return m;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  ComplexMatrix parse() {
    ComplexMatrix value = expr();
    skip_space();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return value;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::InvalidArgument, "operator expression \"" + std::string(s_) +
                                                "\" at position " + std::to_string(pos_) +
                                                ": " + what);
  }

  void skip_space() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  char peek() {
    skip_space();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  bool starts_primary() {
    const char c = peek();
    return std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '(' || c == 'S' ||
           c == 's' || c == 'I' || c == 'i';
  }

  ComplexMatrix expr() {
    double sign = 1.0;
    if (peek() == '+' || peek() == '-') {
      sign = s_[pos_] == '-' ? -1.0 : 1.0;
      ++pos_;
    }
    ComplexMatrix value = sign * term();
    while (peek() == '+' || peek() == '-') {
      const bool minus = s_[pos_] == '-';
      ++pos_;
      const ComplexMatrix rhs = term();
      value = minus ? ComplexMatrix(value - rhs) : ComplexMatrix(value + rhs);
    }
    return value;
  }

  ComplexMatrix term() {
    ComplexMatrix value = power();
    for (;;) {
      if (peek() == '*') {
        ++pos_;
        value = value * power();
      } else if (starts_primary()) {
        value = value * power();
      } else {
        return value;
      }
    }
  }

  ComplexMatrix power() {
    ComplexMatrix base = primary();
    if (peek() != '^') return base;
    ++pos_;
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a non-negative integer exponent");
    const int exponent = std::stoi(std::string(s_.substr(start, pos_ - start)));
    ComplexMatrix out = ComplexMatrix::Identity(3, 3);
    for (int k = 0; k < exponent; ++k) out = out * base;
    return out;
  }

  ComplexMatrix primary() {
    const char c = peek();
    if (c == '(') {
      ++pos_;
      ComplexMatrix inner = expr();
      if (peek() != ')') fail("missing ')'");
      ++pos_;
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const std::string rest(s_.substr(pos_));
      char* end = nullptr;
      const double v = std::strtod(rest.c_str(), &end);
      if (end == rest.c_str()) fail("bad number");
      pos_ += static_cast<std::size_t>(end - rest.c_str());
      return v * ComplexMatrix::Identity(3, 3);
    }
    if (c == 'I') {
      ++pos_;
      return ComplexMatrix::Identity(3, 3);
    }
    if (c == 'i') {
      ++pos_;
      return kI * ComplexMatrix::Identity(3, 3);
    }
    if (c == 'S' || c == 's') {
      ++pos_;
      if (pos_ < s_.size() && s_[pos_] == '_') ++pos_;
      const char axis = pos_ < s_.size() ? static_cast<char>(std::tolower(s_[pos_])) : '\0';
      ++pos_;
      if (axis == 'x') return sx_matrix();
      if (axis == 'y') return sy_matrix();
      if (axis == 'z') return sz_matrix();
      --pos_;
      fail("expected Sx, Sy or Sz");
    }
    if (c == '\0') fail("unexpected end of expression");
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

qmat::HermitianOperator spin_x() { return qmat::HermitianOperator(sx_matrix()); }
qmat::HermitianOperator spin_y() { return qmat::HermitianOperator(sy_matrix()); }
qmat::HermitianOperator spin_z() { return qmat::HermitianOperator(sz_matrix()); }

qmat::HermitianOperator spin1_operator(std::string_view expression) {
  if (expression.find_first_not_of(" \t") == std::string_view::npos) {
    throw Error(ErrorKind::InvalidArgument, "empty operator expression");
  }
  return qmat::HermitianOperator(Parser(expression).parse());
}

}  // namespace exposure_lab::statespace
