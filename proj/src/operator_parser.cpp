#include <cctype>
#include <charconv>
#include <cmath>
#include <string>

#include "supersel/errors.hpp"
#include "supersel/format.hpp"
#include "supersel/operator_algebra.hpp"

namespace supersel {

namespace {

// Recursive-descent cursor over the operator grammar. Offsets in errors are
// byte positions into the original text.
class Cursor {
 public:
  explicit Cursor(std::string_view text) : text_(text) {}

  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  std::size_t pos() const { return pos_; }
  void advance() { ++pos_; }

  bool consume(char c) {
    if (!at_end() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw SyntaxError(message, pos_);
  }

  bool starts_number() const {
    if (at_end()) return false;
    const char c = text_[pos_];
    return std::isdigit(static_cast<unsigned char>(c)) || c == '.';
  }

  double parse_decimal() {
    if (!starts_number()) fail("expected a number");
    double value = 0.0;
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec == std::errc::result_out_of_range) fail("number out of range");
    if (ec != std::errc() || ptr == begin) fail("expected a number");
    pos_ += static_cast<std::size_t>(ptr - begin);
    return value;
  }

  std::size_t parse_positive_integer(const std::string& what) {
    skip_ws();
    if (at_end() || !std::isdigit(static_cast<unsigned char>(peek()))) {
      fail("expected " + what);
    }
    const std::size_t digits_at = pos_;
    unsigned long long value = 0;
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc()) {
      throw SyntaxError(what + " out of range", digits_at);
    }
    pos_ += static_cast<std::size_t>(ptr - begin);
    return static_cast<std::size_t>(value);
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

// coefficient := decimal | decimal 'i' | '(' decimal ('+'|'-') decimal 'i' ')'
Complex parse_coefficient(Cursor& cur) {
  if (cur.consume('(')) {
    cur.skip_ws();
    const bool negative_real = cur.consume('-');
    cur.skip_ws();
    double real = cur.parse_decimal();
    if (negative_real) real = -real;
    cur.skip_ws();
    double sign = 0.0;
    if (cur.consume('+')) {
      sign = 1.0;
    } else if (cur.consume('-')) {
      sign = -1.0;
    } else {
      cur.fail("expected '+' or '-' between real and imaginary parts");
    }
    cur.skip_ws();
    const double imag = sign * cur.parse_decimal();
    cur.skip_ws();
    if (!cur.consume('i')) cur.fail("expected 'i' after the imaginary part");
    cur.skip_ws();
    if (!cur.consume(')')) cur.fail("expected ')'");
    return Complex{real, imag};
  }

  const double value = cur.parse_decimal();
  if (cur.consume('i')) return Complex{0.0, value};
  return Complex{value, 0.0};
}

// factor := ('x'|'p') index ('^' exponent)?
void parse_factor(Cursor& cur, OperatorPolynomial& term) {
  const bool is_position = cur.peek() == 'x';
  cur.advance();
  const std::size_t index_at = cur.pos();
  const std::size_t site = cur.parse_positive_integer("a site index");
  if (site == 0) {
    throw SyntaxError("site index must be at least 1", index_at);
  }

  int exponent = 1;
  cur.skip_ws();
  if (cur.consume('^')) {
    const std::size_t exponent_at = cur.pos();
    const std::size_t value = cur.parse_positive_integer("an exponent");
    if (value > static_cast<std::size_t>(kMaxExponent)) {
      throw SyntaxError("exponent exceeds the cap of 16", exponent_at);
    }
    exponent = static_cast<int>(value);
  }

  term = is_position ? term.times_position(site, exponent)
                     : term.times_momentum(site, exponent);
}

// term := coefficient? ('*'? factor)*
// Factors multiply on the right and are normal-ordered as they arrive.
OperatorPolynomial parse_term(Cursor& cur) {
  cur.skip_ws();
  Complex coefficient{1.0, 0.0};
  bool any = false;
  if (cur.starts_number() || (!cur.at_end() && cur.peek() == '(')) {
    coefficient = parse_coefficient(cur);
    any = true;
  }

  OperatorPolynomial term = OperatorPolynomial::constant(coefficient);
  while (true) {
    cur.skip_ws();
    const bool explicit_product = cur.consume('*');
    cur.skip_ws();
    if (!cur.at_end() && (cur.peek() == 'x' || cur.peek() == 'p')) {
      parse_factor(cur, term);
      any = true;
    } else if (explicit_product) {
      cur.fail("expected a factor after '*'");
    } else {
      break;
    }
  }
  if (!any) cur.fail("expected a term");
  return term;
}

}  // namespace

OperatorPolynomial parse_operator(std::string_view text) {
  Cursor cur(text);

  cur.skip_ws();
  double sign = 1.0;
  if (cur.consume('-')) {
    sign = -1.0;
  } else {
    cur.consume('+');
  }
  OperatorPolynomial result = parse_term(cur).scaled(Complex{sign, 0.0});

  while (true) {
    cur.skip_ws();
    if (cur.at_end()) break;
    if (cur.consume('-')) {
      result = result - parse_term(cur);
    } else if (cur.consume('+')) {
      result = result + parse_term(cur);
    } else {
      cur.fail("expected '+', '-', or end of input");
    }
  }
  return result;
}

namespace {

std::string format_factors(const OperatorTerm& term) {
  std::string out;
  for (const SiteFactor& f : term.factors) {
    if (f.x_exp > 0) {
      if (!out.empty()) out += '*';
      out += 'x';
      out += std::to_string(f.site);
      if (f.x_exp > 1) {
        out += '^';
        out += std::to_string(f.x_exp);
      }
    }
    if (f.p_exp > 0) {
      if (!out.empty()) out += '*';
      out += 'p';
      out += std::to_string(f.site);
      if (f.p_exp > 1) {
        out += '^';
        out += std::to_string(f.p_exp);
      }
    }
  }
  return out;
}

}  // namespace

std::string format_operator(const OperatorPolynomial& poly) {
  if (poly.is_zero()) return "0";

  std::string out;
  for (const OperatorTerm& term : poly.terms()) {
    const Complex c = term.coefficient;
    bool negative = false;
    std::string coeff;
    if (c.imag() == 0.0) {
      negative = c.real() < 0.0;
      const double mag = std::abs(c.real());
      const std::string factors = format_factors(term);
      if (mag != 1.0 || factors.empty()) coeff = format_double(mag);
    } else if (c.real() == 0.0) {
      negative = c.imag() < 0.0;
      coeff = format_double(std::abs(c.imag())) + "i";
    } else {
      // Mixed complex coefficients render with the real part's sign pulled
      // out, so the parenthesized form never needs a signed real part.
      negative = c.real() < 0.0;
      const Complex inner = negative ? Complex{-c.real(), -c.imag()} : c;
      coeff = "(" + format_double(inner.real()) +
              (inner.imag() < 0.0 ? "-" : "+") +
              format_double(std::abs(inner.imag())) + "i)";
    }

    const std::string factors = format_factors(term);
    std::string body = coeff;
    if (!factors.empty()) {
      if (!body.empty()) body += '*';
      body += factors;
    }

    if (out.empty()) {
      if (negative) out += '-';
    } else {
      out += negative ? " - " : " + ";
    }
    out += body;
  }
  return out;
}

}  // namespace supersel
