#include "limitcone/expr.hpp"

#include <cctype>
#include <string>

namespace limitcone {

namespace {

class Parser {
 public:
  Parser(std::string_view text, Precision prec) : text_(text), prec_(prec) {}

  Scalar parse() {
    Scalar v = sum();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::Config, "expression \"" + std::string(text_) + "\": " + what);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Scalar sum() {
    Scalar v = product();
    for (;;) {
      if (accept('+')) v += product();
      else if (accept('-')) v -= product();
      else return v;
    }
  }

  Scalar product() {
    Scalar v = unary();
    for (;;) {
      if (accept('*')) {
        v *= unary();
      } else if (accept('/')) {
        Scalar d = unary();
        if (d.is_zero()) fail("division by zero");
        v /= d;
      } else {
        return v;
      }
    }
  }

  Scalar unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return primary();
  }

  Scalar primary() {
    skip_space();
    if (accept('(')) {
      Scalar v = sum();
      if (!accept(')')) fail("missing ')'");
      return v;
    }
    if (pos_ >= text_.size()) fail("unexpected end");
    char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return call();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  Scalar number() {
    std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    };
    digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      digits();
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t mark = pos_++;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) digits();
      else pos_ = mark;
    }
    return Scalar::parse(text_.substr(start, pos_ - start), prec_);
  }

  Scalar call() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    std::string name(text_.substr(start, pos_ - start));
    if (name == "pi") return pi(prec_);
    if (!accept('(')) fail("expected '(' after " + name);
    Scalar arg = sum();
    if (!accept(')')) fail("missing ')' after argument of " + name);
    try {
      if (name == "exp") return exp(arg);
      if (name == "log") {
        if (arg.sign() <= 0) fail("log of a nonpositive number");
        return log(arg);
      }
      if (name == "sqrt") {
        if (arg.sign() < 0) fail("sqrt of a negative number");
        return sqrt(arg);
      }
      if (name == "sinh") return sinh(arg);
      if (name == "cosh") return cosh(arg);
      if (name == "arcsinh") return asinh(arg);
      if (name == "arccosh") return acosh(arg);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::Config) throw;
      fail(e.what());
    }
    fail("unknown function " + name);
  }

  std::string_view text_;
  Precision prec_;
  std::size_t pos_ = 0;
};

}  // namespace

Scalar evaluate_expression(std::string_view text, Precision prec) { return Parser(text, prec).parse(); }

}  // namespace limitcone
