#include "qfilt/parser.hpp"

#include <cctype>
#include <cstdlib>

#include "qfilt/errors.hpp"

namespace qfilt {

namespace {

struct Token {
  enum Kind { Number, Ident, Op, End } kind = End;
  double value = 0.0;      // Number
  std::string text;        // Ident
  char op = 0;             // Op: one of + - * / ^ ( )
  size_t pos = 0;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) { advance(); }

  const Token& peek() const { return cur_; }

  Token take() {
    Token t = cur_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (i_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[i_]))) ++i_;
    cur_ = Token{};
    cur_.pos = i_;
    if (i_ >= src_.size()) {
      cur_.kind = Token::End;
      return;
    }
    const char c = src_[i_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      char* end = nullptr;
      cur_.kind = Token::Number;
      cur_.value = std::strtod(src_.c_str() + i_, &end);
      if (end == src_.c_str() + i_) throw ParseError("malformed number", i_);
      i_ = static_cast<size_t>(end - src_.c_str());
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i_;
      while (j < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[j])) || src_[j] == '_'))
        ++j;
      cur_.kind = Token::Ident;
      cur_.text = src_.substr(i_, j - i_);
      i_ = j;
      return;
    }
    if (c == '+' || c == '-' || c == '*' || c == '/' || c == '^' || c == '(' || c == ')') {
      cur_.kind = Token::Op;
      cur_.op = c;
      ++i_;
      return;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", i_);
  }

  const std::string& src_;
  size_t i_ = 0;
  Token cur_;
};

class Parser {
 public:
  Parser(const std::string& src, const SymbolTable& symbols)
      : lex_(src), symbols_(symbols) {}

  RationalFunction run() {
    RationalFunction r = expr();
    const Token& t = lex_.peek();
    if (t.kind != Token::End) throw ParseError("unexpected trailing input", t.pos);
    return r;
  }

 private:
  bool at_op(char c) const {
    return lex_.peek().kind == Token::Op && lex_.peek().op == c;
  }

  RationalFunction expr() {
    RationalFunction acc = term();
    while (at_op('+') || at_op('-')) {
      const char op = lex_.take().op;
      RationalFunction rhs = term();
      acc = (op == '+') ? acc + rhs : acc - rhs;
    }
    return acc;
  }

  RationalFunction term() {
    RationalFunction acc = factor();
    while (at_op('*') || at_op('/')) {
      const Token t = lex_.take();
      RationalFunction rhs = factor();
      if (t.op == '*') {
        acc = acc * rhs;
      } else {
        if (rhs.is_zero())
          throw ParseError("zero denominator polynomial", t.pos);
        acc = acc / rhs;
      }
    }
    return acc;
  }

  RationalFunction factor() {
    bool negate = false;
    while (at_op('+') || at_op('-')) {
      if (lex_.take().op == '-') negate = !negate;
    }
    RationalFunction base = power();
    return negate ? -base : base;
  }

  RationalFunction power() {
    RationalFunction base = atom();
    if (at_op('^')) {
      lex_.take();
      bool neg = false;
      while (at_op('+') || at_op('-')) {
        if (lex_.take().op == '-') neg = !neg;
      }
      const Token t = lex_.take();
      if (t.kind != Token::Number) throw ParseError("expected integer exponent", t.pos);
      const double v = t.value;
      const int e = static_cast<int>(v);
      if (static_cast<double>(e) != v)
        throw ParseError("exponent must be an integer", t.pos);
      base = base.pow(neg ? -e : e);
    }
    return base;
  }

  RationalFunction atom() {
    const Token t = lex_.take();
    switch (t.kind) {
      case Token::Number:
        return RationalFunction::constant(t.value);
      case Token::Ident: {
        if (t.text == "s") return RationalFunction::variable();
        if (t.text == "i" || t.text == "j")
          return RationalFunction::constant(cdouble(0.0, 1.0));
        auto it = symbols_.find(t.text);
        if (it == symbols_.end()) throw UnresolvedSymbolError(t.text, t.pos);
        return RationalFunction::constant(it->second);
      }
      case Token::Op:
        if (t.op == '(') {
          RationalFunction inner = expr();
          if (!at_op(')')) throw ParseError("expected ')'", lex_.peek().pos);
          lex_.take();
          return inner;
        }
        throw ParseError(std::string("unexpected operator '") + t.op + "'", t.pos);
      case Token::End:
        throw ParseError("unexpected end of expression", t.pos);
    }
    throw ParseError("unreachable", t.pos);
  }

  Lexer lex_;
  const SymbolTable& symbols_;
};

}  // namespace

RationalFunction parse_rational(const std::string& text, const SymbolTable& symbols,
                                bool reduce) {
  Parser p(text, symbols);
  RationalFunction r = p.run();
  if (poly::is_zero(r.den)) throw std::domain_error("zero denominator polynomial");
  return reduce ? r.reduce() : r;
}

}  // namespace qfilt
