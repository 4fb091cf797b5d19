#include "minforge/parse.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <utility>
#include <vector>

namespace minforge {

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
  Tok kind;
  std::size_t pos = 0;
  double number = 0.0;
  bool imaginary = false;  // literal carried a trailing 'i'
  std::string ident;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) { advance(); }

  const Token& peek() const { return tok_; }

  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    tok_ = Token{Tok::End, pos_};
    if (pos_ >= text_.size()) return;
    char c = text_[pos_];
    switch (c) {
      case '+': tok_ = {Tok::Plus, pos_++}; return;
      case '-': tok_ = {Tok::Minus, pos_++}; return;
      case '*': tok_ = {Tok::Star, pos_++}; return;
      case '/': tok_ = {Tok::Slash, pos_++}; return;
      case '^': tok_ = {Tok::Caret, pos_++}; return;
      case '(': tok_ = {Tok::LParen, pos_++}; return;
      case ')': tok_ = {Tok::RParen, pos_++}; return;
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      double value = 0.0;
      auto res = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), value);
      if (res.ec != std::errc{})
        throw ParseError(pos_, "malformed numeric literal");
      Token t{Tok::Number, pos_};
      t.number = value;
      pos_ = static_cast<std::size_t>(res.ptr - text_.data());
      if (pos_ < text_.size() && text_[pos_] == 'i') {
        t.imaginary = true;
        ++pos_;
      }
      tok_ = t;
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_]))))
        ++pos_;
      Token t{Tok::Ident, start};
      t.ident = std::string(text_.substr(start, pos_ - start));
      tok_ = t;
      return;
    }
    throw ParseError(pos_, std::string("unexpected character '") + c + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  Token tok_;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : lex_(text) {}

  HoloExpr parse() {
    HoloExpr e = expr();
    const Token& t = lex_.peek();
    if (t.kind != Tok::End)
      throw ParseError(t.pos, "unexpected trailing input");
    return e;
  }

 private:
  HoloExpr expr() {
    std::vector<HoloExpr> terms;
    terms.push_back(term());
    while (true) {
      Tok k = lex_.peek().kind;
      if (k == Tok::Plus) {
        lex_.take();
        terms.push_back(term());
      } else if (k == Tok::Minus) {
        lex_.take();
        terms.push_back(HoloExpr::scalar_mul({-1.0, 0.0}, term()));
      } else {
        break;
      }
    }
    return HoloExpr::sum(std::move(terms));
  }

  HoloExpr term() {
    std::vector<HoloExpr> pending;
    pending.push_back(factor());
    while (true) {
      Tok k = lex_.peek().kind;
      if (k == Tok::Star) {
        lex_.take();
        pending.push_back(factor());
      } else if (k == Tok::Slash) {
        lex_.take();
        HoloExpr numerator = HoloExpr::product(std::move(pending));
        pending.clear();
        pending.push_back(HoloExpr::quotient(std::move(numerator), factor()));
      } else {
        break;
      }
    }
    return HoloExpr::product(std::move(pending));
  }

  HoloExpr factor() {
    int sign = 1;
    while (true) {
      Tok k = lex_.peek().kind;
      if (k == Tok::Minus) {
        lex_.take();
        sign = -sign;
      } else if (k == Tok::Plus) {
        lex_.take();
      } else {
        break;
      }
    }
    HoloExpr p = power();
    if (sign < 0) return HoloExpr::scalar_mul({-1.0, 0.0}, std::move(p));
    return p;
  }

  HoloExpr power() {
    HoloExpr base = atom();
    if (lex_.peek().kind == Tok::Caret) {
      lex_.take();
      double r = exponent_literal();
      return HoloExpr::real_pow(std::move(base), r);
    }
    return base;
  }

  // Signed real literal, optionally parenthesized: 2, -1, 0.5, (-2).
  double exponent_literal() {
    bool parens = false;
    if (lex_.peek().kind == Tok::LParen) {
      parens = true;
      lex_.take();
    }
    double sign = 1.0;
    while (lex_.peek().kind == Tok::Minus || lex_.peek().kind == Tok::Plus) {
      if (lex_.take().kind == Tok::Minus) sign = -sign;
    }
    const Token& t = lex_.peek();
    if (t.kind != Tok::Number)
      throw ParseError(t.pos, "exponent must be a real literal");
    Token num = lex_.take();
    if (num.imaginary)
      throw ParseError(num.pos, "exponent must be real, not imaginary");
    if (parens) {
      const Token& close = lex_.peek();
      if (close.kind != Tok::RParen)
        throw ParseError(close.pos, "expected ')' after exponent");
      lex_.take();
    }
    return sign * num.number;
  }

  HoloExpr atom() {
    const Token& t = lex_.peek();
    switch (t.kind) {
      case Tok::Number: {
        Token num = lex_.take();
        return num.imaginary ? HoloExpr::constant({0.0, num.number})
                             : HoloExpr::constant({num.number, 0.0});
      }
      case Tok::LParen: {
        lex_.take();
        HoloExpr inner = expr();
        const Token& close = lex_.peek();
        if (close.kind != Tok::RParen)
          throw ParseError(close.pos, "expected ')'");
        lex_.take();
        return inner;
      }
      case Tok::Ident: {
        Token id = lex_.take();
        if (id.ident == "i") return HoloExpr::constant({0.0, 1.0});
        if (id.ident == "exp" || id.ident == "log" || id.ident == "sin") {
          const Token& open = lex_.peek();
          if (open.kind != Tok::LParen)
            throw ParseError(open.pos, "expected '(' after function name");
          lex_.take();
          HoloExpr arg = expr();
          const Token& close = lex_.peek();
          if (close.kind != Tok::RParen)
            throw ParseError(close.pos, "expected ')'");
          lex_.take();
          if (id.ident == "exp") return HoloExpr::exp(std::move(arg));
          if (id.ident == "log") return HoloExpr::log(std::move(arg));
          return HoloExpr::sin(std::move(arg));
        }
        if (id.ident.size() >= 2 && id.ident[0] == 'z') {
          int index = 0;
          auto res = std::from_chars(id.ident.data() + 1,
                                     id.ident.data() + id.ident.size(), index);
          if (res.ec == std::errc{} &&
              res.ptr == id.ident.data() + id.ident.size() && index >= 1)
            return HoloExpr::var(index - 1);
        }
        throw ParseError(id.pos, "unknown identifier '" + id.ident + "'");
      }
      case Tok::End:
        throw ParseError(t.pos, "expected expression");
      default:
        throw ParseError(t.pos, "expected expression");
    }
  }

  Lexer lex_;
};

}  // namespace

HoloExpr parse_expr(std::string_view text) { return Parser(text).parse(); }

}  // namespace minforge
