#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "minforge/expr.hpp"

namespace minforge {

/// Syntax error with the 0-based byte offset of the offending token.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t position, const std::string& message)
      : std::runtime_error("parse error at position " +
                           std::to_string(position) + ": " + message),
        position_(position) {}

  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Parses the expression mini-language:
///
///   variables z1..z9; complex literals such as 2, 0.5, i, 3i, (1+2i);
///   operators + - * / ^ (the ^ exponent must be a real literal);
///   functions exp, log, sin; parentheses; whitespace ignored.
///
/// The result is canonical: to_string followed by parse_expr reproduces a
/// structurally identical tree.
HoloExpr parse_expr(std::string_view text);

}  // namespace minforge
