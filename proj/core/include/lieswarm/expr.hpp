#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace lieswarm {

/// Immutable expression tree over the variables `phi` and `s`.
///
/// Grammar (whitespace insignificant):
///
///     expr    = term , { ("+" | "-") , term } ;
///     term    = unary , { ("*" | "/") , unary } ;
///     unary   = "-" , unary | power ;
///     power   = primary , [ "^" , power ] ;        (* exponent: integer literal >= 0 *)
///     primary = number | "phi" | "s" | func , "(" , expr , ")" | "(" , expr , ")" ;
///     func    = "sin" | "cos" ;
///
/// Copies share the underlying tree, so an Expr is cheap to pass around and
/// safe to evaluate concurrently.
class Expr {
 public:
  struct Node;

  /// Parses `text`. Throws SyntaxError or UnknownIdentifier.
  static Expr parse(std::string_view text);

  static Expr constant(double value);

  /// Evaluates at the given phase and distortion factor. Throws
  /// EvaluationError on division by zero or any non-finite intermediate.
  [[nodiscard]] double eval(double phi, double s) const;

  /// Fully parenthesized text that parses back to an equivalent tree.
  [[nodiscard]] std::string to_string() const;

  /// The text this expression was parsed from, or to_string() for
  /// programmatically built expressions.
  [[nodiscard]] const std::string& source() const { return source_; }

 private:
  Expr(std::shared_ptr<const Node> root, std::string source);

  std::shared_ptr<const Node> root_;
  std::string source_;
};

}  // namespace lieswarm
