#include "lieswarm/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <variant>

#include <fmt/format.h>

#include "lieswarm/errors.hpp"

namespace lieswarm {

namespace {

enum class Var { Phi, S };
enum class Func { Sin, Cos };
enum class BinOp { Add, Sub, Mul, Div };

}  // namespace

struct Expr::Node {
  struct Number {
    double value;
  };
  struct Variable {
    Var var;
  };
  struct Negate {
    std::shared_ptr<const Node> arg;
  };
  struct Binary {
    BinOp op;
    std::shared_ptr<const Node> lhs, rhs;
  };
  struct Power {
    std::shared_ptr<const Node> base;
    unsigned exponent;
  };
  struct Call {
    Func func;
    std::shared_ptr<const Node> arg;
  };

  std::variant<Number, Variable, Negate, Binary, Power, Call> v;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

template <typename T>
NodePtr make(T alt) {
  return std::make_shared<const Expr::Node>(Expr::Node{std::move(alt)});
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr parse_all() {
    NodePtr e = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) fail(fmt::format("unexpected '{}'", text_[pos_]));
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(pos_, msg); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      fail(pos_ < text_.size() ? fmt::format("expected '{}' but found '{}'", c, text_[pos_])
                               : fmt::format("expected '{}' at end of input", c));
    }
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    for (;;) {
      if (accept('+')) {
        lhs = make(Expr::Node::Binary{BinOp::Add, lhs, parse_term()});
      } else if (accept('-')) {
        lhs = make(Expr::Node::Binary{BinOp::Sub, lhs, parse_term()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = make(Expr::Node::Binary{BinOp::Mul, lhs, parse_unary()});
      } else if (accept('/')) {
        lhs = make(Expr::Node::Binary{BinOp::Div, lhs, parse_unary()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_unary() {
    if (accept('-')) return make(Expr::Node::Negate{parse_unary()});
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_primary();
    if (!accept('^')) return base;
    return make(Expr::Node::Power{base, parse_exponent()});
  }

  // Integer literal exponent; a chain such as 3^2 folds right to left.
  unsigned parse_exponent() {
    skip_ws();
    const std::size_t exp_pos = pos_;
    const auto bad = [&] {
      throw SyntaxError(exp_pos, "exponent must be an integer literal in [0, 64]");
    };
    if (pos_ >= text_.size() ||
        !(std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
      bad();
    }
    const double value = std::get<Expr::Node::Number>(parse_number()->v).value;
    if (value < 0.0 || value != std::floor(value) || value > 64.0) bad();
    unsigned result = static_cast<unsigned>(value);
    if (accept('^')) {
      const unsigned inner = parse_exponent();
      double folded = 1.0;
      for (unsigned i = 0; i < inner; ++i) folded *= result;
      if (folded > 64.0) bad();
      result = static_cast<unsigned>(folded);
    }
    return result;
  }

  NodePtr parse_primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = parse_expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    fail(fmt::format("unexpected '{}'", c));
  }

  NodePtr parse_number() {
    const char* first = text_.data() + pos_;
    const char* last = text_.data() + text_.size();
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr == first) fail("malformed number");
    pos_ += static_cast<std::size_t>(ptr - first);
    return make(Expr::Node::Number{value});
  }

  NodePtr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view name = text_.substr(start, pos_ - start);
    if (name == "phi") return make(Expr::Node::Variable{Var::Phi});
    if (name == "s") return make(Expr::Node::Variable{Var::S});
    if (name == "sin" || name == "cos") {
      const Func f = name == "sin" ? Func::Sin : Func::Cos;
      expect('(');
      NodePtr arg = parse_expr();
      expect(')');
      return make(Expr::Node::Call{f, arg});
    }
    throw UnknownIdentifier(std::string(name));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

double checked(double v, const char* what) {
  if (!std::isfinite(v)) throw EvaluationError(fmt::format("non-finite result in {}", what));
  return v;
}

double evaluate(const Expr::Node& node, double phi, double s) {
  return std::visit(
      [&](const auto& n) -> double {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Expr::Node::Number>) {
          return n.value;
        } else if constexpr (std::is_same_v<T, Expr::Node::Variable>) {
          return checked(n.var == Var::Phi ? phi : s, "variable");
        } else if constexpr (std::is_same_v<T, Expr::Node::Negate>) {
          return -evaluate(*n.arg, phi, s);
        } else if constexpr (std::is_same_v<T, Expr::Node::Binary>) {
          const double a = evaluate(*n.lhs, phi, s);
          const double b = evaluate(*n.rhs, phi, s);
          switch (n.op) {
            case BinOp::Add: return checked(a + b, "addition");
            case BinOp::Sub: return checked(a - b, "subtraction");
            case BinOp::Mul: return checked(a * b, "multiplication");
            case BinOp::Div:
              if (b == 0.0) throw EvaluationError("division by zero");
              return checked(a / b, "division");
          }
          return 0.0;
        } else if constexpr (std::is_same_v<T, Expr::Node::Power>) {
          const double base = evaluate(*n.base, phi, s);
          double r = 1.0;
          for (unsigned i = 0; i < n.exponent; ++i) r *= base;
          return checked(r, "power");
        } else {
          const double a = evaluate(*n.arg, phi, s);
          return n.func == Func::Sin ? std::sin(a) : std::cos(a);
        }
      },
      node.v);
}

void print(const Expr::Node& node, std::string& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Expr::Node::Number>) {
          // Shortest representation that round-trips exactly.
          out += fmt::format("{}", n.value);
        } else if constexpr (std::is_same_v<T, Expr::Node::Variable>) {
          out += n.var == Var::Phi ? "phi" : "s";
        } else if constexpr (std::is_same_v<T, Expr::Node::Negate>) {
          out += "(-";
          print(*n.arg, out);
          out += ')';
        } else if constexpr (std::is_same_v<T, Expr::Node::Binary>) {
          static constexpr char ops[] = {'+', '-', '*', '/'};
          out += '(';
          print(*n.lhs, out);
          out += ' ';
          out += ops[static_cast<int>(n.op)];
          out += ' ';
          print(*n.rhs, out);
          out += ')';
        } else if constexpr (std::is_same_v<T, Expr::Node::Power>) {
          out += '(';
          print(*n.base, out);
          out += fmt::format("^{})", n.exponent);
        } else {
          out += n.func == Func::Sin ? "sin(" : "cos(";
          print(*n.arg, out);
          out += ')';
        }
      },
      node.v);
}

}  // namespace

Expr::Expr(std::shared_ptr<const Node> root, std::string source)
    : root_(std::move(root)), source_(std::move(source)) {}

Expr Expr::parse(std::string_view text) {
  return Expr(Parser(text).parse_all(), std::string(text));
}

Expr Expr::constant(double value) {
  auto root = make(Node::Number{value});
  std::string text;
  print(*root, text);
  return Expr(std::move(root), std::move(text));
}

double Expr::eval(double phi, double s) const { return evaluate(*root_, phi, s); }

std::string Expr::to_string() const {
  std::string out;
  print(*root_, out);
  return out;
}

}  // namespace lieswarm
