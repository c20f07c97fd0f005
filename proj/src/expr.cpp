#include "rhostat/expr.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <vector>

#include "rhostat/error.hpp"

namespace rhostat {

struct Expression::Node {
  enum class Op {
    Constant, Index, Neg, Add, Sub, Mul, Div, Pow,
    Sqrt, Log, Log2, Log10, Exp, Sin, Cos, Tan, Atan, Tanh, Abs, Floor, Ceil,
    Min, Max,
  };

  Op op = Op::Constant;
  double value = 0.0;
  std::vector<std::shared_ptr<const Node>> args;

  double eval(double x) const {
    switch (op) {
      case Op::Constant: return value;
      case Op::Index: return x;
      case Op::Neg: return -args[0]->eval(x);
      case Op::Add: return args[0]->eval(x) + args[1]->eval(x);
      case Op::Sub: return args[0]->eval(x) - args[1]->eval(x);
      case Op::Mul: return args[0]->eval(x) * args[1]->eval(x);
      case Op::Div: return args[0]->eval(x) / args[1]->eval(x);
      case Op::Pow: return std::pow(args[0]->eval(x), args[1]->eval(x));
      case Op::Sqrt: return std::sqrt(args[0]->eval(x));
      case Op::Log: return std::log(args[0]->eval(x));
      case Op::Log2: return std::log2(args[0]->eval(x));
      case Op::Log10: return std::log10(args[0]->eval(x));
      case Op::Exp: return std::exp(args[0]->eval(x));
      case Op::Sin: return std::sin(args[0]->eval(x));
      case Op::Cos: return std::cos(args[0]->eval(x));
      case Op::Tan: return std::tan(args[0]->eval(x));
      case Op::Atan: return std::atan(args[0]->eval(x));
      case Op::Tanh: return std::tanh(args[0]->eval(x));
      case Op::Abs: return std::fabs(args[0]->eval(x));
      case Op::Floor: return std::floor(args[0]->eval(x));
      case Op::Ceil: return std::ceil(args[0]->eval(x));
      case Op::Min: return std::fmin(args[0]->eval(x), args[1]->eval(x));
      case Op::Max: return std::fmax(args[0]->eval(x), args[1]->eval(x));
    }
    return 0.0;
  }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Op = Expression::Node::Op;

NodePtr make(Op op, std::vector<NodePtr> args = {}, double value = 0.0) {
  auto node = std::make_shared<Expression::Node>();
  node->op = op;
  node->value = value;
  node->args = std::move(args);
  return node;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr parse() {
    auto root = additive();
    skip_space();
    if (pos_ != text_.size()) error("unexpected '" + std::string(1, text_[pos_]) + "'");
    return root;
  }

 private:
  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorCode::ParseError, "expression '" + std::string(text_) + "': " + what +
                                    " at offset " + std::to_string(pos_));
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

  NodePtr additive() {
    auto lhs = multiplicative();
    for (;;) {
      if (accept('+')) lhs = make(Op::Add, {lhs, multiplicative()});
      else if (accept('-')) lhs = make(Op::Sub, {lhs, multiplicative()});
      else return lhs;
    }
  }

  NodePtr multiplicative() {
    auto lhs = unary();
    for (;;) {
      if (accept('*')) lhs = make(Op::Mul, {lhs, unary()});
      else if (accept('/')) lhs = make(Op::Div, {lhs, unary()});
      else return lhs;
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Op::Neg, {unary()});
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    auto base = primary();
    if (accept('^')) return make(Op::Pow, {base, unary()});
    return base;
  }

  NodePtr primary() {
    skip_space();
    if (pos_ >= text_.size()) error("unexpected end of input");
    if (accept('(')) {
      auto inner = additive();
      if (!accept(')')) error("expected ')'");
      return inner;
    }
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    error("unexpected '" + std::string(1, c) + "'");
  }

  NodePtr number() {
    const std::string rest(text_.substr(pos_));
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(rest, &used);
    } catch (const std::exception&) {
      error("malformed number");
    }
    pos_ += used;
    return make(Op::Constant, {}, value);
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    const std::string name(text_.substr(start, pos_ - start));

    if (name == "n" || name == "k") return make(Op::Index);
    if (name == "pi") return make(Op::Constant, {}, std::numbers::pi);
    if (name == "e") return make(Op::Constant, {}, std::numbers::e);

    struct Fn {
      const char* name;
      Op op;
      int arity;
    };
    static constexpr Fn functions[] = {
        {"sqrt", Op::Sqrt, 1}, {"log", Op::Log, 1},     {"ln", Op::Log, 1},
        {"log2", Op::Log2, 1}, {"log10", Op::Log10, 1}, {"exp", Op::Exp, 1},
        {"sin", Op::Sin, 1},   {"cos", Op::Cos, 1},     {"tan", Op::Tan, 1},
        {"atan", Op::Atan, 1}, {"tanh", Op::Tanh, 1},   {"abs", Op::Abs, 1},
        {"floor", Op::Floor, 1}, {"ceil", Op::Ceil, 1}, {"min", Op::Min, 2},
        {"max", Op::Max, 2},   {"pow", Op::Pow, 2},
    };
    for (const auto& fn : functions) {
      if (name != fn.name) continue;
      if (!accept('(')) error("expected '(' after " + name);
      std::vector<NodePtr> args;
      args.push_back(additive());
      while (accept(',')) args.push_back(additive());
      if (!accept(')')) error("expected ')' closing " + name);
      if (static_cast<int>(args.size()) != fn.arity)
        error(name + " takes " + std::to_string(fn.arity) + " argument(s)");
      return make(fn.op, std::move(args));
    }
    error("unknown identifier '" + name + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression Expression::parse(std::string_view text) {
  Parser parser(text);
  auto root = parser.parse();
  return Expression(std::string(text), std::move(root));
}

double Expression::operator()(double index) const { return root_->eval(index); }

}  // namespace rhostat
