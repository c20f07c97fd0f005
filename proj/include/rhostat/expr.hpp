#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace rhostat {

/// A compiled arithmetic expression in one index variable.
///
/// Accepted syntax: numbers, the index variable (`n` or `k`, interchangeable),
/// constants `pi` and `e`, binary `+ - * / ^` (with `^` right-associative and
/// binding tighter than unary minus, so `-k^2` is `-(k^2)`), parentheses, and
/// the functions sqrt, log/ln, log2, log10, exp, sin, cos, tan, atan, tanh,
/// abs, floor, ceil, min, max, pow.
class Expression {
 public:
  static Expression parse(std::string_view text);

  double operator()(double index) const;

  const std::string& text() const noexcept { return text_; }

  struct Node;

 private:
  Expression(std::string text, std::shared_ptr<const Node> root)
      : text_(std::move(text)), root_(std::move(root)) {}

  std::string text_;
  std::shared_ptr<const Node> root_;
};

}  // namespace rhostat
