#pragma once

#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>

#include "casorati/jet.hpp"

namespace casorati {

using ParamMap = std::map<std::string, double>;

enum class NodeKind { Constant, Variable, Parameter, Neg, Add, Sub, Mul, Div, Pow, Call };

enum class FnCode { Sin, Cos, Tan, Exp, Log, Sqrt, Sinh, Cosh, Atan };

struct ExprNode;
using NodePtr = std::shared_ptr<const ExprNode>;

/// Immutable expression tree node. The tree is shared freely across threads;
/// evaluation never mutates it.
struct ExprNode {
    NodeKind kind;
    double number = 0.0;      // Constant, Parameter
    int var_index = -1;       // Variable (0-based)
    std::string param_name;   // Parameter
    FnCode fn = FnCode::Sin;  // Call
    NodePtr left, right;      // children (unary ops use left only)
};

/// A parsed expression over variables u1..un with parameters resolved at parse time.
///
/// Grammar (whitespace insignificant):
///   expr   := term (('+'|'-') term)*
///   term   := unary (('*'|'/') unary)*
///   unary  := '-' unary | power
///   power  := atom ('^' unary)?          -- right associative, binds above unary minus
///   atom   := number | ident | ident '(' expr ')' | '(' expr ')'
class Expression {
  public:
    Expression() = default;

    static Expression parse(std::string_view src, int n, const ParamMap& params = {});

    /// Value, gradient and Hessian at u. The Hessian comes back exactly symmetric.
    Jet2 eval_jet2(std::span<const double> u) const;

    double eval(std::span<const double> u) const;

    /// Text form that parses back to a structurally identical tree.
    std::string render() const;

    /// Symbolic partial derivative with respect to variable `var` (0-based), with
    /// light constant folding so generated gradients stay readable.
    Expression derivative(int var) const;

    int arity() const { return arity_; }
    const NodePtr& root() const { return root_; }

    bool operator==(const Expression& other) const;

    Expression(NodePtr root, int arity) : root_(std::move(root)), arity_(arity) {}

  private:
    NodePtr root_;
    int arity_ = 0;
};

}  // namespace casorati
