#pragma once

#include <memory>
#include <string>

#include "cosyflat/jet.hpp"

namespace cosyflat {

/// Abstract syntax tree of the little arithmetic language used to supply
/// custom f(x,z) and u(x) without recompiling.  Grammar (normative, also
/// printed by the CLI help):
///
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := base ('^' number)?
///   base   := number | var | func '(' expr ')' | '(' expr ')' | '-' base
///
/// '^' binds tighter than unary minus and its exponent must be a numeric
/// literal.  Variables are x, y, z; functions are exp, ln, sqrt, sin, cos.
/// Whitespace insensitive, ASCII only, no implicit multiplication.
struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

enum class ExprKind { Number, Var, Neg, Add, Sub, Mul, Div, Pow, Call };
enum class ExprFunc { Exp, Ln, Sqrt, Sin, Cos };

struct Expr {
  ExprKind kind;
  double number = 0.0;  // Number payload, or the Pow exponent
  int var = -1;         // Var payload: 0 = x, 1 = y, 2 = z
  ExprFunc func = ExprFunc::Exp;
  ExprPtr lhs, rhs;
};

ExprPtr make_number(double v);
ExprPtr make_var(int index);
ExprPtr make_neg(ExprPtr a);
ExprPtr make_binary(ExprKind op, ExprPtr a, ExprPtr b);
ExprPtr make_pow(ExprPtr base, double exponent);
ExprPtr make_call(ExprFunc f, ExprPtr a);

/// Parses `src` per the grammar above; throws ParseError with the byte
/// offset of the failure and the set of tokens that were expected.
ExprPtr parse_expr(const std::string& src);

/// Renders the tree back to source.  parse(print(ast)) is structurally
/// equal to ast.
std::string print_expr(const ExprPtr& ast);

bool structurally_equal(const ExprPtr& a, const ExprPtr& b);

/// Evaluates the expression to an order-3 jet at `point`.
Jet3 eval_expr(const ExprPtr& ast, const Vec3& point);

/// True when the expression only reads variables from `allowed_mask`
/// (bit i set = variable i allowed).
bool uses_only(const ExprPtr& ast, unsigned allowed_mask);

}  // namespace cosyflat
