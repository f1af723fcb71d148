#include "cosyflat/expr.hpp"

#include <cctype>
#include <charconv>

#include "cosyflat/format.hpp"

namespace cosyflat {

ExprPtr make_number(double v) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Number;
  e->number = v;
  return e;
}

ExprPtr make_var(int index) {
  if (index < 0 || index > 2) throw DomainError("variable index out of range");
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Var;
  e->var = index;
  return e;
}

ExprPtr make_neg(ExprPtr a) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Neg;
  e->lhs = std::move(a);
  return e;
}

ExprPtr make_binary(ExprKind op, ExprPtr a, ExprPtr b) {
  auto e = std::make_shared<Expr>();
  e->kind = op;
  e->lhs = std::move(a);
  e->rhs = std::move(b);
  return e;
}

ExprPtr make_pow(ExprPtr base, double exponent) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Pow;
  e->number = exponent;
  e->lhs = std::move(base);
  return e;
}

ExprPtr make_call(ExprFunc f, ExprPtr a) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Call;
  e->func = f;
  e->lhs = std::move(a);
  return e;
}

namespace {

struct Parser {
  const std::string& src;
  std::size_t pos = 0;

  explicit Parser(const std::string& s) : src(s) {}

  void skip_ws() {
    while (pos < src.size() && (src[pos] == ' ' || src[pos] == '\t' ||
                                src[pos] == '\n' || src[pos] == '\r'))
      ++pos;
  }

  int peek() {
    skip_ws();
    return pos < src.size() ? static_cast<unsigned char>(src[pos]) : -1;
  }

  bool accept(char c) {
    if (peek() == c) {
      ++pos;
      return true;
    }
    return false;
  }

  void expect(char c, const char* what) {
    if (!accept(c)) throw ParseError(pos, what);
  }

  double parse_number() {
    skip_ws();
    const std::size_t start = pos;
    while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
    if (pos < src.size() && src[pos] == '.') {
      ++pos;
      while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
    }
    if (pos == start || (pos == start + 1 && src[start] == '.'))
      throw ParseError(start, "number");
    if (pos < src.size() && (src[pos] == 'e' || src[pos] == 'E')) {
      std::size_t exp_pos = pos + 1;
      if (exp_pos < src.size() && (src[exp_pos] == '+' || src[exp_pos] == '-')) ++exp_pos;
      if (exp_pos < src.size() && std::isdigit(static_cast<unsigned char>(src[exp_pos]))) {
        pos = exp_pos;
        while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
      }
    }
    double value = 0.0;
    auto res = std::from_chars(src.data() + start, src.data() + pos, value);
    if (res.ec != std::errc()) throw ParseError(start, "number");
    return value;
  }

  std::string parse_ident() {
    skip_ws();
    const std::size_t start = pos;
    while (pos < src.size() && std::isalpha(static_cast<unsigned char>(src[pos]))) ++pos;
    return src.substr(start, pos - start);
  }

  ExprPtr parse_expr() {
    ExprPtr lhs = parse_term();
    for (;;) {
      if (accept('+'))
        lhs = make_binary(ExprKind::Add, std::move(lhs), parse_term());
      else if (accept('-'))
        lhs = make_binary(ExprKind::Sub, std::move(lhs), parse_term());
      else
        return lhs;
    }
  }

  ExprPtr parse_term() {
    ExprPtr lhs = parse_factor();
    for (;;) {
      if (accept('*'))
        lhs = make_binary(ExprKind::Mul, std::move(lhs), parse_factor());
      else if (accept('/'))
        lhs = make_binary(ExprKind::Div, std::move(lhs), parse_factor());
      else
        return lhs;
    }
  }

  // '^' binds tighter than unary minus, so a leading '-' wraps the whole
  // base-with-exponent: -x^2 parses as -(x^2).
  ExprPtr parse_factor() {
    if (accept('-')) return make_neg(parse_factor());
    ExprPtr b = parse_base();
    if (accept('^')) return make_pow(std::move(b), parse_number());
    return b;
  }

  ExprPtr parse_base() {
    const int c = peek();
    if (c == '(') {
      ++pos;
      ExprPtr inner = parse_expr();
      expect(')', "')'");
      return inner;
    }
    if (c >= 0 && (std::isdigit(c) || c == '.')) return make_number(parse_number());
    if (c >= 0 && std::isalpha(c)) {
      const std::size_t start = pos;
      const std::string id = parse_ident();
      if (id == "x") return make_var(0);
      if (id == "y") return make_var(1);
      if (id == "z") return make_var(2);
      ExprFunc f;
      if (id == "exp")
        f = ExprFunc::Exp;
      else if (id == "ln")
        f = ExprFunc::Ln;
      else if (id == "sqrt")
        f = ExprFunc::Sqrt;
      else if (id == "sin")
        f = ExprFunc::Sin;
      else if (id == "cos")
        f = ExprFunc::Cos;
      else
        throw ParseError(start, "variable x|y|z or function exp|ln|sqrt|sin|cos");
      expect('(', "'('");
      ExprPtr arg = parse_expr();
      expect(')', "')'");
      return make_call(f, std::move(arg));
    }
    throw ParseError(pos, "number, variable, function, '(' or '-'");
  }
};

int precedence(ExprKind k) {
  switch (k) {
    case ExprKind::Add:
    case ExprKind::Sub:
      return 1;
    case ExprKind::Neg:
      return 2;
    case ExprKind::Mul:
    case ExprKind::Div:
      return 3;
    case ExprKind::Pow:
      return 4;
    default:
      return 5;
  }
}

std::string format_number(double v) { return format_shortest(v); }

void print_node(const ExprPtr& e, std::string& out);

void print_child(const ExprPtr& child, int parent_prec, bool right_side,
                 std::string& out) {
  const int cp = precedence(child->kind);
  const bool parens = cp < parent_prec || (cp == parent_prec && right_side);
  if (parens) out += '(';
  print_node(child, out);
  if (parens) out += ')';
}

void print_node(const ExprPtr& e, std::string& out) {
  switch (e->kind) {
    case ExprKind::Number:
      if (e->number < 0.0) {
        out += '(';
        out += format_number(e->number);
        out += ')';
      } else {
        out += format_number(e->number);
      }
      break;
    case ExprKind::Var:
      out += "xyz"[e->var];
      break;
    case ExprKind::Neg:
      // the reparse applies '-' to one factor, so anything looser than a
      // power needs parentheses
      out += '-';
      print_child(e->lhs, precedence(ExprKind::Pow), false, out);
      break;
    case ExprKind::Add:
      print_child(e->lhs, 1, false, out);
      out += '+';
      print_child(e->rhs, 1, true, out);
      break;
    case ExprKind::Sub:
      print_child(e->lhs, 1, false, out);
      out += '-';
      print_child(e->rhs, 1, true, out);
      break;
    case ExprKind::Mul:
      print_child(e->lhs, 3, false, out);
      out += '*';
      print_child(e->rhs, 3, true, out);
      break;
    case ExprKind::Div:
      print_child(e->lhs, 3, false, out);
      out += '/';
      print_child(e->rhs, 3, true, out);
      break;
    case ExprKind::Pow:
      print_child(e->lhs, precedence(ExprKind::Pow) + 1, false, out);
      out += '^';
      out += format_number(e->number);
      break;
    case ExprKind::Call:
      switch (e->func) {
        case ExprFunc::Exp: out += "exp"; break;
        case ExprFunc::Ln: out += "ln"; break;
        case ExprFunc::Sqrt: out += "sqrt"; break;
        case ExprFunc::Sin: out += "sin"; break;
        case ExprFunc::Cos: out += "cos"; break;
      }
      out += '(';
      print_node(e->lhs, out);
      out += ')';
      break;
  }
}

}  // namespace

ExprPtr parse_expr(const std::string& src) {
  Parser p(src);
  if (p.peek() < 0) throw ParseError(0, "non-empty expression");
  ExprPtr ast = p.parse_expr();
  p.skip_ws();
  if (p.pos != src.size()) throw ParseError(p.pos, "operator or end of input");
  return ast;
}

std::string print_expr(const ExprPtr& ast) {
  std::string out;
  print_node(ast, out);
  return out;
}

bool structurally_equal(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return a == b;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case ExprKind::Number:
      return a->number == b->number;
    case ExprKind::Var:
      return a->var == b->var;
    case ExprKind::Pow:
      return a->number == b->number && structurally_equal(a->lhs, b->lhs);
    case ExprKind::Call:
      return a->func == b->func && structurally_equal(a->lhs, b->lhs);
    case ExprKind::Neg:
      return structurally_equal(a->lhs, b->lhs);
    default:
      return structurally_equal(a->lhs, b->lhs) && structurally_equal(a->rhs, b->rhs);
  }
}

Jet3 eval_expr(const ExprPtr& ast, const Vec3& point) {
  switch (ast->kind) {
    case ExprKind::Number:
      return Jet3::constant(ast->number);
    case ExprKind::Var:
      return Jet3::variable(ast->var, point);
    case ExprKind::Neg:
      return -eval_expr(ast->lhs, point);
    case ExprKind::Add:
      return eval_expr(ast->lhs, point) + eval_expr(ast->rhs, point);
    case ExprKind::Sub:
      return eval_expr(ast->lhs, point) - eval_expr(ast->rhs, point);
    case ExprKind::Mul:
      return eval_expr(ast->lhs, point) * eval_expr(ast->rhs, point);
    case ExprKind::Div:
      return eval_expr(ast->lhs, point) / eval_expr(ast->rhs, point);
    case ExprKind::Pow:
      return pow_const(eval_expr(ast->lhs, point), ast->number);
    case ExprKind::Call:
      switch (ast->func) {
        case ExprFunc::Exp: return exp(eval_expr(ast->lhs, point));
        case ExprFunc::Ln: return log(eval_expr(ast->lhs, point));
        case ExprFunc::Sqrt: return sqrt(eval_expr(ast->lhs, point));
        case ExprFunc::Sin: return sin(eval_expr(ast->lhs, point));
        case ExprFunc::Cos: return cos(eval_expr(ast->lhs, point));
      }
      break;
  }
  throw DomainError("malformed expression tree");
}

bool uses_only(const ExprPtr& ast, unsigned allowed_mask) {
  if (!ast) return true;
  if (ast->kind == ExprKind::Var && !(allowed_mask & (1u << ast->var))) return false;
  return uses_only(ast->lhs, allowed_mask) && uses_only(ast->rhs, allowed_mask);
}

}  // namespace cosyflat
