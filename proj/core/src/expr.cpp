#include "tdpair/expr.hpp"

#include <cctype>
#include <charconv>

namespace tdpair {

namespace {

// Printing precedence levels; an operand is parenthesized when its level is
// below what the parent requires.
constexpr int kAdd = 1;
constexpr int kMul = 2;
constexpr int kNeg = 3;
constexpr int kPow = 4;
constexpr int kAtom = 5;

int level(Expr::Op op) {
  switch (op) {
    case Expr::Op::Add:
    case Expr::Op::Sub:
      return kAdd;
    case Expr::Op::Mul:
    case Expr::Op::Div:
      return kMul;
    case Expr::Op::Neg:
      return kNeg;
    case Expr::Op::Pow:
      return kPow;
    default:
      return kAtom;
  }
}

void print(const Expr& e, int required, bool strict_left, std::string& out) {
  const int own = level(e.op());
  const bool paren = own < required || (strict_left && e.op() == Expr::Op::Neg);
  if (paren) {
    out += '(';
    required = 0;
    strict_left = false;
  }
  switch (e.op()) {
    case Expr::Op::Number:
      out += e.value().get_str();
      break;
    case Expr::Op::Symbol:
      out += symbol_name(e.sym());
      break;
    case Expr::Op::Add:
    case Expr::Op::Sub:
      print(e.lhs(), kAdd, strict_left, out);
      out += e.op() == Expr::Op::Add ? " + " : " - ";
      print(e.rhs(), kMul, false, out);
      break;
    case Expr::Op::Mul:
    case Expr::Op::Div:
      print(e.lhs(), kMul, strict_left, out);
      out += e.op() == Expr::Op::Mul ? "*" : "/";
      print(e.rhs(), kNeg, false, out);
      break;
    case Expr::Op::Neg:
      out += '-';
      print(e.operand(), kNeg, false, out);
      break;
    case Expr::Op::Pow:
      print(e.lhs(), kAtom, false, out);
      out += '^';
      out += std::to_string(e.exponent());
      break;
  }
  if (paren) out += ')';
}

bool parse_index(std::string_view digits, std::size_t& out) {
  if (digits.empty() || (digits.size() > 1 && digits[0] == '0')) return false;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), out);
  return ec == std::errc() && ptr == digits.data() + digits.size();
}

bool try_resolve(std::string_view name, std::size_t d, Symbol& out) {
  std::size_t idx = 0;
  if (name == "beta") {
    out = {SymbolKind::Beta, 0};
    return d >= 3;
  }
  auto with_prefix = [&](std::string_view prefix, SymbolKind kind) {
    if (name.substr(0, prefix.size()) != prefix) return false;
    if (!parse_index(name.substr(prefix.size()), idx)) return false;
    out = {kind, idx};
    return true;
  };
  if (with_prefix("ths", SymbolKind::ThetaStar)) return idx <= d;
  if (with_prefix("th", SymbolKind::Theta)) return idx <= d;
  if (with_prefix("y", SymbolKind::Y)) return idx >= 1 && idx <= d;
  if (with_prefix("eps", SymbolKind::Eps)) return d >= 2 && idx + 2 <= d;
  return false;
}

}  // namespace

std::string symbol_name(const Symbol& s) {
  switch (s.kind) {
    case SymbolKind::Theta:
      return "th" + std::to_string(s.index);
    case SymbolKind::ThetaStar:
      return "ths" + std::to_string(s.index);
    case SymbolKind::Y:
      return "y" + std::to_string(s.index);
    case SymbolKind::Beta:
      return "beta";
    case SymbolKind::Eps:
      return "eps" + std::to_string(s.index);
  }
  return "?";
}

bool is_symbol_name(std::string_view name, std::size_t d) {
  Symbol s{SymbolKind::Theta, 0};
  return try_resolve(name, d, s);
}

Symbol resolve_symbol(std::string_view name, std::size_t d) {
  Symbol s{SymbolKind::Theta, 0};
  if (!try_resolve(name, d, s)) {
    throw Error("unknown scalar '" + std::string(name) + "' for d=" + std::to_string(d));
  }
  return s;
}

Expr Expr::number(mpz_class value) {
  auto n = std::make_shared<Node>();
  n->op = Op::Number;
  n->value = std::move(value);
  return Expr(std::move(n));
}

Expr Expr::symbol(Symbol s) {
  auto n = std::make_shared<Node>();
  n->op = Op::Symbol;
  n->sym = s;
  return Expr(std::move(n));
}

Expr Expr::binary(Op op, Expr lhs, Expr rhs) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->children = {std::move(lhs), std::move(rhs)};
  return Expr(std::move(n));
}

Expr Expr::neg(Expr operand) {
  auto n = std::make_shared<Node>();
  n->op = Op::Neg;
  n->children = {std::move(operand)};
  return Expr(std::move(n));
}

Expr Expr::pow(Expr base, long exponent) {
  auto n = std::make_shared<Node>();
  n->op = Op::Pow;
  n->exponent = exponent;
  n->children = {std::move(base)};
  return Expr(std::move(n));
}

std::string Expr::to_string() const {
  std::string out;
  print(*this, 0, false, out);
  return out;
}

std::string Expr::to_coefficient_string() const {
  std::string out;
  print(*this, kMul, true, out);
  return out;
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (a.op() != b.op()) return false;
  switch (a.op()) {
    case Expr::Op::Number:
      return a.value() == b.value();
    case Expr::Op::Symbol:
      return a.sym() == b.sym();
    case Expr::Op::Pow:
      return a.exponent() == b.exponent() && a.lhs() == b.lhs();
    case Expr::Op::Neg:
      return a.operand() == b.operand();
    default:
      return a.lhs() == b.lhs() && a.rhs() == b.rhs();
  }
}

template <class F>
typename F::Scalar Expr::evaluate(const SpecializationContext<F>& ctx) const {
  using S = typename F::Scalar;
  switch (op()) {
    case Op::Number:
      return ctx.field.from_integer(value());
    case Op::Symbol: {
      const Symbol& s = sym();
      auto need = [&](bool ok) {
        if (!ok) throw Error("scalar " + symbol_name(s) + " is not defined in this context");
      };
      switch (s.kind) {
        case SymbolKind::Theta:
          need(s.index < ctx.theta.size());
          return ctx.theta[s.index];
        case SymbolKind::ThetaStar:
          need(s.index < ctx.theta_star.size());
          return ctx.theta_star[s.index];
        case SymbolKind::Y:
          need(s.index >= 1 && s.index <= ctx.y.size());
          return ctx.y[s.index - 1];
        case SymbolKind::Beta:
          need(ctx.beta.has_value());
          return *ctx.beta;
        case SymbolKind::Eps:
          need(s.index < ctx.epsilon.size());
          return ctx.epsilon[s.index];
      }
      break;
    }
    case Op::Add:
      return lhs().evaluate(ctx) + rhs().evaluate(ctx);
    case Op::Sub:
      return lhs().evaluate(ctx) - rhs().evaluate(ctx);
    case Op::Mul:
      return lhs().evaluate(ctx) * rhs().evaluate(ctx);
    case Op::Div:
      return lhs().evaluate(ctx) / rhs().evaluate(ctx);
    case Op::Neg:
      return -operand().evaluate(ctx);
    case Op::Pow: {
      S base = lhs().evaluate(ctx);
      long e = exponent();
      if (e < 0) {
        base = inverse(base);
        e = -e;
      }
      S acc = ctx.field.one();
      for (long k = 0; k < e; ++k) acc *= base;
      return acc;
    }
  }
  throw Error("corrupt expression node");
}

template RationalField::Scalar Expr::evaluate(const SpecializationContext<RationalField>&) const;
template PrimeField::Scalar Expr::evaluate(const SpecializationContext<PrimeField>&) const;

ExprParser::ExprParser(std::string_view line, std::size_t line_number, std::size_t d)
    : line_(line_number), d_(d) {
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) ++i;
      tokens_.push_back({Token::Kind::Integer, std::string(line.substr(start, i - start)),
                         start + 1});
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < line.size() && (std::isalnum(static_cast<unsigned char>(line[i])) ||
                                 line[i] == '_')) {
        ++i;
      }
      tokens_.push_back({Token::Kind::Ident, std::string(line.substr(start, i - start)),
                         start + 1});
    } else if (std::string_view("+-*/^():").find(c) != std::string_view::npos) {
      tokens_.push_back({Token::Kind::Symbol, std::string(1, c), start + 1});
      ++i;
    } else {
      throw ParseError(line_, start + 1, std::string("unexpected character '") + c + "'");
    }
  }
  tokens_.push_back({Token::Kind::End, "", line.size() + 1});
}

void ExprParser::fail(const Token& at, const std::string& message) const {
  throw ParseError(line_, at.column, message);
}

void ExprParser::expect_punct(char c) {
  if (!at_punct(c)) {
    fail(peek(), std::string("expected '") + c + "'" +
                     (at_end() ? " before end of line" : ", found '" + peek().text + "'"));
  }
  take();
}

Expr ExprParser::parse_sum() {
  Expr acc = parse_product();
  while (at_punct('+') || at_punct('-')) {
    const bool plus = take().text[0] == '+';
    acc = Expr::binary(plus ? Expr::Op::Add : Expr::Op::Sub, std::move(acc), parse_product());
  }
  return acc;
}

Expr ExprParser::parse_product() {
  Expr acc = parse_unary();
  while (at_punct('*') || at_punct('/')) {
    const bool mul = take().text[0] == '*';
    acc = Expr::binary(mul ? Expr::Op::Mul : Expr::Op::Div, std::move(acc), parse_unary());
  }
  return acc;
}

Expr ExprParser::parse_unary() {
  if (at_punct('-')) {
    take();
    return Expr::neg(parse_unary());
  }
  return parse_power();
}

Expr ExprParser::parse_power() {
  Expr base = parse_atom();
  if (!at_punct('^')) return base;
  take();
  bool negative = false;
  if (at_punct('-')) {
    take();
    negative = true;
  }
  const Token t = take();
  if (t.kind != Token::Kind::Integer) fail(t, "expected integer exponent after '^'");
  long e = 0;
  auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), e);
  if (ec != std::errc() || ptr != t.text.data() + t.text.size()) fail(t, "exponent too large");
  return Expr::pow(std::move(base), negative ? -e : e);
}

Expr ExprParser::parse_atom() {
  const Token t = peek();
  switch (t.kind) {
    case Token::Kind::Integer:
      take();
      return Expr::number(mpz_class(t.text, 10));
    case Token::Kind::Ident: {
      Symbol s{SymbolKind::Theta, 0};
      if (!try_resolve(t.text, d_, s)) {
        fail(t, "unknown scalar '" + t.text + "' for d=" + std::to_string(d_));
      }
      take();
      return Expr::symbol(s);
    }
    case Token::Kind::Symbol:
      if (t.text[0] == '(') {
        take();
        Expr inner = parse_sum();
        expect_punct(')');
        return inner;
      }
      fail(t, "unexpected '" + t.text + "'");
    case Token::Kind::End:
      fail(t, "unexpected end of line");
  }
  fail(t, "unexpected token");
}

Expr parse_expr(std::string_view text, std::size_t d) {
  ExprParser p(text, 1, d);
  Expr e = p.parse_sum();
  if (!p.at_end()) p.fail(p.peek(), "unexpected '" + p.peek().text + "' after expression");
  return e;
}

}  // namespace tdpair
