#pragma once

// Coefficient expressions of the action tables.
//
// Grammar, loosest binding first:
//   sum     := product (('+' | '-') product)*
//   product := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := atom ('^' '-'? INTEGER)?
//   atom    := INTEGER | SYMBOL | '(' sum ')'
// Symbols for diameter d: th0..thd, ths0..thsd, y1..yd, beta (d >= 3) and
// eps0..eps{d-2} (d >= 2).

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "tdpair/error.hpp"
#include "tdpair/params.hpp"

namespace tdpair {

enum class SymbolKind { Theta, ThetaStar, Y, Beta, Eps };

struct Symbol {
  SymbolKind kind;
  std::size_t index = 0;  // y uses 1-based indices as written
  friend bool operator==(const Symbol&, const Symbol&) = default;
};

std::string symbol_name(const Symbol& s);
// Resolves a name against diameter d; nullopt-style failure is a throw of
// Error with the offending name.
Symbol resolve_symbol(std::string_view name, std::size_t d);
bool is_symbol_name(std::string_view name, std::size_t d);

class Expr {
 public:
  enum class Op { Number, Symbol, Add, Sub, Mul, Div, Neg, Pow };

  static Expr number(mpz_class value);
  static Expr symbol(Symbol s);
  static Expr binary(Op op, Expr lhs, Expr rhs);
  static Expr neg(Expr operand);
  static Expr pow(Expr base, long exponent);

  Op op() const { return node_->op; }
  const mpz_class& value() const { return node_->value; }
  const Symbol& sym() const { return node_->sym; }
  long exponent() const { return node_->exponent; }
  const Expr& lhs() const { return node_->children.at(0); }
  const Expr& rhs() const { return node_->children.at(1); }
  const Expr& operand() const { return node_->children.at(0); }

  // Canonical text; parses back to a structurally equal tree.
  std::string to_string() const;
  // Text usable as the coefficient of a table term: sums are parenthesized
  // and so is a leading unary minus, which the table grammar would read as
  // the sign of the term.
  std::string to_coefficient_string() const;

  template <class F>
  typename F::Scalar evaluate(const SpecializationContext<F>& ctx) const;

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  struct Node {
    Op op;
    mpz_class value;
    Symbol sym{SymbolKind::Theta, 0};
    long exponent = 0;
    std::vector<Expr> children;
  };
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  std::shared_ptr<const Node> node_;
};

// Tokens of the table format.
struct Token {
  enum class Kind { Integer, Ident, Symbol, End };
  Kind kind;
  std::string text;
  std::size_t column;  // 1-based
};

// Recursive-descent parser over a single line.  Columns in errors are
// 1-based and relative to the line.
class ExprParser {
 public:
  ExprParser(std::string_view line, std::size_t line_number, std::size_t d);

  Expr parse_sum();
  Expr parse_unary();
  Expr parse_power();

  const Token& peek() const { return tokens_[pos_]; }
  Token take() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }
  bool at_punct(char c) const {
    return peek().kind == Token::Kind::Symbol && peek().text[0] == c;
  }
  bool at_end() const { return peek().kind == Token::Kind::End; }
  void expect_punct(char c);

  [[noreturn]] void fail(const Token& at, const std::string& message) const;
  std::size_t line_number() const noexcept { return line_; }
  std::size_t d() const noexcept { return d_; }

 private:
  Expr parse_product();
  Expr parse_atom();

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::size_t line_;
  std::size_t d_;
};

// Parses a whole string as one expression.
Expr parse_expr(std::string_view text, std::size_t d);

}  // namespace tdpair
