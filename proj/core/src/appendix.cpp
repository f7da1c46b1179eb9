#include "tdpair/appendix.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "tdpair/poly.hpp"
#include "tdpair/sampler.hpp"

#ifndef TDPAIR_SOURCE_ASSET_DIR
#define TDPAIR_SOURCE_ASSET_DIR ""
#endif
#ifndef TDPAIR_INSTALL_ASSET_DIR
#define TDPAIR_INSTALL_ASSET_DIR ""
#endif

namespace tdpair {

// ---------------------------------------------------------------------------
// Labels

namespace {

bool looks_like_label(std::string_view text) {
  if (text == "phi") return true;
  if (text.empty()) return false;
  for (char c : text) {
    if (c != 'l' && c != 'r' && !std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return text[0] == 'l' || text[0] == 'r';
}

std::optional<BasisLabel> try_parse_label(std::string_view text) {
  BasisLabel label;
  if (text == "phi") return label;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i++];
    if (c != 'l' && c != 'r') return std::nullopt;
    const std::size_t start = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    unsigned exp = 1;
    if (i > start) {
      if (text[start] == '0') return std::nullopt;
      exp = static_cast<unsigned>(std::stoul(std::string(text.substr(start, i - start))));
      if (exp == 1) return std::nullopt;
    }
    if (!label.letters.empty() && label.letters.back().first == c) return std::nullopt;
    label.letters.emplace_back(c, exp);
  }
  if (label.letters.empty()) return std::nullopt;
  return label;
}

std::string pad2(std::size_t n) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%02zu", n);
  return buf;
}

}  // namespace

BasisLabel BasisLabel::parse(std::string_view text) {
  auto label = try_parse_label(text);
  if (!label) throw Error("'" + std::string(text) + "' is not a canonical basis label");
  return *label;
}

bool BasisLabel::is_canonical(std::string_view text) { return try_parse_label(text).has_value(); }

BasisLabel BasisLabel::r_power(unsigned i) {
  BasisLabel label;
  if (i > 0) label.letters.emplace_back('r', i);
  return label;
}

BasisLabel BasisLabel::l_power_r_power(unsigned h, unsigned i) {
  BasisLabel label;
  if (h > 0) label.letters.emplace_back('l', h);
  if (i > 0) label.letters.emplace_back('r', i);
  return label;
}

std::string BasisLabel::to_string() const {
  if (letters.empty()) return "phi";
  std::string out;
  for (const auto& [c, e] : letters) {
    out += c;
    if (e != 1) out += std::to_string(e);
  }
  return out;
}

std::vector<std::size_t> binomial_row(std::size_t d) {
  std::vector<std::size_t> row{1};
  for (std::size_t i = 1; i <= d; ++i) row.push_back(row.back() * (d - i + 1) / i);
  return row;
}

// ---------------------------------------------------------------------------
// Tables

std::optional<std::size_t> ModuleTable::find(std::string_view label) const {
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (basis[i] == label) return i;
  }
  return std::nullopt;
}

std::size_t ModuleTable::index_of(std::string_view label) const {
  auto i = find(label);
  if (!i) throw Error("label '" + std::string(label) + "' is not in the basis");
  return *i;
}

namespace {

void serialize_terms(const ModuleTable& t, const std::vector<Term>& terms, std::string& out) {
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const Term& term = terms[k];
    if (k == 0) {
      if (term.negative) out += "-";
    } else {
      out += term.negative ? " - " : " + ";
    }
    if (term.coeff) out += term.coeff->to_coefficient_string() + "*";
    out += t.basis[term.target];
  }
}

}  // namespace

std::string ModuleTable::serialize() const {
  std::string out = "tdpair-appendix " + std::to_string(kAssetFormatVersion) + "\n";
  out += "d " + std::to_string(d) + "\n\nBASIS\n";
  for (const auto& block : blocks) {
    for (std::size_t k = 0; k < block.size(); ++k) out += (k ? " " : "") + block[k];
    out += "\n";
  }
  for (int star = 0; star < 2; ++star) {
    out += star ? "\nACTION ASTAR\n" : "\nACTION A\n";
    const auto& action = star ? astar_action : a_action;
    for (std::size_t j = 0; j < basis.size(); ++j) {
      out += basis[j] + " : ";
      serialize_terms(*this, action[j], out);
      out += "\n";
    }
  }
  return out;
}

std::size_t ModuleTable::term_count() const {
  std::size_t n = 0;
  for (const auto& terms : a_action) n += terms.size();
  for (const auto& terms : astar_action) n += terms.size();
  return n;
}

namespace {

template <class Table, class Fn>
auto locate_term(Table& t, std::size_t index, Fn&& fn) {
  for (int star = 0; star < 2; ++star) {
    auto& action = star ? t.astar_action : t.a_action;
    for (std::size_t j = 0; j < action.size(); ++j) {
      if (index < action[j].size()) return fn(star != 0, j, action[j][index]);
      index -= action[j].size();
    }
  }
  throw Error("term index out of range");
}

}  // namespace

ModuleTable ModuleTable::with_flipped_sign(std::size_t term_index) const {
  ModuleTable copy = *this;
  locate_term(copy, term_index, [](bool, std::size_t, Term& term) {
    term.negative = !term.negative;
    return 0;
  });
  return copy;
}

std::string ModuleTable::describe_term(std::size_t term_index) const {
  return locate_term(*this, term_index, [&](bool star, std::size_t j, const Term& term) {
    std::string out = std::string(star ? "astar." : "a.") + basis[j] + " -> ";
    if (term.coeff) out += term.coeff->to_coefficient_string() + "*";
    return out + basis[term.target];
  });
}

void ModuleTable::check_structure() const {
  if (d > kMaxAppendixD) throw Error("tables exist only for d <= 5");
  if (blocks.size() != d + 1) {
    throw Error("expected " + std::to_string(d + 1) + " row blocks, found " +
                std::to_string(blocks.size()));
  }
  const auto binom = binomial_row(d);
  for (std::size_t j = 0; j <= d; ++j) {
    if (blocks[j].size() != binom[j]) {
      throw Error("row block " + std::to_string(j) + " has " + std::to_string(blocks[j].size()) +
                  " labels, expected " + std::to_string(binom[j]));
    }
  }
  if (basis.size() != (std::size_t{1} << d)) throw Error("basis size is not 2^d");
  if (basis[0] != "phi") throw Error("the first basis label must be phi");
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t k = i + 1; k < basis.size(); ++k)
      if (basis[i] == basis[k]) throw Error("duplicate basis label '" + basis[i] + "'");
  for (int star = 0; star < 2; ++star) {
    const auto& action = star ? astar_action : a_action;
    const char* name = star ? "astar" : "a";
    if (action.size() != basis.size()) throw Error(std::string("incomplete action of ") + name);
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const Expr want = Expr::symbol(
          {star ? SymbolKind::ThetaStar : SymbolKind::Theta, block_of[j]});
      std::size_t diagonal = 0;
      for (const Term& t : action[j]) {
        if (t.target != j) continue;
        ++diagonal;
        if (t.negative || !t.coeff || !(*t.coeff == want)) {
          throw Error(std::string(name) + "." + basis[j] + ": diagonal coefficient must be " +
                      want.to_string());
        }
      }
      if (diagonal != 1) {
        throw Error(std::string(name) + "." + basis[j] +
                    ": expected exactly one diagonal term");
      }
    }
  }
}

namespace {

struct Line {
  std::size_t number;
  std::string_view text;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<Term> parse_entry(ExprParser& p, const ModuleTable& t) {
  std::vector<Term> terms;
  auto label_at = [&](const Token& tok) {
    if (!BasisLabel::is_canonical(tok.text)) {
      p.fail(tok, "'" + tok.text + "' is not a canonical basis label");
    }
    auto idx = t.find(tok.text);
    if (!idx) p.fail(tok, "label '" + tok.text + "' is not in the basis");
    return *idx;
  };
  auto is_label_token = [&](const Token& tok) {
    return tok.kind == Token::Kind::Ident && looks_like_label(tok.text);
  };
  bool first = true;
  while (true) {
    Term term;
    if (p.at_punct('+') || p.at_punct('-')) {
      term.negative = p.take().text[0] == '-';
    } else if (!first) {
      p.fail(p.peek(), "expected '+' or '-' between terms, found '" + p.peek().text + "'");
    }
    if (is_label_token(p.peek())) {
      term.target = label_at(p.take());
    } else {
      Expr coeff = p.parse_power();
      bool done = false;
      while (!done) {
        if (!(p.at_punct('*') || p.at_punct('/'))) {
          p.fail(p.peek(), p.at_end() ? "term ends without a basis label"
                                      : "expected '*' before basis label, found '" +
                                            p.peek().text + "'");
        }
        const bool mul = p.take().text[0] == '*';
        if (mul && is_label_token(p.peek())) {
          term.target = label_at(p.take());
          done = true;
        } else {
          coeff = Expr::binary(mul ? Expr::Op::Mul : Expr::Op::Div, std::move(coeff),
                               p.parse_unary());
        }
      }
      term.coeff = std::move(coeff);
    }
    terms.push_back(std::move(term));
    first = false;
    if (p.at_end()) break;
  }
  return terms;
}

}  // namespace

ModuleTable parse_table(std::string_view text, std::optional<std::size_t> expected_d) {
  std::vector<Line> lines;
  {
    std::size_t number = 1;
    std::size_t start = 0;
    while (start <= text.size()) {
      std::size_t end = text.find('\n', start);
      if (end == std::string_view::npos) end = text.size();
      std::string_view raw = text.substr(start, end - start);
      std::string_view body = trim(raw);
      if (!body.empty() && body[0] != '#') lines.push_back({number, raw});
      ++number;
      start = end + 1;
    }
  }
  std::size_t pos = 0;
  auto next_line = [&](const char* what) -> const Line& {
    if (pos >= lines.size()) {
      throw ParseError(lines.empty() ? 1 : lines.back().number + 1, 1,
                       std::string("unexpected end of table, expected ") + what);
    }
    return lines[pos++];
  };

  const Line& header = next_line("header");
  const std::string expect_header = "tdpair-appendix " + std::to_string(kAssetFormatVersion);
  if (trim(header.text) != expect_header) {
    throw ParseError(header.number, 1, "expected header '" + expect_header + "'");
  }
  const Line& dline = next_line("'d N'");
  ModuleTable t;
  {
    std::string_view s = trim(dline.text);
    if (s.substr(0, 2) != "d " || s.size() < 3) throw ParseError(dline.number, 1, "expected 'd N'");
    std::string_view num = trim(s.substr(2));
    for (char c : num) {
      if (!std::isdigit(static_cast<unsigned char>(c))) {
        throw ParseError(dline.number, 3, "expected a nonnegative integer");
      }
    }
    t.d = std::stoul(std::string(num));
    if (t.d > kMaxAppendixD) throw ParseError(dline.number, 3, "d must be at most 5");
    if (expected_d && *expected_d != t.d) {
      throw ParseError(dline.number, 3,
                       "table is for d=" + std::to_string(t.d) + ", expected d=" +
                           std::to_string(*expected_d));
    }
  }
  const Line& basis_line = next_line("'BASIS'");
  if (trim(basis_line.text) != "BASIS") throw ParseError(basis_line.number, 1, "expected 'BASIS'");
  while (pos < lines.size() && trim(lines[pos].text) != "ACTION A") {
    const Line& l = lines[pos++];
    std::vector<std::string> block;
    std::string_view s = l.text;
    std::size_t i = 0;
    while (i < s.size()) {
      while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
      const std::size_t start = i;
      while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
      if (i == start) break;
      std::string_view word = s.substr(start, i - start);
      if (!BasisLabel::is_canonical(word)) {
        throw ParseError(l.number, start + 1,
                         "'" + std::string(word) + "' is not a canonical basis label");
      }
      if (t.find(word)) {
        throw ParseError(l.number, start + 1, "duplicate basis label '" + std::string(word) + "'");
      }
      block.emplace_back(word);
      t.basis.emplace_back(word);
      t.block_of.push_back(t.blocks.size());
    }
    t.blocks.push_back(std::move(block));
  }
  for (int star = 0; star < 2; ++star) {
    const char* section = star ? "ACTION ASTAR" : "ACTION A";
    const Line& sl = next_line(section);
    if (trim(sl.text) != section) {
      throw ParseError(sl.number, 1, std::string("expected '") + section + "'");
    }
    auto& action = star ? t.astar_action : t.a_action;
    action.assign(t.basis.size(), {});
    std::vector<bool> seen(t.basis.size(), false);
    while (pos < lines.size() && trim(lines[pos].text) != "ACTION ASTAR") {
      const Line& l = lines[pos++];
      ExprParser p(l.text, l.number, t.d);
      const Token head = p.take();
      if (head.kind != Token::Kind::Ident || !looks_like_label(head.text)) {
        p.fail(head, "expected a basis label at the start of the entry");
      }
      if (!BasisLabel::is_canonical(head.text)) {
        p.fail(head, "'" + head.text + "' is not a canonical basis label");
      }
      auto idx = t.find(head.text);
      if (!idx) p.fail(head, "label '" + head.text + "' is not in the basis");
      if (seen[*idx]) p.fail(head, "second entry for '" + head.text + "'");
      seen[*idx] = true;
      p.expect_punct(':');
      action[*idx] = parse_entry(p, t);
    }
    for (std::size_t j = 0; j < seen.size(); ++j) {
      if (!seen[j]) {
        throw ParseError(sl.number, 1,
                         std::string(section) + " has no entry for '" + t.basis[j] + "'");
      }
    }
    if (star && pos < lines.size()) {
      throw ParseError(lines[pos].number, 1, "unexpected content after ACTION ASTAR");
    }
  }
  t.check_structure();
  return t;
}

// ---------------------------------------------------------------------------
// Assets

std::filesystem::path default_asset_dir() {
  if (const char* env = std::getenv("TDPAIR_ASSETS"); env && *env) return env;
  const std::filesystem::path source = TDPAIR_SOURCE_ASSET_DIR;
  std::error_code ec;
  if (!source.empty() && std::filesystem::exists(asset_path(source, 0), ec)) return source;
  return TDPAIR_INSTALL_ASSET_DIR;
}

std::filesystem::path asset_path(const std::filesystem::path& dir, std::size_t d) {
  return dir / ("appendix_d" + std::to_string(d) + ".txt");
}

std::string read_asset(const std::filesystem::path& dir, std::size_t d) {
  if (d > kMaxAppendixD) throw Error("no table for d=" + std::to_string(d) + " (d <= 5)");
  const auto path = asset_path(dir, d);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read table asset " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ModuleTable load_table(const std::filesystem::path& dir, std::size_t d) {
  const std::string text = read_asset(dir, d);
  try {
    return parse_table(text, d);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), e.column(), asset_path(dir, d).filename().string() + ": " +
                                               std::string(e.what()));
  }
}

std::string asset_version_string() {
  return "tdpair-appendix " + std::to_string(kAssetFormatVersion);
}

// ---------------------------------------------------------------------------
// Realization

template <class F>
Vector<typename F::Scalar> ModuleRealization<F>::unit(std::size_t index) const {
  Vector<Scalar> v(basis.size(), context.field.zero());
  v.at(index) = context.field.one();
  return v;
}

template <class F>
ModuleRealization<F> realize(const ModuleTable& table, const SpecializationContext<F>& ctx) {
  using S = typename F::Scalar;
  if (ctx.d != table.d) {
    throw Error("context has d=" + std::to_string(ctx.d) + " but the table has d=" +
                std::to_string(table.d));
  }
  const F& field = ctx.field;
  const std::size_t n = table.dim();
  ModuleRealization<F> real;
  real.d = table.d;
  real.context = ctx;
  real.basis = table.basis;
  for (int star = 0; star < 2; ++star) {
    Matrix<S> m = Matrix<S>::zeros(field, n, n);
    const auto& action = star ? table.astar_action : table.a_action;
    for (std::size_t j = 0; j < n; ++j) {
      for (const Term& term : action[j]) {
        S value = term.coeff ? term.coeff->evaluate(ctx) : field.one();
        if (term.negative) value = -value;
        m(term.target, j) += value;
      }
    }
    (star ? real.astar : real.a) = std::move(m);
  }
  try {
    real.e = lagrange_idempotents(field, real.a, std::span<const S>(ctx.theta));
  } catch (const MinimalPolynomialFailure& e) {
    throw RealizationFailure("minpoly/a", e.what());
  }
  try {
    real.estar = lagrange_idempotents(field, real.astar, std::span<const S>(ctx.theta_star));
  } catch (const MinimalPolynomialFailure& e) {
    throw RealizationFailure("minpoly/astar", e.what());
  }
  return real;
}

namespace {

template <class S>
std::size_t nonzero_count(const Matrix<S>& m) {
  std::size_t n = 0;
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) n += is_zero(m(r, c)) ? 0 : 1;
  return n;
}

template <class S>
std::string nonzero_detail(const Matrix<S>& m) {
  return std::to_string(nonzero_count(m)) + " nonzero entries";
}

std::string ijk(std::size_t i, std::size_t j) {
  return "i=" + std::to_string(i) + ",j=" + std::to_string(j);
}

}  // namespace

template <class F>
std::vector<Check> verify_relations(const ModuleRealization<F>& real) {
  using S = typename F::Scalar;
  using M = Matrix<S>;
  const F& field = real.context.field;
  const std::size_t d = real.d;
  const std::size_t n = real.basis.size();
  const M id = M::identity(field, n);
  const M zero = M::zeros(field, n, n);
  CheckList out;

  for (int star = 0; star < 2; ++star) {
    const std::string name = star ? "estar" : "e";
    const auto& es = star ? real.estar : real.e;
    const M& op = star ? real.astar : real.a;
    const auto& th = star ? real.context.theta_star : real.context.theta;
    const M residual = eigen_product(field, op, std::span<const S>(th));
    out.add(std::string("minpoly/") + (star ? "astar" : "a"), residual.is_zero(),
            residual.is_zero() ? "" : nonzero_detail(residual));
    M sum = zero;
    M recon = zero;
    for (std::size_t i = 0; i <= d; ++i) {
      for (std::size_t j = 0; j <= d; ++j) {
        const M prod = es[i] * es[j];
        const bool ok = i == j ? prod == es[i] : prod.is_zero();
        out.add("orthogonal/" + name + "/" + ijk(i, j), ok,
                ok ? "" : (i == j ? "not idempotent" : nonzero_detail(prod)));
      }
      sum += es[i];
      recon += es[i] * th[i];
    }
    out.add("complete/" + name, sum == id, sum == id ? "" : "sum differs from identity");
    out.add(std::string("reconstruct/") + (star ? "astar" : "a"), recon == op,
            recon == op ? "" : "sum of theta_i e_i differs from the operator");
  }

  // e*_i a^k e*_j = 0 and e_i a*^k e_j = 0 whenever k < |i - j|.
  for (int star = 0; star < 2; ++star) {
    const auto& es = star ? real.e : real.estar;
    const M& op = star ? real.astar : real.a;
    const std::string name = star ? "vanish/e.astar^k.e/" : "vanish/estar.a^k.estar/";
    for (std::size_t j = 0; j <= d; ++j) {
      M power_times_ej = es[j];
      for (std::size_t k = 0; k < d; ++k) {
        if (k > 0) power_times_ej = op * power_times_ej;
        for (std::size_t i = 0; i <= d; ++i) {
          const std::size_t gap = i > j ? i - j : j - i;
          if (k >= gap) continue;
          const M prod = es[i] * power_times_ej;
          out.add(name + ijk(i, j) + ",k=" + std::to_string(k), prod.is_zero(),
                  prod.is_zero() ? "" : nonzero_detail(prod));
        }
      }
    }
  }
  return out.take();
}

template <class F>
std::vector<Check> mu_certificate(const ModuleRealization<F>& real) {
  using S = typename F::Scalar;
  using V = Vector<S>;
  const F& field = real.context.field;
  const auto& ctx = real.context;
  const std::size_t d = real.d;
  const std::size_t n = real.basis.size();
  CheckList out("certificate/");

  auto basis_vector = [&](const BasisLabel& label) -> std::optional<V> {
    for (std::size_t i = 0; i < n; ++i) {
      if (real.basis[i] == label.to_string()) return real.unit(i);
    }
    return std::nullopt;
  };
  auto shift = [&](const Matrix<S>& op, const S& t, const V& v) {
    V w = op * v;
    for (std::size_t k = 0; k < n; ++k) w[k] -= t * v[k];
    return w;
  };
  auto scaled = [&](V v, const S& k) {
    for (auto& x : v) x *= k;
    return v;
  };
  auto expect_label = [&](const std::string& id, const V& got, const BasisLabel& label) {
    auto want = basis_vector(label);
    if (!want) {
      out.add(id, false, "label " + label.to_string() + " missing from the basis");
      return;
    }
    out.add(id, got == *want, got == *want ? "" : "image differs from " + label.to_string());
  };

  const V phi = real.phi();
  const V astar_phi = real.astar * phi;
  out.add("astar-phi", astar_phi == scaled(phi, ctx.theta_star[0]),
          "a*.phi = ths0 phi");
  const V e0phi = real.estar[0] * phi;
  out.add("estar0-phi", e0phi == phi, "e*_0 phi = phi");
  {
    const V got = real.estar[0] * e0phi;
    out.add("i=0/split", got == phi, "e*_0 tau_0(a) e*_0 phi = phi");
  }
  if (d == 0) out.add("vacuous", true, "d = 0");

  for (std::size_t i = 1; i <= d; ++i) {
    const std::string pre = "i=" + std::to_string(i) + "/";
    for (std::size_t h = 0; h < i; ++h) {
      auto from = basis_vector(BasisLabel::r_power(static_cast<unsigned>(h)));
      if (!from) {
        out.add(pre + "r-chain/h=" + std::to_string(h), false, "missing r-power");
        continue;
      }
      expect_label(pre + "r-chain/h=" + std::to_string(h), shift(real.a, ctx.theta[h], *from),
                   BasisLabel::r_power(static_cast<unsigned>(h + 1)));
    }
    for (std::size_t h = 0; h + 2 <= i; ++h) {
      auto from = basis_vector(
          BasisLabel::l_power_r_power(static_cast<unsigned>(h), static_cast<unsigned>(i)));
      if (!from) {
        out.add(pre + "l-chain/h=" + std::to_string(h), false, "missing basis vector");
        continue;
      }
      expect_label(pre + "l-chain/h=" + std::to_string(h),
                   shift(real.astar, ctx.theta_star[i - h], *from),
                   BasisLabel::l_power_r_power(static_cast<unsigned>(h + 1),
                                               static_cast<unsigned>(i)));
    }
    if (auto top = basis_vector(BasisLabel::l_power_r_power(static_cast<unsigned>(i - 1),
                                                            static_cast<unsigned>(i)))) {
      const V got = shift(real.astar, ctx.theta_star[1], *top);
      const bool ok = got == scaled(phi, ctx.y[i - 1]);
      out.add(pre + "l-end", ok, ok ? "" : "image is not y_i phi");
    } else {
      out.add(pre + "l-end", false, "missing basis vector");
    }
    // e*_0 tau_i(a) e*_0 phi against y_i / prod_{j=1}^{i} (ths0 - thsj).
    V v = e0phi;
    for (std::size_t h = 0; h < i; ++h) v = shift(real.a, ctx.theta[h], v);
    v = real.estar[0] * v;
    S denom = field.one();
    for (std::size_t j = 1; j <= i; ++j) denom *= ctx.theta_star[0] - ctx.theta_star[j];
    const bool ok = v == scaled(phi, ctx.y[i - 1] / denom);
    out.add(pre + "split", ok, ok ? "" : "e*_0 tau_i(a) e*_0 phi is not y_i phi / prod");
  }
  return out.take();
}

template <class F>
ShapeResult shape_check(const ModuleRealization<F>& real) {
  ShapeResult result;
  CheckList out("shape/");
  const auto binom = binomial_row(real.d);
  for (std::size_t i = 0; i <= real.d; ++i) {
    result.ranks.push_back(rank(real.e[i]));
    result.ranks_star.push_back(rank(real.estar[i]));
    out.add("e/i=" + std::to_string(i), result.ranks[i] == binom[i],
            "rank " + std::to_string(result.ranks[i]) + ", expected " + std::to_string(binom[i]));
    out.add("estar/i=" + std::to_string(i), result.ranks_star[i] == binom[i],
            "rank " + std::to_string(result.ranks_star[i]) + ", expected " +
                std::to_string(binom[i]));
  }
  bool symmetric = result.ranks == result.ranks_star;
  bool unimodal = true;
  const std::size_t d = real.d;
  for (std::size_t i = 0; i <= d; ++i) {
    symmetric = symmetric && result.ranks[i] == result.ranks[d - i];
    if (2 * i < d) unimodal = unimodal && result.ranks[i] <= result.ranks[i + 1];
  }
  out.add("symmetric", symmetric);
  out.add("unimodal", unimodal);
  result.checks = out.take();
  return result;
}

template <class F>
std::vector<Check> triple_product_check(const ModuleRealization<F>& real) {
  using S = typename F::Scalar;
  const F& field = real.context.field;
  const auto& ctx = real.context;
  const std::size_t d = real.d;
  const std::span<const S> th(ctx.theta);
  const std::span<const S> ths(ctx.theta_star);
  CheckList out("triple/");

  const auto phi = real.phi();
  auto sandwich = [&](const Matrix<S>& e) { return real.estar[0] * (e * (real.estar[0] * phi)); };
  auto scaled_phi = [&](const S& k) {
    auto v = phi;
    for (auto& x : v) x *= k;
    return v;
  };
  std::vector<S> zeta{field.one()};
  zeta.insert(zeta.end(), ctx.y.begin(), ctx.y.end());

  const auto low = sandwich(real.e[0]);
  out.add("e0/nonzero", !is_zero_vector(low), "e*_0 e_0 e*_0 phi");
  // e*_0 e_0 e*_0 = (sum_i eta_{d-i}(th0) eta*_{d-i}(ths0) zeta_i) / (eta_d(th0) eta*_d(ths0))
  S sum = field.zero();
  for (std::size_t i = 0; i <= d; ++i) {
    sum += build_poly(field, PolyKind::Eta, d - i, th)(th[0]) *
           build_poly(field, PolyKind::EtaStar, d - i, ths)(ths[0]) * zeta[i];
  }
  const S low_scale = sum / (build_poly(field, PolyKind::Eta, d, th)(th[0]) *
                             build_poly(field, PolyKind::EtaStar, d, ths)(ths[0]));
  out.add("e0/formula", low == scaled_phi(low_scale), "eta-expansion formula");

  const auto high = sandwich(real.e[d]);
  out.add("ed/nonzero", !is_zero_vector(high), "e*_0 e_d e*_0 phi");
  const S high_scale = zeta[d] / (build_poly(field, PolyKind::Tau, d, th)(th[d]) *
                                  build_poly(field, PolyKind::EtaStar, d, ths)(ths[0]));
  out.add("ed/formula", high == scaled_phi(high_scale),
          "tau_d(th_d)^-1 eta*_d(ths_0)^-1 zeta_d");
  return out.take();
}

template <class F>
std::vector<Check> appendix_trial(const ModuleTable& table, const F& field, std::uint64_t seed,
                                  std::size_t trial, bool certificate) {
  CheckList out("trial" + pad2(trial) + "/");
  Sampler<F> sampler(field, derive_seed(seed, trial));
  const auto ctx = random_admissible_context(table.d, sampler);
  try {
    const auto real = realize(table, ctx);
    out.append(verify_relations(real));
    out.append(shape_check(real).checks);
    if (certificate) out.append(mu_certificate(real));
  } catch (const RealizationFailure& e) {
    out.add(e.invariant(), false, e.what());
  } catch (const Error& e) {
    out.add("realize", false, e.what());
  }
  return out.take();
}

#define TDPAIR_INSTANTIATE(F)                                                               \
  template struct ModuleRealization<F>;                                                     \
  template ModuleRealization<F> realize(const ModuleTable&, const SpecializationContext<F>&); \
  template std::vector<Check> verify_relations(const ModuleRealization<F>&);                \
  template std::vector<Check> mu_certificate(const ModuleRealization<F>&);                  \
  template ShapeResult shape_check(const ModuleRealization<F>&);                            \
  template std::vector<Check> triple_product_check(const ModuleRealization<F>&);            \
  template std::vector<Check> appendix_trial(const ModuleTable&, const F&, std::uint64_t,   \
                                             std::size_t, bool);

TDPAIR_INSTANTIATE(RationalField)
TDPAIR_INSTANTIATE(PrimeField)

#undef TDPAIR_INSTANTIATE

}  // namespace tdpair
