#include "tdpair/tdsystem.hpp"

#include <deque>
#include <json.hpp>

#include "tdpair/poly.hpp"

namespace tdpair {

// ---------------------------------------------------------------------------
// Construction

template <class F>
Construction<F> construct_from_params(const F& field, const ParameterArray<F>& pa,
                                      const ModuleTable& table) {
  using S = typename F::Scalar;
  pa.check_shape();
  if (pa.d != table.d) {
    throw Error("parameter array has d=" + std::to_string(pa.d) + " but the table has d=" +
                std::to_string(table.d));
  }
  const ValidationResult vr = validate_parameter_array(field, pa);
  if (!vr.passed) {
    std::string conditions;
    std::string details;
    for (const auto& f : vr.failures) {
      conditions += (conditions.empty() ? "" : ", ") + f.condition;
      details += (details.empty() ? "" : "; ") + f.detail;
    }
    throw InadmissibleContext(conditions, details);
  }
  std::vector<S> y(pa.zeta.begin() + 1, pa.zeta.end());
  const auto ctx = derive_context(field, pa.theta, pa.theta_star, std::move(y));

  Construction<F> out{realize(table, ctx), {}};
  const auto& real = out.real;
  CheckList checks("g/");
  const auto phi = real.phi();
  const auto e0phi = real.estar[0] * phi;
  auto v = e0phi;
  S denom = field.one();
  for (std::size_t i = 1; i <= pa.d; ++i) {
    auto next = real.a * v;
    for (std::size_t k = 0; k < next.size(); ++k) next[k] -= pa.theta[i - 1] * v[k];
    v = std::move(next);
    denom *= pa.theta_star[0] - pa.theta_star[i];
    auto g = real.estar[0] * v;
    const S scale = pa.zeta[i] / denom;
    for (std::size_t k = 0; k < g.size(); ++k) g[k] -= scale * phi[k];
    checks.add("i=" + std::to_string(i), is_zero_vector(g),
               is_zero_vector(g) ? "g_i phi = 0" : "g_i phi is nonzero");
  }
  out.checks = checks.take();
  return out;
}

// ---------------------------------------------------------------------------
// Closure and restriction

template <class F>
Subspace<typename F::Scalar> submodule_closure(
    const F& field, const std::vector<Matrix<typename F::Scalar>>& ops,
    const Vector<typename F::Scalar>& seed) {
  using S = typename F::Scalar;
  const std::size_t n = seed.size();
  std::vector<Vector<S>> rows;
  std::vector<std::size_t> pivots;
  // Rows are kept in insertion order, each zero at the pivots of earlier
  // rows and scaled to 1 at its own pivot.
  auto insert = [&](Vector<S> v) -> bool {
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const S c = v[pivots[k]];
      if (is_zero(c)) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (!is_zero(rows[k][j])) v[j] -= c * rows[k][j];
      }
    }
    std::size_t p = 0;
    while (p < n && is_zero(v[p])) ++p;
    if (p == n) return false;
    const S inv = inverse(v[p]);
    for (auto& x : v) x *= inv;
    rows.push_back(std::move(v));
    pivots.push_back(p);
    return true;
  };
  std::deque<std::size_t> queue;
  if (insert(seed)) queue.push_back(0);
  while (!queue.empty()) {
    const std::size_t k = queue.front();
    queue.pop_front();
    for (const auto& op : ops) {
      if (insert(op * rows[k])) queue.push_back(rows.size() - 1);
    }
  }
  Matrix<S> m = Matrix<S>::zeros(field, rows.size(), n);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = rows[i][j];
  auto ech = row_reduce(std::move(m));
  return {std::move(ech.reduced), std::move(ech.pivots)};
}

template <class F>
Subspace<typename F::Scalar> submodule_closure(const ModuleRealization<F>& real,
                                               const Vector<typename F::Scalar>& seed) {
  return submodule_closure(real.context.field, {real.a, real.astar}, seed);
}

template <class S>
Matrix<S> restrict_to(const Matrix<S>& op, const Subspace<S>& sub) {
  const std::size_t k = sub.dim();
  const std::size_t n = op.cols();
  if (k == 0) throw Error("cannot restrict to the zero subspace");
  const S zero = sub.basis(0, sub.pivots[0]) - sub.basis(0, sub.pivots[0]);
  Matrix<S> r(k, k, zero);
  for (std::size_t j = 0; j < k; ++j) {
    Vector<S> b(sub.basis.row(j).begin(), sub.basis.row(j).end());
    const Vector<S> w = op * b;
    Vector<S> back(n, zero);
    for (std::size_t i = 0; i < k; ++i) {
      r(i, j) = w[sub.pivots[i]];
      if (is_zero(r(i, j))) continue;
      for (std::size_t c = 0; c < n; ++c) back[c] += r(i, j) * sub.basis(i, c);
    }
    if (!(back == w)) throw Error("subspace is not invariant under the operator");
  }
  return r;
}

// ---------------------------------------------------------------------------
// Irreducibility

namespace {

using u128 = unsigned __int128;

// Montgomery arithmetic modulo an odd prime below 2^63.
class Montgomery {
 public:
  explicit Montgomery(std::uint64_t p) : p_(p) {
    std::uint64_t inv = p;
    for (int i = 0; i < 6; ++i) inv *= 2 - p * inv;
    neg_inv_ = ~inv + 1;
    const std::uint64_t r1 = static_cast<std::uint64_t>((u128(1) << 64) % p);
    r2_ = static_cast<std::uint64_t>(u128(r1) * r1 % p);
    one_ = r1;
  }

  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
    const u128 t = u128(a) * b;
    const std::uint64_t m = static_cast<std::uint64_t>(t) * neg_inv_;
    std::uint64_t u = static_cast<std::uint64_t>((t + u128(m) * p_) >> 64);
    return u >= p_ ? u - p_ : u;
  }
  std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
    const std::uint64_t s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const {
    return a >= b ? a - b : a + (p_ - b);
  }
  std::uint64_t to(std::uint64_t a) const { return mul(a % p_, r2_); }
  std::uint64_t one() const { return one_; }
  std::uint64_t inv(std::uint64_t a) const {
    std::uint64_t result = one_;
    std::uint64_t base = a;
    for (std::uint64_t e = p_ - 2; e; e >>= 1) {
      if (e & 1) result = mul(result, base);
      base = mul(base, base);
    }
    return result;
  }

 private:
  std::uint64_t p_;
  std::uint64_t neg_inv_ = 0;
  std::uint64_t r2_ = 0;
  std::uint64_t one_ = 0;
};

// Span of all words in the operators, entries given as residues mod p.
// Returns the span dimension, stopping early once it reaches m^2.
std::size_t fast_span_dim(std::size_t m, const std::vector<std::vector<std::uint64_t>>& ops,
                          std::uint64_t p) {
  const Montgomery mont(p);
  const std::size_t len = m * m;
  std::vector<std::vector<std::uint64_t>> mops;
  for (const auto& op : ops) {
    std::vector<std::uint64_t> v(len);
    for (std::size_t i = 0; i < len; ++i) v[i] = mont.to(op[i]);
    mops.push_back(std::move(v));
  }
  std::vector<std::vector<std::uint64_t>> rows;
  std::vector<std::size_t> pivots;
  auto insert = [&](std::vector<std::uint64_t> v) -> bool {
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const std::uint64_t c = v[pivots[k]];
      if (c == 0) continue;
      const auto& row = rows[k];
      for (std::size_t j = pivots[k]; j < len; ++j) {
        if (row[j] != 0) v[j] = mont.sub(v[j], mont.mul(c, row[j]));
      }
    }
    std::size_t piv = 0;
    while (piv < len && v[piv] == 0) ++piv;
    if (piv == len) return false;
    const std::uint64_t inv = mont.inv(v[piv]);
    for (std::size_t j = piv; j < len; ++j) v[j] = mont.mul(v[j], inv);
    rows.push_back(std::move(v));
    pivots.push_back(piv);
    return true;
  };
  auto multiply = [&](const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
    std::vector<std::uint64_t> c(len, 0);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t k = 0; k < m; ++k) {
        const std::uint64_t aik = a[i * m + k];
        if (aik == 0) continue;
        for (std::size_t j = 0; j < m; ++j) {
          const std::uint64_t bkj = b[k * m + j];
          if (bkj != 0) c[i * m + j] = mont.add(c[i * m + j], mont.mul(aik, bkj));
        }
      }
    return c;
  };
  std::vector<std::uint64_t> id(len, 0);
  for (std::size_t i = 0; i < m; ++i) id[i * m + i] = mont.one();
  std::deque<std::vector<std::uint64_t>> queue;
  insert(id);
  queue.push_back(std::move(id));
  while (!queue.empty() && rows.size() < len) {
    const auto word = std::move(queue.front());
    queue.pop_front();
    for (const auto& op : mops) {
      auto next = multiply(op, word);
      if (insert(next)) queue.push_back(std::move(next));
      if (rows.size() == len) break;
    }
  }
  return rows.size();
}

template <class S>
std::size_t exact_span_dim(const Matrix<S>& a, const Matrix<S>& astar, const S& zero,
                           const S& one) {
  const std::size_t m = a.rows();
  const std::size_t len = m * m;
  std::vector<Vector<S>> rows;
  std::vector<std::size_t> pivots;
  auto flatten = [&](const Matrix<S>& x) {
    Vector<S> v;
    v.reserve(len);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) v.push_back(x(i, j));
    return v;
  };
  auto insert = [&](Vector<S> v) -> bool {
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const S c = v[pivots[k]];
      if (is_zero(c)) continue;
      for (std::size_t j = pivots[k]; j < len; ++j) {
        if (!is_zero(rows[k][j])) v[j] -= c * rows[k][j];
      }
    }
    std::size_t piv = 0;
    while (piv < len && is_zero(v[piv])) ++piv;
    if (piv == len) return false;
    const S inv = inverse(v[piv]);
    for (std::size_t j = piv; j < len; ++j) v[j] *= inv;
    rows.push_back(std::move(v));
    pivots.push_back(piv);
    return true;
  };
  const Matrix<S> id = Matrix<S>::identity(m, zero, one);
  std::deque<Matrix<S>> queue;
  insert(flatten(id));
  queue.push_back(id);
  while (!queue.empty() && rows.size() < len) {
    const Matrix<S> word = std::move(queue.front());
    queue.pop_front();
    for (const Matrix<S>* op : {&a, &astar}) {
      Matrix<S> next = *op * word;
      if (insert(flatten(next))) queue.push_back(std::move(next));
    }
  }
  return rows.size();
}

template <class S>
std::vector<std::uint64_t> residues(const Matrix<S>& x, const PrimeField& fp) {
  std::vector<std::uint64_t> out;
  out.reserve(x.rows() * x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) {
      if constexpr (std::is_same_v<S, ModP>) {
        out.push_back(x(i, j).value());
      } else {
        out.push_back(fp.from_rational(x(i, j)).value());
      }
    }
  return out;
}

// Exact recomputation over the rationals is only attempted up to this size.
constexpr std::size_t kExactBurnsideLimit = 6;

}  // namespace

template <class F>
IrreducibilityResult irreducibility_check(const F& field, const Matrix<typename F::Scalar>& a,
                                          const Matrix<typename F::Scalar>& astar) {
  IrreducibilityResult r;
  const std::size_t m = a.rows();
  if (!a.square() || !astar.square() || astar.rows() != m) {
    throw Error("irreducibility_check: operators must be square of equal size");
  }
  r.target = m * m;
  if (m <= 1) {
    r.span_dim = r.target;
    r.irreducible = true;
    r.method = "dimension <= 1";
    return r;
  }
  if constexpr (F::kind == FieldKind::PrimeField) {
    if (field.prime() % 2 == 1) {
      r.span_dim = fast_span_dim(m, {residues(a, field), residues(astar, field)}, field.prime());
      r.method = "word span mod p";
    } else {
      r.span_dim = exact_span_dim(a, astar, field.zero(), field.one());
      r.method = "word span (exact)";
    }
    r.irreducible = r.span_dim == r.target;
    return r;
  } else {
    const PrimeField fp(kDefaultPrime);
    try {
      r.span_dim = fast_span_dim(m, {residues(a, fp), residues(astar, fp)}, fp.prime());
      r.method = "word span mod " + std::to_string(kDefaultPrime);
      if (r.span_dim == r.target) {
        r.irreducible = true;
        return r;
      }
    } catch (const DivisionByZero&) {
      // a denominator vanishes mod p; fall through
    }
    if (m <= kExactBurnsideLimit) {
      r.span_dim = exact_span_dim(a, astar, field.zero(), field.one());
      r.method = "word span (exact)";
      r.irreducible = r.span_dim == r.target;
      return r;
    }
    r.irreducible = false;
    r.conclusive = false;
    r.method += "; exact recomputation skipped above dimension " +
                std::to_string(kExactBurnsideLimit);
    return r;
  }
}

// ---------------------------------------------------------------------------
// Extraction

template <class F>
bool TDSystemReport<F>::axioms_pass() const {
  for (const Check& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

template <class F>
std::string TDSystemReport<F>::to_json(const F& field) const {
  auto list = [&](const std::vector<Scalar>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& x : v) a.push_back(field.to_string(x));
    return a;
  };
  nlohmann::json j;
  j["dimension"] = dimension;
  j["diameter"] = diameter;
  j["eigenvalues"] = list(eigenvalues);
  j["dual_eigenvalues"] = list(dual_eigenvalues);
  j["shape"] = shape;
  j["split"] = list(split);
  j["sharp"] = sharp;
  j["irreducible"] = irreducibility.irreducible;
  j["irreducibility"] = {{"conclusive", irreducibility.conclusive},
                         {"span_dim", irreducibility.span_dim},
                         {"target", irreducibility.target},
                         {"method", irreducibility.method}};
  j["axiom_failures"] = nlohmann::json::array();
  for (const Check& c : checks) {
    if (!c.passed) j["axiom_failures"].push_back(c.id + ": " + c.detail);
  }
  j["notes"] = notes;
  return j.dump();
}

namespace {

template <class F>
struct Family {
  using S = typename F::Scalar;
  std::vector<Matrix<S>> idempotents;  // over the support
  std::vector<S> eigenvalues;          // over the support
  std::vector<std::size_t> ranks;      // over the support
  bool ok = true;
};

// Idempotents of `op` for the eigenvalue list, trimmed to the indices whose
// eigenspace is nonzero.  Records checks under `name`.
template <class F>
Family<F> eigen_family(const F& field, const Matrix<typename F::Scalar>& op,
                       const std::vector<typename F::Scalar>& th, const std::string& name,
                       CheckList& out) {
  using S = typename F::Scalar;
  using M = Matrix<S>;
  Family<F> fam;
  bool distinct = true;
  for (std::size_t i = 0; i < th.size(); ++i)
    for (std::size_t j = i + 1; j < th.size(); ++j) distinct = distinct && !(th[i] == th[j]);
  out.add("distinct/" + name, distinct, distinct ? "" : "eigenvalue list has repeats");
  const M residual = eigen_product(field, op, std::span<const S>(th));
  out.add("diagonalizable/" + name, residual.is_zero(),
          residual.is_zero() ? "" : "product of shifts has rank " + std::to_string(rank(residual)));
  if (!distinct || !residual.is_zero()) {
    fam.ok = false;
    return fam;
  }
  const auto all = lagrange_idempotents(field, op, std::span<const S>(th));
  std::vector<std::size_t> support;
  for (std::size_t i = 0; i < all.size(); ++i) {
    const std::size_t rk = rank(all[i]);
    if (rk == 0) continue;
    support.push_back(i);
    fam.idempotents.push_back(all[i]);
    fam.eigenvalues.push_back(th[i]);
    fam.ranks.push_back(rk);
  }
  const bool contiguous =
      !support.empty() && support.back() - support.front() + 1 == support.size();
  std::string detail;
  for (std::size_t i : support) detail += (detail.empty() ? "" : ",") + std::to_string(i);
  out.add("support/" + name, contiguous, "eigenvalue indices {" + detail + "}");
  fam.ok = contiguous;
  return fam;
}

}  // namespace

template <class F>
TDSystemReport<F> extract_td_system(const F& field, const Matrix<typename F::Scalar>& a,
                                    const Matrix<typename F::Scalar>& astar,
                                    const Subspace<typename F::Scalar>& sub,
                                    const std::vector<typename F::Scalar>& theta,
                                    const std::vector<typename F::Scalar>& theta_star) {
  using S = typename F::Scalar;
  using M = Matrix<S>;
  TDSystemReport<F> rep;
  CheckList out("td/");
  const M r = restrict_to(a, sub);
  const M rs = restrict_to(astar, sub);
  const std::size_t m = sub.dim();
  rep.dimension = m;

  const Family<F> fa = eigen_family(field, r, theta, "a", out);
  const Family<F> fs = eigen_family(field, rs, theta_star, "astar", out);
  if (!fa.ok || !fs.ok) {
    rep.checks = out.take();
    return rep;
  }
  rep.eigenvalues = fa.eigenvalues;
  rep.dual_eigenvalues = fs.eigenvalues;
  const bool same_diameter = fa.idempotents.size() == fs.idempotents.size();
  out.add("diameter", same_diameter,
          "a has " + std::to_string(fa.idempotents.size()) + " eigenspaces, astar has " +
              std::to_string(fs.idempotents.size()));
  rep.diameter = fa.idempotents.size() - 1;

  // A* acts on E_i V within E_{i-1}V + E_iV + E_{i+1}V, and dually.
  for (int star = 0; star < 2; ++star) {
    const auto& es = star ? fs.idempotents : fa.idempotents;
    const M& op = star ? r : rs;
    const std::string name = star ? "tridiagonal/estar.a.estar/" : "tridiagonal/e.astar.e/";
    for (std::size_t i = 0; i < es.size(); ++i) {
      const M left = es[i] * op;
      for (std::size_t j = 0; j < es.size(); ++j) {
        if ((i > j ? i - j : j - i) <= 1) continue;
        const M prod = left * es[j];
        out.add(name + "i=" + std::to_string(i) + ",j=" + std::to_string(j), prod.is_zero(),
                prod.is_zero() ? "" : "nonzero block outside the tridiagonal band");
      }
    }
  }

  if (same_diameter) {
    rep.shape = fa.ranks;
    const bool equal = fa.ranks == fs.ranks;
    out.add("shape/dual-agrees", equal, "ranks of e_i and e*_i coincide");
    bool symmetric = true;
    for (std::size_t i = 0; i < rep.shape.size(); ++i) {
      symmetric = symmetric && rep.shape[i] == rep.shape[rep.shape.size() - 1 - i];
    }
    out.add("shape/symmetric", symmetric);
  }
  rep.sharp = fs.ranks.front() == 1;

  rep.irreducibility = irreducibility_check(field, r, rs);
  out.add("irreducible", rep.irreducibility.irreducible,
          "span " + std::to_string(rep.irreducibility.span_dim) + " of " +
              std::to_string(rep.irreducibility.target) + " (" + rep.irreducibility.method +
              (rep.irreducibility.conclusive ? "" : ", inconclusive") + ")");

  if (rep.sharp) {
    const M& e0 = fs.idempotents.front();
    Vector<S> v;
    for (std::size_t c = 0; c < m && v.empty(); ++c) {
      auto col = e0.column(c);
      if (!is_zero_vector(col)) v = std::move(col);
    }
    std::size_t p = 0;
    while (is_zero(v[p])) ++p;
    const auto& th = fa.eigenvalues;
    const auto& ths = fs.eigenvalues;
    Vector<S> w = v;  // prod_{h<i} (R - th_h) v
    S denom = field.one();
    for (std::size_t i = 0; i <= rep.diameter; ++i) {
      if (i > 0) {
        Vector<S> next = r * w;
        for (std::size_t k = 0; k < m; ++k) next[k] -= th[i - 1] * w[k];
        w = std::move(next);
        denom *= ths[0] - ths[i];
      }
      const Vector<S> z = e0 * w;
      const S c = z[p] / v[p];
      rep.split.push_back(c * denom);
    }
  } else {
    rep.notes.push_back("not sharp: the split sequence is undefined");
  }
  rep.checks = out.take();
  return rep;
}

template <class F>
std::vector<Check> roundtrip(const F& field, const ParameterArray<F>& pa,
                             const ModuleTable& table) {
  CheckList out;
  Construction<F> c = construct_from_params(field, pa, table);
  out.append(c.checks);
  const auto sub = submodule_closure(c.real, c.real.phi());
  const std::size_t full = c.real.basis.size();
  out.add("closure/dimension", true,
          "closure of phi has dimension " + std::to_string(sub.dim()) + " of " +
              std::to_string(full));
  const auto rep = extract_td_system(field, c.real.a, c.real.astar, sub, pa.theta, pa.theta_star);
  out.append(rep.checks);
  if (rep.diameter < pa.d || sub.dim() < full) {
    out.add("degenerate", true, "degenerate parameter point: diameter " +
                                    std::to_string(rep.diameter) + ", closure dimension " +
                                    std::to_string(sub.dim()));
  }
  out.add("compare/eigenvalues", rep.eigenvalues == pa.theta);
  out.add("compare/dual-eigenvalues", rep.dual_eigenvalues == pa.theta_star);
  out.add("compare/sharp", rep.sharp, "rank e*_0 = 1 on the closure");
  std::string got;
  for (const auto& z : rep.split) got += (got.empty() ? "" : ",") + field.to_string(z);
  out.add("compare/split", rep.split == pa.zeta, "recovered (" + got + ")");
  return out.take();
}

#define TDPAIR_INSTANTIATE(F)                                                                  \
  template Construction<F> construct_from_params(const F&, const ParameterArray<F>&,          \
                                                 const ModuleTable&);                          \
  template Subspace<F::Scalar> submodule_closure(const F&, const std::vector<Matrix<F::Scalar>>&, \
                                                 const Vector<F::Scalar>&);                    \
  template Subspace<F::Scalar> submodule_closure(const ModuleRealization<F>&,                  \
                                                 const Vector<F::Scalar>&);                    \
  template Matrix<F::Scalar> restrict_to(const Matrix<F::Scalar>&, const Subspace<F::Scalar>&); \
  template IrreducibilityResult irreducibility_check(const F&, const Matrix<F::Scalar>&,      \
                                                     const Matrix<F::Scalar>&);               \
  template struct TDSystemReport<F>;                                                           \
  template TDSystemReport<F> extract_td_system(const F&, const Matrix<F::Scalar>&,            \
                                               const Matrix<F::Scalar>&,                      \
                                               const Subspace<F::Scalar>&,                    \
                                               const std::vector<F::Scalar>&,                 \
                                               const std::vector<F::Scalar>&);                \
  template std::vector<Check> roundtrip(const F&, const ParameterArray<F>&, const ModuleTable&);

TDPAIR_INSTANTIATE(RationalField)
TDPAIR_INSTANTIATE(PrimeField)

#undef TDPAIR_INSTANTIATE

}  // namespace tdpair
