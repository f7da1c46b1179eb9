#pragma once

// Explicit 2^d-dimensional modules for d <= 5, read from plain-text action
// tables, realized as exact matrices at a specialization, and checked
// against the defining relations.
//
// Asset format (one file per d, named appendix_d<d>.txt):
//
//   tdpair-appendix 1
//   d 2
//   BASIS
//   phi                      <- row block 0
//   r lr2                    <- row block 1
//   r2                       <- row block 2
//   ACTION A
//   lr2 : th1*lr2 + (y1 - eps0)*r2
//   ...
//   ACTION ASTAR
//   ...
//
// Each entry lists the image of one basis vector as a signed sum of terms
// `coeff*label` or bare `label`.  A coefficient is a product chain whose
// factors follow the grammar in expr.hpp; sums inside a coefficient must be
// parenthesized.  Lines starting with '#' and blank lines are ignored.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tdpair/expr.hpp"
#include "tdpair/matrix.hpp"
#include "tdpair/params.hpp"
#include "tdpair/report.hpp"

namespace tdpair {

inline constexpr int kAssetFormatVersion = 1;
inline constexpr std::size_t kMaxAppendixD = 5;

// A realized module violates one of its structural invariants.
class RealizationFailure : public Error {
 public:
  RealizationFailure(std::string invariant, const std::string& detail)
      : Error(invariant + ": " + detail), invariant_(std::move(invariant)) {}
  const std::string& invariant() const noexcept { return invariant_; }

 private:
  std::string invariant_;
};

// A word in l and r; the empty word is phi.  Canonical text alternates
// letters and omits exponent 1, e.g. "lr2l3r4".
struct BasisLabel {
  std::vector<std::pair<char, unsigned>> letters;

  // Throws Error unless `text` is "phi" or a canonical label.
  static BasisLabel parse(std::string_view text);
  static bool is_canonical(std::string_view text);
  static BasisLabel r_power(unsigned i);                  // r^i (phi when i = 0)
  static BasisLabel l_power_r_power(unsigned h, unsigned i);  // l^h r^i

  std::string to_string() const;
  friend bool operator==(const BasisLabel&, const BasisLabel&) = default;
};

struct Term {
  bool negative = false;
  std::optional<Expr> coeff;  // absent means 1
  std::size_t target = 0;     // basis index
};

struct ModuleTable {
  std::size_t d = 0;
  std::vector<std::vector<std::string>> blocks;  // row blocks 0..d
  std::vector<std::string> basis;                // blocks flattened
  std::vector<std::size_t> block_of;             // block index per basis entry
  std::vector<std::vector<Term>> a_action;       // per basis entry
  std::vector<std::vector<Term>> astar_action;

  std::size_t dim() const noexcept { return basis.size(); }
  // Throws Error for a label outside the basis.
  std::size_t index_of(std::string_view label) const;
  std::optional<std::size_t> find(std::string_view label) const;

  // Canonical text; parse_table(serialize()) reproduces the table.
  std::string serialize() const;

  // Number of terms over both actions, and a copy with the sign of one term
  // flipped (A terms first, in basis order, then A* terms).
  std::size_t term_count() const;
  ModuleTable with_flipped_sign(std::size_t term_index) const;
  std::string describe_term(std::size_t term_index) const;

  // |basis| = 2^d, block sizes C(d,j), phi first, diagonal coefficients
  // th j / ths j on block j.  Throws Error naming the violation.
  void check_structure() const;
};

// Throws ParseError (line, column) or Error for structural problems.  When
// `expected_d` is given the header must agree.
ModuleTable parse_table(std::string_view text, std::optional<std::size_t> expected_d = {});

// The asset directory used when none is supplied: the TDPAIR_ASSETS
// environment variable if set, else the source tree, else the install tree.
std::filesystem::path default_asset_dir();
std::filesystem::path asset_path(const std::filesystem::path& dir, std::size_t d);
// Throws Error if the file is missing or unreadable.
std::string read_asset(const std::filesystem::path& dir, std::size_t d);
ModuleTable load_table(const std::filesystem::path& dir, std::size_t d);
std::string asset_version_string();

template <class F>
struct ModuleRealization {
  using Scalar = typename F::Scalar;
  using Mat = Matrix<Scalar>;

  std::size_t d = 0;
  SpecializationContext<F> context;
  std::vector<std::string> basis;
  Mat a;      // column j is the image of basis vector j
  Mat astar;
  std::vector<Mat> e;      // primitive idempotents of a, in eigenvalue order
  std::vector<Mat> estar;  // same for astar

  Vector<Scalar> unit(std::size_t index) const;
  Vector<Scalar> phi() const { return unit(0); }
};

// Evaluates both action tables and builds the idempotents.  Throws
// RealizationFailure ("minpoly/a", "minpoly/astar") when a product of
// shifts is nonzero, or Error for a context of the wrong diameter.
template <class F>
ModuleRealization<F> realize(const ModuleTable& table, const SpecializationContext<F>& ctx);

template <class F>
std::vector<Check> verify_relations(const ModuleRealization<F>& real);

template <class F>
std::vector<Check> mu_certificate(const ModuleRealization<F>& real);

struct ShapeResult {
  std::vector<std::size_t> ranks;       // rank e_i
  std::vector<std::size_t> ranks_star;  // rank e*_i
  std::vector<Check> checks;
};
template <class F>
ShapeResult shape_check(const ModuleRealization<F>& real);

// Expects y_i to hold a split sequence zeta_i (i >= 1) of a valid array.
template <class F>
std::vector<Check> triple_product_check(const ModuleRealization<F>& real);

// Relation, certificate and shape checks for one random context, prefixed
// "trialNN/".  A realization failure becomes a failed check.
template <class F>
std::vector<Check> appendix_trial(const ModuleTable& table, const F& field,
                                  std::uint64_t seed, std::size_t trial, bool certificate);

std::vector<std::size_t> binomial_row(std::size_t d);

}  // namespace tdpair
