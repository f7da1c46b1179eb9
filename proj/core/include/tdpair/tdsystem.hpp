#pragma once

// Tridiagonal systems extracted from realized modules: construction from a
// parameter array, invariant-subspace closure, axiom checks, the split
// sequence, and the generated-algebra irreducibility test.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "tdpair/appendix.hpp"
#include "tdpair/matrix.hpp"
#include "tdpair/params.hpp"
#include "tdpair/report.hpp"

namespace tdpair {

template <class F>
struct Construction {
  ModuleRealization<F> real;
  std::vector<Check> checks;  // g_i phi = 0 for 1 <= i <= d
};

// Realizes the table for d at (theta, theta*, y := zeta).  Throws
// InadmissibleContext listing the failed conditions for an invalid array.
template <class F>
Construction<F> construct_from_params(const F& field, const ParameterArray<F>& pa,
                                      const ModuleTable& table);

// Row-reduced basis of a subspace of F^n.
template <class S>
struct Subspace {
  Matrix<S> basis;  // k x n in reduced row echelon form
  std::vector<std::size_t> pivots;
  std::size_t dim() const noexcept { return pivots.size(); }
};

// Smallest subspace containing `seed` and invariant under every operator
// in `ops`.
template <class F>
Subspace<typename F::Scalar> submodule_closure(
    const F& field, const std::vector<Matrix<typename F::Scalar>>& ops,
    const Vector<typename F::Scalar>& seed);

template <class F>
Subspace<typename F::Scalar> submodule_closure(const ModuleRealization<F>& real,
                                               const Vector<typename F::Scalar>& seed);

// Matrix of `op` on the subspace in the coordinates of its basis rows.
// Throws Error if the subspace is not invariant.
template <class S>
Matrix<S> restrict_to(const Matrix<S>& op, const Subspace<S>& sub);

struct IrreducibilityResult {
  bool irreducible = false;
  bool conclusive = true;
  std::size_t span_dim = 0;
  std::size_t target = 0;  // (dim W)^2
  std::string method;
};

// Dimension of the span of all words in the given operators, compared with
// (dim W)^2.  Over the rationals the span is first computed modulo a large
// prime; a full span there proves irreducibility, otherwise small
// dimensions are recomputed exactly and larger ones are inconclusive.
template <class F>
IrreducibilityResult irreducibility_check(const F& field, const Matrix<typename F::Scalar>& a,
                                          const Matrix<typename F::Scalar>& astar);

template <class F>
struct TDSystemReport {
  using Scalar = typename F::Scalar;

  std::size_t dimension = 0;  // dim of the subspace examined
  std::size_t diameter = 0;
  std::vector<Scalar> eigenvalues;
  std::vector<Scalar> dual_eigenvalues;
  std::vector<std::size_t> shape;
  std::vector<Scalar> split;
  bool sharp = false;
  IrreducibilityResult irreducibility;
  std::vector<Check> checks;  // axiom checks; failures are axiom failures
  std::vector<std::string> notes;

  bool axioms_pass() const;
  std::string to_json(const F& field) const;
};

// Restricts the operators to `sub` and checks the tridiagonal-system axioms
// against the supplied eigenvalue orderings.
template <class F>
TDSystemReport<F> extract_td_system(const F& field, const Matrix<typename F::Scalar>& a,
                                    const Matrix<typename F::Scalar>& astar,
                                    const Subspace<typename F::Scalar>& sub,
                                    const std::vector<typename F::Scalar>& theta,
                                    const std::vector<typename F::Scalar>& theta_star);

// construct -> closure of phi -> extract -> compare with the input array.
template <class F>
std::vector<Check> roundtrip(const F& field, const ParameterArray<F>& pa,
                             const ModuleTable& table);

}  // namespace tdpair
