#pragma once

// Univariate polynomials over an exact field and the primitive-idempotent
// calculus for operators with known, pairwise distinct eigenvalues.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "tdpair/error.hpp"
#include "tdpair/matrix.hpp"

namespace tdpair {

template <class F>
class UniPoly {
 public:
  using Scalar = typename F::Scalar;

  explicit UniPoly(F field) : field_(std::move(field)) {}
  UniPoly(F field, std::vector<Scalar> coeffs)
      : field_(std::move(field)), coeffs_(std::move(coeffs)) {
    trim();
  }

  static UniPoly constant(F field, Scalar c) { return UniPoly(field, {std::move(c)}); }
  // lambda - root
  static UniPoly linear(F field, const Scalar& root) {
    return UniPoly(field, {-root, field.one()});
  }

  const F& field() const noexcept { return field_; }
  // Lowest degree first; empty for the zero polynomial.
  const std::vector<Scalar>& coeffs() const noexcept { return coeffs_; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  // -1 for the zero polynomial.
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_monic() const { return !coeffs_.empty() && coeffs_.back() == field_.one(); }

  Scalar operator()(const Scalar& x) const {
    Scalar acc = field_.zero();
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  // Horner evaluation at a square matrix.
  Matrix<Scalar> operator()(const Matrix<Scalar>& a) const {
    if (!a.square()) throw Error("polynomial evaluated at a non-square matrix");
    Matrix<Scalar> acc = Matrix<Scalar>::zeros(field_, a.rows(), a.cols());
    const Matrix<Scalar> id = Matrix<Scalar>::identity(field_, a.rows());
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
      acc = acc * a + id * (*it);
    }
    return acc;
  }

  friend UniPoly operator+(const UniPoly& a, const UniPoly& b) {
    std::vector<Scalar> c(std::max(a.coeffs_.size(), b.coeffs_.size()), a.field_.zero());
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) c[i] += a.coeffs_[i];
    for (std::size_t i = 0; i < b.coeffs_.size(); ++i) c[i] += b.coeffs_[i];
    return UniPoly(a.field_, std::move(c));
  }
  friend UniPoly operator-(const UniPoly& a, const UniPoly& b) {
    return a + b * (-a.field_.one());
  }
  friend UniPoly operator*(const UniPoly& a, const UniPoly& b) {
    if (a.is_zero() || b.is_zero()) return UniPoly(a.field_);
    std::vector<Scalar> c(a.coeffs_.size() + b.coeffs_.size() - 1, a.field_.zero());
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
    return UniPoly(a.field_, std::move(c));
  }
  friend UniPoly operator*(const UniPoly& a, const Scalar& k) {
    std::vector<Scalar> c = a.coeffs_;
    for (Scalar& x : c) x *= k;
    return UniPoly(a.field_, std::move(c));
  }
  friend bool operator==(const UniPoly& a, const UniPoly& b) { return a.coeffs_ == b.coeffs_; }

  std::string to_string() const {
    if (coeffs_.empty()) return "0";
    std::string out;
    for (std::size_t i = coeffs_.size(); i-- > 0;) {
      if (is_zero_scalar(coeffs_[i])) continue;
      if (!out.empty()) out += " + ";
      out += "(" + field_.to_string(coeffs_[i]) + ")";
      if (i >= 1) out += "*x";
      if (i >= 2) out += "^" + std::to_string(i);
    }
    return out;
  }

 private:
  static bool is_zero_scalar(const Scalar& x) { return tdpair::is_zero(x); }
  void trim() {
    while (!coeffs_.empty() && is_zero_scalar(coeffs_.back())) coeffs_.pop_back();
  }

  F field_;
  std::vector<Scalar> coeffs_;
};

enum class PolyKind { Tau, Eta, TauStar, EtaStar };

// tau_i = prod_{j<i} (x - t_j), eta_i = prod_{j<i} (x - t_{d-j}), where
// t = `thetas` has d+1 entries.  The starred kinds are the same products
// taken over the dual eigenvalue list, which the caller passes as `thetas`.
template <class F>
UniPoly<F> build_poly(const F& field, PolyKind kind, std::size_t i,
                      std::span<const typename F::Scalar> thetas) {
  if (thetas.empty()) throw Error("build_poly: empty eigenvalue list");
  const std::size_t d = thetas.size() - 1;
  if (i > d) {
    throw Error("build_poly: index " + std::to_string(i) + " out of range 0.." +
                std::to_string(d));
  }
  const bool from_top = kind == PolyKind::Eta || kind == PolyKind::EtaStar;
  UniPoly<F> p = UniPoly<F>::constant(field, field.one());
  for (std::size_t j = 0; j < i; ++j) {
    p = p * UniPoly<F>::linear(field, thetas[from_top ? d - j : j]);
  }
  return p;
}

// Raised when prod_i (A - theta_i I) != 0, i.e. A is not diagonalizable
// with eigenvalues among the given list.
class MinimalPolynomialFailure : public Error {
 public:
  explicit MinimalPolynomialFailure(std::size_t residual_rank)
      : Error("prod (A - theta_i I) is nonzero (rank " + std::to_string(residual_rank) + ")"),
        residual_rank_(residual_rank) {}
  std::size_t residual_rank() const noexcept { return residual_rank_; }

 private:
  std::size_t residual_rank_;
};

// Throws Error naming the first repeated pair.
template <class S>
void require_distinct(std::span<const S> values, const std::string& name) {
  for (std::size_t i = 0; i < values.size(); ++i)
    for (std::size_t j = i + 1; j < values.size(); ++j)
      if (values[i] == values[j]) {
        throw Error(name + " values " + std::to_string(i) + " and " + std::to_string(j) +
                    " coincide");
      }
}

// prod_i (A - theta_i I).
template <class F>
Matrix<typename F::Scalar> eigen_product(const F& field, const Matrix<typename F::Scalar>& a,
                                         std::span<const typename F::Scalar> thetas) {
  using M = Matrix<typename F::Scalar>;
  const M id = M::identity(field, a.rows());
  M acc = id;
  for (const auto& t : thetas) acc = acc * (a - id * t);
  return acc;
}

// E_i = prod_{j != i} (A - theta_j I) / (theta_i - theta_j).  The
// minimal-polynomial identity is checked first.
template <class F>
std::vector<Matrix<typename F::Scalar>> lagrange_idempotents(
    const F& field, const Matrix<typename F::Scalar>& a,
    std::span<const typename F::Scalar> thetas) {
  using M = Matrix<typename F::Scalar>;
  if (!a.square()) throw Error("lagrange_idempotents: operator is not square");
  require_distinct(thetas, "eigenvalue");
  const M residual = eigen_product(field, a, thetas);
  if (!residual.is_zero()) throw MinimalPolynomialFailure(rank(residual));

  const M id = M::identity(field, a.rows());
  std::vector<M> shifted;
  shifted.reserve(thetas.size());
  for (const auto& t : thetas) shifted.push_back(a - id * t);

  std::vector<M> out;
  out.reserve(thetas.size());
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    M e = id;
    auto denom = field.one();
    for (std::size_t j = 0; j < thetas.size(); ++j) {
      if (j == i) continue;
      e = e * shifted[j];
      denom *= thetas[i] - thetas[j];
    }
    out.push_back(e * inverse(denom));
  }
  return out;
}

// eta_d == sum_i eta_{d-i}(theta_0) tau_i, compared coefficientwise.
template <class F>
bool eta_expansion_check(const F& field, std::span<const typename F::Scalar> thetas) {
  require_distinct(thetas, "eigenvalue");
  const std::size_t d = thetas.size() - 1;
  const UniPoly<F> lhs = build_poly(field, PolyKind::Eta, d, thetas);
  UniPoly<F> rhs(field);
  for (std::size_t i = 0; i <= d; ++i) {
    const auto weight = build_poly(field, PolyKind::Eta, d - i, thetas)(thetas[0]);
    rhs = rhs + build_poly(field, PolyKind::Tau, i, thetas) * weight;
  }
  return lhs == rhs;
}

}  // namespace tdpair
