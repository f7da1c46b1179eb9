#pragma once

// Parameter arrays (theta; theta*; zeta), the admissibility validator, and
// the specialization contexts at which the Appendix modules are realized.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tdpair/error.hpp"
#include "tdpair/sampler.hpp"
#include "tdpair/scalar.hpp"

namespace tdpair {

template <class F>
struct ParameterArray {
  using Scalar = typename F::Scalar;

  std::size_t d = 0;
  std::vector<Scalar> theta;       // d + 1 entries
  std::vector<Scalar> theta_star;  // d + 1 entries
  std::vector<Scalar> zeta;        // d + 1 entries, zeta[0] should be 1

  // Throws MalformedInput unless all three lists have d + 1 entries.
  void check_shape() const;
};

// Condition identifiers used in ValidationResult::failures.
namespace condition {
inline constexpr std::string_view kThetaDistinct = "(i) θ distinct";
inline constexpr std::string_view kThetaStarDistinct = "(i) θ* distinct";
inline constexpr std::string_view kZetaZeroIsOne = "(ii) ζ_0=1";
inline constexpr std::string_view kZetaTopNonzero = "(ii) ζ_d≠0";
inline constexpr std::string_view kSumNonzero = "(ii) sum≠0";
inline constexpr std::string_view kBetaRecurrent = "(iii) β-recurrent";
}  // namespace condition

struct ValidationFailure {
  std::string condition;
  std::string detail;
  friend bool operator==(const ValidationFailure&, const ValidationFailure&) = default;
};

struct ValidationResult {
  bool passed = true;
  std::vector<ValidationFailure> failures;
  // Informational lines, e.g. that condition (iii) holds vacuously.
  std::vector<std::string> notes;
  // Common value of the ratio family minus one, when d >= 3 and it exists.
  std::optional<std::string> beta;
  // Value of the condition (ii) sum.
  std::string sum;

  bool has_failure(std::string_view condition) const;
};

// Checks conditions (i)-(iii).  Throws MalformedInput for shape errors.
template <class F>
ValidationResult validate_parameter_array(const F& field, const ParameterArray<F>& pa);

// sum_{i=0}^d eta_{d-i}(theta_0) eta*_{d-i}(theta*_0) zeta_i
template <class F>
typename F::Scalar condition_ii_sum(const F& field, const ParameterArray<F>& pa);

// The evaluation point for Appendix expressions.
template <class F>
struct SpecializationContext {
  using Scalar = typename F::Scalar;

  F field;
  std::size_t d = 0;
  std::vector<Scalar> theta;
  std::vector<Scalar> theta_star;
  std::vector<Scalar> y;              // y_1..y_d stored at y[0]..y[d-1]
  std::optional<Scalar> beta;         // present iff d >= 3
  std::vector<Scalar> epsilon;        // eps_0..eps_{d-2}, empty for d < 2
};

// Builds a context after checking distinctness, the beta recurrence
// (d >= 3), and the nonvanishing guards beta+1 (d >= 3), beta (d >= 4),
// beta^2+beta-1 (d = 5).  Throws InadmissibleContext naming the violated
// condition, or MalformedInput for length errors.
template <class F>
SpecializationContext<F> derive_context(const F& field, std::vector<typename F::Scalar> theta,
                                        std::vector<typename F::Scalar> theta_star,
                                        std::vector<typename F::Scalar> y);

// Rejection-samples an admissible context.  For d >= 3 beta is drawn first
// and both eigenvalue sequences are unrolled from the recurrence
//   theta_{i+1} = theta_{i-2} - (beta + 1) (theta_{i-1} - theta_i).
template <class F>
SpecializationContext<F> random_admissible_context(std::size_t d, Sampler<F>& sampler,
                                                   std::size_t max_attempts = 1000);

// An admissible context together with a split sequence passing condition
// (ii); this is a random valid parameter array.
template <class F>
ParameterArray<F> random_valid_parameter_array(std::size_t d, Sampler<F>& sampler,
                                               std::size_t max_attempts = 1000);

// Maps a rational array into another field (denominators must be units).
template <class F>
ParameterArray<F> map_parameter_array(const F& field, const ParameterArray<RationalField>& pa);

// JSON: {"d":3,"theta":["3","1","-1","-3"],"theta_star":[...],"zeta":[...]}
// with scalars as "p/q" strings.  Throws MalformedInput.
ParameterArray<RationalField> parse_parameter_array_json(std::string_view text);
template <class F>
std::string parameter_array_to_json(const F& field, const ParameterArray<F>& pa);
std::string validation_result_to_json(const ValidationResult& result);

}  // namespace tdpair
