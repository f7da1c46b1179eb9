#include "tdpair/params.hpp"

#include <algorithm>
#include <json.hpp>

#include "tdpair/poly.hpp"

namespace tdpair {

namespace {

template <class S>
std::optional<std::pair<std::size_t, std::size_t>> first_repeat(const std::vector<S>& v) {
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j)
      if (v[i] == v[j]) return std::make_pair(i, j);
  return std::nullopt;
}

// (t_{i-2} - t_{i+1}) / (t_{i-1} - t_i) for 2 <= i <= d-1; nullopt when a
// denominator vanishes.
template <class F>
std::optional<std::vector<typename F::Scalar>> ratio_family(
    const std::vector<typename F::Scalar>& t) {
  std::vector<typename F::Scalar> out;
  const std::size_t d = t.size() - 1;
  for (std::size_t i = 2; i + 1 <= d; ++i) {
    auto den = t[i - 1] - t[i];
    if (is_zero(den)) return std::nullopt;
    out.push_back((t[i - 2] - t[i + 1]) / den);
  }
  return out;
}

// Common value of both ratio families, or a description of why none exists.
template <class F>
std::optional<typename F::Scalar> common_ratio(const F& field,
                                               const std::vector<typename F::Scalar>& theta,
                                               const std::vector<typename F::Scalar>& theta_star,
                                               std::string& why) {
  auto a = ratio_family<F>(theta);
  auto b = ratio_family<F>(theta_star);
  if (!a || !b) {
    why = "ratio undefined (consecutive eigenvalues coincide)";
    return std::nullopt;
  }
  const auto& ref = (*a)[0];
  for (std::size_t k = 0; k < a->size(); ++k) {
    const std::size_t i = k + 2;
    if (!((*a)[k] == ref)) {
      why = "θ ratio at i=" + std::to_string(i) + " is " + field.to_string((*a)[k]) +
            ", expected " + field.to_string(ref);
      return std::nullopt;
    }
    if (!((*b)[k] == ref)) {
      why = "θ* ratio at i=" + std::to_string(i) + " is " + field.to_string((*b)[k]) +
            ", expected " + field.to_string(ref);
      return std::nullopt;
    }
  }
  return ref;
}

template <class F>
std::vector<typename F::Scalar> epsilons(const std::vector<typename F::Scalar>& t,
                                         const std::vector<typename F::Scalar>& ts) {
  std::vector<typename F::Scalar> eps;
  const std::size_t d = t.size() - 1;
  for (std::size_t i = 0; i + 2 <= d; ++i) {
    eps.push_back((t[i + 1] - t[i + 2]) * (ts[i + 1] - ts[i + 2]) -
                  (t[i] - t[i + 1]) * (ts[i] - ts[i + 1]));
  }
  return eps;
}

template <class F>
std::vector<typename F::Scalar> unroll(const F& field, Sampler<F>& sampler, std::size_t d,
                                       const std::optional<typename F::Scalar>& beta) {
  std::vector<typename F::Scalar> t;
  const std::size_t seeds = std::min<std::size_t>(d + 1, 3);
  for (std::size_t i = 0; i < seeds; ++i) t.push_back(sampler.next());
  for (std::size_t i = 2; i + 1 <= d; ++i) {
    t.push_back(t[i - 2] - (*beta + field.one()) * (t[i - 1] - t[i]));
  }
  return t;
}

}  // namespace

template <class F>
void ParameterArray<F>::check_shape() const {
  if (theta.size() != d + 1 || theta_star.size() != d + 1 || zeta.size() != d + 1) {
    throw MalformedInput("parameter array with d=" + std::to_string(d) +
                         " needs d+1 entries in theta, theta_star and zeta (got " +
                         std::to_string(theta.size()) + ", " +
                         std::to_string(theta_star.size()) + ", " +
                         std::to_string(zeta.size()) + ")");
  }
}

bool ValidationResult::has_failure(std::string_view cond) const {
  return std::any_of(failures.begin(), failures.end(),
                     [&](const ValidationFailure& f) { return f.condition == cond; });
}

template <class F>
typename F::Scalar condition_ii_sum(const F& field, const ParameterArray<F>& pa) {
  pa.check_shape();
  const std::size_t d = pa.d;
  std::vector<typename F::Scalar> eta0;  // eta_k(theta_0), k = 0..d
  std::vector<typename F::Scalar> eta0_star;
  for (std::size_t k = 0; k <= d; ++k) {
    eta0.push_back(build_poly(field, PolyKind::Eta, k,
                              std::span<const typename F::Scalar>(pa.theta))(pa.theta[0]));
    eta0_star.push_back(build_poly(field, PolyKind::EtaStar, k,
                                   std::span<const typename F::Scalar>(pa.theta_star))(
        pa.theta_star[0]));
  }
  auto sum = field.zero();
  for (std::size_t i = 0; i <= d; ++i) sum += eta0[d - i] * eta0_star[d - i] * pa.zeta[i];
  return sum;
}

template <class F>
ValidationResult validate_parameter_array(const F& field, const ParameterArray<F>& pa) {
  pa.check_shape();
  ValidationResult result;
  auto fail = [&](std::string_view cond, std::string detail) {
    result.failures.push_back({std::string(cond), std::move(detail)});
  };
  const std::size_t d = pa.d;

  if (auto rep = first_repeat(pa.theta)) {
    fail(condition::kThetaDistinct, "θ_" + std::to_string(rep->first) + " = θ_" +
                                        std::to_string(rep->second));
  }
  if (auto rep = first_repeat(pa.theta_star)) {
    fail(condition::kThetaStarDistinct, "θ*_" + std::to_string(rep->first) + " = θ*_" +
                                            std::to_string(rep->second));
  }

  if (!(pa.zeta[0] == field.one())) {
    fail(condition::kZetaZeroIsOne, "ζ_0 = " + field.to_string(pa.zeta[0]) + ", must be 1");
  }
  if (is_zero(pa.zeta[d])) fail(condition::kZetaTopNonzero, "ζ_d ≠ 0 violated (ζ_" +
                                                                std::to_string(d) + " = 0)");
  const auto sum = condition_ii_sum(field, pa);
  result.sum = field.to_string(sum);
  if (is_zero(sum)) fail(condition::kSumNonzero, "Σ η_{d-i}(θ_0) η*_{d-i}(θ*_0) ζ_i = 0");

  if (d <= 2) {
    result.notes.push_back("condition (iii) holds vacuously for d ≤ 2");
  } else {
    std::string why;
    if (auto c = common_ratio(field, pa.theta, pa.theta_star, why)) {
      result.beta = field.to_string(*c - field.one());
    } else {
      fail(condition::kBetaRecurrent, "not β-recurrent: " + why);
    }
  }
  result.passed = result.failures.empty();
  return result;
}

template <class F>
SpecializationContext<F> derive_context(const F& field, std::vector<typename F::Scalar> theta,
                                        std::vector<typename F::Scalar> theta_star,
                                        std::vector<typename F::Scalar> y) {
  if (theta.empty() || theta_star.size() != theta.size() || y.size() + 1 != theta.size()) {
    throw MalformedInput("context needs d+1 θ, d+1 θ* and d y values (got " +
                         std::to_string(theta.size()) + ", " +
                         std::to_string(theta_star.size()) + ", " + std::to_string(y.size()) +
                         ")");
  }
  const std::size_t d = theta.size() - 1;
  if (auto rep = first_repeat(theta)) {
    throw InadmissibleContext(std::string(condition::kThetaDistinct),
                              "θ_" + std::to_string(rep->first) + " = θ_" +
                                  std::to_string(rep->second));
  }
  if (auto rep = first_repeat(theta_star)) {
    throw InadmissibleContext(std::string(condition::kThetaStarDistinct),
                              "θ*_" + std::to_string(rep->first) + " = θ*_" +
                                  std::to_string(rep->second));
  }

  SpecializationContext<F> ctx{field, d, std::move(theta), std::move(theta_star), std::move(y),
                               std::nullopt, {}};
  if (d >= 3) {
    std::string why;
    auto c = common_ratio(field, ctx.theta, ctx.theta_star, why);
    if (!c) throw InadmissibleContext("not β-recurrent", why);
    const auto beta = *c - field.one();
    if (is_zero(beta + field.one())) throw InadmissibleContext("guard β+1≠0", "β = -1");
    if (d >= 4 && is_zero(beta)) throw InadmissibleContext("guard β≠0", "β = 0");
    if (d == 5 && is_zero(beta * beta + beta - field.one())) {
      throw InadmissibleContext("guard β²+β-1≠0", "β²+β-1 = 0");
    }
    ctx.beta = beta;
  }
  ctx.epsilon = epsilons<F>(ctx.theta, ctx.theta_star);
  return ctx;
}

template <class F>
SpecializationContext<F> random_admissible_context(std::size_t d, Sampler<F>& sampler,
                                                   std::size_t max_attempts) {
  const F& field = sampler.field();
  for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
    std::optional<typename F::Scalar> beta;
    if (d >= 3) beta = sampler.next();
    auto theta = unroll(field, sampler, d, beta);
    auto theta_star = unroll(field, sampler, d, beta);
    std::vector<typename F::Scalar> y;
    for (std::size_t i = 0; i < d; ++i) y.push_back(sampler.next());
    try {
      return derive_context(field, std::move(theta), std::move(theta_star), std::move(y));
    } catch (const InadmissibleContext&) {
      // resample
    }
  }
  throw Error("rejection budget exhausted: no admissible context for d=" + std::to_string(d) +
              " after " + std::to_string(max_attempts) + " attempts");
}

template <class F>
ParameterArray<F> random_valid_parameter_array(std::size_t d, Sampler<F>& sampler,
                                               std::size_t max_attempts) {
  const F& field = sampler.field();
  for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
    auto ctx = random_admissible_context(d, sampler, max_attempts);
    ParameterArray<F> pa{d, ctx.theta, ctx.theta_star, {field.one()}};
    for (std::size_t i = 1; i <= d; ++i) pa.zeta.push_back(sampler.next());
    if (validate_parameter_array(field, pa).passed) return pa;
  }
  throw Error("rejection budget exhausted: no valid parameter array for d=" +
              std::to_string(d) + " after " + std::to_string(max_attempts) + " attempts");
}

template <class F>
ParameterArray<F> map_parameter_array(const F& field, const ParameterArray<RationalField>& pa) {
  pa.check_shape();
  ParameterArray<F> out{pa.d, {}, {}, {}};
  for (const auto& x : pa.theta) out.theta.push_back(field.from_rational(x));
  for (const auto& x : pa.theta_star) out.theta_star.push_back(field.from_rational(x));
  for (const auto& x : pa.zeta) out.zeta.push_back(field.from_rational(x));
  return out;
}

ParameterArray<RationalField> parse_parameter_array_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw MalformedInput(std::string("parameter array is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("d") || !j["d"].is_number_unsigned()) {
    throw MalformedInput("parameter array needs a nonnegative integer \"d\"");
  }
  ParameterArray<RationalField> pa;
  pa.d = j["d"].get<std::size_t>();
  auto read_list = [&](const char* key, std::vector<Rational>& out) {
    if (!j.contains(key) || !j[key].is_array()) {
      throw MalformedInput(std::string("parameter array needs a list \"") + key + "\"");
    }
    for (const auto& item : j[key]) {
      if (item.is_string()) {
        out.push_back(Rational::parse(item.get<std::string>()));
      } else if (item.is_number_integer()) {
        out.push_back(Rational(item.get<long>()));
      } else {
        throw MalformedInput(std::string("entries of \"") + key +
                             "\" must be \"p/q\" strings");
      }
    }
  };
  read_list("theta", pa.theta);
  read_list("theta_star", pa.theta_star);
  read_list("zeta", pa.zeta);
  pa.check_shape();
  return pa;
}

template <class F>
std::string parameter_array_to_json(const F& field, const ParameterArray<F>& pa) {
  nlohmann::json j;
  j["d"] = pa.d;
  auto list = [&](const std::vector<typename F::Scalar>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& x : v) a.push_back(field.to_string(x));
    return a;
  };
  j["theta"] = list(pa.theta);
  j["theta_star"] = list(pa.theta_star);
  j["zeta"] = list(pa.zeta);
  if constexpr (F::kind == FieldKind::PrimeField) j["prime"] = std::to_string(field.prime());
  return j.dump();
}

std::string validation_result_to_json(const ValidationResult& result) {
  nlohmann::json j;
  j["passed"] = result.passed;
  j["failures"] = nlohmann::json::array();
  for (const auto& f : result.failures) {
    j["failures"].push_back({{"condition", f.condition}, {"detail", f.detail}});
  }
  j["notes"] = result.notes;
  j["sum"] = result.sum;
  if (result.beta) j["beta"] = *result.beta;
  return j.dump();
}

#define TDPAIR_INSTANTIATE(F)                                                                  \
  template struct ParameterArray<F>;                                                           \
  template ValidationResult validate_parameter_array(const F&, const ParameterArray<F>&);     \
  template typename F::Scalar condition_ii_sum(const F&, const ParameterArray<F>&);           \
  template SpecializationContext<F> derive_context(const F&, std::vector<F::Scalar>,          \
                                                   std::vector<F::Scalar>,                    \
                                                   std::vector<F::Scalar>);                   \
  template SpecializationContext<F> random_admissible_context(std::size_t, Sampler<F>&,       \
                                                              std::size_t);                   \
  template ParameterArray<F> random_valid_parameter_array(std::size_t, Sampler<F>&,           \
                                                          std::size_t);                       \
  template ParameterArray<F> map_parameter_array(const F&,                                     \
                                                 const ParameterArray<RationalField>&);        \
  template std::string parameter_array_to_json(const F&, const ParameterArray<F>&);

TDPAIR_INSTANTIATE(RationalField)
TDPAIR_INSTANTIATE(PrimeField)

#undef TDPAIR_INSTANTIATE

}  // namespace tdpair
