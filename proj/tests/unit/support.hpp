#pragma once

// Small helpers shared by the unit tests.

#include <string>
#include <vector>

#include "tdpair/appendix.hpp"
#include "tdpair/params.hpp"
#include "tdpair/scalar.hpp"

namespace tdpair::test {

inline Rational q(const char* text) { return Rational::parse(text); }

inline std::vector<Rational> qs(std::initializer_list<const char*> texts) {
  std::vector<Rational> out;
  for (const char* t : texts) out.push_back(q(t));
  return out;
}

template <class F>
std::vector<typename F::Scalar> ints(const F& field, std::initializer_list<long> values) {
  std::vector<typename F::Scalar> out;
  for (long v : values) out.push_back(field.from_int(v));
  return out;
}

inline ParameterArray<RationalField> qq_array(std::size_t d, std::vector<Rational> theta,
                                              std::vector<Rational> theta_star,
                                              std::vector<Rational> zeta) {
  ParameterArray<RationalField> pa;
  pa.d = d;
  pa.theta = std::move(theta);
  pa.theta_star = std::move(theta_star);
  pa.zeta = std::move(zeta);
  return pa;
}

inline ModuleTable table(std::size_t d) { return load_table(TDPAIR_TEST_ASSET_DIR, d); }

}  // namespace tdpair::test
