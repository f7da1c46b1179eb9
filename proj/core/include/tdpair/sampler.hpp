#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "tdpair/scalar.hpp"

namespace tdpair {

// Seeded source of field elements.  Single owner; never share one sampler
// between concurrent tasks.
//
// The raw stream is std::mt19937_64, which the standard fixes bit-for-bit.
// Reductions to a range are done here (not by std distributions) so the
// sampled values are identical across standard library implementations.
template <class F>
class Sampler {
 public:
  using Scalar = typename F::Scalar;

  // Rational samples are num/den with |num| <= kNumeratorBound and
  // 1 <= den <= kDenominatorBound.
  static constexpr std::uint64_t kNumeratorBound = 1000;
  static constexpr std::uint64_t kDenominatorBound = 8;

  Sampler(F field, std::uint64_t seed) : field_(std::move(field)), engine_(seed) {}

  const F& field() const noexcept { return field_; }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, bound), by rejection.
  std::uint64_t uniform(std::uint64_t bound) {
    if (bound == 0) throw Error("uniform: empty range");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

  Scalar next() {
    if constexpr (F::kind == FieldKind::PrimeField) {
      return Scalar(uniform(field_.prime()), field_.prime());
    } else {
      auto num = static_cast<std::int64_t>(uniform(2 * kNumeratorBound + 1)) -
                 static_cast<std::int64_t>(kNumeratorBound);
      auto den = static_cast<std::int64_t>(uniform(kDenominatorBound)) + 1;
      return field_.from_int(num) / field_.from_int(den);
    }
  }

  Scalar next_nonzero() {
    for (;;) {
      Scalar x = next();
      if (!is_zero(x)) return x;
    }
  }

  // n pairwise distinct scalars, none of them in `forbidden`.
  std::vector<Scalar> distinct(std::size_t n, std::span<const Scalar> forbidden = {}) {
    std::vector<Scalar> taken(forbidden.begin(), forbidden.end());
    if constexpr (F::kind == FieldKind::PrimeField) {
      std::vector<Scalar> unique = taken;
      std::sort(unique.begin(), unique.end());
      unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
      if (field_.prime() < n + unique.size()) {
        throw FieldTooSmall("field too small: F_" + std::to_string(field_.prime()) +
                            " cannot supply " + std::to_string(n) +
                            " distinct values avoiding " +
                            std::to_string(unique.size()) + " forbidden ones");
      }
    }
    std::vector<Scalar> out;
    out.reserve(n);
    while (out.size() < n) {
      Scalar x = next();
      if (std::find(taken.begin(), taken.end(), x) != taken.end()) continue;
      taken.push_back(x);
      out.push_back(x);
    }
    return out;
  }

 private:
  F field_;
  std::mt19937_64 engine_;
};

}  // namespace tdpair
