#pragma once

// Exact scalars over the two supported coefficient fields: arbitrary
// precision rationals (GMP) and a prime field F_p with p < 2^63.
//
// Higher-level code is written against a field object F exposing
//   using Scalar = ...;
//   Scalar zero() const, one() const, from_int(int64_t) const,
//   from_rational(const Rational&) const;
//   std::string to_string(const Scalar&) const;
// and the usual arithmetic operators on Scalar.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include <gmpxx.h>

#include "tdpair/error.hpp"

namespace tdpair {

// 2^62 - 57, the largest prime below 2^62.  Products of two residues fit
// comfortably in unsigned 128-bit intermediates.
inline constexpr std::uint64_t kDefaultPrime = 4611686018427387847ULL;

// Identifier of the pseudo-random generator recorded in every report.
inline constexpr std::string_view kPrngAlgorithm = "mt19937_64";

// Deterministic Miller-Rabin, exact for all 64-bit inputs.
bool is_prime(std::uint64_t n);

// ---------------------------------------------------------------------------
// Rational: p/q in lowest terms with q > 0.

class Rational {
 public:
  Rational() = default;
  Rational(long value) : value_(value) {}  // NOLINT(implicit)
  explicit Rational(const mpz_class& integer) : value_(integer) {}
  Rational(const mpz_class& num, const mpz_class& den);

  // Accepts "p", "-p", "p/q" with q != 0; result is normalized.
  static Rational parse(std::string_view text);

  mpz_class numerator() const { return value_.get_num(); }
  mpz_class denominator() const { return value_.get_den(); }
  const mpq_class& raw() const noexcept { return value_; }

  bool is_zero() const { return sgn(value_) == 0; }
  bool is_integer() const { return value_.get_den() == 1; }

  // "p/q", or "p" when q = 1.
  std::string to_string() const;

  Rational operator-() const;
  Rational& operator+=(const Rational& rhs);
  Rational& operator-=(const Rational& rhs);
  Rational& operator*=(const Rational& rhs);
  Rational& operator/=(const Rational& rhs);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend bool operator==(const Rational& a, const Rational& b) {
    return a.value_ == b.value_;
  }
  friend bool operator<(const Rational& a, const Rational& b) {
    return a.value_ < b.value_;
  }

 private:
  mpq_class value_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

// ---------------------------------------------------------------------------
// ModP: residue 0 <= value < prime.  Mixing residues of different primes
// throws.

class ModP {
 public:
  ModP() = default;
  ModP(std::uint64_t value, std::uint64_t prime)
      : value_(value % prime), prime_(prime) {}

  std::uint64_t value() const noexcept { return value_; }
  std::uint64_t prime() const noexcept { return prime_; }
  bool is_zero() const noexcept { return value_ == 0; }

  ModP inverse() const;
  std::string to_string() const { return std::to_string(value_); }

  ModP operator-() const {
    return from_reduced(value_ == 0 ? 0 : prime_ - value_, prime_);
  }
  ModP& operator+=(const ModP& rhs) {
    check(rhs);
    std::uint64_t s = value_ + rhs.value_;
    value_ = s >= prime_ ? s - prime_ : s;
    return *this;
  }
  ModP& operator-=(const ModP& rhs) {
    check(rhs);
    value_ = value_ >= rhs.value_ ? value_ - rhs.value_
                                  : value_ + (prime_ - rhs.value_);
    return *this;
  }
  ModP& operator*=(const ModP& rhs) {
    check(rhs);
    value_ = static_cast<std::uint64_t>(
        static_cast<unsigned __int128>(value_) * rhs.value_ % prime_);
    return *this;
  }
  ModP& operator/=(const ModP& rhs) { return *this *= rhs.inverse(); }

  friend ModP operator+(ModP a, const ModP& b) { return a += b; }
  friend ModP operator-(ModP a, const ModP& b) { return a -= b; }
  friend ModP operator*(ModP a, const ModP& b) { return a *= b; }
  friend ModP operator/(ModP a, const ModP& b) { return a /= b; }
  friend bool operator==(const ModP& a, const ModP& b) {
    return a.value_ == b.value_ && a.prime_ == b.prime_;
  }
  friend bool operator<(const ModP& a, const ModP& b) {
    return a.value_ < b.value_;
  }

 private:
  static ModP from_reduced(std::uint64_t v, std::uint64_t p) {
    ModP r;
    r.value_ = v;
    r.prime_ = p;
    return r;
  }
  void check(const ModP& rhs) const {
    if (prime_ != rhs.prime_) throw Error("arithmetic across different prime fields");
  }

  std::uint64_t value_ = 0;
  std::uint64_t prime_ = 0;
};

std::ostream& operator<<(std::ostream& os, const ModP& x);

inline bool is_zero(const Rational& x) { return x.is_zero(); }
inline bool is_zero(const ModP& x) { return x.is_zero(); }
inline Rational inverse(const Rational& x) { return Rational(1) / x; }
inline ModP inverse(const ModP& x) { return x.inverse(); }

// ---------------------------------------------------------------------------
// Field objects.

enum class FieldKind { Rationals, PrimeField };

std::string_view field_kind_name(FieldKind kind);  // "qq" / "fp"
FieldKind parse_field_kind(std::string_view name);

class RationalField {
 public:
  using Scalar = Rational;
  static constexpr FieldKind kind = FieldKind::Rationals;

  Scalar zero() const { return {}; }
  Scalar one() const { return Rational(1); }
  Scalar from_int(std::int64_t v) const { return Rational(static_cast<long>(v)); }
  Scalar from_integer(const mpz_class& v) const { return Rational(v); }
  Scalar from_rational(const Rational& r) const { return r; }
  Scalar parse(std::string_view text) const { return Rational::parse(text); }
  std::string to_string(const Scalar& x) const { return x.to_string(); }
  std::uint64_t prime() const { return 0; }

  friend bool operator==(const RationalField&, const RationalField&) { return true; }
};

class PrimeField {
 public:
  using Scalar = ModP;
  static constexpr FieldKind kind = FieldKind::PrimeField;

  // Throws Error unless `prime` is a prime below 2^63.
  explicit PrimeField(std::uint64_t prime = kDefaultPrime);

  std::uint64_t prime() const noexcept { return prime_; }

  Scalar zero() const { return ModP(0, prime_); }
  Scalar one() const { return ModP(1, prime_); }
  Scalar from_int(std::int64_t v) const;
  Scalar from_integer(const mpz_class& v) const;
  // Throws DivisionByZero when the denominator vanishes mod p.
  Scalar from_rational(const Rational& r) const;
  // Decimal residue; values >= p are reduced, a leading '-' negates.
  Scalar parse(std::string_view text) const;
  std::string to_string(const Scalar& x) const { return x.to_string(); }

  friend bool operator==(const PrimeField& a, const PrimeField& b) {
    return a.prime_ == b.prime_;
  }

 private:
  std::uint64_t prime_;
};

// Which field to compute in, plus the seed for reproducible sampling.
struct FieldSpec {
  FieldKind kind = FieldKind::PrimeField;
  std::uint64_t prime = kDefaultPrime;  // ignored for rationals
  std::uint64_t seed = 0;

  static FieldSpec rationals(std::uint64_t seed) {
    return {FieldKind::Rationals, 0, seed};
  }
  static FieldSpec prime_field(std::uint64_t seed, std::uint64_t p = kDefaultPrime) {
    return {FieldKind::PrimeField, p, seed};
  }
  // Throws Error if the prime is unusable.
  void validate() const;

  friend bool operator==(const FieldSpec&, const FieldSpec&) = default;
};

// Runs `fn(field)` with the concrete field object named by `spec`.
template <class Fn>
decltype(auto) with_field(const FieldSpec& spec, Fn&& fn) {
  if (spec.kind == FieldKind::Rationals) return fn(RationalField{});
  return fn(PrimeField(spec.prime));
}

// SplitMix64 step; used to derive independent per-trial seeds.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

}  // namespace tdpair
