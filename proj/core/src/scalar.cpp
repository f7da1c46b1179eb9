#include "tdpair/scalar.hpp"

#include <array>
#include <charconv>
#include <ostream>

namespace tdpair {

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp != 0) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

bool parse_integer(std::string_view text, mpz_class& out) {
  if (text.empty()) return false;
  std::size_t start = (text[0] == '-' || text[0] == '+') ? 1 : 0;
  if (start == text.size()) return false;
  for (std::size_t i = start; i < text.size(); ++i) {
    if (text[i] < '0' || text[i] > '9') return false;
  }
  std::string digits(text[0] == '+' ? text.substr(1) : text);
  return out.set_str(digits, 10) == 0;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  constexpr std::array<std::uint64_t, 12> kBases = {2, 3, 5, 7, 11, 13,
                                                     17, 19, 23, 29, 31, 37};
  for (std::uint64_t p : kBases) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : kBases) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

Rational::Rational(const mpz_class& num, const mpz_class& den) {
  if (den == 0) throw DivisionByZero();
  value_ = mpq_class(num, den);
  value_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
  auto slash = text.find('/');
  mpz_class num;
  mpz_class den = 1;
  if (!parse_integer(text.substr(0, slash), num) ||
      (slash != std::string_view::npos &&
       (!parse_integer(text.substr(slash + 1), den) || text[slash + 1] == '-' ||
        text[slash + 1] == '+'))) {
    throw MalformedInput("not a rational number: \"" + std::string(text) + "\"");
  }
  return Rational(num, den);
}

std::string Rational::to_string() const {
  if (value_.get_den() == 1) return value_.get_num().get_str();
  return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

Rational Rational::operator-() const {
  Rational r;
  r.value_ = -value_;
  return r;
}

Rational& Rational::operator+=(const Rational& rhs) {
  value_ += rhs.value_;
  return *this;
}

Rational& Rational::operator-=(const Rational& rhs) {
  value_ -= rhs.value_;
  return *this;
}

Rational& Rational::operator*=(const Rational& rhs) {
  value_ *= rhs.value_;
  return *this;
}

Rational& Rational::operator/=(const Rational& rhs) {
  if (rhs.is_zero()) throw DivisionByZero();
  value_ /= rhs.value_;
  return *this;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) {
  return os << r.to_string();
}

// ---------------------------------------------------------------------------

ModP ModP::inverse() const {
  if (value_ == 0) throw DivisionByZero();
  // Extended Euclid on signed 128-bit values.
  __int128 t = 0, new_t = 1;
  __int128 r = prime_, new_r = value_;
  while (new_r != 0) {
    __int128 q = r / new_r;
    __int128 tmp = t - q * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - q * new_r;
    r = new_r;
    new_r = tmp;
  }
  if (t < 0) t += prime_;
  return ModP(static_cast<std::uint64_t>(t), prime_);
}

std::ostream& operator<<(std::ostream& os, const ModP& x) {
  return os << x.value();
}

// ---------------------------------------------------------------------------

std::string_view field_kind_name(FieldKind kind) {
  return kind == FieldKind::Rationals ? "qq" : "fp";
}

FieldKind parse_field_kind(std::string_view name) {
  if (name == "qq") return FieldKind::Rationals;
  if (name == "fp") return FieldKind::PrimeField;
  throw MalformedInput("unknown field kind \"" + std::string(name) +
                       "\" (expected qq or fp)");
}

PrimeField::PrimeField(std::uint64_t prime) : prime_(prime) {
  if (prime >= (std::uint64_t{1} << 63) || !is_prime(prime)) {
    throw Error("not a usable prime (must be prime and below 2^63): " +
                std::to_string(prime));
  }
}

ModP PrimeField::from_int(std::int64_t v) const {
  if (v >= 0) return ModP(static_cast<std::uint64_t>(v), prime_);
  // Avoid overflow on INT64_MIN.
  auto magnitude = static_cast<std::uint64_t>(-(v + 1)) + 1;
  return -ModP(magnitude, prime_);
}

ModP PrimeField::from_integer(const mpz_class& v) const {
  mpz_class p;
  mpz_import(p.get_mpz_t(), 1, 1, sizeof(prime_), 0, 0, &prime_);
  mpz_class r = v % p;
  if (r < 0) r += p;
  return ModP(r.get_ui(), prime_);
}

ModP PrimeField::from_rational(const Rational& r) const {
  ModP den = from_integer(r.denominator());
  if (den.is_zero()) throw DivisionByZero();
  return from_integer(r.numerator()) / den;
}

ModP PrimeField::parse(std::string_view text) const {
  mpz_class v;
  if (!parse_integer(text, v)) {
    throw MalformedInput("not a residue: \"" + std::string(text) + "\"");
  }
  return from_integer(v);
}

void FieldSpec::validate() const {
  if (kind == FieldKind::PrimeField) PrimeField{prime};
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace tdpair
