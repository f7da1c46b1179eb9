#include <doctest.h>

#include <random>

#include "support.hpp"
#include "tdpair/sampler.hpp"

using namespace tdpair;
using tdpair::test::q;

TEST_SUITE("scalars") {
  TEST_CASE("exact rational arithmetic") {
    CHECK(q("1/3") + q("1/6") == q("1/2"));
    CHECK((q("1/3") + q("1/6")).to_string() == "1/2");
    CHECK((q("7/2") - q("7/2")).to_string() == "0");
    CHECK((q("-3/4") * q("8/9")).to_string() == "-2/3");
    CHECK((q("5") / q("-10")).to_string() == "-1/2");
  }

  TEST_CASE("prime field arithmetic") {
    const PrimeField f(101);
    CHECK((f.from_int(50) * f.from_int(50)).value() == 76);
    CHECK((f.from_int(3) - f.from_int(5)).value() == 99);
    CHECK((f.from_int(-1)).value() == 100);
    CHECK((f.from_int(7) / f.from_int(7)) == f.one());
    CHECK(f.parse("205").value() == 3);
    CHECK(f.parse("-1").value() == 100);
  }

  TEST_CASE("division by zero is rejected") {
    CHECK_THROWS_AS(q("1") / q("0"), DivisionByZero);
    CHECK_THROWS_AS(Rational::parse("3/0"), Error);
    const PrimeField f(101);
    CHECK_THROWS_AS(f.one() / f.zero(), DivisionByZero);
    CHECK_THROWS_AS(f.from_rational(q("1/101")), DivisionByZero);
  }

  TEST_CASE("rational normalization") {
    const Rational r(mpz_class(4), mpz_class(-6));
    CHECK(r.to_string() == "-2/3");
    CHECK(r.denominator() > 0);
    CHECK(Rational::parse(r.to_string()) == r);
    CHECK(Rational::parse(Rational::parse("12/8").to_string()).to_string() == "3/2");
    CHECK(Rational::parse("-0/5").to_string() == "0");
    CHECK_THROWS_AS(Rational::parse("1/2/3"), MalformedInput);
    CHECK_THROWS_AS(Rational::parse("abc"), MalformedInput);
  }

  TEST_CASE("normalization is idempotent on random inputs") {
    std::mt19937_64 rng(11);
    for (int k = 0; k < 1000; ++k) {
      const long num = static_cast<long>(rng() % 20001) - 10000;
      const long den = static_cast<long>(rng() % 2000) - 1000;
      if (den == 0) continue;
      const Rational r{mpz_class(num), mpz_class(den)};
      const Rational again = Rational::parse(r.to_string());
      CHECK(again == r);
      CHECK(again.to_string() == r.to_string());
      CHECK(gcd(r.numerator(), r.denominator()) == 1);
      CHECK(r.denominator() > 0);
    }
  }

  TEST_CASE_TEMPLATE("field axioms on random triples", F, RationalField, PrimeField) {
    const F field{};
    Sampler<F> s(field, 2024);
    for (int k = 0; k < 1000; ++k) {
      const auto a = s.next();
      const auto b = s.next();
      const auto c = s.next();
      CHECK((a + b) + c == a + (b + c));
      CHECK((a * b) * c == a * (b * c));
      CHECK(a * (b + c) == a * b + a * c);
      CHECK(a + b == b + a);
      CHECK(a * b == b * a);
      CHECK(a + field.zero() == a);
      CHECK(a * field.one() == a);
      CHECK(a + (-a) == field.zero());
      if (!is_zero(a)) {
        CHECK(a * inverse(a) == field.one());
        CHECK(b / a * a == b);
      }
    }
  }

  TEST_CASE("small prime fields") {
    const PrimeField f(5);
    for (long a = 1; a < 5; ++a) CHECK(f.from_int(a) * inverse(f.from_int(a)) == f.one());
  }

  TEST_CASE("prime field agrees with reduced rationals") {
    const RationalField qq;
    const PrimeField fp;
    Sampler<RationalField> s(qq, 99);
    for (int k = 0; k < 1000; ++k) {
      const Rational a = s.next();
      const Rational b = s.next();
      const Rational c = s.next_nonzero();
      const Rational r = a * b - c / (a + c + Rational(1001));
      CHECK(fp.from_rational(r) ==
            fp.from_rational(a) * fp.from_rational(b) -
                fp.from_rational(c) / (fp.from_rational(a) + fp.from_rational(c) + fp.from_int(1001)));
    }
  }

  TEST_CASE("mixing primes throws") {
    CHECK_THROWS_AS(PrimeField(101).one() + PrimeField(103).one(), Error);
  }

  TEST_CASE("primality and field specs") {
    CHECK(is_prime(2));
    CHECK(is_prime(101));
    CHECK(is_prime(kDefaultPrime));
    CHECK_FALSE(is_prime(1));
    CHECK_FALSE(is_prime(kDefaultPrime - 2));
    CHECK_FALSE(is_prime(3215031751ULL));  // strong pseudoprime to bases 2, 3, 5, 7
    CHECK_THROWS_AS(PrimeField(100), Error);
    CHECK_THROWS_AS(FieldSpec::prime_field(0, 91).validate(), Error);
    CHECK_NOTHROW(FieldSpec::prime_field(0).validate());
    CHECK_NOTHROW(FieldSpec::rationals(0).validate());
    CHECK(field_kind_name(FieldKind::Rationals) == "qq");
    CHECK(parse_field_kind("fp") == FieldKind::PrimeField);
  }

  TEST_CASE("sampler determinism") {
    const PrimeField f;
    Sampler<PrimeField> a(f, 5);
    Sampler<PrimeField> b(f, 5);
    CHECK(a.distinct(1) == b.distinct(1));
    Sampler<RationalField> c(RationalField{}, 5);
    Sampler<RationalField> d(RationalField{}, 5);
    for (int k = 0; k < 50; ++k) CHECK(c.next() == d.next());
    CHECK(derive_seed(1, 2) == derive_seed(1, 2));
    CHECK(derive_seed(1, 2) != derive_seed(1, 3));
  }

  TEST_CASE("sample distinct values avoiding a forbidden set") {
    const PrimeField f;
    Sampler<PrimeField> s(f, 17);
    const std::vector<ModP> forbidden{f.zero()};
    const auto xs = s.distinct(4, forbidden);
    REQUIRE(xs.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK_FALSE(is_zero(xs[i]));
      for (std::size_t j = i + 1; j < 4; ++j) CHECK_FALSE(xs[i] == xs[j]);
    }
    Sampler<PrimeField> tiny(PrimeField(5), 1);
    CHECK_THROWS_WITH_AS(tiny.distinct(6), doctest::Contains("field too small"), FieldTooSmall);
    CHECK(tiny.distinct(5).size() == 5);
  }
}
