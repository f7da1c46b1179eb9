#include <doctest.h>

#include "support.hpp"
#include "tdpair/poly.hpp"

using namespace tdpair;
using tdpair::test::q;
using tdpair::test::qq_array;
using tdpair::test::qs;

namespace {

ParameterArray<RationalField> krawtchouk(const char* zeta3) {
  return qq_array(3, qs({"3", "1", "-1", "-3"}), qs({"3", "1", "-1", "-3"}),
                  qs({"1", "0", "0", zeta3}));
}

std::vector<std::string> conditions(const ValidationResult& r) {
  std::vector<std::string> out;
  for (const auto& f : r.failures) out.push_back(f.condition);
  return out;
}

// (theta_{i-2} - theta_{i+1}) / (theta_{i-1} - theta_i)
template <class F>
typename F::Scalar ratio(const std::vector<typename F::Scalar>& t, std::size_t i) {
  return (t[i - 2] - t[i + 1]) / (t[i - 1] - t[i]);
}

}  // namespace

TEST_SUITE("params") {
  TEST_CASE("d=0 array passes") {
    const RationalField f;
    const auto r = validate_parameter_array(f, qq_array(0, qs({"0"}), qs({"0"}), qs({"1"})));
    CHECK(r.passed);
    CHECK(r.failures.empty());
    CHECK(r.sum == "1");
    CHECK_FALSE(r.beta.has_value());
  }

  TEST_CASE("d=3 Krawtchouk array") {
    const RationalField f;
    const auto r = validate_parameter_array(f, krawtchouk("1"));
    CHECK(r.passed);
    REQUIRE(r.beta.has_value());
    CHECK(*r.beta == "2");
    // eta_3(3)^2 + zeta_3 = 48^2 + 1
    CHECK(r.sum == "2305");
    const auto ctx = derive_context(f, qs({"3", "1", "-1", "-3"}), qs({"3", "1", "-1", "-3"}),
                                    qs({"0", "0", "1"}));
    REQUIRE(ctx.beta.has_value());
    CHECK(*ctx.beta == Rational(2));
    CHECK(ctx.epsilon == qs({"0", "0"}));
  }

  TEST_CASE("zeta_d = 0 and zeta_0 != 1 are rejected") {
    const RationalField f;
    const auto top = validate_parameter_array(f, krawtchouk("0"));
    CHECK_FALSE(top.passed);
    CHECK(conditions(top) == std::vector<std::string>{std::string(condition::kZetaTopNonzero)});
    CHECK(top.has_failure(condition::kZetaTopNonzero));

    auto pa = krawtchouk("1");
    pa.zeta[0] = q("2");
    const auto first = validate_parameter_array(f, pa);
    CHECK_FALSE(first.passed);
    CHECK(first.has_failure(condition::kZetaZeroIsOne));
    CHECK(std::string(condition::kZetaZeroIsOne) == "(ii) ζ_0=1");
  }

  TEST_CASE("vanishing sum is rejected") {
    const RationalField f;
    const auto r = validate_parameter_array(f, krawtchouk("-2304"));
    CHECK(conditions(r) == std::vector<std::string>{std::string(condition::kSumNonzero)});
  }

  TEST_CASE("d=1 example sum") {
    const RationalField f;
    const auto r = validate_parameter_array(f, qq_array(1, qs({"1", "-1"}), qs({"1", "-1"}), qs({"1", "1"})));
    CHECK(r.passed);
    CHECK(r.sum == "5");
    REQUIRE(r.notes.size() == 1);
    CHECK(r.notes[0].find("vacuously") != std::string::npos);
  }

  TEST_CASE("repeated eigenvalues") {
    const RationalField f;
    const auto r = validate_parameter_array(f, qq_array(2, qs({"1", "2", "1"}), qs({"0", "5", "5"}),
                                                        qs({"1", "3", "4"})));
    CHECK(r.has_failure(condition::kThetaDistinct));
    CHECK(r.has_failure(condition::kThetaStarDistinct));
  }

  TEST_CASE("d=4 geometric sequence") {
    const RationalField f;
    const auto th = qs({"16", "4", "1", "1/4", "1/16"});
    CHECK(ratio<RationalField>(th, 2) == q("21/4"));
    const auto ctx = derive_context(f, th, th, qs({"1", "2", "3", "4"}));
    REQUIRE(ctx.beta.has_value());
    CHECK(*ctx.beta == q("17/4"));
    CHECK(ctx.epsilon.size() == 3);
  }

  TEST_CASE("non-recurrent sequences") {
    const RationalField f;
    const auto th = qs({"0", "1", "2", "4"});
    const auto ths = qs({"0", "1", "2", "3"});
    CHECK_THROWS_WITH_AS(derive_context(f, th, ths, qs({"1", "1", "1"})),
                         doctest::Contains("not β-recurrent"), InadmissibleContext);
    const auto r = validate_parameter_array(f, qq_array(3, th, ths, qs({"1", "0", "0", "1"})));
    CHECK(r.has_failure(condition::kBetaRecurrent));
    CHECK_THROWS_AS(derive_context(f, qs({"0", "1"}), qs({"0"}), {}), MalformedInput);
  }

  TEST_CASE("epsilon values follow their definition") {
    const RationalField f;
    Sampler<RationalField> s(f, 4);
    const auto ctx = random_admissible_context(5, s);
    for (std::size_t i = 0; i + 2 <= 5; ++i) {
      const Rational want = (ctx.theta[i + 1] - ctx.theta[i + 2]) * (ctx.theta_star[i + 1] - ctx.theta_star[i + 2]) -
                            (ctx.theta[i] - ctx.theta[i + 1]) * (ctx.theta_star[i] - ctx.theta_star[i + 1]);
      CHECK(ctx.epsilon[i] == want);
    }
  }

  TEST_CASE_TEMPLATE("random contexts satisfy every invariant", F, RationalField, PrimeField) {
    const F f{};
    for (std::size_t d = 0; d <= 5; ++d) {
      for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Sampler<F> s(f, seed);
        const auto ctx = random_admissible_context(d, s);
        CHECK(ctx.theta.size() == d + 1);
        CHECK(ctx.y.size() == d);
        CHECK_NOTHROW(require_distinct(std::span<const typename F::Scalar>(ctx.theta), "theta"));
        CHECK_NOTHROW(require_distinct(std::span<const typename F::Scalar>(ctx.theta_star), "theta*"));
        CHECK(ctx.beta.has_value() == (d >= 3));
        if (d >= 3) {
          const auto b1 = *ctx.beta + f.one();
          CHECK_FALSE(is_zero(b1));
          for (std::size_t i = 2; i + 1 <= d; ++i) {
            CHECK(ratio<F>(ctx.theta, i) == b1);
            CHECK(ratio<F>(ctx.theta_star, i) == b1);
          }
        }
        if (d >= 4) CHECK_FALSE(is_zero(*ctx.beta));
        if (d == 5) CHECK_FALSE(is_zero(*ctx.beta * *ctx.beta + *ctx.beta - f.one()));
        Sampler<F> again(f, seed);
        const auto ctx2 = random_admissible_context(d, again);
        CHECK(ctx2.theta == ctx.theta);
        CHECK(ctx2.theta_star == ctx.theta_star);
        CHECK(ctx2.y == ctx.y);
      }
    }
  }

  TEST_CASE("random valid arrays validate") {
    const PrimeField f;
    for (std::size_t d = 0; d <= 6; ++d) {
      Sampler<PrimeField> s(f, 40 + d);
      const auto pa = random_valid_parameter_array(d, s);
      CHECK(validate_parameter_array(f, pa).passed);
      CHECK(pa.zeta[0] == f.one());
    }
  }

  TEST_CASE("removing one violation removes exactly that failure") {
    const RationalField f;
    auto pa = krawtchouk("0");
    pa.zeta[0] = q("3");
    const auto both = validate_parameter_array(f, pa);
    CHECK(both.has_failure(condition::kZetaZeroIsOne));
    CHECK(both.has_failure(condition::kZetaTopNonzero));
    pa.zeta[3] = q("1");
    const auto one = validate_parameter_array(f, pa);
    CHECK(one.has_failure(condition::kZetaZeroIsOne));
    CHECK_FALSE(one.has_failure(condition::kZetaTopNonzero));
    CHECK(one.failures.size() == both.failures.size() - 1);
  }

  TEST_CASE("affine maps preserve the verdict") {
    const RationalField f;
    Sampler<RationalField> s(f, 13);
    for (int trial = 0; trial < 30; ++trial) {
      const std::size_t d = static_cast<std::size_t>(trial % 5) + 1;
      ParameterArray<RationalField> pa;
      if (trial % 3 == 0) {
        pa = qq_array(d, s.distinct(d + 1), s.distinct(d + 1), {});
        pa.zeta.push_back(Rational(1));
        for (std::size_t i = 1; i <= d; ++i) pa.zeta.push_back(s.next());
      } else {
        pa = random_valid_parameter_array(d, s);
      }
      const auto before = validate_parameter_array(f, pa);
      const Rational u = s.next_nonzero(), v = s.next(), us = s.next_nonzero(), vs = s.next();
      auto mapped = pa;
      for (auto& t : mapped.theta) t = u * t + v;
      for (auto& t : mapped.theta_star) t = us * t + vs;
      // the (ii) sum scales by (u us)^d when zeta_i is rescaled by (u us)^i
      Rational scale(1);
      for (std::size_t i = 0; i <= d; ++i) {
        mapped.zeta[i] = pa.zeta[i] * scale;
        scale *= u * us;
      }
      const auto after = validate_parameter_array(f, mapped);
      CHECK(conditions(before) == conditions(after));
      CHECK(before.passed == after.passed);
    }
  }

  TEST_CASE("JSON round trip") {
    const auto pa = parse_parameter_array_json(
        R"({"d":1,"theta":["1","-1"],"theta_star":[1,-1],"zeta":["1","2/4"]})");
    CHECK(pa.d == 1);
    CHECK(pa.zeta[1] == q("1/2"));
    const RationalField f;
    const std::string text = parameter_array_to_json(f, pa);
    CHECK(parameter_array_to_json(f, parse_parameter_array_json(text)) == text);
    const PrimeField fp(101);
    const auto mapped = map_parameter_array(fp, pa);
    CHECK(mapped.zeta[1].value() == 51);
    CHECK(parameter_array_to_json(fp, mapped).find("\"prime\"") != std::string::npos);
  }

  TEST_CASE("malformed JSON is distinct from invalid arrays") {
    CHECK_THROWS_AS(parse_parameter_array_json("{"), MalformedInput);
    CHECK_THROWS_AS(parse_parameter_array_json(R"({"d":1,"theta":["1"],"theta_star":["1","2"],"zeta":["1","1"]})"),
                    MalformedInput);
    CHECK_THROWS_AS(parse_parameter_array_json(R"({"d":0,"theta":[0.5],"theta_star":["1"],"zeta":["1"]})"),
                    MalformedInput);
    CHECK_THROWS_AS(parse_parameter_array_json(R"({"theta":[]})"), MalformedInput);
  }

  TEST_CASE("validation JSON") {
    const RationalField f;
    const std::string j = validation_result_to_json(validate_parameter_array(f, krawtchouk("0")));
    CHECK(j.find("(ii) ζ_d≠0") != std::string::npos);
    CHECK(j.find("\"passed\":false") != std::string::npos);
  }
}
