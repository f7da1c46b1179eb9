#include <doctest.h>

#include "support.hpp"
#include "tdpair/tdsystem.hpp"

using namespace tdpair;
using tdpair::test::q;
using tdpair::test::qq_array;
using tdpair::test::qs;
using tdpair::test::table;

namespace {

bool all_pass(const std::vector<Check>& checks) {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

const Check* find(const std::vector<Check>& checks, const std::string& id) {
  for (const auto& c : checks) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

ParameterArray<RationalField> example1() {
  return qq_array(1, qs({"1", "-1"}), qs({"1", "-1"}), qs({"1", "1"}));
}

template <class S>
Matrix<S> diag(const std::vector<S>& values, const S& zero) {
  Matrix<S> m(values.size(), values.size(), zero);
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

}  // namespace

TEST_SUITE("tdsystem") {
  TEST_CASE("two-dimensional construction") {
    const RationalField f;
    const auto c = construct_from_params(f, example1(), table(1));
    REQUIRE(c.checks.size() == 1);
    CHECK(c.checks[0].id == "g/i=1");
    CHECK(c.checks[0].passed);
    const auto sub = submodule_closure(c.real, c.real.phi());
    CHECK(sub.dim() == 2);
  }

  TEST_CASE("two-dimensional extraction") {
    const RationalField f;
    const auto pa = example1();
    const auto c = construct_from_params(f, pa, table(1));
    const auto sub = submodule_closure(c.real, c.real.phi());
    const auto rep = extract_td_system(f, c.real.a, c.real.astar, sub, pa.theta, pa.theta_star);
    CHECK(rep.axioms_pass());
    CHECK(rep.diameter == 1);
    CHECK(rep.eigenvalues == qs({"1", "-1"}));
    CHECK(rep.dual_eigenvalues == qs({"1", "-1"}));
    CHECK(rep.shape == std::vector<std::size_t>{1, 1});
    CHECK(rep.sharp);
    CHECK(rep.split == qs({"1", "1"}));
    CHECK(rep.irreducibility.irreducible);
    CHECK(rep.irreducibility.span_dim == 4);
    const std::string json = rep.to_json(f);
    CHECK(json.find("\"split\":[\"1\",\"1\"]") != std::string::npos);
    CHECK(all_pass(roundtrip(f, pa, table(1))));
  }

  TEST_CASE("zero-dimensional case") {
    const RationalField f;
    const auto pa = qq_array(0, qs({"4"}), qs({"-2"}), qs({"1"}));
    const auto c = construct_from_params(f, pa, table(0));
    CHECK(c.real.basis.size() == 1);
    CHECK(c.checks.empty());
    const auto sub = submodule_closure(c.real, c.real.phi());
    const auto rep = extract_td_system(f, c.real.a, c.real.astar, sub, pa.theta, pa.theta_star);
    CHECK(rep.diameter == 0);
    CHECK(rep.axioms_pass());
    CHECK(rep.split == qs({"1"}));
    CHECK(all_pass(roundtrip(f, pa, table(0))));
  }

  TEST_CASE("invalid arrays are rejected before realization") {
    const RationalField f;
    auto pa = example1();
    pa.zeta[1] = Rational(0);
    CHECK_THROWS_WITH_AS(construct_from_params(f, pa, table(1)), doctest::Contains("(ii) ζ_d≠0"),
                         InadmissibleContext);
    CHECK_THROWS_AS(construct_from_params(f, example1(), table(2)), Error);
  }

  TEST_CASE("swapped eigenvalues are detected") {
    const PrimeField f;
    Sampler<PrimeField> s(f, 8);
    const auto pa = random_valid_parameter_array(3, s);
    const auto c = construct_from_params(f, pa, table(3));
    const auto sub = submodule_closure(c.real, c.real.phi());
    auto swapped = pa.theta;
    std::swap(swapped[0], swapped[1]);
    const auto rep = extract_td_system(f, c.real.a, c.real.astar, sub, swapped, pa.theta_star);
    CHECK_FALSE(rep.axioms_pass());
    bool band = false;
    for (const auto& ch : rep.checks) {
      if (!ch.passed && ch.id.find("tridiagonal/") != std::string::npos) band = true;
    }
    CHECK(band);
    const auto good = extract_td_system(f, c.real.a, c.real.astar, sub, pa.theta, pa.theta_star);
    CHECK(good.axioms_pass());
  }

  TEST_CASE("wrong eigenvalue lists fail diagonalizability") {
    const PrimeField f;
    Sampler<PrimeField> s(f, 2);
    const auto pa = random_valid_parameter_array(2, s);
    const auto c = construct_from_params(f, pa, table(2));
    const auto sub = submodule_closure(c.real, c.real.phi());
    auto wrong = pa.theta;
    wrong[2] = wrong[2] + f.one();
    const auto rep = extract_td_system(f, c.real.a, c.real.astar, sub, wrong, pa.theta_star);
    const Check* diag_check = find(rep.checks, "td/diagonalizable/a");
    REQUIRE(diag_check != nullptr);
    CHECK_FALSE(diag_check->passed);
  }

  TEST_CASE("closure of a coordinate vector under diagonal operators") {
    const RationalField f;
    const auto a = diag(qs({"1", "2", "3"}), Rational(0));
    const auto sub = submodule_closure(f, {a, a}, qs({"0", "1", "0"}));
    CHECK(sub.dim() == 1);
    CHECK(sub.pivots == std::vector<std::size_t>{1});
    CHECK(restrict_to(a, sub)(0, 0) == Rational(2));
  }

  TEST_CASE("closure is idempotent") {
    const PrimeField f;
    Sampler<PrimeField> s(f, 4);
    const auto real = realize(table(3), random_admissible_context(3, s));
    Vector<ModP> seed = real.e[2] * real.phi();
    const auto sub = submodule_closure(real, seed);
    for (std::size_t i = 0; i < sub.dim(); ++i) {
      const Vector<ModP> row(sub.basis.row(i).begin(), sub.basis.row(i).end());
      const auto again = submodule_closure(real, row);
      CHECK(again.basis.rows() <= sub.basis.rows());
    }
    const Vector<ModP> first(sub.basis.row(0).begin(), sub.basis.row(0).end());
    CHECK(submodule_closure(real, first).dim() <= sub.dim());
    CHECK_NOTHROW(restrict_to(real.a, sub));
  }

  TEST_CASE("restriction rejects a non-invariant subspace") {
    const RationalField f;
    auto a = Matrix<Rational>::zeros(f, 2, 2);
    a(1, 0) = Rational(1);
    Subspace<Rational> sub{Matrix<Rational>(1, 2, Rational(0)), {0}};
    sub.basis(0, 0) = Rational(1);
    CHECK_THROWS_AS(restrict_to(a, sub), Error);
  }

  TEST_CASE("irreducibility examples") {
    const PrimeField f;
    const auto d2 = diag(std::vector<ModP>{f.from_int(1), f.from_int(2)}, f.zero());
    const auto r = irreducibility_check(f, d2, d2);
    CHECK_FALSE(r.irreducible);
    CHECK(r.span_dim == 2);
    CHECK(r.target == 4);

    const auto one = diag(std::vector<ModP>{f.from_int(5)}, f.zero());
    CHECK(irreducibility_check(f, one, one).irreducible);

    // a generic three-dimensional tridiagonal pair
    Sampler<PrimeField> s(f, 6);
    const auto th = s.distinct(3);
    const auto a = diag(th, f.zero());
    auto astar = Matrix<ModP>::zeros(f, 3, 3);
    for (std::size_t i = 0; i < 3; ++i) {
      astar(i, i) = s.next();
      if (i + 1 < 3) {
        astar(i, i + 1) = s.next_nonzero();
        astar(i + 1, i) = s.next_nonzero();
      }
    }
    const auto g = irreducibility_check(f, a, astar);
    CHECK(g.irreducible);
    CHECK(g.span_dim == 9);
  }

  TEST_CASE("irreducibility over the rationals") {
    const RationalField f;
    const auto a = diag(qs({"1", "2", "3"}), Rational(0));
    auto astar = Matrix<Rational>::zeros(f, 3, 3);
    astar(0, 1) = q("1/2");
    astar(1, 0) = Rational(3);
    astar(1, 2) = Rational(-1);
    astar(2, 1) = q("7/5");
    const auto r = irreducibility_check(f, a, astar);
    CHECK(r.irreducible);
    CHECK(r.conclusive);
    // block diagonal: reducible, settled by exact recomputation
    auto split = Matrix<Rational>::zeros(f, 3, 3);
    split(0, 1) = Rational(1);
    split(1, 0) = Rational(1);
    const auto red = irreducibility_check(f, a, split);
    CHECK_FALSE(red.irreducible);
    CHECK(red.conclusive);
    CHECK(red.span_dim == 5);
  }

  TEST_CASE("exact and modular spans agree on a small prime") {
    const PrimeField big;
    const PrimeField small(101);
    const auto a = diag(std::vector<ModP>{small.from_int(1), small.from_int(2)}, small.zero());
    auto astar = Matrix<ModP>::zeros(small, 2, 2);
    astar(0, 1) = small.one();
    astar(1, 0) = small.one();
    CHECK(irreducibility_check(small, a, astar).span_dim == 4);
    const PrimeField two(2);
    const auto a2 = diag(std::vector<ModP>{two.zero(), two.one()}, two.zero());
    auto s2 = Matrix<ModP>::zeros(two, 2, 2);
    s2(0, 1) = two.one();
    CHECK(irreducibility_check(two, a2, s2).span_dim == 3);
    (void)big;
  }

  TEST_CASE("sandwich checks hold for generic y") {
    const PrimeField f;
    for (std::size_t d = 1; d <= 4; ++d) {
      Sampler<PrimeField> s(f, 50 + d);
      const auto ctx = random_admissible_context(d, s);
      const auto real = realize(table(d), ctx);
      Subspace<ModP> whole{Matrix<ModP>::identity(f, real.basis.size()), {}};
      for (std::size_t i = 0; i < real.basis.size(); ++i) whole.pivots.push_back(i);
      const auto rep = extract_td_system(f, real.a, real.astar, whole, ctx.theta, ctx.theta_star);
      for (const auto& c : rep.checks) {
        if (c.id.find("tridiagonal/") != std::string::npos) CHECK_MESSAGE(c.passed, c.id);
      }
      CHECK(rep.shape == binomial_row(d));
    }
  }

  TEST_CASE_TEMPLATE("random round trips", F, PrimeField, RationalField) {
    const F f{};
    const std::size_t top = F::kind == FieldKind::PrimeField ? 4 : 3;
    for (std::size_t d = 0; d <= top; ++d) {
      for (std::uint64_t seed = 0; seed < 3; ++seed) {
        Sampler<F> s(f, seed);
        const auto pa = random_valid_parameter_array(d, s);
        const auto checks = roundtrip(f, pa, table(d));
        CHECK_MESSAGE(all_pass(checks), "d=" << d << " seed=" << seed);
        const Check* split = find(checks, "compare/split");
        REQUIRE(split != nullptr);
        CHECK(split->passed);
        for (std::size_t i = 1; i <= d; ++i) CHECK(find(checks, "g/i=" + std::to_string(i)) != nullptr);
      }
    }
  }

  TEST_CASE("split sequence before any quotient") {
    const PrimeField f;
    Sampler<PrimeField> s(f, 31);
    const auto pa = random_valid_parameter_array(3, s);
    const auto c = construct_from_params(f, pa, table(3));
    Subspace<ModP> whole{Matrix<ModP>::identity(f, 8), {0, 1, 2, 3, 4, 5, 6, 7}};
    const auto rep = extract_td_system(f, c.real.a, c.real.astar, whole, pa.theta, pa.theta_star);
    CHECK(rep.split == pa.zeta);
  }
}
