#include <doctest.h>

#include "tdpair/error.hpp"
#include "tdpair/report.hpp"

using namespace tdpair;

namespace {

VerificationReport sample(std::vector<Check> checks) {
  return make_report("verify-appendix", FieldSpec::prime_field(7), "tdpair-appendix 1", 2,
                     std::move(checks));
}

}  // namespace

TEST_SUITE("report") {
  TEST_CASE("check lists prefix ids") {
    CheckList list("trial03/");
    list.add("minpoly/a", true);
    list.append(std::vector<Check>{{"shape/E", false, "rank 2"}});
    CHECK(list.failures() == 1);
    CHECK_FALSE(list.all_passed());
    CHECK(list.checks()[0].id == "trial03/minpoly/a");
    CHECK(list.checks()[1].id == "trial03/shape/E");
  }

  TEST_CASE("finalize sorts and recomputes the verdict") {
    auto r = sample({{"b", true, ""}, {"a", true, ""}});
    CHECK(r.overall);
    CHECK(r.checks[0].id == "a");
    r.checks.push_back({"0", false, "x"});
    r.finalize();
    CHECK_FALSE(r.overall);
    CHECK(r.checks[0].id == "0");
    CHECK(r.failure_count() == 1);
  }

  TEST_CASE("merging") {
    const std::vector<VerificationReport> ok = {sample({{"a", true, ""}}), sample({{"b", true, ""}})};
    const auto m = merge(ok);
    CHECK(m.overall);
    CHECK(m.trials == 4);
    CHECK(m.checks.size() == 2);

    const std::vector<VerificationReport> mixed = {sample({{"a", true, ""}}), sample({{"b", false, ""}})};
    CHECK_FALSE(merge(mixed).overall);

    auto other = sample({{"c", true, ""}});
    other.field = FieldSpec::rationals(7);
    const std::vector<VerificationReport> fields = {sample({}), other};
    CHECK_THROWS_AS(merge(fields), Error);

    auto cmd = sample({});
    cmd.command = "shape";
    const std::vector<VerificationReport> cmds = {sample({}), cmd};
    CHECK_THROWS_AS(merge(cmds), Error);
    CHECK_THROWS_AS(merge(std::span<const VerificationReport>{}), Error);
  }

  TEST_CASE("JSON round trip is byte identical") {
    auto r = sample({{"trial00/minpoly/a", true, ""}, {"trial00/shape/E", false, "ranks 1,2"}});
    r.data["words"] = {"e*0", "e1 e*0"};
    const std::string text = to_json(r);
    CHECK(text.back() == '\n');
    CHECK(text.find("\"prime\": \"4611686018427387847\"") != std::string::npos);
    const auto back = report_from_json(text);
    CHECK(back.checks == r.checks);
    CHECK(back.field == r.field);
    CHECK(back.data == r.data);
    CHECK(to_json(back) == text);

    auto q = make_report("shape", FieldSpec::rationals(3), "tdpair-appendix 1", 1, {});
    CHECK(to_json(report_from_json(to_json(q))) == to_json(q));
  }

  TEST_CASE("malformed report JSON") {
    CHECK_THROWS_AS(report_from_json("not json"), MalformedInput);
    CHECK_THROWS_AS(report_from_json("{}"), MalformedInput);
    CHECK_THROWS_AS(report_from_json(R"({"command": 3})"), MalformedInput);
  }

  TEST_CASE("human summary") {
    const auto r = sample({{"a", true, ""}, {"b", false, "mismatch"}, {"c", false, ""}});
    const std::string s = human_summary(r);
    CHECK(s.find("FAIL b: mismatch\n") != std::string::npos);
    CHECK(s.find("FAIL c\n") != std::string::npos);
    CHECK(s.find("1/3 checks passed") != std::string::npos);
    CHECK(s.find("-> FAIL\n") != std::string::npos);
    CHECK(human_summary(sample({{"a", true, ""}})).find("-> PASS") != std::string::npos);
  }
}
