#include "tdpair/report.hpp"

#include <algorithm>
#include <json.hpp>

namespace tdpair {

void VerificationReport::finalize() {
  std::stable_sort(checks.begin(), checks.end(),
                   [](const Check& a, const Check& b) { return a.id < b.id; });
  overall = std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

std::size_t VerificationReport::failure_count() const {
  return static_cast<std::size_t>(
      std::count_if(checks.begin(), checks.end(), [](const Check& c) { return !c.passed; }));
}

VerificationReport make_report(std::string command, const FieldSpec& field,
                               std::string asset_version, std::size_t trials,
                               std::vector<Check> checks) {
  VerificationReport r;
  r.command = std::move(command);
  r.field = field;
  r.asset_version = std::move(asset_version);
  r.trials = trials;
  r.checks = std::move(checks);
  r.finalize();
  return r;
}

VerificationReport merge(std::span<const VerificationReport> reports) {
  if (reports.empty()) throw Error("merge: no reports given");
  VerificationReport out;
  out.command = reports[0].command;
  out.field = reports[0].field;
  out.asset_version = reports[0].asset_version;
  for (const auto& r : reports) {
    if (r.command != out.command) {
      throw Error("merge: mixed commands '" + out.command + "' and '" + r.command + "'");
    }
    if (!(r.field == out.field)) throw Error("merge: mixed field specs");
    if (r.asset_version != out.asset_version) throw Error("merge: mixed asset versions");
    out.trials += r.trials;
    out.checks.insert(out.checks.end(), r.checks.begin(), r.checks.end());
    for (const auto& [key, values] : r.data) {
      auto& dst = out.data[key];
      dst.insert(dst.end(), values.begin(), values.end());
    }
  }
  out.finalize();
  return out;
}

namespace {

nlohmann::json field_json(const FieldSpec& f) {
  nlohmann::json j;
  j["kind"] = std::string(field_kind_name(f.kind));
  j["prime"] = f.kind == FieldKind::PrimeField ? std::to_string(f.prime) : "";
  j["prng"] = std::string(kPrngAlgorithm);
  return j;
}

template <class T>
T require(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw MalformedInput(std::string("report is missing \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw MalformedInput(std::string("report field \"") + key + "\": " + e.what());
  }
}

}  // namespace

std::string to_json(const VerificationReport& report) {
  nlohmann::json j;
  j["command"] = report.command;
  j["field"] = field_json(report.field);
  j["seed"] = report.field.seed;
  j["asset_version"] = report.asset_version;
  j["trials"] = report.trials;
  j["checks"] = nlohmann::json::array();
  for (const Check& c : report.checks) {
    j["checks"].push_back({{"id", c.id}, {"passed", c.passed}, {"detail", c.detail}});
  }
  j["overall"] = report.overall;
  if (!report.data.empty()) j["data"] = report.data;
  return j.dump(2) + "\n";
}

VerificationReport report_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw MalformedInput(std::string("report is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw MalformedInput("report must be a JSON object");
  VerificationReport r;
  r.command = require<std::string>(j, "command");
  const auto field = require<nlohmann::json>(j, "field");
  if (!field.is_object()) throw MalformedInput("report \"field\" must be an object");
  try {
    r.field.kind = parse_field_kind(require<std::string>(field, "kind"));
  } catch (const Error& e) {
    throw MalformedInput(e.what());
  }
  const auto prime = require<std::string>(field, "prime");
  r.field.prime = prime.empty() ? 0 : std::stoull(prime);
  r.field.seed = require<std::uint64_t>(j, "seed");
  r.asset_version = require<std::string>(j, "asset_version");
  r.trials = require<std::size_t>(j, "trials");
  for (const auto& c : require<nlohmann::json>(j, "checks")) {
    r.checks.push_back({require<std::string>(c, "id"), require<bool>(c, "passed"),
                        require<std::string>(c, "detail")});
  }
  r.overall = require<bool>(j, "overall");
  if (j.contains("data")) {
    r.data = require<std::map<std::string, std::vector<std::string>>>(j, "data");
  }
  return r;
}

std::string human_summary(const VerificationReport& report) {
  std::string out;
  for (const Check& c : report.checks) {
    if (!c.passed) out += "FAIL " + c.id + (c.detail.empty() ? "" : ": " + c.detail) + "\n";
  }
  out += report.command + ": " + std::to_string(report.checks.size() - report.failure_count()) +
         "/" + std::to_string(report.checks.size()) + " checks passed over " +
         std::to_string(report.trials) + " trial(s), field " +
         std::string(field_kind_name(report.field.kind)) + ", seed " +
         std::to_string(report.field.seed) + " -> " + (report.overall ? "PASS" : "FAIL") + "\n";
  return out;
}

}  // namespace tdpair
