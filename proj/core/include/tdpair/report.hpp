#pragma once

// Structured pass/fail records with enough metadata to replay a run.

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tdpair/scalar.hpp"

namespace tdpair {

struct Check {
  std::string id;
  bool passed = true;
  std::string detail;
  friend bool operator==(const Check&, const Check&) = default;
};

// Collects checks under a common id prefix.
class CheckList {
 public:
  explicit CheckList(std::string prefix = {}) : prefix_(std::move(prefix)) {}

  void add(std::string id, bool passed, std::string detail = {}) {
    checks_.push_back({prefix_ + id, passed, std::move(detail)});
  }
  void append(std::span<const Check> more) {
    for (const Check& c : more) checks_.push_back({prefix_ + c.id, c.passed, c.detail});
  }
  bool all_passed() const {
    for (const Check& c : checks_) {
      if (!c.passed) return false;
    }
    return true;
  }
  std::size_t failures() const {
    std::size_t n = 0;
    for (const Check& c : checks_) n += c.passed ? 0 : 1;
    return n;
  }
  const std::vector<Check>& checks() const noexcept { return checks_; }
  std::vector<Check> take() { return std::move(checks_); }

 private:
  std::string prefix_;
  std::vector<Check> checks_;
};

struct VerificationReport {
  std::string command;
  FieldSpec field;
  std::string asset_version;
  std::size_t trials = 0;
  std::vector<Check> checks;  // kept sorted by id
  bool overall = true;
  // Optional payload, e.g. enumerated word lists.
  std::map<std::string, std::vector<std::string>> data;

  // Sorts checks by id and recomputes `overall`.
  void finalize();
  std::size_t failure_count() const;
};

VerificationReport make_report(std::string command, const FieldSpec& field,
                               std::string asset_version, std::size_t trials,
                               std::vector<Check> checks);

// Concatenates checks and sums trial counts.  Throws Error when the
// commands or field specs differ, or when `reports` is empty.
VerificationReport merge(std::span<const VerificationReport> reports);

std::string to_json(const VerificationReport& report);
// Throws MalformedInput.
VerificationReport report_from_json(std::string_view text);

// One line per failed check plus a closing tally.
std::string human_summary(const VerificationReport& report);

}  // namespace tdpair
