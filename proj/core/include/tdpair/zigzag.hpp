#pragma once

// Words in the standard generators e_i, e*_i: betweenness, the zigzag
// conditions, feasible words, convex spanning sequences, and the rank of
// feasible-word images in a realized module.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tdpair/appendix.hpp"
#include "tdpair/report.hpp"

namespace tdpair {

struct Letter {
  bool starred = false;
  std::size_t index = 0;
  friend bool operator==(const Letter&, const Letter&) = default;
};

// Index ascending, then e_i before e*_i.
bool letter_less(const Letter& a, const Letter& b);

struct GeneratorWord {
  std::vector<Letter> letters;  // empty = trivial word

  std::size_t length() const noexcept { return letters.size(); }
  bool is_alternating() const;
  bool has_distinct_indices() const;
  // "e2 e*1 e3 e*0"; the trivial word prints as "1".
  std::string to_string() const;
  // Inverse of to_string.  Throws MalformedInput.
  static GeneratorWord parse(std::string_view text);

  friend bool operator==(const GeneratorWord&, const GeneratorWord&) = default;
};

// Shortlex with letter_less.
bool word_less(const GeneratorWord& a, const GeneratorWord& b);

// r is between (i, j) iff i >= r > j or i <= r < j.
bool is_between(std::size_t r, std::size_t i, std::size_t j);

// Both zigzag conditions.  Throws Error for a non-alternating word.
bool is_zz(const GeneratorWord& w);

// Nontrivial zigzag words ending in e*_0 with distinct indices, in
// canonical order.  Throws Error when d exceeds `max_d`.
std::vector<GeneratorWord> enumerate_feasible(std::size_t d, std::size_t max_d = 12);

struct ZzOptions {
  std::optional<std::size_t> exclude_r;  // omit e_r
  std::optional<std::size_t> exclude_s;  // omit e*_s
  std::optional<std::size_t> max_len;    // default 2d + 2
  bool include_trivial = true;
  std::size_t budget = 2'000'000;        // maximum number of words
};

struct ZzEnumeration {
  std::vector<GeneratorWord> words;            // canonical order
  std::vector<std::size_t> count_by_length;    // index = length
  std::size_t max_len = 0;
};

// All zigzag words of length <= max_len over the allowed letters.  Throws
// Error when the budget is exceeded or d > 6.
ZzEnumeration enumerate_zz(std::size_t d, const ZzOptions& options = {});

// Sequences r > k_1 > ... > k_m > 0 such that (r, k_1, ..., k_m, 0) has
// nonincreasing consecutive differences; ordered by length, then
// lexicographically.
std::vector<std::vector<std::size_t>> enumerate_convex_spanning(std::size_t r);
bool is_convex(const std::vector<long>& seq);

// Applies w to v, rightmost letter first.
template <class F>
Vector<typename F::Scalar> apply_word(const ModuleRealization<F>& real, const GeneratorWord& w,
                                      Vector<typename F::Scalar> v);

struct RankResult {
  std::size_t words = 0;
  std::size_t rank = 0;
  std::vector<Check> checks;
};

// Rank of {w.phi : w feasible}; expects 2^d words of full rank 2^d.
template <class F>
RankResult feasible_rank_test(const ModuleRealization<F>& real);

}  // namespace tdpair
