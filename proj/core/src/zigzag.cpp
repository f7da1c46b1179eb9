#include "tdpair/zigzag.hpp"

#include <algorithm>
#include <cctype>

namespace tdpair {

bool letter_less(const Letter& a, const Letter& b) {
  if (a.index != b.index) return a.index < b.index;
  return !a.starred && b.starred;
}

bool word_less(const GeneratorWord& a, const GeneratorWord& b) {
  if (a.length() != b.length()) return a.length() < b.length();
  return std::lexicographical_compare(a.letters.begin(), a.letters.end(), b.letters.begin(),
                                      b.letters.end(), letter_less);
}

bool GeneratorWord::is_alternating() const {
  for (std::size_t k = 1; k < letters.size(); ++k) {
    if (letters[k].starred == letters[k - 1].starred) return false;
  }
  return true;
}

bool GeneratorWord::has_distinct_indices() const {
  for (std::size_t i = 0; i < letters.size(); ++i)
    for (std::size_t j = i + 1; j < letters.size(); ++j)
      if (letters[i].index == letters[j].index) return false;
  return true;
}

std::string GeneratorWord::to_string() const {
  if (letters.empty()) return "1";
  std::string out;
  for (const Letter& l : letters) {
    if (!out.empty()) out += ' ';
    out += l.starred ? "e*" : "e";
    out += std::to_string(l.index);
  }
  return out;
}

GeneratorWord GeneratorWord::parse(std::string_view text) {
  GeneratorWord w;
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  skip();
  if (text.substr(i) == "1") return w;
  while (i < text.size()) {
    if (text[i] != 'e') throw MalformedInput("word letter must start with 'e': " + std::string(text));
    ++i;
    Letter l;
    if (i < text.size() && text[i] == '*') {
      l.starred = true;
      ++i;
    }
    const std::size_t start = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    if (i == start) throw MalformedInput("word letter lacks an index: " + std::string(text));
    l.index = std::stoul(std::string(text.substr(start, i - start)));
    w.letters.push_back(l);
    skip();
  }
  return w;
}

bool is_between(std::size_t r, std::size_t i, std::size_t j) {
  return (i >= r && r > j) || (i <= r && r < j);
}

namespace {

// Condition (i) at interior position k.
bool middle_ok(const std::vector<Letter>& w, std::size_t k) {
  return !is_between(w[k].index, w[k - 1].index, w[k + 1].index);
}

// Condition (ii) for the pair (k-1, k) inside the window k-2 .. k+1.
bool pair_ok(const std::vector<Letter>& w, std::size_t k) {
  const std::size_t lo = w[k - 2].index;
  const std::size_t hi = w[k + 1].index;
  return !is_between(w[k - 1].index, lo, hi) || !is_between(w[k].index, lo, hi);
}

}  // namespace

bool is_zz(const GeneratorWord& w) {
  if (!w.is_alternating()) throw Error("word '" + w.to_string() + "' is not alternating");
  const auto& l = w.letters;
  const std::size_t n = l.size();
  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (!middle_ok(l, k)) return false;
  }
  for (std::size_t k = 2; k + 1 < n; ++k) {
    if (!pair_ok(l, k)) return false;
  }
  return true;
}

std::vector<GeneratorWord> enumerate_feasible(std::size_t d, std::size_t max_d) {
  if (d > max_d) {
    throw Error("feasible-word enumeration is limited to d <= " + std::to_string(max_d));
  }
  std::vector<GeneratorWord> out;
  std::vector<bool> used(d + 1, false);
  // Words are grown leftwards; a suffix of a zigzag word is zigzag, so only
  // the windows touching the new first letter need checking.
  std::vector<Letter> rev{{true, 0}};
  used[0] = true;
  auto emit = [&] {
    GeneratorWord w;
    w.letters.assign(rev.rbegin(), rev.rend());
    out.push_back(std::move(w));
  };
  auto front_ok = [&](const std::vector<Letter>& word) {
    if (word.size() >= 3 && !middle_ok(word, 1)) return false;
    if (word.size() >= 4 && !pair_ok(word, 2)) return false;
    return true;
  };
  auto dfs = [&](auto&& self) -> void {
    emit();
    const bool starred = !rev.back().starred;
    for (std::size_t idx = 0; idx <= d; ++idx) {
      if (used[idx]) continue;
      rev.push_back({starred, idx});
      std::vector<Letter> word(rev.rbegin(), rev.rend());
      if (front_ok(word)) {
        used[idx] = true;
        self(self);
        used[idx] = false;
      }
      rev.pop_back();
    }
  };
  dfs(dfs);
  std::sort(out.begin(), out.end(), word_less);
  return out;
}

ZzEnumeration enumerate_zz(std::size_t d, const ZzOptions& options) {
  if (d > 6) throw Error("zigzag enumeration is limited to d <= 6");
  ZzEnumeration result;
  result.max_len = options.max_len.value_or(2 * d + 2);
  result.count_by_length.assign(result.max_len + 1, 0);

  std::vector<Letter> alphabet;
  for (std::size_t i = 0; i <= d; ++i) {
    if (options.exclude_r != i) alphabet.push_back({false, i});
    if (options.exclude_s != i) alphabet.push_back({true, i});
  }
  std::sort(alphabet.begin(), alphabet.end(), letter_less);

  std::vector<Letter> word;
  auto emit = [&] {
    if (word.empty() && !options.include_trivial) return;
    if (result.words.size() >= options.budget) {
      throw Error("zigzag enumeration exceeded the budget of " + std::to_string(options.budget) +
                  " words");
    }
    result.words.push_back(GeneratorWord{word});
    ++result.count_by_length[word.size()];
  };
  auto dfs = [&](auto&& self) -> void {
    emit();
    if (word.size() == result.max_len) return;
    for (const Letter& l : alphabet) {
      if (!word.empty() && word.back().starred == l.starred) continue;
      word.push_back(l);
      const std::size_t n = word.size();
      const bool ok = (n < 3 || middle_ok(word, n - 2)) && (n < 4 || pair_ok(word, n - 2));
      if (ok) self(self);
      word.pop_back();
    }
  };
  dfs(dfs);
  std::sort(result.words.begin(), result.words.end(), word_less);
  return result;
}

bool is_convex(const std::vector<long>& seq) {
  for (std::size_t i = 1; i + 1 < seq.size(); ++i) {
    if (seq[i - 1] - seq[i] < seq[i] - seq[i + 1]) return false;
  }
  return true;
}

std::vector<std::vector<std::size_t>> enumerate_convex_spanning(std::size_t r) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> ks;
  // Extend while the last difference does not exceed the previous one.
  auto dfs = [&](auto&& self, std::size_t last, std::size_t last_gap) -> void {
    if (last <= last_gap) out.push_back(ks);  // closing step last -> 0
    for (std::size_t k = last - 1; k >= 1; --k) {
      const std::size_t gap = last - k;
      if (gap > last_gap) break;
      ks.push_back(k);
      self(self, k, gap);
      ks.pop_back();
    }
  };
  if (r == 0) return out;
  dfs(dfs, r, r);  // no earlier gap, so any first step is allowed
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return out;
}

template <class F>
Vector<typename F::Scalar> apply_word(const ModuleRealization<F>& real, const GeneratorWord& w,
                                      Vector<typename F::Scalar> v) {
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) {
    const auto& family = it->starred ? real.estar : real.e;
    if (it->index >= family.size()) {
      throw Error("word '" + w.to_string() + "' uses an index above d");
    }
    v = family[it->index] * v;
  }
  return v;
}

template <class F>
RankResult feasible_rank_test(const ModuleRealization<F>& real) {
  using S = typename F::Scalar;
  RankResult result;
  CheckList out("feasible/");
  const auto words = enumerate_feasible(real.d);
  const std::size_t n = real.basis.size();
  std::vector<Vector<S>> images;
  for (const auto& w : words) images.push_back(apply_word(real, w, real.phi()));
  result.words = words.size();
  result.rank = rank(from_columns(std::span<const Vector<S>>(images), n,
                                  real.context.field.zero()));
  out.add("count", result.words == n,
          std::to_string(result.words) + " words, expected " + std::to_string(n));
  out.add("rank", result.rank == n,
          "rank " + std::to_string(result.rank) + " of " + std::to_string(n));
  result.checks = out.take();
  return result;
}

template Vector<RationalField::Scalar> apply_word(const ModuleRealization<RationalField>&,
                                                  const GeneratorWord&,
                                                  Vector<RationalField::Scalar>);
template Vector<PrimeField::Scalar> apply_word(const ModuleRealization<PrimeField>&,
                                               const GeneratorWord&, Vector<PrimeField::Scalar>);
template RankResult feasible_rank_test(const ModuleRealization<RationalField>&);
template RankResult feasible_rank_test(const ModuleRealization<PrimeField>&);

}  // namespace tdpair
