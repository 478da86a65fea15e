// langgen.hpp -- artificial-language generation: roots, morphological rules,
// full lexicons (all root x inflection combinations), stratified train/test
// splits, and syllabification.

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "morphlab/phonfeat.hpp"
#include "morphlab/rng.hpp"

namespace morphlab {

// ---------------------------------------------------------------------------
// Rules

enum class RuleKind { kPrefix, kSuffix, kTemplate, kHarmonySuffix };

inline const char* rule_kind_name(RuleKind k) {
  switch (k) {
    case RuleKind::kPrefix: return "prefix";
    case RuleKind::kSuffix: return "suffix";
    case RuleKind::kTemplate: return "template";
    case RuleKind::kHarmonySuffix: return "harmony-suffix";
  }
  return "?";
}

/// One inflectional category realized by a single morphological process.
///
/// Allomorph encoding by kind:
///   prefix / suffix   two-segment affix strings, e.g. "fi"
///   template          slot patterns over root consonants, digits '1'..'3'
///                     plus literal segments, e.g. "1a23a" for C1aC2C3a
///   harmony-suffix    `allomorphs` holds the front variants and
///                     `back_allomorphs` the back variants, pairwise
struct MorphRule {
  RuleKind kind;
  int category_id = 0;
  std::vector<std::string> allomorphs;
  std::vector<std::string> back_allomorphs;  // harmony-suffix only
};

namespace detail {

inline void check_affix(const std::string& a, const SegmentInventory& inv,
                        const std::string& what) {
  if (a.size() != 2)
    throw std::invalid_argument(what + " '" + a + "' must have 2 segments");
  for (char c : a)
    if (!inv.contains(c))
      throw std::invalid_argument(what + " '" + a + "' uses segment '" +
                                  std::string(1, c) + "' not in inventory " +
                                  inv.name());
}

inline void check_template(const std::string& t, const SegmentInventory& inv) {
  std::vector<int> first_seen;
  for (char c : t) {
    if (c >= '1' && c <= '3') {
      int slot = c - '1';
      if (std::find(first_seen.begin(), first_seen.end(), slot) ==
          first_seen.end())
        first_seen.push_back(slot);
    } else if (!inv.contains(c)) {
      throw std::invalid_argument("template '" + t + "' uses segment '" +
                                  std::string(1, c) + "' not in inventory " +
                                  inv.name());
    }
  }
  // Slots must cover C1..C3 with first occurrences in order.
  if (first_seen != std::vector<int>{0, 1, 2})
    throw std::invalid_argument("template '" + t +
                                "' must use slots C1,C2,C3 in order");
}

}  // namespace detail

inline void validate_rule(const MorphRule& rule, const SegmentInventory& inv) {
  if (rule.allomorphs.size() != 3)
    throw std::invalid_argument(std::string(rule_kind_name(rule.kind)) +
                                " rule must have exactly 3 allomorphs");
  std::set<std::string> uniq(rule.allomorphs.begin(), rule.allomorphs.end());
  if (uniq.size() != 3)
    throw std::invalid_argument("rule allomorphs must be distinct");

  switch (rule.kind) {
    case RuleKind::kPrefix:
    case RuleKind::kSuffix:
      for (const auto& a : rule.allomorphs)
        detail::check_affix(a, inv, "affix");
      break;
    case RuleKind::kTemplate:
      for (const auto& t : rule.allomorphs) detail::check_template(t, inv);
      break;
    case RuleKind::kHarmonySuffix: {
      if (rule.back_allomorphs.size() != 3)
        throw std::invalid_argument(
            "harmony-suffix rule needs 3 back allomorphs");
      for (std::size_t i = 0; i < 3; ++i) {
        const std::string& front = rule.allomorphs[i];
        const std::string& back = rule.back_allomorphs[i];
        detail::check_affix(front, inv, "harmony affix");
        detail::check_affix(back, inv, "harmony affix");
        // The pair must differ only in vowel backness.
        for (std::size_t k = 0; k < front.size(); ++k) {
          char fc = front[k], bc = back[k];
          if (fc == bc) {
            if (inv.is_vowel(fc))
              throw std::invalid_argument("harmony pair " + front + "/" +
                                          back + " shares a vowel");
            continue;
          }
          if (!inv.is_vowel(fc) || !inv.is_vowel(bc) ||
              inv.harmony_partner(fc) != bc || inv.is_back_vowel(fc))
            throw std::invalid_argument(
                "harmony pair " + front + "/" + back +
                " must differ only in vowel backness (front form first)");
        }
      }
      break;
    }
  }
}

// ---------------------------------------------------------------------------
// Roots

struct RootShape {
  std::string pattern;  // over {C, V}, e.g. "CVCVC"

  explicit RootShape(std::string p) : pattern(std::move(p)) {
    if (pattern.empty())
      throw std::invalid_argument("root shape pattern must be nonempty");
    for (char c : pattern)
      if (c != 'C' && c != 'V')
        throw std::invalid_argument("root shape '" + pattern +
                                    "' may contain only C and V");
  }
};

namespace detail {

inline bool vowels_agree_in_backness(const std::string& phones,
                                     const SegmentInventory& inv) {
  std::optional<bool> back;
  for (char c : phones) {
    if (!inv.is_vowel(c)) continue;
    bool b = inv.is_back_vowel(c);
    if (!back) back = b;
    else if (*back != b) return false;
  }
  return true;
}

// All strings matching the shape, in lexicographic inventory order.
inline std::vector<std::string> enumerate_shape(const RootShape& shape,
                                                const SegmentInventory& inv) {
  std::vector<std::vector<char>> pools;
  for (char c : shape.pattern)
    pools.push_back(c == 'C' ? inv.consonants() : inv.vowels());
  std::vector<std::string> out{""};
  for (const auto& pool : pools) {
    std::vector<std::string> next;
    next.reserve(out.size() * pool.size());
    for (const auto& prefix : out)
      for (char c : pool) next.push_back(prefix + c);
    out = std::move(next);
  }
  return out;
}

}  // namespace detail

/// Draws `count` distinct roots matching `shape`, uniformly without
/// replacement. With `harmonic`, all vowels within a root share backness.
inline std::vector<std::string> generate_roots(const RootShape& shape,
                                               int count,
                                               const SegmentInventory& inv,
                                               Rng& rng,
                                               bool harmonic = false) {
  if (count < 1) throw std::invalid_argument("root count must be >= 1");

  double possible = 1.0;
  for (char c : shape.pattern)
    possible *= static_cast<double>(
        c == 'C' ? inv.consonants().size() : inv.vowels().size());
  if (possible > 1u << 20)
    throw std::invalid_argument("root shape '" + shape.pattern +
                                "' space too large to enumerate");

  std::vector<std::string> all = detail::enumerate_shape(shape, inv);
  if (harmonic) {
    std::erase_if(all, [&](const std::string& r) {
      return !detail::vowels_agree_in_backness(r, inv);
    });
  }
  if (static_cast<std::size_t>(count) > all.size())
    throw std::invalid_argument(
        "cannot draw " + std::to_string(count) + " distinct " + shape.pattern +
        " roots from inventory " + inv.name() +
        (harmonic ? " under the harmony constraint" : ""));
  rng.shuffle(all);
  all.resize(static_cast<std::size_t>(count));
  return all;
}

// ---------------------------------------------------------------------------
// Rule application

/// Applies one allomorph of a rule to a base form.
inline std::string apply_rule(const MorphRule& rule, int allomorph_index,
                              const std::string& base,
                              const SegmentInventory& inv) {
  if (allomorph_index < 0 || allomorph_index > 2)
    throw std::invalid_argument("allomorph index must be in 0..2");
  const std::string& allo =
      rule.allomorphs[static_cast<std::size_t>(allomorph_index)];

  switch (rule.kind) {
    case RuleKind::kPrefix:
      return allo + base;
    case RuleKind::kSuffix:
      return base + allo;
    case RuleKind::kTemplate: {
      if (base.size() != 3 ||
          !std::all_of(base.begin(), base.end(),
                       [&](char c) { return inv.is_consonant(c); }))
        throw std::invalid_argument("template rule requires a CCC root, got '" +
                                    base + "'");
      std::string out;
      for (char c : allo)
        out += (c >= '1' && c <= '3')
                   ? base[static_cast<std::size_t>(c - '1')]
                   : c;
      return out;
    }
    case RuleKind::kHarmonySuffix: {
      // The suffix vowel agrees in backness with the nearest stem vowel.
      std::optional<bool> back;
      for (char c : base)
        if (inv.is_vowel(c)) back = inv.is_back_vowel(c);
      if (!back)
        throw std::invalid_argument("harmony suffix needs a vowel in '" +
                                    base + "'");
      return base + (*back
                         ? rule.back_allomorphs[static_cast<std::size_t>(
                               allomorph_index)]
                         : allo);
    }
  }
  throw std::logic_error("unreachable rule kind");
}

// ---------------------------------------------------------------------------
// Syllabification

/// Internal syllable boundaries (start index of every non-initial syllable).
///
/// Each syllable has exactly one vowel nucleus. Word-initial clusters join the
/// first syllable and word-final clusters the last; of the consonants between
/// two nuclei, a single consonant starts the next syllable and a cluster
/// splits after its first consonant.
inline std::vector<int> syllabify(const std::string& phones,
                                  const SegmentInventory& inv) {
  std::vector<int> nuclei;
  for (std::size_t i = 0; i < phones.size(); ++i)
    if (inv.is_vowel(phones[i])) nuclei.push_back(static_cast<int>(i));
  if (nuclei.empty())
    throw std::invalid_argument("cannot syllabify vowelless form '" + phones +
                                "'");
  std::vector<int> breaks;
  for (std::size_t k = 0; k + 1 < nuclei.size(); ++k) {
    int between = nuclei[k + 1] - nuclei[k] - 1;
    breaks.push_back(between >= 2 ? nuclei[k] + 2 : nuclei[k] + 1);
  }
  return breaks;
}

// ---------------------------------------------------------------------------
// Words and lexicons

struct Word {
  std::string phones;
  int root_id = 0;                  // unit index in the root output group
  std::map<int, int> inflections;   // category id -> morpheme index 0..2
  std::vector<int> syllable_breaks;

  int syllable_count() const {
    return static_cast<int>(syllable_breaks.size()) + 1;
  }

  /// Half-open [start, end) spans of each syllable.
  std::vector<std::pair<int, int>> syllable_spans() const {
    std::vector<std::pair<int, int>> spans;
    int start = 0;
    for (int b : syllable_breaks) {
      spans.emplace_back(start, b);
      start = b;
    }
    spans.emplace_back(start, static_cast<int>(phones.size()));
    return spans;
  }
};

struct TaskSpec {
  SegmentInventory inventory;
  std::vector<std::string> roots;
  std::vector<MorphRule> rules;
  int root_id_offset = 0;  // unit index of roots[0] in the root output group
};

/// One Word per element of roots x allomorphs of each category.
inline std::vector<Word> build_lexicon(const TaskSpec& task) {
  for (const MorphRule& r : task.rules) validate_rule(r, task.inventory);
  if (task.roots.empty()) throw std::invalid_argument("task has no roots");

  std::vector<Word> words;
  std::size_t combos = 1;
  for (std::size_t i = 0; i < task.rules.size(); ++i) combos *= 3;
  words.reserve(task.roots.size() * combos);

  for (std::size_t r = 0; r < task.roots.size(); ++r) {
    std::vector<int> idx(task.rules.size(), 0);
    for (std::size_t combo = 0; combo < combos; ++combo) {
      std::string surface = task.roots[r];
      Word w;
      for (std::size_t k = 0; k < task.rules.size(); ++k) {
        surface = apply_rule(task.rules[k], idx[k], surface, task.inventory);
        w.inflections[task.rules[k].category_id] = idx[k];
      }
      w.phones = std::move(surface);
      w.root_id = task.root_id_offset + static_cast<int>(r);
      w.syllable_breaks = syllabify(w.phones, task.inventory);
      words.push_back(std::move(w));
      // Odometer over allomorph indices, first rule fastest.
      for (std::size_t k = 0; k < idx.size(); ++k) {
        if (++idx[k] < 3) break;
        idx[k] = 0;
      }
    }
  }
  return words;
}

/// Stratified 2/3-1/3 split: per root, 2/3 of its words go to training, and
/// every (category, morpheme) pair must be seen in training.
inline std::pair<std::vector<Word>, std::vector<Word>> split_lexicon(
    const std::vector<Word>& words, double ratio, Rng& rng) {
  if (std::abs(ratio - 2.0 / 3.0) > 1e-12)
    throw std::invalid_argument("split ratio is fixed at 2/3");

  // Group word indices by root, preserving lexicon order.
  std::map<int, std::vector<std::size_t>> by_root;
  for (std::size_t i = 0; i < words.size(); ++i)
    by_root[words[i].root_id].push_back(i);
  for (const auto& [root, idx] : by_root)
    if (idx.size() < 3 || idx.size() % 3 != 0)
      throw std::invalid_argument(
          "cannot stratify: root " + std::to_string(root) + " has " +
          std::to_string(idx.size()) + " words (need a positive multiple of 3)");

  for (int attempt = 0; attempt < 100; ++attempt) {
    std::vector<std::size_t> train_idx, test_idx;
    for (const auto& [root, idx] : by_root) {
      std::vector<std::size_t> picks = idx;
      rng.shuffle(picks);
      std::size_t n_train = picks.size() * 2 / 3;
      train_idx.insert(train_idx.end(), picks.begin(), picks.begin() + n_train);
      test_idx.insert(test_idx.end(), picks.begin() + n_train, picks.end());
    }
    // Every allomorph of every category must occur in training.
    std::set<std::pair<int, int>> need, seen;
    for (const Word& w : words)
      for (const auto& [cat, m] : w.inflections) need.insert({cat, m});
    for (std::size_t i : train_idx)
      for (const auto& [cat, m] : words[i].inflections) seen.insert({cat, m});
    if (seen != need) continue;

    std::sort(train_idx.begin(), train_idx.end());
    std::sort(test_idx.begin(), test_idx.end());
    std::vector<Word> train, test;
    train.reserve(train_idx.size());
    test.reserve(test_idx.size());
    for (std::size_t i : train_idx) train.push_back(words[i]);
    for (std::size_t i : test_idx) test.push_back(words[i]);
    return {std::move(train), std::move(test)};
  }
  throw std::runtime_error("could not stratify split after 100 attempts");
}

/// Line format: surface TAB root-id TAB cat:morpheme,... TAB breaks
/// (breaks comma-separated, "-" for monosyllables).
inline void write_lexicon(const std::vector<Word>& words, std::ostream& os) {
  for (const Word& w : words) {
    os << w.phones << '\t' << w.root_id << '\t';
    bool first = true;
    for (const auto& [cat, m] : w.inflections) {
      if (!first) os << ',';
      os << cat << ':' << m;
      first = false;
    }
    os << '\t';
    if (w.syllable_breaks.empty()) {
      os << '-';
    } else {
      for (std::size_t i = 0; i < w.syllable_breaks.size(); ++i) {
        if (i) os << ',';
        os << w.syllable_breaks[i];
      }
    }
    os << '\n';
  }
}

}  // namespace morphlab
