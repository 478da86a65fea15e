#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <sstream>

#include "morphlab/langgen.hpp"
#include "morphlab/xfer.hpp"

using namespace morphlab;

namespace {

// Brute-force analysis oracle: how many (root, allomorph-combo) pairs of the
// task regenerate this exact surface form?
int count_analyses(const std::string& surface, const TaskSpec& task) {
  int combos = 1;
  for (std::size_t i = 0; i < task.rules.size(); ++i) combos *= 3;
  int hits = 0;
  for (const std::string& root : task.roots) {
    for (int combo = 0; combo < combos; ++combo) {
      std::string form = root;
      int c = combo;
      for (const MorphRule& rule : task.rules) {
        form = apply_rule(rule, c % 3, form, task.inventory);
        c /= 3;
      }
      hits += (form == surface);
    }
  }
  return hits;
}

bool all_vowels_agree(const std::string& phones, const SegmentInventory& inv) {
  int front = 0, back = 0;
  for (char c : phones) {
    if (!inv.is_vowel(c)) continue;
    (inv.is_back_vowel(c) ? back : front)++;
  }
  return front == 0 || back == 0;
}

}  // namespace

TEST_CASE("generate_roots draws the requested number of distinct roots") {
  SegmentInventory small = SegmentInventory::small_inventory();
  SegmentInventory large = SegmentInventory::large_inventory();
  Rng rng(7);

  auto cvcvc = generate_roots(RootShape("CVCVC"), 12, small, rng);
  REQUIRE(cvcvc.size() == 12);
  REQUIRE(std::set<std::string>(cvcvc.begin(), cvcvc.end()).size() == 12);
  for (const auto& r : cvcvc) {
    REQUIRE(r.size() == 5);
    for (std::size_t i = 0; i < 5; ++i)
      REQUIRE(small.is_vowel(r[i]) == (i % 2 == 1));
  }

  auto ccc = generate_roots(RootShape("CCC"), 45, large, rng);
  REQUIRE(ccc.size() == 45);
  REQUIRE(std::set<std::string>(ccc.begin(), ccc.end()).size() == 45);
  for (const auto& r : ccc)
    for (char c : r) REQUIRE(large.is_consonant(c));
}

TEST_CASE("generate_roots honors the harmony constraint") {
  SegmentInventory large = SegmentInventory::large_inventory();
  Rng rng(11);
  auto roots = generate_roots(RootShape("CVC"), 42, large, rng, true);
  REQUIRE(roots.size() == 42);
  for (const auto& r : roots) REQUIRE(all_vowels_agree(r, large));

  // Multi-vowel shapes must agree too.
  auto cvcvc = generate_roots(RootShape("CVCVC"), 30, large, rng, true);
  for (const auto& r : cvcvc) REQUIRE(all_vowels_agree(r, large));
}

TEST_CASE("generate_roots rejects impossible requests") {
  SegmentInventory small = SegmentInventory::small_inventory();
  Rng rng(3);
  // Only 8*4*8 = 256 CVC roots exist over the small alphabet.
  REQUIRE_THROWS_AS(generate_roots(RootShape("CVC"), 257, small, rng),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(generate_roots(RootShape("CVC"), 0, small, rng),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(RootShape("CVX"), std::invalid_argument);
}

TEST_CASE("apply_rule produces the documented affixed forms") {
  SegmentInventory small = SegmentInventory::small_inventory();
  MorphRule pre = stimuli::prefix_set1(1);   // fi-, di-, do-
  MorphRule suf = stimuli::suffix_set1(1);   // -if, -is, -os
  REQUIRE(apply_rule(pre, 0, "fetos", small) == "fifetos");
  REQUIRE(apply_rule(pre, 2, "fetos", small) == "dofetos");
  REQUIRE(apply_rule(suf, 0, "fetos", small) == "fetosif");

  REQUIRE_THROWS_AS(apply_rule(pre, 3, "fetos", small), std::invalid_argument);
}

TEST_CASE("template rules intercalate root consonants in slot order") {
  SegmentInventory large = SegmentInventory::large_inventory();
  MorphRule tpl1 = stimuli::exp3_template_set1(1);  // 1a23a, 12a33a, 1a2a3a
  REQUIRE(apply_rule(tpl1, 0, "rng", large) == "ranga");
  REQUIRE(apply_rule(tpl1, 1, "rng", large) == "rnagga");
  REQUIRE(apply_rule(tpl1, 2, "rng", large) == "ranaga");

  REQUIRE_THROWS_AS(apply_rule(tpl1, 0, "fet", large), std::invalid_argument);
  REQUIRE_THROWS_AS(apply_rule(tpl1, 0, "rngg", large), std::invalid_argument);
}

TEST_CASE("harmony suffixes agree in backness with the stem") {
  SegmentInventory large = SegmentInventory::large_inventory();
  MorphRule h = stimuli::harmony_set1(1);  // -if/-uf, -en/-on, -ik/-uk
  REQUIRE(apply_rule(h, 0, "buk", large) == "bukuf");
  REQUIRE(apply_rule(h, 0, "bik", large) == "bikif");
  REQUIRE(apply_rule(h, 1, "tam", large) == "tamon");

  // Brute-force harmony soundness over the full stem set and all allomorphs.
  for (const std::string& stem : stimuli::exp5_stems()) {
    for (int m = 0; m < 3; ++m) {
      std::string word = apply_rule(h, m, stem, large);
      REQUIRE(all_vowels_agree(word, large));
    }
  }

  REQUIRE_THROWS_AS(apply_rule(h, 0, "rng", large), std::invalid_argument);
}

TEST_CASE("harmony rule validation rejects malformed pairs") {
  SegmentInventory large = SegmentInventory::large_inventory();
  // Back variant listed first.
  MorphRule reversed{RuleKind::kHarmonySuffix, 1, {"uf", "on", "uk"},
                     {"if", "en", "ik"}};
  REQUIRE_THROWS_AS(validate_rule(reversed, large), std::invalid_argument);
  // Pair differs in a consonant.
  MorphRule bad{RuleKind::kHarmonySuffix, 1, {"if", "en", "ik"},
                {"up", "on", "uk"}};
  REQUIRE_THROWS_AS(validate_rule(bad, large), std::invalid_argument);
}

TEST_CASE("build_lexicon enumerates the cartesian product") {
  SegmentInventory small = SegmentInventory::small_inventory();
  std::vector<std::string> roots = stimuli::exp1_roots();
  REQUIRE(roots.size() == 24);

  TaskSpec one{small, roots, {stimuli::prefix_set1(1)}, 0};
  std::vector<Word> lex = build_lexicon(one);
  REQUIRE(lex.size() == 72);

  TaskSpec two{small, roots, {stimuli::prefix_set1(1), stimuli::suffix_set1(2)},
               0};
  REQUIRE(build_lexicon(two).size() == 216);
}

TEST_CASE("every generated word has exactly one analysis") {
  SegmentInventory small = SegmentInventory::small_inventory();
  SegmentInventory large = SegmentInventory::large_inventory();
  std::vector<std::string> roots = stimuli::exp1_roots();

  TaskSpec prefix_task{small, roots, {stimuli::prefix_set1(1)}, 0};
  for (const Word& w : build_lexicon(prefix_task)) {
    REQUIRE(count_analyses(w.phones, prefix_task) == 1);
    // Stripping the 2-segment prefix recovers the root directly.
    REQUIRE(w.phones.substr(2) == roots[static_cast<std::size_t>(w.root_id)]);
  }

  auto [tpl_roots, unused] = stimuli::exp3_template_roots();
  TaskSpec tpl_task{large, tpl_roots, {stimuli::exp3_template_set1(1)}, 0};
  for (const Word& w : build_lexicon(tpl_task))
    REQUIRE(count_analyses(w.phones, tpl_task) == 1);

  TaskSpec both{small, roots, {stimuli::prefix_set1(1), stimuli::suffix_set1(2)},
                0};
  for (const Word& w : build_lexicon(both))
    REQUIRE(count_analyses(w.phones, both) == 1);
}

TEST_CASE("template words keep root consonants as an ordered subsequence") {
  SegmentInventory large = SegmentInventory::large_inventory();
  auto [tpl_roots, unused] = stimuli::exp3_template_roots();
  MorphRule tpl = stimuli::exp3_template_set1(1);
  TaskSpec task{large, tpl_roots, {tpl}, 0};
  for (const Word& w : build_lexicon(task)) {
    const std::string& root = tpl_roots[static_cast<std::size_t>(w.root_id)];
    const std::string& pattern = tpl.allomorphs[static_cast<std::size_t>(
        w.inflections.at(1))];
    // Dropping the template literals must leave exactly the slot expansion.
    std::string expected, actual;
    for (std::size_t i = 0; i < pattern.size(); ++i) {
      if (pattern[i] >= '1' && pattern[i] <= '3') {
        expected += root[static_cast<std::size_t>(pattern[i] - '1')];
        actual += w.phones[i];
      }
    }
    REQUIRE(actual == expected);
  }
}

TEST_CASE("syllabification follows the onset-maximizing rule") {
  SegmentInventory small = SegmentInventory::small_inventory();
  SegmentInventory large = SegmentInventory::large_inventory();
  REQUIRE(syllabify("fifetos", small) == std::vector<int>{2, 4});   // fi.fe.tos
  REQUIRE(syllabify("rnagga", large) == std::vector<int>{4});       // rnag.ga
  REQUIRE(syllabify("fetosup", small) == std::vector<int>{2, 4});   // fe.to.sup
  REQUIRE(syllabify("rnaag", large) == std::vector<int>{3});        // rna.ag
  REQUIRE(syllabify("fet", small).empty());
  REQUIRE_THROWS_AS(syllabify("fst", small), std::invalid_argument);
}

TEST_CASE("every syllable of every generated word has one vowel") {
  SegmentInventory large = SegmentInventory::large_inventory();
  auto [tpl_roots, tpl_roots2] = stimuli::exp3_template_roots();
  for (const TaskSpec& task :
       {TaskSpec{large, tpl_roots, {stimuli::exp3_template_set1(1)}, 0},
        TaskSpec{large, stimuli::exp5_stems(), {stimuli::harmony_set1(1)}, 0}}) {
    for (const Word& w : build_lexicon(task)) {
      for (auto [start, end] : w.syllable_spans()) {
        int vowels = 0;
        for (int p = start; p < end; ++p)
          vowels += task.inventory.is_vowel(w.phones[static_cast<std::size_t>(p)]);
        REQUIRE(vowels == 1);
      }
    }
  }
}

TEST_CASE("split_lexicon partitions 2/3-1/3 with stratification") {
  SegmentInventory small = SegmentInventory::small_inventory();
  TaskSpec task{small, stimuli::exp1_roots(), {stimuli::suffix_set1(1)}, 0};
  std::vector<Word> lex = build_lexicon(task);

  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    Rng rng(seed);
    auto [train, test] = split_lexicon(lex, 2.0 / 3.0, rng);
    REQUIRE(train.size() == 48);
    REQUIRE(test.size() == 24);

    auto key = [](const Word& w) {
      return w.phones + "#" + std::to_string(w.root_id);
    };
    std::set<std::string> train_keys, test_keys, all_keys;
    for (const Word& w : train) train_keys.insert(key(w));
    for (const Word& w : test) test_keys.insert(key(w));
    for (const Word& w : lex) all_keys.insert(key(w));
    REQUIRE(train_keys.size() == 48);

    std::set<std::string> overlap;
    for (const auto& k : train_keys)
      if (test_keys.contains(k)) overlap.insert(k);
    REQUIRE(overlap.empty());

    std::set<std::string> joined = train_keys;
    joined.insert(test_keys.begin(), test_keys.end());
    REQUIRE(joined == all_keys);

    // Stratification: every root and every allomorph seen in training.
    std::set<int> roots_seen;
    std::set<int> morphemes_seen;
    for (const Word& w : train) {
      roots_seen.insert(w.root_id);
      morphemes_seen.insert(w.inflections.at(1));
    }
    REQUIRE(roots_seen.size() == 24);
    REQUIRE(morphemes_seen == std::set<int>{0, 1, 2});
  }
}

TEST_CASE("split_lexicon is deterministic in the seed") {
  SegmentInventory small = SegmentInventory::small_inventory();
  TaskSpec task{small, stimuli::exp1_roots(), {stimuli::prefix_set1(1)}, 0};
  std::vector<Word> lex = build_lexicon(task);
  Rng a(42), b(42);
  auto [train_a, test_a] = split_lexicon(lex, 2.0 / 3.0, a);
  auto [train_b, test_b] = split_lexicon(lex, 2.0 / 3.0, b);
  REQUIRE(train_a.size() == train_b.size());
  for (std::size_t i = 0; i < train_a.size(); ++i)
    REQUIRE(train_a[i].phones == train_b[i].phones);
}

TEST_CASE("split_lexicon rejects unusable inputs") {
  SegmentInventory small = SegmentInventory::small_inventory();
  TaskSpec task{small, stimuli::exp1_roots(), {stimuli::prefix_set1(1)}, 0};
  std::vector<Word> lex = build_lexicon(task);
  Rng rng(1);
  REQUIRE_THROWS_AS(split_lexicon(lex, 0.5, rng), std::invalid_argument);

  // A root whose word count is not a multiple of 3 cannot be stratified.
  std::vector<Word> broken(lex.begin(), lex.begin() + 2);
  REQUIRE_THROWS_AS(split_lexicon(broken, 2.0 / 3.0, rng),
                    std::invalid_argument);
}

TEST_CASE("lexicon export is line-oriented and stable") {
  SegmentInventory small = SegmentInventory::small_inventory();
  TaskSpec task{small, {"fetos"}, {stimuli::prefix_set1(1)}, 0};
  std::ostringstream os;
  write_lexicon(build_lexicon(task), os);
  REQUIRE(os.str() ==
          "fifetos\t0\t1:0\t2,4\n"
          "difetos\t0\t1:1\t2,4\n"
          "dofetos\t0\t1:2\t2,4\n");

  TaskSpec suffixed{small, {"fet"}, {stimuli::suffix_set1(1)}, 0};
  std::ostringstream os2;
  write_lexicon(build_lexicon(suffixed), os2);
  REQUIRE(os2.str() ==
          "fetif\t0\t1:0\t2\n"
          "fetis\t0\t1:1\t2\n"
          "fetos\t0\t1:2\t2\n");

  // Monosyllables write "-" in the boundary column.
  Word mono{"fet", 0, {{1, 2}}, {}};
  std::ostringstream os3;
  write_lexicon({mono}, os3);
  REQUIRE(os3.str() == "fet\t0\t1:2\t-\n");
}
