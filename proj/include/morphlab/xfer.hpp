// xfer.hpp -- the five transfer experiments: condition tables, two-phase
// train/test pipelines across seeds, and condition-ordering statistics.
//
// Stimuli (root sets and affix sets) are fixed per experiment, independent of
// the run seed; run seeds vary network initialization, train/test splits, and
// presentation order.

#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "morphlab/curve.hpp"
#include "morphlab/langgen.hpp"
#include "morphlab/percept.hpp"
#include "morphlab/produce.hpp"
#include "morphlab/stats.hpp"

namespace morphlab {

enum class Modality { kPerception, kProduction };

inline const char* modality_name(Modality m) {
  return m == Modality::kPerception ? "perception" : "production";
}

struct ConditionSpec {
  int experiment = 0;
  std::string name;
  Modality modality = Modality::kPerception;
  TaskSpec phase1, phase2;
  int new_category_id = 2;
  int n_new_roots = 0;  // root units appended at extension (task-2 roots new)
};

// ---------------------------------------------------------------------------
// Stimuli

namespace stimuli {

// Root sets are generated once from this fixed seed; like the published
// stimuli they do not vary across runs.
inline constexpr std::uint64_t kStimulusSeed = 0x6d6f7270686c6162ULL;

inline MorphRule prefix_rule(int cat, std::vector<std::string> affixes) {
  return {RuleKind::kPrefix, cat, std::move(affixes), {}};
}
inline MorphRule suffix_rule(int cat, std::vector<std::string> affixes) {
  return {RuleKind::kSuffix, cat, std::move(affixes), {}};
}
inline MorphRule template_rule(int cat, std::vector<std::string> patterns) {
  return {RuleKind::kTemplate, cat, std::move(patterns), {}};
}
inline MorphRule harmony_rule(int cat, std::vector<std::string> fronts,
                              std::vector<std::string> backs) {
  return {RuleKind::kHarmonySuffix, cat, std::move(fronts), std::move(backs)};
}

// Experiment 1/2/4 affix sets.
inline MorphRule prefix_set1(int cat) { return prefix_rule(cat, {"fi", "di", "do"}); }
inline MorphRule prefix_set2(int cat) { return prefix_rule(cat, {"be", "bu", "zi"}); }
inline MorphRule suffix_set1(int cat) { return suffix_rule(cat, {"if", "is", "os"}); }
inline MorphRule suffix_set2(int cat) { return suffix_rule(cat, {"et", "ep", "up"}); }

// Experiment 3 sets (large alphabet).
inline MorphRule exp3_suffix_set1(int cat) { return suffix_rule(cat, {"if", "in", "uk"}); }
inline MorphRule exp3_suffix_set2(int cat) { return suffix_rule(cat, {"om", "ot", "ex"}); }
inline MorphRule exp3_template_set1(int cat) {
  return template_rule(cat, {"1a23a", "12a33a", "1a2a3a"});
}
inline MorphRule exp3_template_set2(int cat) {
  return template_rule(cat, {"1a22a3", "1a2a3", "12aa3"});
}

// Experiment 5 suffix sets.
inline MorphRule harmony_set1(int cat) {
  return harmony_rule(cat, {"if", "en", "ik"}, {"uf", "on", "uk"});
}
inline MorphRule harmony_set2(int cat) {
  return harmony_rule(cat, {"im", "ex", "ep"}, {"um", "ox", "op"});
}
inline MorphRule fixed_suffix_set(int cat) {
  return suffix_rule(cat, {"if", "en", "uk"});
}

/// 24 roots over the 12-segment alphabet: 12 CVCVC then 12 CVC.
inline std::vector<std::string> exp1_roots() {
  SegmentInventory inv = SegmentInventory::small_inventory();
  Rng rng = Rng(kStimulusSeed).derive("exp1-roots");
  std::vector<std::string> roots =
      generate_roots(RootShape("CVCVC"), 12, inv, rng);
  for (std::string& r : generate_roots(RootShape("CVC"), 12, inv, rng))
    roots.push_back(std::move(r));
  return roots;
}

/// Two disjoint 45-root sets for the experiment-3 suffix tasks, shapes drawn
/// uniformly from {CVC, CVCV, CVCVC} over the 20-segment alphabet.
inline std::pair<std::vector<std::string>, std::vector<std::string>>
exp3_suffix_roots() {
  SegmentInventory inv = SegmentInventory::large_inventory();
  Rng rng = Rng(kStimulusSeed).derive("exp3-suffix-roots");
  const std::vector<RootShape> shapes{RootShape("CVC"), RootShape("CVCV"),
                                      RootShape("CVCVC")};
  int counts[2][3] = {{0, 0, 0}, {0, 0, 0}};
  for (int set = 0; set < 2; ++set)
    for (int i = 0; i < 45; ++i) ++counts[set][rng.below(3)];
  std::vector<std::string> set1, set2;
  for (int s = 0; s < 3; ++s) {
    int total = counts[0][s] + counts[1][s];
    if (total == 0) continue;
    std::vector<std::string> pool = generate_roots(shapes[s], total, inv, rng);
    set1.insert(set1.end(), pool.begin(), pool.begin() + counts[0][s]);
    set2.insert(set2.end(), pool.begin() + counts[0][s], pool.end());
  }
  return {std::move(set1), std::move(set2)};
}

/// Two disjoint 45-root sets of bare consonant triples for the template tasks.
inline std::pair<std::vector<std::string>, std::vector<std::string>>
exp3_template_roots() {
  SegmentInventory inv = SegmentInventory::large_inventory();
  Rng rng = Rng(kStimulusSeed).derive("exp3-template-roots");
  std::vector<std::string> pool = generate_roots(RootShape("CCC"), 90, inv, rng);
  return {std::vector<std::string>(pool.begin(), pool.begin() + 45),
          std::vector<std::string>(pool.begin() + 45, pool.end())};
}

/// 42 stems (21 CVC, 21 CVCVC) whose vowels agree in backness.
inline std::vector<std::string> exp5_stems() {
  SegmentInventory inv = SegmentInventory::large_inventory();
  Rng rng = Rng(kStimulusSeed).derive("exp5-stems");
  std::vector<std::string> stems =
      generate_roots(RootShape("CVC"), 21, inv, rng, /*harmonic=*/true);
  for (std::string& r :
       generate_roots(RootShape("CVCVC"), 21, inv, rng, /*harmonic=*/true))
    stems.push_back(std::move(r));
  return stems;
}

}  // namespace stimuli

// ---------------------------------------------------------------------------
// Condition tables

inline std::vector<ConditionSpec> conditions_for_experiment(int experiment) {
  using namespace stimuli;
  std::vector<ConditionSpec> conds;

  auto perception_cond = [&](int exp, std::string name, TaskSpec p1,
                             TaskSpec p2, int n_new_roots) {
    conds.push_back({exp, std::move(name), Modality::kPerception, std::move(p1),
                     std::move(p2), 2, n_new_roots});
  };

  switch (experiment) {
    case 1: {
      SegmentInventory inv = SegmentInventory::small_inventory();
      std::vector<std::string> roots = exp1_roots();
      auto task = [&](MorphRule rule) {
        return TaskSpec{inv, roots, {std::move(rule)}, 0};
      };
      // Cross-process conditions take set 2 as the second task, so each
      // transfer direction compares first tasks against one fixed second
      // task (set 2), alongside the identical-set condition.
      perception_cond(1, "prefix1_to_suffix2", task(prefix_set1(1)),
                      task(suffix_set2(2)), 0);
      perception_cond(1, "suffix1_to_prefix2", task(suffix_set1(1)),
                      task(prefix_set2(2)), 0);
      perception_cond(1, "prefix1_to_prefix2", task(prefix_set1(1)),
                      task(prefix_set2(2)), 0);
      perception_cond(1, "prefix1_to_prefix1", task(prefix_set1(1)),
                      task(prefix_set1(2)), 0);
      perception_cond(1, "suffix1_to_suffix2", task(suffix_set1(1)),
                      task(suffix_set2(2)), 0);
      perception_cond(1, "suffix1_to_suffix1", task(suffix_set1(1)),
                      task(suffix_set1(2)), 0);
      break;
    }
    case 2: {
      SegmentInventory inv = SegmentInventory::small_inventory();
      std::vector<std::string> roots = exp1_roots();
      // Phase 2 adds a third morpheme: the phase-1 affix stays on the word.
      perception_cond(2, "prefix_add_suffix",
                      TaskSpec{inv, roots, {prefix_set1(1)}, 0},
                      TaskSpec{inv, roots, {prefix_set1(1), suffix_set1(2)}, 0},
                      0);
      perception_cond(2, "suffix_add_suffix",
                      TaskSpec{inv, roots, {suffix_set1(1)}, 0},
                      TaskSpec{inv, roots, {suffix_set1(1), suffix_set2(2)}, 0},
                      0);
      break;
    }
    case 3: {
      SegmentInventory inv = SegmentInventory::large_inventory();
      auto [sfx_roots1, sfx_roots2] = exp3_suffix_roots();
      auto [tpl_roots1, tpl_roots2] = exp3_template_roots();
      // The second task always uses fresh roots, appended after the 45
      // first-task root units.
      auto task1 = [&](const std::vector<std::string>& roots, MorphRule rule) {
        return TaskSpec{inv, roots, {std::move(rule)}, 0};
      };
      auto task2 = [&](const std::vector<std::string>& roots, MorphRule rule) {
        return TaskSpec{inv, roots, {std::move(rule)}, 45};
      };
      perception_cond(3, "suffix_to_template",
                      task1(sfx_roots1, exp3_suffix_set1(1)),
                      task2(tpl_roots2, exp3_template_set2(2)), 45);
      perception_cond(3, "template_to_template",
                      task1(tpl_roots1, exp3_template_set1(1)),
                      task2(tpl_roots2, exp3_template_set2(2)), 45);
      perception_cond(3, "suffix_to_suffix",
                      task1(sfx_roots1, exp3_suffix_set1(1)),
                      task2(sfx_roots2, exp3_suffix_set2(2)), 45);
      perception_cond(3, "template_to_suffix",
                      task1(tpl_roots1, exp3_template_set1(1)),
                      task2(sfx_roots2, exp3_suffix_set2(2)), 45);
      break;
    }
    case 4: {
      SegmentInventory inv = SegmentInventory::small_inventory();
      std::vector<std::string> roots = exp1_roots();
      auto task = [&](MorphRule rule) {
        return TaskSpec{inv, roots, {std::move(rule)}, 0};
      };
      auto production_cond = [&](std::string name, TaskSpec p1, TaskSpec p2) {
        conds.push_back({4, std::move(name), Modality::kProduction,
                         std::move(p1), std::move(p2), 2, 0});
      };
      // Second tasks parallel experiment 1: cross-process conditions also
      // move to set 2.
      production_cond("prefix1_to_suffix2", task(prefix_set1(1)),
                      task(suffix_set2(2)));
      production_cond("suffix1_to_prefix2", task(suffix_set1(1)),
                      task(prefix_set2(2)));
      production_cond("prefix1_to_prefix2", task(prefix_set1(1)),
                      task(prefix_set2(2)));
      production_cond("suffix1_to_suffix2", task(suffix_set1(1)),
                      task(suffix_set2(2)));
      break;
    }
    case 5: {
      SegmentInventory inv = SegmentInventory::large_inventory();
      std::vector<std::string> stems = exp5_stems();
      auto task = [&](MorphRule rule) {
        return TaskSpec{inv, stems, {std::move(rule)}, 0};
      };
      perception_cond(5, "harmony_to_harmony", task(harmony_set1(1)),
                      task(harmony_set2(2)), 0);
      perception_cond(5, "fixed_to_harmony", task(fixed_suffix_set(1)),
                      task(harmony_set2(2)), 0);
      break;
    }
    default:
      throw std::invalid_argument("unknown experiment " +
                                  std::to_string(experiment) +
                                  " (valid range is 1..5)");
  }
  return conds;
}

inline std::vector<ConditionSpec> all_conditions() {
  std::vector<ConditionSpec> all;
  for (int e = 1; e <= 5; ++e)
    for (ConditionSpec& c : conditions_for_experiment(e))
      all.push_back(std::move(c));
  return all;
}

// ---------------------------------------------------------------------------
// Running

struct RunSettings {
  TrainConfig net;  // learning rate, momentum, init range
  PerceptionSizes percept_sizes;
  int production_hidden = 40;
  int epochs1 = 150;          // phase-1 cap (early stop below)
  int epochs2 = 60;           // phase-2 budget (always run in full)
  int pretrain_epochs = 300;  // perception pretraining cap for production
  double phase1_stop_accuracy = 0.9;
  double pretrain_stop_accuracy = 0.95;
  int eval_every = 1;
  int pretrain_eval_every = 5;
};

struct RunRecord {
  int experiment = 0;
  std::string condition;
  Modality modality = Modality::kPerception;
  std::uint64_t seed = 0;
  Curve phase1, phase2;
  // Headline category per phase ("inflection-<id>" or "phone").
  std::string phase1_category, phase2_category;
};

/// Runs one condition for one seed, both phases. Deterministic in
/// (condition, seed, settings).
inline RunRecord run_condition(const ConditionSpec& cond, std::uint64_t seed,
                               const RunSettings& s) {
  try {
    Rng base(seed);
    RunRecord rec;
    rec.experiment = cond.experiment;
    rec.condition = cond.name;
    rec.modality = cond.modality;
    rec.seed = seed;

    Rng split1 = base.derive("split-1"), split2 = base.derive("split-2");
    Rng shuffle1 = base.derive("shuffle-1"), shuffle2 = base.derive("shuffle-2");
    auto [train1, test1] =
        split_lexicon(build_lexicon(cond.phase1), 2.0 / 3.0, split1);
    auto [train2, test2] =
        split_lexicon(build_lexicon(cond.phase2), 2.0 / 3.0, split2);

    int cat1 = cond.phase1.rules.front().category_id;

    TrainOptions o1, o2;
    o1.net = s.net;
    o1.net.epochs = s.epochs1;
    o1.net.eval_every = s.eval_every;
    o2.net = s.net;
    o2.net.epochs = s.epochs2;
    o2.net.eval_every = s.eval_every;

    if (cond.modality == Modality::kPerception) {
      std::vector<CategorySpec> cats;
      for (const MorphRule& r : cond.phase1.rules)
        cats.push_back({r.category_id, 3});
      PerceptionNet pn(cond.phase1.inventory,
                       static_cast<int>(cond.phase1.roots.size()), cats,
                       base.derive("net").state(), s.percept_sizes,
                       s.net.init_range);
      o1.watch_category = category_name(cat1);
      o1.stop_test_accuracy = s.phase1_stop_accuracy;
      rec.phase1 = train_perception(pn, train1, test1, {cat1}, o1, shuffle1);
      rec.phase1_category = category_name(cat1);

      PerceptionNet ext =
          pn.extend_for_task2(cond.new_category_id, cond.n_new_roots);
      rec.phase2 = train_perception(ext, train2, test2, {cond.new_category_id},
                                    o2, shuffle2);
      rec.phase2_category = category_name(cond.new_category_id);
    } else {
      TrainOptions opre;
      opre.net = s.net;
      opre.net.epochs = s.pretrain_epochs;
      opre.net.eval_every = s.pretrain_eval_every;
      opre.stop_mean_train_accuracy = s.pretrain_stop_accuracy;
      Rng pre_shuffle = base.derive("pretrain-shuffle");
      PerceptionNet pnet = pretrain_perception_for_production(
          {cond.phase1, cond.phase2}, base.derive("pretrain-net").state(),
          s.percept_sizes, opre, pre_shuffle);

      ProductionNet prod(cond.phase1.inventory, pnet.rep_dim(),
                         base.derive("prod-net").state(), s.production_hidden,
                         s.net.init_range);
      o1.stop_test_accuracy = s.phase1_stop_accuracy;
      rec.phase1 = train_production(prod, make_production_items(pnet, train1),
                                    make_production_items(pnet, test1), o1,
                                    shuffle1);
      rec.phase2 = train_production(prod, make_production_items(pnet, train2),
                                    make_production_items(pnet, test2), o2,
                                    shuffle2);
      rec.phase1_category = rec.phase2_category = "phone";
    }
    return rec;
  } catch (const std::exception& e) {
    throw std::runtime_error("condition '" + cond.name + "' seed " +
                             std::to_string(seed) + ": " + e.what());
  }
}

/// Runs every (condition, seed) pair, optionally across threads. Results are
/// slotted condition-major, seed-minor, independent of execution order.
inline std::vector<RunRecord> run_jobs(const std::vector<ConditionSpec>& conds,
                                       const std::vector<std::uint64_t>& seeds,
                                       const RunSettings& settings,
                                       int jobs = 1) {
  std::vector<RunRecord> records(conds.size() * seeds.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::string error;
  std::mutex error_mutex;

  auto worker = [&]() {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= records.size() || failed.load()) return;
      const ConditionSpec& cond = conds[i / seeds.size()];
      std::uint64_t seed = seeds[i % seeds.size()];
      try {
        records[i] = run_condition(cond, seed, settings);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        failed = true;
        if (error.empty()) error = e.what();
      }
    }
  };

  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (failed) throw std::runtime_error(error);
  return records;
}

inline std::vector<RunRecord> run_experiment(
    int experiment, const std::vector<std::uint64_t>& seeds,
    const RunSettings& settings, int jobs = 1) {
  return run_jobs(conditions_for_experiment(experiment), seeds, settings, jobs);
}

// ---------------------------------------------------------------------------
// Comparisons

/// Phase-2 test accuracy of the record's headline category at (or at the
/// last evaluation no later than) the given epoch.
inline double phase2_test_accuracy_at(const RunRecord& rec, int epoch) {
  if (rec.phase2.empty()) throw std::invalid_argument("record has no phase 2");
  const EvalPoint* best = &rec.phase2.front();
  for (const EvalPoint& pt : rec.phase2)
    if (pt.epoch <= epoch && pt.epoch >= best->epoch) best = &pt;
  auto it = best->test.find(rec.phase2_category);
  if (it == best->test.end())
    throw std::invalid_argument("record lacks test accuracy for " +
                                rec.phase2_category);
  return it->second;
}

inline std::vector<int> default_checkpoints(int epochs2) {
  auto at = [&](double f) {
    int e = static_cast<int>(std::lround(f * epochs2));
    return std::max(1, std::min(epochs2, e));
  };
  return {at(0.25), at(0.5), at(0.75)};
}

struct PredictedOrdering {
  std::string description;
  std::vector<std::string> order;  // expected best..worst
};

inline std::vector<PredictedOrdering> predicted_orderings(int experiment) {
  switch (experiment) {
    case 1:
      return {{"transfer to prefixation",
               {"prefix1_to_prefix1", "prefix1_to_prefix2",
                "suffix1_to_prefix2"}},
              {"transfer to suffixation",
               {"suffix1_to_suffix1", "suffix1_to_suffix2",
                "prefix1_to_suffix2"}}};
    case 2:
      return {{"adding a second affix category",
               {"suffix_add_suffix", "prefix_add_suffix"}}};
    case 3:
      return {{"transfer to templates",
               {"template_to_template", "suffix_to_template"}},
              {"transfer to suffixation",
               {"suffix_to_suffix", "template_to_suffix"}}};
    case 4:
      return {{"production transfer to prefixation",
               {"prefix1_to_prefix2", "suffix1_to_prefix2"}},
              {"production transfer to suffixation",
               {"suffix1_to_suffix2", "prefix1_to_suffix2"}}};
    case 5:
      return {{"transfer to harmony suffixation",
               {"harmony_to_harmony", "fixed_to_harmony"}}};
    default:
      throw std::invalid_argument("unknown experiment " +
                                  std::to_string(experiment) +
                                  " (valid range is 1..5)");
  }
}

struct ConditionStats {
  std::string condition;
  std::vector<double> means, stderrs;  // per checkpoint
};

struct PairResult {
  std::string a, b;
  std::vector<SignTest> tests;  // per checkpoint, one-sided a > b
};

struct OrderingVerdict {
  std::string description;
  std::vector<std::string> order;
  std::vector<bool> means_ordered;       // per checkpoint, strict
  std::vector<SignTest> top_vs_bottom;   // per checkpoint
};

struct ComparisonResult {
  int experiment = 0;
  int n_seeds = 0;
  std::vector<int> checkpoints;
  std::vector<ConditionStats> stats;
  std::vector<PairResult> pairs;
  std::vector<OrderingVerdict> verdicts;
};

/// Aggregates per-seed phase-2 accuracies at the checkpoint epochs: means and
/// standard errors per condition, pairwise sign tests, and verdicts on the
/// orderings the design predicts.
inline ComparisonResult compare_conditions(const std::vector<RunRecord>& records,
                                           const std::vector<int>& checkpoints) {
  if (records.empty()) throw std::invalid_argument("no records to compare");
  ComparisonResult result;
  result.experiment = records.front().experiment;
  result.checkpoints = checkpoints;

  // Per-seed accuracies keyed by condition, in order of first appearance.
  std::vector<std::string> order;
  std::map<std::string, std::vector<std::vector<double>>> acc;  // cond -> [ckpt][seed]
  for (const RunRecord& rec : records) {
    if (rec.experiment != result.experiment)
      throw std::invalid_argument("records span multiple experiments");
    if (!acc.contains(rec.condition)) {
      order.push_back(rec.condition);
      acc[rec.condition].resize(checkpoints.size());
    }
    for (std::size_t c = 0; c < checkpoints.size(); ++c)
      acc[rec.condition][c].push_back(
          phase2_test_accuracy_at(rec, checkpoints[c]));
  }
  if (order.size() < 2)
    throw std::invalid_argument("need at least 2 conditions to compare");
  result.n_seeds = static_cast<int>(acc[order.front()].front().size());
  for (const std::string& cond : order)
    for (const auto& per_seed : acc[cond])
      if (static_cast<int>(per_seed.size()) != result.n_seeds)
        throw std::invalid_argument("unequal seed counts across conditions");

  for (const std::string& cond : order) {
    ConditionStats cs;
    cs.condition = cond;
    for (const auto& per_seed : acc[cond]) {
      cs.means.push_back(mean(per_seed));
      cs.stderrs.push_back(stderr_mean(per_seed));
    }
    result.stats.push_back(std::move(cs));
  }

  for (std::size_t i = 0; i < order.size(); ++i) {
    for (std::size_t j = 0; j < order.size(); ++j) {
      if (i == j) continue;
      PairResult pr;
      pr.a = order[i];
      pr.b = order[j];
      for (std::size_t c = 0; c < checkpoints.size(); ++c)
        pr.tests.push_back(sign_test_greater(acc[pr.a][c], acc[pr.b][c]));
      result.pairs.push_back(std::move(pr));
    }
  }

  for (const PredictedOrdering& po : predicted_orderings(result.experiment)) {
    bool have_all = true;
    for (const std::string& cond : po.order) have_all &= acc.contains(cond);
    if (!have_all) continue;
    OrderingVerdict v;
    v.description = po.description;
    v.order = po.order;
    for (std::size_t c = 0; c < checkpoints.size(); ++c) {
      bool ordered = true;
      for (std::size_t k = 0; k + 1 < po.order.size(); ++k)
        ordered &= mean(acc[po.order[k]][c]) > mean(acc[po.order[k + 1]][c]);
      v.means_ordered.push_back(ordered);
      v.top_vs_bottom.push_back(
          sign_test_greater(acc[po.order.front()][c], acc[po.order.back()][c]));
    }
    result.verdicts.push_back(std::move(v));
  }
  return result;
}

/// Fraction of phase-2 evaluation epochs at which condition `a`'s mean test
/// accuracy is at least condition `b`'s (used for the harmony comparison,
/// which claims consistency rather than significance).
inline double fraction_epochs_first_geq(const std::vector<RunRecord>& records,
                                        const std::string& a,
                                        const std::string& b) {
  std::map<int, std::pair<std::vector<double>, std::vector<double>>> by_epoch;
  for (const RunRecord& rec : records) {
    if (rec.condition != a && rec.condition != b) continue;
    for (const EvalPoint& pt : rec.phase2) {
      auto it = pt.test.find(rec.phase2_category);
      if (it == pt.test.end()) continue;
      if (rec.condition == a) by_epoch[pt.epoch].first.push_back(it->second);
      else by_epoch[pt.epoch].second.push_back(it->second);
    }
  }
  int geq = 0, total = 0;
  for (const auto& [epoch, pair] : by_epoch) {
    if (pair.first.empty() || pair.second.empty()) continue;
    ++total;
    if (mean(pair.first) >= mean(pair.second)) ++geq;
  }
  if (total == 0)
    throw std::invalid_argument("no common epochs between '" + a + "' and '" +
                                b + "'");
  return static_cast<double>(geq) / static_cast<double>(total);
}

}  // namespace morphlab
