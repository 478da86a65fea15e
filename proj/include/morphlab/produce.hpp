// produce.hpp -- the syllable-to-phone production network. A frozen,
// fully-trained perception net supplies distributed syllable representations;
// the production net is clamped on one representation per syllable, for as
// many steps as the syllable has phones, and learns to emit the phone feature
// vectors. An accumulator keeps a decayed record of past outputs as extra
// input: teacher-forced during training, the net's own thresholded output
// during evaluation.

#pragma once

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "morphlab/curve.hpp"
#include "morphlab/langgen.hpp"
#include "morphlab/percept.hpp"
#include "morphlab/phonfeat.hpp"
#include "morphlab/srn.hpp"

namespace morphlab {

class ProductionNet {
 public:
  ProductionNet(const SegmentInventory& inv, int rep_dim, std::uint64_t seed,
                int hidden_units = 40, double init_range = 0.5,
                double feedback_decay = 0.5)
      : inv_(inv), rep_dim_(rep_dim),
        net_(make_topology(rep_dim, hidden_units, feedback_decay), seed,
             init_range) {}

  static Topology make_topology(int rep_dim, int hidden_units, double decay) {
    if (rep_dim < 1) throw std::invalid_argument("rep_dim must be >= 1");
    Topology t;
    t.input_units = rep_dim;
    t.hidden = {{"hidden", hidden_units}};
    t.outputs = {{"phones", kFeatureCount}};
    t.wires = {{"hidden", "phones"}};
    t.feedbacks = {{"phones", decay}};
    return t;
  }

  Network& net() { return net_; }
  const Network& net() const { return net_; }
  const SegmentInventory& inventory() const { return inv_; }
  int rep_dim() const { return rep_dim_; }

 private:
  SegmentInventory inv_;
  int rep_dim_;
  Network net_;
};

/// One production word: a syllable representation per syllable, aligned with
/// the phone spans of the word.
struct ProductionItem {
  std::vector<Vector> reps;
  std::string phones;
  std::vector<std::pair<int, int>> spans;  // [start, end) per syllable
};

inline void check_item(const ProductionItem& item, int rep_dim) {
  if (item.reps.size() != item.spans.size())
    throw std::invalid_argument("word '" + item.phones + "': " +
                                std::to_string(item.reps.size()) +
                                " syllable reps for " +
                                std::to_string(item.spans.size()) + " spans");
  int covered = 0;
  for (const auto& [start, end] : item.spans) {
    if (start != covered || end <= start)
      throw std::invalid_argument("word '" + item.phones +
                                  "': syllable spans are not contiguous");
    covered = end;
  }
  if (covered != static_cast<int>(item.phones.size()))
    throw std::invalid_argument("word '" + item.phones +
                                "': spans do not cover the phone sequence");
  for (const Vector& r : item.reps)
    if (r.size() != rep_dim)
      throw std::invalid_argument("syllable rep dimension mismatch");
}

/// Extracts syllable representations for each word from a (frozen) trained
/// perception net.
inline std::vector<ProductionItem> make_production_items(
    PerceptionNet& percept, const std::vector<Word>& words) {
  std::vector<ProductionItem> items;
  items.reserve(words.size());
  for (const Word& w : words) {
    ProductionItem item;
    item.reps = percept.extract_syllable_reps(w);
    item.phones = w.phones;
    item.spans = w.syllable_spans();
    check_item(item, percept.rep_dim());
    items.push_back(std::move(item));
  }
  return items;
}

/// Fraction of correctly produced phones over the whole set. The accumulator
/// runs free: it is fed the net's own output thresholded at 0.5.
inline double evaluate_production(ProductionNet& pn,
                                  const std::vector<ProductionItem>& items) {
  const SegmentInventory& inv = pn.inventory();
  long correct = 0, total = 0;
  for (const ProductionItem& item : items) {
    check_item(item, pn.rep_dim());
    pn.net().reset_context();
    for (std::size_t s = 0; s < item.spans.size(); ++s) {
      auto [start, end] = item.spans[s];
      for (int p = start; p < end; ++p) {
        const Vector& y = pn.net().forward_step(item.reps[s]);
        if (inv.decode(y).symbol == item.phones[static_cast<std::size_t>(p)])
          ++correct;
        ++total;
        Vector fed =
            (y.array() > 0.5).cast<double>().matrix();
        pn.net().feed_accumulator(fed);
      }
    }
  }
  return total ? static_cast<double>(correct) / static_cast<double>(total)
               : 0.0;
}

/// Online training over words: context reset per word, each syllable rep
/// clamped for exactly as many steps as the syllable has phones, target =
/// that phone's feature vector, accumulator teacher-forced with the target.
inline Curve train_production(ProductionNet& pn,
                              const std::vector<ProductionItem>& train,
                              const std::vector<ProductionItem>& test,
                              const TrainOptions& opts, Rng& shuffle_rng) {
  if (train.empty()) throw std::invalid_argument("empty training set");
  for (const ProductionItem& item : train) check_item(item, pn.rep_dim());

  Curve curve;
  auto record = [&](int epoch) -> const EvalPoint& {
    EvalPoint pt;
    pt.epoch = epoch;
    pt.train["phone"] = evaluate_production(pn, train);
    if (!test.empty()) pt.test["phone"] = evaluate_production(pn, test);
    curve.push_back(std::move(pt));
    return curve.back();
  };
  auto should_stop = [&](const EvalPoint& pt) {
    return opts.stop_test_accuracy >= 0.0 && !pt.test.empty() &&
           pt.test.at("phone") >= opts.stop_test_accuracy;
  };

  record(0);
  std::vector<std::size_t> order(train.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (int epoch = 1; epoch <= opts.net.epochs; ++epoch) {
    shuffle_rng.shuffle(order);
    for (std::size_t i : order) {
      const ProductionItem& item = train[i];
      pn.net().reset_context();
      for (std::size_t s = 0; s < item.spans.size(); ++s) {
        auto [start, end] = item.spans[s];
        for (int p = start; p < end; ++p) {
          pn.net().forward_step(item.reps[s]);
          Vector target = to_input(
              pn.inventory().encode(item.phones[static_cast<std::size_t>(p)]));
          pn.net().backward_step(target, opts.net);
          pn.net().feed_accumulator(target);
        }
      }
    }
    if (epoch % opts.net.eval_every == 0 || epoch == opts.net.epochs) {
      const EvalPoint& pt = record(epoch);
      if (should_stop(pt)) break;
    }
  }
  return curve;
}

/// Perception pretraining for production experiments: the perception net is
/// trained on every word of every task (no held-out items), so that syllable
/// representations live in one space across both phases. Stops once mean
/// train accuracy over all categories reaches the configured threshold.
inline PerceptionNet pretrain_perception_for_production(
    const std::vector<TaskSpec>& tasks, std::uint64_t seed,
    const PerceptionSizes& sizes, const TrainOptions& opts, Rng& shuffle_rng) {
  if (tasks.empty()) throw std::invalid_argument("no tasks to pretrain on");

  int n_root_units = 0;
  std::vector<CategorySpec> cats;
  std::set<int> active;
  std::vector<Word> all_words;
  for (const TaskSpec& task : tasks) {
    n_root_units = std::max(
        n_root_units, task.root_id_offset + static_cast<int>(task.roots.size()));
    for (const MorphRule& rule : task.rules) {
      if (!active.contains(rule.category_id)) {
        cats.push_back({rule.category_id, 3});
        active.insert(rule.category_id);
      }
    }
    std::vector<Word> words = build_lexicon(task);
    all_words.insert(all_words.end(), words.begin(), words.end());
  }

  PerceptionNet pn(tasks.front().inventory, n_root_units, cats, seed, sizes,
                   opts.net.init_range);
  TrainOptions pre = opts;
  pre.watch_category.clear();
  pre.stop_test_accuracy = -1.0;
  train_perception(pn, all_words, {}, active, pre, shuffle_rng);
  return pn;
}

}  // namespace morphlab
