// percept.hpp -- the modular word-perception network: phone sequences in,
// root + inflection identities out, with task-2 extension for transfer runs.
//
// The hidden layer is split into a root group and an inflection group, both
// recurrent and both fed by the phone input; the root output group connects
// only to the root hidden group and every inflection output group only to the
// inflection hidden group.

#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "morphlab/curve.hpp"
#include "morphlab/langgen.hpp"
#include "morphlab/phonfeat.hpp"
#include "morphlab/srn.hpp"

namespace morphlab {

struct CategorySpec {
  int id = 0;
  int morphemes = 3;  // always 3 alternatives per inflectional category
};

inline std::string category_name(int id) {
  return "inflection-" + std::to_string(id);
}

struct PerceptionSizes {
  int root_hidden = 40;
  int infl_hidden = 20;
};

/// Encoded training/evaluation inputs for one word: its phones followed by
/// the word-boundary pattern.
inline std::vector<Vector> perception_inputs(const Word& word,
                                             const SegmentInventory& inv) {
  std::vector<Vector> inputs;
  inputs.reserve(word.phones.size() + 1);
  for (char c : word.phones) inputs.push_back(to_input(inv.encode(c)));
  inputs.push_back(to_input(boundary_vector()));
  return inputs;
}

class PerceptionNet {
 public:
  PerceptionNet(const SegmentInventory& inv, int n_roots,
                std::vector<CategorySpec> categories, std::uint64_t seed,
                PerceptionSizes sizes = {}, double init_range = 0.5)
      : inv_(inv),
        n_roots_(n_roots),
        cats_(std::move(categories)),
        sizes_(sizes),
        init_range_(init_range),
        seed_(seed),
        net_(make_topology(n_roots, cats_, sizes), seed, init_range) {}

  static Topology make_topology(int n_roots,
                                const std::vector<CategorySpec>& cats,
                                const PerceptionSizes& sizes) {
    if (n_roots < 1)
      throw std::invalid_argument("perception net needs at least 1 root");
    if (cats.empty())
      throw std::invalid_argument("perception net needs a category");
    Topology t;
    t.input_units = kFeatureCount;
    t.hidden = {{"root-hidden", sizes.root_hidden},
                {"infl-hidden", sizes.infl_hidden}};
    t.outputs.push_back({"root", n_roots});
    t.wires.emplace_back("root-hidden", "root");
    for (const CategorySpec& c : cats) {
      if (c.morphemes != 3)
        throw std::invalid_argument(
            "inflectional categories have exactly 3 morphemes");
      t.outputs.push_back({category_name(c.id), c.morphemes});
      t.wires.emplace_back("infl-hidden", category_name(c.id));
    }
    return t;
  }

  Network& net() { return net_; }
  const Network& net() const { return net_; }
  const SegmentInventory& inventory() const { return inv_; }
  int n_roots() const { return n_roots_; }
  const std::vector<CategorySpec>& categories() const { return cats_; }
  const PerceptionSizes& sizes() const { return sizes_; }
  std::uint64_t seed() const { return seed_; }
  int rep_dim() const { return sizes_.root_hidden + sizes_.infl_hidden; }

  /// The constant target pattern of a word: one-hot root plus a one-hot
  /// 3-vector per labeled category (unlabeled categories stay zero and should
  /// be masked out of the loss).
  Vector target_for(const Word& word) const {
    if (word.root_id < 0 || word.root_id >= n_roots_)
      throw std::invalid_argument("word root id " +
                                  std::to_string(word.root_id) +
                                  " outside root group of size " +
                                  std::to_string(n_roots_));
    Vector t = Vector::Zero(net_.n_output());
    t[word.root_id] = 1.0;
    for (const CategorySpec& c : cats_) {
      auto it = word.inflections.find(c.id);
      if (it == word.inflections.end()) continue;
      if (it->second < 0 || it->second >= c.morphemes)
        throw std::invalid_argument("word morpheme index " +
                                    std::to_string(it->second) +
                                    " out of range for " +
                                    category_name(c.id));
      auto [off, size] = net_.output_span(category_name(c.id));
      t[off + it->second] = 1.0;
    }
    return t;
  }

  /// Loss mask: root always on; a category contributes error only when it is
  /// active this phase and the word carries its label.
  std::vector<std::uint8_t> loss_mask_for(const Word& word,
                                          const std::set<int>& active) const {
    std::vector<std::uint8_t> mask(cats_.size() + 1, 0);
    mask[0] = 1;  // root group
    for (std::size_t k = 0; k < cats_.size(); ++k)
      mask[k + 1] = active.contains(cats_[k].id) &&
                    word.inflections.contains(cats_[k].id);
    return mask;
  }

  /// Per-category accuracy after the word-final boundary pattern. The
  /// predicted morpheme of a group is the one-hot pattern closest to the
  /// group's output (ties to the lowest index). Reported categories:
  /// "root" plus every category in `report`.
  std::map<std::string, double> evaluate(const std::vector<Word>& words,
                                         const std::set<int>& report) {
    std::map<std::string, int> correct, total;
    for (const Word& word : words) {
      net_.reset_context();
      for (const Vector& x : perception_inputs(word, inv_))
        net_.forward_step(x);
      const Vector& y = net_.output();

      auto [roff, rsize] = net_.output_span("root");
      ++total["root"];
      if (nearest_one_hot(y.segment(roff, rsize)) == word.root_id)
        ++correct["root"];

      for (const CategorySpec& c : cats_) {
        if (!report.contains(c.id)) continue;
        auto it = word.inflections.find(c.id);
        if (it == word.inflections.end()) continue;
        auto [off, size] = net_.output_span(category_name(c.id));
        ++total[category_name(c.id)];
        if (nearest_one_hot(y.segment(off, size)) == it->second)
          ++correct[category_name(c.id)];
      }
    }
    std::map<std::string, double> acc;
    for (const auto& [name, n] : total)
      acc[name] = n ? static_cast<double>(correct[name]) / n : 0.0;
    return acc;
  }

  /// Hidden-layer snapshots taken after the final phone of each syllable.
  std::vector<Vector> extract_syllable_reps(const Word& word) {
    auto spans = word.syllable_spans();
    for (const auto& [start, end] : spans) {
      if (end <= start)
        throw std::invalid_argument("word '" + word.phones +
                                    "' has an empty syllable span");
      int vowels = 0;
      for (int p = start; p < end; ++p)
        vowels += inv_.is_vowel(word.phones[static_cast<std::size_t>(p)]);
      if (vowels != 1)
        throw std::invalid_argument("word '" + word.phones +
                                    "' is missing a valid syllabification");
    }
    std::vector<Vector> reps;
    reps.reserve(spans.size());
    net_.reset_context();
    for (const auto& [start, end] : spans) {
      for (int p = start; p < end; ++p)
        net_.forward_step(
            to_input(inv_.encode(word.phones[static_cast<std::size_t>(p)])));
      reps.push_back(net_.hidden());
    }
    return reps;
  }

  /// A net for the second task: a fresh 3-unit output group wired to the
  /// inflection hidden group, plus fresh root-output units when the second
  /// task brings new roots. Every existing weight is carried over unchanged.
  PerceptionNet extend_for_task2(int new_category_id, int n_new_roots) const {
    for (const CategorySpec& c : cats_)
      if (c.id == new_category_id)
        throw std::invalid_argument("category " +
                                    std::to_string(new_category_id) +
                                    " already exists");
    if (n_new_roots < 0) throw std::invalid_argument("negative root count");

    std::vector<CategorySpec> cats = cats_;
    cats.push_back({new_category_id, 3});
    PerceptionNet ext(inv_, n_roots_ + n_new_roots, std::move(cats),
                      Rng(seed_).derive("extend").state(), sizes_,
                      init_range_);

    // Input-side weights keep their shapes exactly.
    ext.net_.w1() = net_.w1();
    ext.net_.b1() = net_.b1();
    // Output-side rows move with their group (the root group may have grown).
    auto carry = [&](const std::string& group, int rows) {
      auto [src, n] = net_.output_span(group);
      auto [dst, m] = ext.net_.output_span(group);
      ext.net_.w2().middleRows(dst, rows) = net_.w2().middleRows(src, rows);
      ext.net_.b2().segment(dst, rows) = net_.b2().segment(src, rows);
    };
    carry("root", n_roots_);
    for (const CategorySpec& c : cats_)
      carry(category_name(c.id), c.morphemes);
    return ext;
  }

 private:
  static int nearest_one_hot(const Eigen::VectorXd& group_output) {
    int best = 0;
    double best_d = -1.0;
    double norm2 = group_output.squaredNorm();
    for (int k = 0; k < group_output.size(); ++k) {
      // Squared distance to the k-th one-hot pattern.
      double d = norm2 - 2.0 * group_output[k] + 1.0;
      if (best_d < 0.0 || d < best_d) {
        best_d = d;
        best = k;
      }
    }
    return best;
  }

  SegmentInventory inv_;
  int n_roots_;
  std::vector<CategorySpec> cats_;
  PerceptionSizes sizes_;
  double init_range_;
  std::uint64_t seed_;
  Network net_;
};

// ---------------------------------------------------------------------------
// Training

struct TrainOptions {
  TrainConfig net;  // epoch budget and eval cadence live here too
  // Early stop once the watched category's test accuracy reaches the
  // threshold (used for phase 1), or once the mean train accuracy over all
  // reported categories does (used for production pretraining).
  std::string watch_category;
  double stop_test_accuracy = -1.0;
  double stop_mean_train_accuracy = -1.0;
};

/// Trains on whole words: per word the context is reset, each phone and then
/// the boundary pattern is presented, and every step is trained toward the
/// word's constant morpheme pattern. Returns the accuracy curve, evaluated
/// before training (epoch 0) and every eval_every epochs on both sets.
inline Curve train_perception(PerceptionNet& pn, const std::vector<Word>& train,
                              const std::vector<Word>& test,
                              const std::set<int>& active,
                              const TrainOptions& opts, Rng& shuffle_rng) {
  if (train.empty()) throw std::invalid_argument("empty training set");

  Curve curve;
  auto record = [&](int epoch) -> const EvalPoint& {
    EvalPoint pt;
    pt.epoch = epoch;
    pt.train = pn.evaluate(train, active);
    if (!test.empty()) pt.test = pn.evaluate(test, active);
    curve.push_back(std::move(pt));
    return curve.back();
  };
  auto should_stop = [&](const EvalPoint& pt) {
    if (opts.stop_test_accuracy >= 0.0 && !opts.watch_category.empty()) {
      auto it = pt.test.find(opts.watch_category);
      if (it != pt.test.end() && it->second >= opts.stop_test_accuracy)
        return true;
    }
    if (opts.stop_mean_train_accuracy >= 0.0 && !pt.train.empty()) {
      double sum = 0.0;
      for (const auto& [name, acc] : pt.train) sum += acc;
      if (sum / static_cast<double>(pt.train.size()) >=
          opts.stop_mean_train_accuracy)
        return true;
    }
    return false;
  };

  record(0);
  std::vector<std::size_t> order(train.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (int epoch = 1; epoch <= opts.net.epochs; ++epoch) {
    shuffle_rng.shuffle(order);
    for (std::size_t i : order) {
      const Word& word = train[i];
      Vector target = pn.target_for(word);
      std::vector<std::uint8_t> mask = pn.loss_mask_for(word, active);
      pn.net().reset_context();
      for (const Vector& x : perception_inputs(word, pn.inventory())) {
        pn.net().forward_step(x);
        pn.net().backward_step(target, opts.net, mask);
      }
    }
    if (epoch % opts.net.eval_every == 0 || epoch == opts.net.epochs) {
      const EvalPoint& pt = record(epoch);
      if (should_stop(pt)) break;
    }
  }
  return curve;
}

}  // namespace morphlab
