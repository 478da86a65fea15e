#include <catch2/catch_amalgamated.hpp>

#include "morphlab/percept.hpp"
#include "morphlab/xfer.hpp"
#include "test_util.hpp"

using namespace morphlab;
using testutil::exact_equal;

namespace {

// A small suffixation task over a handful of roots.
TaskSpec toy_task(int n_roots, MorphRule rule = stimuli::suffix_set1(1)) {
  SegmentInventory inv = SegmentInventory::small_inventory();
  Rng rng(2024);
  std::vector<std::string> roots =
      generate_roots(RootShape("CVC"), n_roots, inv, rng);
  return TaskSpec{inv, roots, {std::move(rule)}, 0};
}

double eval_loss(PerceptionNet& pn, const std::vector<Word>& words,
                 const std::set<int>& active) {
  double total = 0.0;
  for (const Word& w : words) {
    Vector target = pn.target_for(w);
    auto mask = pn.loss_mask_for(w, active);
    pn.net().reset_context();
    for (const Vector& x : perception_inputs(w, pn.inventory())) {
      pn.net().forward_step(x);
      total += pn.net().gradients(target, mask).loss;
    }
  }
  return total;
}

}  // namespace

TEST_CASE("perception net assembles the documented output layer") {
  SegmentInventory inv = SegmentInventory::small_inventory();
  PerceptionNet pn(inv, 24, {{1, 3}}, 7);
  REQUIRE(pn.net().n_input() == 12);
  REQUIRE(pn.net().n_output() == 24 + 3);
  REQUIRE(pn.net().output_span("root") == std::pair<int, int>{0, 24});
  REQUIRE(pn.net().output_span("inflection-1") == std::pair<int, int>{24, 3});
  REQUIRE(pn.rep_dim() == 60);

  REQUIRE_THROWS_AS(PerceptionNet(inv, 0, {{1, 3}}, 7), std::invalid_argument);
  REQUIRE_THROWS_AS(PerceptionNet(inv, 4, {{1, 2}}, 7), std::invalid_argument);
  REQUIRE_THROWS_AS(PerceptionNet(inv, 4, {}, 7), std::invalid_argument);
}

TEST_CASE("root and inflection pathways are fully modular") {
  SegmentInventory inv = SegmentInventory::small_inventory();
  PerceptionNet pn(inv, 8, {{1, 3}}, 19);
  Network& net = pn.net();
  net.reset_context();
  net.forward_step(to_input(inv.encode('f')));
  Vector h = net.hidden();

  auto logistic = [](double x) { return 1.0 / (1.0 + std::exp(-x)); };
  auto outputs_for = [&](const Vector& hidden) {
    return Vector((net.w2() * hidden + net.b2()).unaryExpr(logistic));
  };
  auto [rh_off, rh_size] = net.hidden_span("root-hidden");
  auto [ih_off, ih_size] = net.hidden_span("infl-hidden");
  auto [r_off, r_size] = net.output_span("root");
  auto [i_off, i_size] = net.output_span("inflection-1");

  // Perturb the inflection hidden group: root outputs must not move.
  Vector h2 = h;
  h2.segment(ih_off, ih_size).array() += 0.3;
  REQUIRE(exact_equal(outputs_for(h).segment(r_off, r_size),
                      outputs_for(h2).segment(r_off, r_size)));
  REQUIRE(!exact_equal(outputs_for(h).segment(i_off, i_size),
                       outputs_for(h2).segment(i_off, i_size)));

  // And the other way around.
  Vector h3 = h;
  h3.segment(rh_off, rh_size).array() += 0.3;
  REQUIRE(exact_equal(outputs_for(h).segment(i_off, i_size),
                      outputs_for(h3).segment(i_off, i_size)));
}

TEST_CASE("the training protocol presents phones, then the boundary") {
  TaskSpec task = toy_task(4);
  std::vector<Word> lex = build_lexicon(task);
  const Word& w = lex.front();
  auto inputs = perception_inputs(w, task.inventory);
  REQUIRE(inputs.size() == w.phones.size() + 1);
  for (std::size_t i = 0; i < w.phones.size(); ++i)
    REQUIRE(exact_equal(inputs[i], to_input(task.inventory.encode(w.phones[i]))));
  REQUIRE(exact_equal(inputs.back(), to_input(boundary_vector())));

  // The target is the word's constant morpheme pattern: one-hot root plus
  // one-hot category.
  PerceptionNet pn(task.inventory, 4, {{1, 3}}, 3);
  Vector target = pn.target_for(w);
  REQUIRE(target.sum() == 2.0);
  REQUIRE(target[w.root_id] == 1.0);
  REQUIRE(target[4 + w.inflections.at(1)] == 1.0);

  Word bad_root = w;
  bad_root.root_id = 17;
  REQUIRE_THROWS_AS(pn.target_for(bad_root), std::invalid_argument);
  Word bad_morph = w;
  bad_morph.inflections[1] = 5;
  REQUIRE_THROWS_AS(pn.target_for(bad_morph), std::invalid_argument);
}

TEST_CASE("untrained inflection accuracy sits near chance (1/3)") {
  TaskSpec task = toy_task(12);
  std::vector<Word> lex = build_lexicon(task);
  double total = 0.0;
  int seeds = 10;
  for (int s = 1; s <= seeds; ++s) {
    PerceptionNet pn(task.inventory, 12, {{1, 3}}, static_cast<std::uint64_t>(s));
    total += pn.evaluate(lex, {1}).at("inflection-1");
  }
  REQUIRE(total / seeds == Catch::Approx(1.0 / 3.0).margin(0.1));
}

TEST_CASE("constant outputs fall back to the lowest-index tie rule") {
  TaskSpec task = toy_task(6);
  std::vector<Word> lex = build_lexicon(task);
  PerceptionNet pn(task.inventory, 6, {{1, 3}}, 11);
  pn.net().w1().setZero();
  pn.net().w2().setZero();
  pn.net().b1().setZero();
  pn.net().b2().setZero();

  // All outputs 0.5: every one-hot pattern is equidistant, so the predicted
  // morpheme is always index 0 and accuracy equals that label's frequency.
  double expected_infl = 0.0, expected_root = 0.0;
  for (const Word& w : lex) {
    expected_infl += (w.inflections.at(1) == 0);
    expected_root += (w.root_id == 0);
  }
  expected_infl /= static_cast<double>(lex.size());
  expected_root /= static_cast<double>(lex.size());

  auto acc = pn.evaluate(lex, {1});
  REQUIRE(acc.at("inflection-1") == Catch::Approx(expected_infl));
  REQUIRE(acc.at("root") == Catch::Approx(expected_root));
}

TEST_CASE("evaluation is idempotent and leaves weights untouched") {
  TaskSpec task = toy_task(6);
  std::vector<Word> lex = build_lexicon(task);
  PerceptionNet pn(task.inventory, 6, {{1, 3}}, 23);
  Matrix w1 = pn.net().w1();
  auto a = pn.evaluate(lex, {1});
  auto b = pn.evaluate(lex, {1});
  REQUIRE(a == b);
  REQUIRE(exact_equal(pn.net().w1(), w1));
}

TEST_CASE("a 4-word toy lexicon converges; loss shrinks monotonically") {
  SegmentInventory inv = SegmentInventory::small_inventory();
  TaskSpec task{inv, {"fet", "dos", "bis", "zup"}, {stimuli::suffix_set1(1)}, 0};
  std::vector<Word> lex = build_lexicon(task);
  std::vector<Word> four(lex.begin(), lex.begin() + 4);

  // Small-step regime: evaluated loss is non-increasing epoch over epoch.
  PerceptionNet slow(inv, 4, {{1, 3}}, 31);
  TrainOptions gentle;
  gentle.net.learning_rate = 0.01;
  gentle.net.momentum = 0.0;
  gentle.net.epochs = 1;
  double prev = eval_loss(slow, four, {1});
  Rng shuffle(9);
  for (int epoch = 0; epoch < 150; ++epoch) {
    train_perception(slow, four, {}, {1}, gentle, shuffle);
    double loss = eval_loss(slow, four, {1});
    REQUIRE(loss <= prev + 1e-9);
    prev = loss;
  }

  // Default regime: the toy lexicon is memorized outright, so a net whose
  // outputs land on the targets scores exactly 1.0.
  PerceptionNet fast(inv, 4, {{1, 3}}, 32);
  TrainOptions opts;
  opts.net.epochs = 200;
  Rng shuffle2(10);
  train_perception(fast, four, {}, {1}, opts, shuffle2);
  REQUIRE(fast.evaluate(four, {1}).at("inflection-1") == 1.0);
  REQUIRE(fast.evaluate(four, {1}).at("root") == 1.0);
}

TEST_CASE("training returns a curve with epoch 0 and the cadence requested") {
  TaskSpec task = toy_task(6);
  auto lex = build_lexicon(task);
  Rng split_rng(4);
  auto [train, test] = split_lexicon(lex, 2.0 / 3.0, split_rng);

  PerceptionNet pn(task.inventory, 6, {{1, 3}}, 5);
  TrainOptions opts;
  opts.net.epochs = 6;
  opts.net.eval_every = 2;
  Rng shuffle(1);
  Curve curve = train_perception(pn, train, test, {1}, opts, shuffle);
  std::vector<int> epochs;
  for (const EvalPoint& pt : curve) epochs.push_back(pt.epoch);
  REQUIRE(epochs == std::vector<int>{0, 2, 4, 6});
  for (const EvalPoint& pt : curve) {
    REQUIRE(pt.train.contains("root"));
    REQUIRE(pt.train.contains("inflection-1"));
    REQUIRE(pt.test.contains("inflection-1"));
  }
}

TEST_CASE("syllable representations snapshot the hidden layer per syllable") {
  SegmentInventory inv = SegmentInventory::small_inventory();
  TaskSpec task{inv, {"fetos", "dos"}, {stimuli::prefix_set1(1)}, 0};
  std::vector<Word> lex = build_lexicon(task);
  PerceptionNet pn(inv, 2, {{1, 3}}, 77);

  const Word& fifetos = lex[0];  // fi.fe.tos
  REQUIRE(fifetos.phones == "fifetos");
  auto reps = pn.extract_syllable_reps(fifetos);
  REQUIRE(reps.size() == 3);
  for (const Vector& r : reps) REQUIRE(r.size() == pn.rep_dim());

  // Deterministic for a frozen net.
  auto reps2 = pn.extract_syllable_reps(fifetos);
  for (std::size_t i = 0; i < reps.size(); ++i)
    REQUIRE(exact_equal(reps[i], reps2[i]));

  // Words sharing the first syllable share the first snapshot.
  const Word& fidos = lex[3];  // fi.dos
  REQUIRE(fidos.phones == "fidos");
  REQUIRE(exact_equal(pn.extract_syllable_reps(fidos)[0], reps[0]));

  Word broken = fifetos;
  broken.syllable_breaks = {1};  // splits a vowelless onset off
  REQUIRE_THROWS_AS(pn.extract_syllable_reps(broken), std::invalid_argument);
}

TEST_CASE("task-2 extension carries over every existing weight") {
  TaskSpec task = toy_task(6);
  auto lex = build_lexicon(task);
  PerceptionNet pn(task.inventory, 6, {{1, 3}}, 13);

  TrainOptions opts;
  opts.net.epochs = 5;
  Rng shuffle(2);
  train_perception(pn, lex, {}, {1}, opts, shuffle);

  PerceptionNet ext = pn.extend_for_task2(2, 0);
  REQUIRE(ext.net().n_output() == pn.net().n_output() + 3);
  REQUIRE(exact_equal(ext.net().w1(), pn.net().w1()));
  REQUIRE(exact_equal(ext.net().b1(), pn.net().b1()));
  auto [r_off, r_size] = ext.net().output_span("root");
  REQUIRE(exact_equal(ext.net().w2().middleRows(r_off, r_size),
                      pn.net().w2().middleRows(0, 6)));
  auto [c1_new, c1_size] = ext.net().output_span("inflection-1");
  auto [c1_old, c1_old_size] = pn.net().output_span("inflection-1");
  REQUIRE(exact_equal(ext.net().w2().middleRows(c1_new, 3),
                      pn.net().w2().middleRows(c1_old, 3)));

  REQUIRE_THROWS_AS(pn.extend_for_task2(1, 0), std::invalid_argument);
}

TEST_CASE("task-2 extension appends fresh root units when roots are new") {
  TaskSpec task = toy_task(6);
  PerceptionNet pn(task.inventory, 6, {{1, 3}}, 41);
  PerceptionNet ext = pn.extend_for_task2(2, 4);
  auto [r_off, r_size] = ext.net().output_span("root");
  REQUIRE(r_size == 10);
  REQUIRE(ext.n_roots() == 10);
  // Old root rows first, then the fresh ones.
  REQUIRE(exact_equal(ext.net().w2().middleRows(r_off, 6),
                      pn.net().w2().middleRows(0, 6)));

  // A task-2 word with an offset root id targets the appended units.
  Word w{"fetif", 8, {{2, 1}}, {2}};
  Vector target = ext.target_for(w);
  REQUIRE(target[8] == 1.0);
  auto [c2_off, c2_size] = ext.net().output_span("inflection-2");
  REQUIRE(target[c2_off + 1] == 1.0);
}

TEST_CASE("phase-2 training leaves the old category's weights untouched") {
  TaskSpec task = toy_task(6);
  auto lex1 = build_lexicon(task);
  PerceptionNet pn(task.inventory, 6, {{1, 3}}, 59);
  TrainOptions opts;
  opts.net.epochs = 4;
  Rng shuffle(3);
  train_perception(pn, lex1, {}, {1}, opts, shuffle);

  PerceptionNet ext = pn.extend_for_task2(2, 0);
  // New category starts at chance.
  TaskSpec task2 = toy_task(6, stimuli::suffix_set2(2));
  auto lex2 = build_lexicon(task2);
  double fresh = ext.evaluate(lex2, {2}).at("inflection-2");
  REQUIRE(fresh == Catch::Approx(1.0 / 3.0).margin(0.25));

  auto [c1_off, c1_size] = ext.net().output_span("inflection-1");
  Matrix before = ext.net().w2().middleRows(c1_off, c1_size);
  Vector before_b = ext.net().b2().segment(c1_off, c1_size);
  Rng shuffle2(4);
  train_perception(ext, lex2, {}, {2}, opts, shuffle2);
  REQUIRE(exact_equal(ext.net().w2().middleRows(c1_off, c1_size), before));
  REQUIRE(exact_equal(ext.net().b2().segment(c1_off, c1_size), before_b));
}
