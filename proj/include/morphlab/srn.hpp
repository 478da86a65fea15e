// srn.hpp -- simple recurrent networks with grouped, maskable connectivity.
//
// A Network is a one-hidden-layer net whose hidden units are partitioned into
// named groups, each with its own copied-context recurrence (Elman style: the
// previous hidden pattern is an extra input, not differentiated through).
// Output groups connect only to the hidden groups they are wired to; absent
// wires are hard zeros enforced by masks. Optional feedback blocks keep a
// decayed accumulation of an output group and feed it back as input.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "morphlab/rng.hpp"

namespace morphlab {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

struct TrainConfig {
  double learning_rate = 0.1;
  double momentum = 0.9;
  double init_range = 0.5;  // weights drawn uniformly from [-r, r]
  int epochs = 100;
  int eval_every = 1;       // evaluation cadence in epochs
};

struct GroupSpec {
  std::string name;
  int units = 0;
};

/// Accumulator fed by an output group: a <- decay * a + y after each step.
struct FeedbackSpec {
  std::string from_output;
  double decay = 0.5;
};

struct Topology {
  int input_units = 0;
  std::vector<GroupSpec> hidden;
  std::vector<GroupSpec> outputs;
  // Wires {hidden group, output group}; anything unlisted carries no weights.
  std::vector<std::pair<std::string, std::string>> wires;
  std::vector<FeedbackSpec> feedbacks;
};

namespace detail {

inline int group_index(const std::vector<GroupSpec>& groups,
                       const std::string& name) {
  for (std::size_t i = 0; i < groups.size(); ++i)
    if (groups[i].name == name) return static_cast<int>(i);
  return -1;
}

}  // namespace detail

inline void validate_topology(const Topology& t) {
  auto fail = [](const std::string& msg) {
    throw std::invalid_argument("malformed topology: " + msg);
  };
  if (t.input_units < 1) fail("input layer must have at least 1 unit");
  if (t.hidden.empty()) fail("no hidden groups");
  if (t.outputs.empty()) fail("no output groups");
  auto check_groups = [&](const std::vector<GroupSpec>& gs, const char* kind) {
    for (std::size_t i = 0; i < gs.size(); ++i) {
      if (gs[i].units < 1)
        fail(std::string(kind) + " group '" + gs[i].name + "' has no units");
      for (std::size_t j = i + 1; j < gs.size(); ++j)
        if (gs[i].name == gs[j].name)
          fail(std::string("duplicate ") + kind + " group '" + gs[i].name +
               "'");
    }
  };
  check_groups(t.hidden, "hidden");
  check_groups(t.outputs, "output");
  for (const auto& [h, o] : t.wires) {
    if (detail::group_index(t.hidden, h) < 0)
      fail("wire references unknown hidden group '" + h + "'");
    if (detail::group_index(t.outputs, o) < 0)
      fail("wire references unknown output group '" + o + "'");
  }
  for (const GroupSpec& g : t.hidden) {
    bool wired = false;
    for (const auto& [h, o] : t.wires) wired |= (h == g.name);
    if (!wired) fail("hidden group '" + g.name + "' drives no output group");
  }
  for (const GroupSpec& g : t.outputs) {
    bool wired = false;
    for (const auto& [h, o] : t.wires) wired |= (o == g.name);
    if (!wired) fail("output group '" + g.name + "' receives no wire");
  }
  for (const FeedbackSpec& f : t.feedbacks) {
    if (detail::group_index(t.outputs, f.from_output) < 0)
      fail("feedback references unknown output group '" + f.from_output + "'");
    if (!(f.decay >= 0.0 && f.decay < 1.0))
      fail("feedback decay must be in [0,1)");
  }
}

/// Per-block weight gradients for one time step.
struct Gradients {
  Matrix w1, w2;
  Vector b1, b2;
  double loss = 0.0;
};

class Network {
 public:
  // Context and accumulator units sit at the logistic midpoint at word start.
  static constexpr double kInitialState = 0.5;

  Network(const Topology& topo, std::uint64_t seed, double init_range = 0.5)
      : topo_(topo), rng_(seed) {
    validate_topology(topo_);
    n_in_ = topo_.input_units;
    n_hidden_ = 0;
    for (const GroupSpec& g : topo_.hidden) n_hidden_ += g.units;
    n_out_ = 0;
    for (const GroupSpec& g : topo_.outputs) n_out_ += g.units;
    n_acc_ = 0;
    for (const FeedbackSpec& f : topo_.feedbacks)
      n_acc_ += output_span(f.from_output).second;
    n_z_ = n_in_ + n_hidden_ + n_acc_;

    build_masks();
    w1_ = Matrix::Zero(n_hidden_, n_z_);
    b1_ = Vector::Zero(n_hidden_);
    w2_ = Matrix::Zero(n_out_, n_hidden_);
    b2_ = Vector::Zero(n_out_);
    init_uniform(w1_, init_range);
    init_uniform(b1_, init_range);
    init_uniform(w2_, init_range);
    init_uniform(b2_, init_range);
    w1_ = w1_.cwiseProduct(m1_);
    w2_ = w2_.cwiseProduct(m2_);

    v_w1_ = Matrix::Zero(n_hidden_, n_z_);
    v_b1_ = Vector::Zero(n_hidden_);
    v_w2_ = Matrix::Zero(n_out_, n_hidden_);
    v_b2_ = Vector::Zero(n_out_);

    context_ = Vector::Constant(n_hidden_, kInitialState);
    acc_ = Vector::Constant(n_acc_, kInitialState);
    last_z_.resize(n_z_);
    hidden_.resize(n_hidden_);
    output_.resize(n_out_);
  }

  const Topology& topology() const { return topo_; }
  int n_input() const { return n_in_; }
  int n_hidden() const { return n_hidden_; }
  int n_output() const { return n_out_; }
  int n_accumulator() const { return n_acc_; }

  /// (offset, size) of a hidden group within the hidden vector.
  std::pair<int, int> hidden_span(const std::string& name) const {
    int off = 0;
    for (const GroupSpec& g : topo_.hidden) {
      if (g.name == name) return {off, g.units};
      off += g.units;
    }
    throw std::invalid_argument("unknown hidden group '" + name + "'");
  }

  /// (offset, size) of an output group within the output vector.
  std::pair<int, int> output_span(const std::string& name) const {
    int off = 0;
    for (const GroupSpec& g : topo_.outputs) {
      if (g.name == name) return {off, g.units};
      off += g.units;
    }
    throw std::invalid_argument("unknown output group '" + name + "'");
  }

  /// One time step: activate hidden then output from [input, context, acc],
  /// then copy the new hidden pattern into the context.
  const Vector& forward_step(const Vector& input) {
    if (input.size() != n_in_)
      throw std::invalid_argument("forward_step: input size " +
                                  std::to_string(input.size()) + ", expected " +
                                  std::to_string(n_in_));
    last_z_.segment(0, n_in_) = input;
    last_z_.segment(n_in_, n_hidden_) = context_;
    if (n_acc_ > 0) last_z_.segment(n_in_ + n_hidden_, n_acc_) = acc_;

    hidden_ = (w1_ * last_z_ + b1_).unaryExpr(&logistic);
    output_ = (w2_ * hidden_ + b2_).unaryExpr(&logistic);
    context_ = hidden_;
    has_forward_ = true;
    return output_;
  }

  /// Gradients of the squared-error loss of the last forward step. Output
  /// groups with mask 0 contribute no error; an empty mask enables all.
  Gradients gradients(const Vector& target,
                      const std::vector<std::uint8_t>& group_mask = {}) const {
    if (!has_forward_)
      throw std::logic_error("gradients: no forward step has been run");
    if (target.size() != n_out_)
      throw std::invalid_argument("target size " +
                                  std::to_string(target.size()) +
                                  ", expected " + std::to_string(n_out_));
    if (!group_mask.empty() && group_mask.size() != topo_.outputs.size())
      throw std::invalid_argument("group mask size mismatch");

    Vector err = output_ - target;
    if (!group_mask.empty()) {
      int off = 0;
      for (std::size_t g = 0; g < topo_.outputs.size(); ++g) {
        if (!group_mask[g]) err.segment(off, topo_.outputs[g].units).setZero();
        off += topo_.outputs[g].units;
      }
    }
    Gradients grad;
    grad.loss = 0.5 * err.squaredNorm();
    Vector dy =
        err.cwiseProduct(output_).cwiseProduct(Vector::Ones(n_out_) - output_);
    grad.w2 = (dy * hidden_.transpose()).cwiseProduct(m2_);
    grad.b2 = dy;
    Vector dh = (w2_.transpose() * dy)
                    .cwiseProduct(hidden_)
                    .cwiseProduct(Vector::Ones(n_hidden_) - hidden_);
    grad.w1 = (dh * last_z_.transpose()).cwiseProduct(m1_);
    grad.b1 = dh;
    return grad;
  }

  /// One online gradient step with momentum against `target`. Returns the
  /// squared-error loss before the update.
  double backward_step(const Vector& target, const TrainConfig& cfg,
                       const std::vector<std::uint8_t>& group_mask = {}) {
    Gradients g = gradients(target, group_mask);
    auto update = [&](auto& w, auto& v, const auto& gw) {
      v = cfg.momentum * v - cfg.learning_rate * gw;
      w += v;
    };
    update(w1_, v_w1_, g.w1);
    update(b1_, v_b1_, g.b1);
    update(w2_, v_w2_, g.w2);
    update(b2_, v_b2_, g.b2);
    return g.loss;
  }

  /// Re-initialize context and accumulator state at a word boundary.
  void reset_context() {
    context_.setConstant(kInitialState);
    acc_.setConstant(kInitialState);
    has_forward_ = false;
  }

  /// Accumulate feedback: for every feedback block, a <- decay*a + y where y
  /// is the block's slice of `output_like` (a teacher target during training,
  /// the net's own thresholded output during evaluation).
  void feed_accumulator(const Vector& output_like) {
    if (n_acc_ == 0) return;
    if (output_like.size() != n_out_)
      throw std::invalid_argument("feed_accumulator: vector size mismatch");
    int acc_off = 0;
    for (const FeedbackSpec& f : topo_.feedbacks) {
      auto [off, size] = output_span(f.from_output);
      acc_.segment(acc_off, size) = f.decay * acc_.segment(acc_off, size) +
                                    output_like.segment(off, size);
      acc_off += size;
    }
  }

  const Vector& output() const { return output_; }
  const Vector& hidden() const { return hidden_; }
  const Vector& context() const { return context_; }
  const Vector& accumulator() const { return acc_; }

  Matrix& w1() { return w1_; }
  Matrix& w2() { return w2_; }
  Vector& b1() { return b1_; }
  Vector& b2() { return b2_; }
  const Matrix& w1() const { return w1_; }
  const Matrix& w2() const { return w2_; }
  const Vector& b1() const { return b1_; }
  const Vector& b2() const { return b2_; }
  const Matrix& mask1() const { return m1_; }
  const Matrix& mask2() const { return m2_; }

  Rng& rng() { return rng_; }

  // Test/debug hooks.
  void set_context(const Vector& c) {
    if (c.size() != n_hidden_) throw std::invalid_argument("context size");
    context_ = c;
  }
  void set_accumulator(const Vector& a) {
    if (a.size() != n_acc_) throw std::invalid_argument("accumulator size");
    acc_ = a;
  }

 private:
  static double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

  void init_uniform(Matrix& m, double r) {
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = rng_.uniform(-r, r);
  }
  void init_uniform(Vector& v, double r) {
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = rng_.uniform(-r, r);
  }

  void build_masks() {
    // z layout: [input | contexts (hidden group order) | accumulators].
    m1_ = Matrix::Zero(n_hidden_, n_z_);
    int row = 0;
    for (const GroupSpec& g : topo_.hidden) {
      auto [goff, gsize] = hidden_span(g.name);
      for (int r = 0; r < g.units; ++r) {
        // External input feeds every hidden group.
        for (int c = 0; c < n_in_; ++c) m1_(row, c) = 1.0;
        // Own-group context only.
        for (int c = 0; c < gsize; ++c) m1_(row, n_in_ + goff + c) = 1.0;
        // Accumulators feed every hidden group.
        for (int c = 0; c < n_acc_; ++c)
          m1_(row, n_in_ + n_hidden_ + c) = 1.0;
        ++row;
      }
    }
    m2_ = Matrix::Zero(n_out_, n_hidden_);
    for (const auto& [h, o] : topo_.wires) {
      auto [hoff, hsize] = hidden_span(h);
      auto [ooff, osize] = output_span(o);
      for (int r = 0; r < osize; ++r)
        for (int c = 0; c < hsize; ++c) m2_(ooff + r, hoff + c) = 1.0;
    }
  }

  Topology topo_;
  int n_in_ = 0, n_hidden_ = 0, n_out_ = 0, n_acc_ = 0, n_z_ = 0;
  Matrix w1_, w2_, m1_, m2_;
  Vector b1_, b2_;
  Matrix v_w1_, v_w2_;
  Vector v_b1_, v_b2_;
  Vector context_, acc_;
  Vector last_z_, hidden_, output_;
  bool has_forward_ = false;
  Rng rng_;
};

// ---------------------------------------------------------------------------
// Finite-difference gradient oracle

/// Checks the analytic per-step gradient against central differences over a
/// whole input/target sequence, advancing the recurrent state between steps
/// exactly as training would (teacher-forced accumulator). Returns the
/// maximum relative error over all real (unmasked) weights; masked entries
/// are not parameters -- they are pinned to zero, so both gradients are zero
/// there by construction.
inline double finite_diff_check(Network& net, const std::vector<Vector>& inputs,
                                const std::vector<Vector>& targets,
                                const std::vector<std::uint8_t>& group_mask = {},
                                double epsilon = 1e-5) {
  if (inputs.size() != targets.size() || inputs.empty())
    throw std::invalid_argument("finite_diff_check: bad sequence");

  auto loss_at = [&](const Vector& ctx, const Vector& acc, const Vector& x,
                     const Vector& t) {
    net.set_context(ctx);
    if (net.n_accumulator() > 0) net.set_accumulator(acc);
    net.forward_step(x);
    return net.gradients(t, group_mask).loss;
  };

  double max_rel = 0.0;
  auto check_block = [&](auto& w, const Matrix* mask, const auto& gblock,
                         const Vector& ctx, const Vector& acc, const Vector& x,
                         const Vector& t) {
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
      for (Eigen::Index j = 0; j < w.cols(); ++j) {
        if (mask && (*mask)(i, j) == 0.0) continue;
        double saved = w(i, j);
        w(i, j) = saved + epsilon;
        double lp = loss_at(ctx, acc, x, t);
        w(i, j) = saved - epsilon;
        double lm = loss_at(ctx, acc, x, t);
        w(i, j) = saved;
        double analytic = gblock(i, j);
        double numeric = (lp - lm) / (2.0 * epsilon);
        double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-3});
        max_rel = std::max(max_rel, std::abs(analytic - numeric) / denom);
      }
    }
  };

  net.reset_context();
  Vector ctx = net.context();
  Vector acc = net.accumulator();
  for (std::size_t s = 0; s < inputs.size(); ++s) {
    net.set_context(ctx);
    if (net.n_accumulator() > 0) net.set_accumulator(acc);
    net.forward_step(inputs[s]);
    Gradients g = net.gradients(targets[s], group_mask);

    check_block(net.w1(), &net.mask1(),
                [&](Eigen::Index i, Eigen::Index j) { return g.w1(i, j); }, ctx,
                acc, inputs[s], targets[s]);
    check_block(net.w2(), &net.mask2(),
                [&](Eigen::Index i, Eigen::Index j) { return g.w2(i, j); }, ctx,
                acc, inputs[s], targets[s]);
    Eigen::Map<Matrix> b1m(net.b1().data(), net.b1().size(), 1);
    Eigen::Map<Matrix> b2m(net.b2().data(), net.b2().size(), 1);
    check_block(b1m, nullptr,
                [&](Eigen::Index i, Eigen::Index) { return g.b1(i); }, ctx, acc,
                inputs[s], targets[s]);
    check_block(b2m, nullptr,
                [&](Eigen::Index i, Eigen::Index) { return g.b2(i); }, ctx, acc,
                inputs[s], targets[s]);

    // Advance the real trajectory to the next step's state.
    net.set_context(ctx);
    if (net.n_accumulator() > 0) net.set_accumulator(acc);
    net.forward_step(inputs[s]);
    net.feed_accumulator(targets[s]);
    ctx = net.context();
    acc = net.accumulator();
  }
  return max_rel;
}

// ---------------------------------------------------------------------------
// Weight serialization (exact round trip via hexfloats)

inline void save_weights(const Network& net, std::ostream& os) {
  os << "morphlab-weights v1\n";
  auto dump = [&os](const char* name, const Matrix& m) {
    os << "block " << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
    char buf[40];
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        std::snprintf(buf, sizeof buf, "%a", m(i, j));
        os << (j ? " " : "") << buf;
      }
      os << '\n';
    }
  };
  dump("w1", net.w1());
  dump("b1", net.b1());
  dump("w2", net.w2());
  dump("b2", net.b2());
}

/// Loads weights saved by save_weights into a net of identical topology.
inline void load_weights(Network& net, std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "morphlab-weights v1")
    throw std::runtime_error("not a morphlab weights file");
  auto read = [&](const char* name, auto& m, const Matrix* mask) {
    std::string word;
    Eigen::Index rows, cols;
    if (!(is >> word) || word != "block" || !(is >> word) || word != name ||
        !(is >> rows >> cols) || rows != m.rows() || cols != m.cols())
      throw std::runtime_error(std::string("weights file: bad block ") + name);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) {
        if (!(is >> word))
          throw std::runtime_error("weights file: truncated block");
        m(i, j) = std::strtod(word.c_str(), nullptr);
        if (mask && (*mask)(i, j) == 0.0 && m(i, j) != 0.0)
          throw std::runtime_error(
              "weights file: nonzero value on a masked connection");
      }
  };
  read("w1", net.w1(), &net.mask1());
  read("b1", net.b1(), nullptr);
  read("w2", net.w2(), &net.mask2());
  read("b2", net.b2(), nullptr);
}

}  // namespace morphlab
