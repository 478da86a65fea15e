// gradcheck.hpp -- randomized finite-difference verification suite for the
// backpropagation implementation, covering plain, modular-masked, and
// feedback-accumulator topologies.

#pragma once

#include <cstdint>
#include <vector>

#include "morphlab/rng.hpp"
#include "morphlab/srn.hpp"

namespace morphlab {

struct GradCheckReport {
  int nets_checked = 0;
  double max_rel_error = 0.0;
};

namespace detail {

inline Topology random_small_topology(Rng& rng, int flavor) {
  Topology t;
  t.input_units = 3 + static_cast<int>(rng.below(6));
  switch (flavor % 3) {
    case 0: {  // plain SRN
      t.hidden = {{"h", 4 + static_cast<int>(rng.below(8))}};
      t.outputs = {{"y", 2 + static_cast<int>(rng.below(6))}};
      t.wires = {{"h", "y"}};
      break;
    }
    case 1: {  // modular: two hidden groups, outputs wired to one group each
      t.hidden = {{"ha", 3 + static_cast<int>(rng.below(6))},
                  {"hb", 3 + static_cast<int>(rng.below(6))}};
      t.outputs = {{"ya", 2 + static_cast<int>(rng.below(5))},
                   {"yb", 3}};
      t.wires = {{"ha", "ya"}, {"hb", "yb"}};
      break;
    }
    default: {  // feedback accumulator on the output
      t.hidden = {{"h", 4 + static_cast<int>(rng.below(8))}};
      t.outputs = {{"y", 3 + static_cast<int>(rng.below(5))}};
      t.wires = {{"h", "y"}};
      t.feedbacks = {{"y", 0.5}};
      break;
    }
  }
  return t;
}

}  // namespace detail

/// Runs finite_diff_check on `n_nets` random small networks with random
/// input/target sequences. Modular nets alternate between full loss and a
/// loss mask that silences one output group.
inline GradCheckReport run_gradient_check_suite(int n_nets = 20,
                                                std::uint64_t seed = 0x67726164) {
  Rng rng(seed);
  GradCheckReport report;
  for (int n = 0; n < n_nets; ++n) {
    Topology topo = detail::random_small_topology(rng, n);
    Network net(topo, rng.next_u64(), 0.5);

    int steps = 2 + static_cast<int>(rng.below(3));
    std::vector<Vector> inputs, targets;
    for (int s = 0; s < steps; ++s) {
      Vector x(net.n_input());
      for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = rng.uniform01();
      Vector t(net.n_output());
      for (Eigen::Index i = 0; i < t.size(); ++i)
        t[i] = rng.below(2) ? 1.0 : 0.0;
      inputs.push_back(std::move(x));
      targets.push_back(std::move(t));
    }

    std::vector<std::uint8_t> mask;
    if (topo.outputs.size() > 1 && n % 2 == 0) {
      mask.assign(topo.outputs.size(), 1);
      mask[rng.below(mask.size())] = 0;
    }

    double err = finite_diff_check(net, inputs, targets, mask);
    report.max_rel_error = std::max(report.max_rel_error, err);
    ++report.nets_checked;
  }
  return report;
}

}  // namespace morphlab
