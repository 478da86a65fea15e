// curve.hpp -- per-epoch accuracy records shared by the perception and
// production trainers.

#pragma once

#include <map>
#include <string>
#include <vector>

namespace morphlab {

/// Accuracies at one evaluation epoch, keyed by category name
/// ("root", "inflection-<id>", or "phone").
struct EvalPoint {
  int epoch = 0;
  std::map<std::string, double> train;
  std::map<std::string, double> test;
};

using Curve = std::vector<EvalPoint>;

}  // namespace morphlab
