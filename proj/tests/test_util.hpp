// Shared helpers for the unit tests.

#pragma once

#include <Eigen/Dense>

#include "morphlab/rng.hpp"

namespace morphlab::testutil {

/// Bitwise equality of two Eigen expressions of the same shape.
template <typename A, typename B>
bool exact_equal(const A& a, const B& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return ((a.array() == b.array()).all());
}

inline Eigen::VectorXd random_vector(Rng& rng, int n) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.uniform01();
  return v;
}

inline Eigen::VectorXd random_binary(Rng& rng, int n) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.below(2) ? 1.0 : 0.0;
  return v;
}

}  // namespace morphlab::testutil
