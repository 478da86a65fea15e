// stats.hpp -- the small amount of statistics the experiment comparisons
// need: means, standard errors, and an exact one-sided sign test.

#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace morphlab {

inline double mean(const std::vector<double>& v) {
  if (v.empty()) throw std::invalid_argument("mean of empty vector");
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

/// Standard error of the mean (sample standard deviation / sqrt(n)).
inline double stderr_mean(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  double m = mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  double sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
  return sd / std::sqrt(static_cast<double>(v.size()));
}

struct SignTest {
  int wins = 0;    // pairs with a > b
  int losses = 0;  // pairs with a < b
  int ties = 0;
  double p = 1.0;  // one-sided: P(X >= wins) under X ~ Binomial(wins+losses, 1/2)
};

/// Exact paired one-sided sign test of "a tends to exceed b". Ties are
/// dropped; with no untied pairs p = 1.
inline SignTest sign_test_greater(const std::vector<double>& a,
                                  const std::vector<double>& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("sign test needs paired samples");
  SignTest t;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) ++t.wins;
    else if (a[i] < b[i]) ++t.losses;
    else ++t.ties;
  }
  int n = t.wins + t.losses;
  if (n == 0) return t;
  // Exact binomial tail; n <= ~60 in practice so doubles are plenty.
  double tail = 0.0;
  for (int k = t.wins; k <= n; ++k) {
    double c = 1.0;
    for (int j = 1; j <= k; ++j)
      c = c * static_cast<double>(n - k + j) / static_cast<double>(j);
    tail += c;
  }
  t.p = tail * std::pow(0.5, n);
  return t;
}

}  // namespace morphlab
