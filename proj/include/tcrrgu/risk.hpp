#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <numeric>
#include <vector>

#include "tcrrgu/demand.hpp"  // kTol
#include "tcrrgu/errors.hpp"

namespace tcrrgu {

// Discrete distribution of a payoff: outcome i occurs with probability
// probabilities[i] > 0, and probabilities sum to one within kTol.
struct OutcomeDistribution {
  Eigen::VectorXd values;
  Eigen::VectorXd probabilities;
};

// Lower-tail expected shortfall at level alpha in (0, 1]: the
// probability-weighted mean of the worst alpha share of outcomes, with the
// boundary outcome counted fractionally.  ES at alpha = 1 is the plain mean;
// smaller alpha focuses on the bad tail.  Sorting is stable, so equal values
// keep their input order and the result is deterministic.
template <typename DV, typename DP>
double expected_shortfall(const Eigen::MatrixBase<DV>& values,
                          const Eigen::MatrixBase<DP>& probabilities,
                          double alpha) {
  if (!(alpha > 0.0) || alpha > 1.0)
    throw AlphaRangeError("expected_shortfall: alpha must lie in (0, 1]");
  const Eigen::Index n = values.size();
  if (probabilities.size() != n)
    throw DimensionError("expected_shortfall: values/probabilities length mismatch");
  if (n == 0) throw DimensionError("expected_shortfall: empty distribution");
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(probabilities[i] > 0.0))
      throw Error("expected_shortfall: probabilities must be > 0");
    total += probabilities[i];
  }
  if (std::abs(total - 1.0) > kTol)
    throw Error("expected_shortfall: probabilities must sum to 1");

  std::vector<Eigen::Index> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index(0));
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) {
                     return values[a] < values[b];
                   });

  double remaining = alpha;
  double acc = 0.0;
  for (Eigen::Index idx : order) {
    if (remaining <= 0.0) break;
    const double take = std::min(probabilities[idx], remaining);
    acc += take * values[idx];
    remaining -= take;
  }
  return acc / alpha;
}

inline double expected_shortfall(const OutcomeDistribution& dist, double alpha) {
  return expected_shortfall(dist.values, dist.probabilities, alpha);
}

}  // namespace tcrrgu
