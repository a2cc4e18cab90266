#pragma once

#include <Eigen/Dense>
#include <utility>

#include "tcrrgu/errors.hpp"

namespace tcrrgu {

// Numerical tolerance used for every absolute equality comparison in the
// library (step boundaries, conservation residuals, payoff ties).
inline constexpr double kTol = 1e-9;

enum class Side { below, above };

// Piecewise-constant inverse demand curve: step w offers `quantities[w]`
// units at marginal value `prices[w]`.  Prices are strictly decreasing and
// strictly positive; quantities strictly positive.  Quantity demanded beyond
// total_quantity() carries zero marginal value.
class DemandCurve {
 public:
  DemandCurve() = default;
  DemandCurve(Eigen::VectorXd prices, Eigen::VectorXd quantities)
      : prices_(std::move(prices)), quantities_(std::move(quantities)) {
    if (prices_.size() != quantities_.size())
      throw DimensionError("demand curve prices/quantities length mismatch");
  }

  Eigen::Index step_count() const { return prices_.size(); }
  const Eigen::VectorXd& prices() const { return prices_; }
  const Eigen::VectorXd& quantities() const { return quantities_; }
  double total_quantity() const { return quantities_.sum(); }

 private:
  Eigen::VectorXd prices_;
  Eigen::VectorXd quantities_;
};

// Utility of consuming `quantity` units, filling steps in order.  Since
// prices decrease strictly, in-order filling is the optimal allocation.
// Quantity beyond the end of the curve contributes nothing.
inline double consumption_utility(const DemandCurve& curve, double quantity) {
  double remaining = quantity;
  double utility = 0.0;
  for (Eigen::Index w = 0; w < curve.step_count() && remaining > 0.0; ++w) {
    const double take = std::min(remaining, curve.quantities()[w]);
    utility += take * curve.prices()[w];
    remaining -= take;
  }
  return utility;
}

// Marginal value of the last consumed unit (side=below: the interval just
// below `quantity`) or the next unit (side=above).  At an exact step
// boundary, below resolves to the lower-indexed (higher-price) step and
// above to the higher-indexed one; boundary equality is taken within kTol.
// Beyond the curve's total quantity the marginal value is zero.
inline double marginal_value(const DemandCurve& curve, double quantity,
                             Side side) {
  if (side == Side::below && quantity <= 0.0)
    throw BelowZeroError("marginal_value: side=below requires quantity > 0");
  double cum = 0.0;
  for (Eigen::Index w = 0; w < curve.step_count(); ++w) {
    cum += curve.quantities()[w];
    if (side == Side::below ? cum >= quantity - kTol : cum > quantity + kTol)
      return curve.prices()[w];
  }
  return 0.0;
}

}  // namespace tcrrgu
