#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "tcrrgu/lp.hpp"
#include "tcrrgu/model.hpp"

namespace tcrrgu {

// Result of clearing one scenario under a participation profile.
//
// Invariants (all within kTol): flows respect the scenario capacities;
// |inflow - outflow| <= q^P per node; inflow - outflow - consumed + r = 0
// per node, where "consumed" counts the zero-value spill kept beyond the
// curve; consumptions sit in their step boxes; net_received sums to zero
// across nodes, and so does uf.
struct RedistributionOutcome {
  int scenario_index = 0;
  Eigen::VectorXd flows;                      // per edge, signed
  std::vector<Eigen::VectorXd> consumptions;  // per node, per curve step
  Eigen::VectorXd spill;         // per node, units kept beyond the curve
  Eigen::VectorXd net_received;  // delta: consumed (incl. spill) - resources
  Eigen::VectorXd uc;            // consumption utility realised
  Eigen::VectorXd uc_reference;  // consumption utility with no redistribution
  Eigen::VectorXd mu;            // money/unit: >0 receivers, <0 givers, 0 else
  std::optional<double> rcp;     // clearing price; absent without redistribution
  Eigen::VectorXd uf;            // financial utility -delta * rcp (zero-sum)
  double total_utility = 0.0;    // sum of uc
};

// Assembles the scenario-clearing program: variables are the M signed edge
// flows followed by each node's per-step consumptions (plus one unbounded
// zero-price overflow variable for any node whose resources exceed its total
// demand, so the balance row stays feasible).  Each node contributes a
// participation row |inflow - outflow| <= q^P and a balance row
// inflow - outflow - consumed = -r.  The objective is total consumption
// utility.
LpProblem build_redistribution_lp(const Instance& instance,
                                  const Scenario& scenario,
                                  const ParticipationProfile& profile);

// Clears one scenario: maximizes total consumption utility, then, with the
// optimal utility pinned, minimizes total |flow| so the reported transport
// plan is the least-movement one.  Deterministic.
RedistributionOutcome redistribute(const Instance& instance,
                                   const Scenario& scenario,
                                   const ParticipationProfile& profile);

// Midpoint of the cheapest receiving marginal and the largest giving
// marginal magnitude.  Absent when nothing moved; OneSidedError if exactly
// one of the receiver/giver sides is empty while units moved.
std::optional<double> clearing_price(const RedistributionOutcome& outcome);

// Per-node financial utility -net_received * rcp: receivers pay, givers are
// paid.  Zero everywhere when no price formed.
Eigen::VectorXd financial_utilities(const RedistributionOutcome& outcome,
                                    std::optional<double> rcp);

}  // namespace tcrrgu
