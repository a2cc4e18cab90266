#include "tcrrgu/redistribution.hpp"

#include <cmath>
#include <limits>

namespace tcrrgu {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Layout {
  int n = 0, m = 0;
  std::vector<int> cons_offset;   // first consumption var of each node
  std::vector<int> spill_var;     // index of the node's overflow var, -1 if none
  int total_vars = 0;
};

Layout make_layout(const Instance& instance, const Scenario& scenario) {
  Layout lay;
  lay.n = instance.network.node_count();
  lay.m = instance.network.edge_count();
  lay.cons_offset.resize(lay.n);
  lay.spill_var.assign(lay.n, -1);
  int next = lay.m;
  for (int i = 0; i < lay.n; ++i) {
    lay.cons_offset[i] = next;
    next += static_cast<int>(instance.network.nodes[i].demand.step_count());
  }
  for (int i = 0; i < lay.n; ++i) {
    const double demand = instance.network.nodes[i].demand.total_quantity();
    if (scenario.resources[i] > demand + kTol) lay.spill_var[i] = next++;
  }
  lay.total_vars = next;
  return lay;
}

// Writes the participation and balance rows for every node.  `flow_col`
// maps an edge and sign to the column(s) carrying that edge's flow, so the
// same routine serves both the signed one-variable form and the split
// two-variable form of the second stage.
template <typename FlowCoeff>
void fill_node_rows(const Instance& instance, const Scenario& scenario,
                    const ParticipationProfile& profile, const Layout& lay,
                    LpProblem& lp, int row0, FlowCoeff&& flow_coeff) {
  const Network& net = instance.network;
  for (int i = 0; i < lay.n; ++i) {
    const int part_row = row0 + 2 * i;
    const int bal_row = part_row + 1;
    for (int j = 0; j < lay.m; ++j) {
      const Edge& e = net.edges[j];
      double sign = 0.0;
      if (e.to == i + 1) sign += 1.0;    // reference direction delivers here
      if (e.from == i + 1) sign -= 1.0;  // reference direction takes from here
      if (sign != 0.0) {
        flow_coeff(lp, part_row, j, sign);
        flow_coeff(lp, bal_row, j, sign);
      }
    }
    const auto& curve = net.nodes[i].demand;
    for (int w = 0; w < curve.step_count(); ++w)
      lp.row_coeffs(bal_row, lay.cons_offset[i] + w) = -1.0;
    if (lay.spill_var[i] >= 0) lp.row_coeffs(bal_row, lay.spill_var[i]) = -1.0;

    lp.row_lower[part_row] = -profile.levels[i];
    lp.row_upper[part_row] = profile.levels[i];
    lp.row_lower[bal_row] = -scenario.resources[i];
    lp.row_upper[bal_row] = -scenario.resources[i];
  }
}

void fill_consumption_bounds(const Instance& instance, const Layout& lay,
                             LpProblem& lp) {
  for (int i = 0; i < lay.n; ++i) {
    const auto& curve = instance.network.nodes[i].demand;
    for (int w = 0; w < curve.step_count(); ++w) {
      const int col = lay.cons_offset[i] + w;
      lp.var_lower[col] = 0.0;
      lp.var_upper[col] = curve.quantities()[w];
      lp.objective[col] = curve.prices()[w];
    }
    if (lay.spill_var[i] >= 0) {
      lp.var_lower[lay.spill_var[i]] = 0.0;
      lp.var_upper[lay.spill_var[i]] = kInf;
      lp.objective[lay.spill_var[i]] = 0.0;  // kept units have no value
    }
  }
}

void check_inputs(const Instance& instance, const Scenario& scenario,
                  const ParticipationProfile& profile) {
  const int n = instance.network.node_count();
  const int m = instance.network.edge_count();
  if (profile.levels.size() != n)
    throw DimensionError("redistribution: profile must have one level per node");
  if (scenario.resources.size() != n || scenario.cap_neg.size() != m ||
      scenario.cap_pos.size() != m)
    throw DimensionError("redistribution: scenario vectors do not match network");
}

}  // namespace

LpProblem build_redistribution_lp(const Instance& instance,
                                  const Scenario& scenario,
                                  const ParticipationProfile& profile) {
  check_inputs(instance, scenario, profile);
  const Layout lay = make_layout(instance, scenario);
  const int rows = 2 * lay.n;

  LpProblem lp;
  lp.objective = Eigen::VectorXd::Zero(lay.total_vars);
  lp.var_lower = Eigen::VectorXd::Zero(lay.total_vars);
  lp.var_upper = Eigen::VectorXd::Zero(lay.total_vars);
  lp.row_coeffs = Eigen::MatrixXd::Zero(rows, lay.total_vars);
  lp.row_lower = Eigen::VectorXd::Zero(rows);
  lp.row_upper = Eigen::VectorXd::Zero(rows);

  for (int j = 0; j < lay.m; ++j) {
    lp.var_lower[j] = scenario.cap_neg[j];
    lp.var_upper[j] = scenario.cap_pos[j];
  }
  fill_consumption_bounds(instance, lay, lp);
  fill_node_rows(instance, scenario, profile, lay, lp, 0,
                 [](LpProblem& p, int row, int edge, double sign) {
                   p.row_coeffs(row, edge) = sign;
                 });
  return lp;
}

RedistributionOutcome redistribute(const Instance& instance,
                                   const Scenario& scenario,
                                   const ParticipationProfile& profile) {
  check_inputs(instance, scenario, profile);
  const Layout lay = make_layout(instance, scenario);
  const Network& net = instance.network;

  // Stage one: the utility optimum.
  const LpProblem stage1 = build_redistribution_lp(instance, scenario, profile);
  const LpSolution opt = solve_lp(stage1);
  if (opt.status != LpStatus::optimal)
    throw InfeasibleError("redistribution: utility stage not optimal (internal)");

  // Stage two: pin the utility at its optimum and minimize total |flow| by
  // splitting each signed flow into nonnegative forward/backward parts.
  const int cons_vars = lay.total_vars - lay.m;
  const int vars2 = 2 * lay.m + cons_vars;
  const int rows2 = 2 * lay.n + 1;
  LpProblem lp2;
  lp2.objective = Eigen::VectorXd::Zero(vars2);
  lp2.var_lower = Eigen::VectorXd::Zero(vars2);
  lp2.var_upper = Eigen::VectorXd::Zero(vars2);
  lp2.row_coeffs = Eigen::MatrixXd::Zero(rows2, vars2);
  lp2.row_lower = Eigen::VectorXd::Zero(rows2);
  lp2.row_upper = Eigen::VectorXd::Zero(rows2);

  for (int j = 0; j < lay.m; ++j) {
    lp2.var_upper[j] = scenario.cap_pos[j];          // forward part
    lp2.var_upper[lay.m + j] = -scenario.cap_neg[j];  // backward part
    lp2.objective[j] = -1.0;
    lp2.objective[lay.m + j] = -1.0;
  }
  // consumption block shifted by an extra m columns
  {
    LpProblem tmp;
    tmp.objective = Eigen::VectorXd::Zero(lay.total_vars);
    tmp.var_lower = Eigen::VectorXd::Zero(lay.total_vars);
    tmp.var_upper = Eigen::VectorXd::Zero(lay.total_vars);
    fill_consumption_bounds(instance, lay, tmp);
    lp2.var_lower.segment(2 * lay.m, cons_vars) = tmp.var_lower.segment(lay.m, cons_vars);
    lp2.var_upper.segment(2 * lay.m, cons_vars) = tmp.var_upper.segment(lay.m, cons_vars);
  }

  Layout lay2 = lay;  // same consumption layout, shifted for the split flows
  for (int i = 0; i < lay.n; ++i) {
    lay2.cons_offset[i] += lay.m;
    if (lay2.spill_var[i] >= 0) lay2.spill_var[i] += lay.m;
  }
  lay2.total_vars = vars2;
  fill_node_rows(instance, scenario, profile, lay2, lp2, 0,
                 [m = lay.m](LpProblem& p, int row, int edge, double sign) {
                   p.row_coeffs(row, edge) = sign;
                   p.row_coeffs(row, m + edge) = -sign;
                 });

  // pinned-utility row
  const int util_row = 2 * lay.n;
  for (int i = 0; i < lay.n; ++i) {
    const auto& curve = net.nodes[i].demand;
    for (int w = 0; w < curve.step_count(); ++w)
      lp2.row_coeffs(util_row, lay2.cons_offset[i] + w) = curve.prices()[w];
  }
  // Pin exactly: any slack here gets spent shaving flows (the optimizer
  // trades utility for |f| until the bound binds), and price ratios amplify
  // the spend into visible per-player value drift.  Sub-ulp infeasibility of
  // the exact pin is absorbed by the phase-one tolerance.
  lp2.row_lower[util_row] = opt.objective_value;
  lp2.row_upper[util_row] = kInf;

  const LpSolution min_flow = solve_lp(lp2);
  if (min_flow.status != LpStatus::optimal)
    throw InfeasibleError("redistribution: flow stage not optimal (internal)");

  // Assemble the outcome from the stage-two point.
  RedistributionOutcome out;
  out.scenario_index = scenario.index;
  out.flows = Eigen::VectorXd(lay.m);
  for (int j = 0; j < lay.m; ++j)
    out.flows[j] = min_flow.values[j] - min_flow.values[lay.m + j];

  out.consumptions.resize(lay.n);
  out.spill = Eigen::VectorXd::Zero(lay.n);
  out.net_received = Eigen::VectorXd::Zero(lay.n);
  out.uc = Eigen::VectorXd::Zero(lay.n);
  out.uc_reference = Eigen::VectorXd::Zero(lay.n);
  out.mu = Eigen::VectorXd::Zero(lay.n);
  for (int i = 0; i < lay.n; ++i) {
    const auto& curve = net.nodes[i].demand;
    const int w_n = static_cast<int>(curve.step_count());
    double inflow = 0.0;
    for (int j = 0; j < lay.m; ++j) {
      const Edge& e = net.edges[j];
      if (e.to == i + 1) inflow += out.flows[j];
      if (e.from == i + 1) inflow -= out.flows[j];
    }
    // The flow stage fixes the transport plan; refill consumption greedily
    // from the realized supply (prices fall strictly along the curve, so the
    // per-node optimum is unique).  Reading the stage-two consumption
    // variables instead would leak the utility pin's kTol slack into the
    // reported per-player values.
    const double supply = std::max(scenario.resources[i] + inflow, 0.0);
    out.consumptions[i] = Eigen::VectorXd::Zero(w_n);
    double left = supply;
    for (int w = 0; w < w_n; ++w) {
      const double take = std::min(left, curve.quantities()[w]);
      out.consumptions[i][w] = take;
      left -= take;
    }
    out.spill[i] = left;
    const double consumed = supply;
    out.net_received[i] = consumed - scenario.resources[i];
    out.uc[i] = out.consumptions[i].dot(curve.prices());
    out.uc_reference[i] = consumption_utility(curve, scenario.resources[i]);
    if (out.net_received[i] > kTol)
      out.mu[i] = marginal_value(curve, consumed, Side::below);
    else if (out.net_received[i] < -kTol)
      out.mu[i] = -marginal_value(curve, consumed, Side::above);
  }
  out.total_utility = out.uc.sum();
  out.rcp = clearing_price(out);
  out.uf = financial_utilities(out, out.rcp);
  return out;
}

std::optional<double> clearing_price(const RedistributionOutcome& outcome) {
  bool moved = false;
  for (Eigen::Index i = 0; i < outcome.net_received.size(); ++i)
    if (std::abs(outcome.net_received[i]) > kTol) moved = true;
  if (!moved) return std::nullopt;

  double min_receiver = kInf;
  double max_giver = -kInf;
  for (Eigen::Index i = 0; i < outcome.mu.size(); ++i) {
    if (outcome.mu[i] > 0.0) min_receiver = std::min(min_receiver, outcome.mu[i]);
    if (outcome.mu[i] < 0.0) max_giver = std::max(max_giver, -outcome.mu[i]);
  }
  const bool have_receiver = min_receiver != kInf;
  const bool have_giver = max_giver != -kInf;
  if (have_receiver != have_giver)
    throw OneSidedError(
        "clearing price: units moved but only one market side has a nonzero "
        "marginal");
  if (!have_receiver) return std::nullopt;
  return 0.5 * (min_receiver + max_giver);
}

Eigen::VectorXd financial_utilities(const RedistributionOutcome& outcome,
                                    std::optional<double> rcp) {
  if (!rcp) return Eigen::VectorXd::Zero(outcome.net_received.size());
  return -outcome.net_received * *rcp;
}

}  // namespace tcrrgu
