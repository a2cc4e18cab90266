#pragma once

// Shared fixture access, deterministic random generators and the brute-force
// oracles the tests compare against.  Everything here is independent of the
// test framework so the acceptance runner can reuse it.

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "tcrrgu/json_io.hpp"
#include "tcrrgu/lp.hpp"
#include "tcrrgu/model.hpp"

namespace testutil {

inline std::string data_file(const std::string& name) {
  return std::string(TCRRGU_DATA_DIR) + "/" + name;
}

inline tcrrgu::Instance bundled_instance() {
  return tcrrgu::load_instance(data_file("paper_fig1.json"));
}

// ---------------------------------------------------------------------------
// Random LPs with finite variable boxes (so every feasible problem has a
// vertex optimum the enumeration oracle can find).

struct OracleLpResult {
  bool feasible = false;
  double objective = 0.0;
};

inline tcrrgu::LpProblem random_lp(std::mt19937& rng) {
  std::uniform_int_distribution<int> nvars(1, 3), nrows(0, 3);
  std::uniform_int_distribution<int> coeff(-2, 2), obj(-9, 9);
  std::uniform_int_distribution<int> lo(-5, 0), width(0, 6);
  std::uniform_int_distribution<int> kind(0, 9);

  const int n = nvars(rng), m = nrows(rng);
  tcrrgu::LpProblem lp;
  lp.objective.resize(n);
  lp.var_lower.resize(n);
  lp.var_upper.resize(n);
  lp.row_coeffs = Eigen::MatrixXd::Zero(m, n);
  lp.row_lower.resize(m);
  lp.row_upper.resize(m);
  for (int j = 0; j < n; ++j) {
    lp.objective[j] = obj(rng);
    lp.var_lower[j] = lo(rng);
    lp.var_upper[j] = lp.var_lower[j] + width(rng);
  }
  const double inf = std::numeric_limits<double>::infinity();
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) lp.row_coeffs(i, j) = coeff(rng);
    const double a = lo(rng) - 3, b = a + width(rng);
    switch (kind(rng)) {
      case 0: lp.row_lower[i] = a; lp.row_upper[i] = a; break;     // equality
      case 1: lp.row_lower[i] = a; lp.row_upper[i] = inf; break;   // >=
      case 2: lp.row_lower[i] = -inf; lp.row_upper[i] = b; break;  // <=
      default: lp.row_lower[i] = a; lp.row_upper[i] = b; break;    // range
    }
  }
  return lp;
}

// Enumerates every choice of n active constraints among the variable and row
// bounds, solves for the intersection point and keeps the best feasible one.
// Only valid when all variable boxes are finite.
inline OracleLpResult enumerate_lp_vertices(const tcrrgu::LpProblem& lp) {
  const int n = static_cast<int>(lp.num_vars());
  const int m = static_cast<int>(lp.num_rows());
  constexpr double tol = 1e-7;

  // candidate hyperplanes: (normal, offset)
  std::vector<Eigen::VectorXd> normals;
  std::vector<double> offsets;
  for (int j = 0; j < n; ++j) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e[j] = 1.0;
    normals.push_back(e);
    offsets.push_back(lp.var_lower[j]);
    normals.push_back(e);
    offsets.push_back(lp.var_upper[j]);
  }
  for (int i = 0; i < m; ++i) {
    if (std::isfinite(lp.row_lower[i])) {
      normals.push_back(lp.row_coeffs.row(i).transpose());
      offsets.push_back(lp.row_lower[i]);
    }
    if (std::isfinite(lp.row_upper[i])) {
      normals.push_back(lp.row_coeffs.row(i).transpose());
      offsets.push_back(lp.row_upper[i]);
    }
  }

  OracleLpResult best;
  const int k = static_cast<int>(normals.size());
  std::vector<int> pick(n);
  auto feasible = [&](const Eigen::VectorXd& x) {
    for (int j = 0; j < n; ++j)
      if (x[j] < lp.var_lower[j] - tol || x[j] > lp.var_upper[j] + tol)
        return false;
    for (int i = 0; i < m; ++i) {
      const double a = lp.row_coeffs.row(i).dot(x);
      if (a < lp.row_lower[i] - tol || a > lp.row_upper[i] + tol) return false;
    }
    return true;
  };

  // iterate over k choose n index combinations
  for (int j = 0; j < n; ++j) pick[j] = j;
  while (true) {
    Eigen::MatrixXd basis(n, n);
    Eigen::VectorXd rhs(n);
    for (int j = 0; j < n; ++j) {
      basis.row(j) = normals[pick[j]].transpose();
      rhs[j] = offsets[pick[j]];
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(basis);
    if (lu.isInvertible()) {
      const Eigen::VectorXd x = lu.solve(rhs);
      if (feasible(x)) {
        const double v = lp.objective.dot(x);
        if (!best.feasible || v > best.objective) {
          best.feasible = true;
          best.objective = v;
        }
      }
    }
    int j = n - 1;
    while (j >= 0 && pick[j] == k - n + j) --j;
    if (j < 0) break;
    ++pick[j];
    for (int l = j + 1; l < n; ++l) pick[l] = pick[l - 1] + 1;
  }
  return best;
}

// ---------------------------------------------------------------------------
// Random valid instances: <= 3 nodes, <= 3 edges, small integer data.

struct InstanceOptions {
  int max_nodes = 3;
  int max_edges = 3;
  int max_scenarios = 3;
  bool allow_surplus = true;  // resources may exceed total demand
};

inline tcrrgu::Instance random_instance(std::mt19937& rng,
                                        const InstanceOptions& opt = {}) {
  std::uniform_int_distribution<int> nodes(1, opt.max_nodes);
  std::uniform_int_distribution<int> steps(1, 3);
  // 3 steps of drop <= 2 from a start >= 8 keep every price strictly positive
  std::uniform_int_distribution<int> first_price(8, 20), drop(1, 2);
  std::uniform_int_distribution<int> qty(1, 6);
  std::uniform_int_distribution<int> cap(1, 8);
  std::uniform_int_distribution<int> nscen(1, opt.max_scenarios);
  std::uniform_int_distribution<int> weight(1, 5);

  tcrrgu::Instance inst;
  const int n = nodes(rng);
  std::vector<double> total_demand(n, 0.0);
  for (int i = 0; i < n; ++i) {
    tcrrgu::Node node;
    node.index = i + 1;
    node.name = "N" + std::to_string(i + 1);
    const int w = steps(rng);
    Eigen::VectorXd prices(w), quantities(w);
    double p = first_price(rng);
    for (int s = 0; s < w; ++s) {
      prices[s] = p;
      p -= drop(rng);
      quantities[s] = qty(rng);
      total_demand[i] += quantities[s];
    }
    node.demand = tcrrgu::DemandCurve(prices, quantities);
    inst.network.nodes.push_back(std::move(node));
  }

  std::uniform_int_distribution<int> nedges(0, n >= 2 ? opt.max_edges : 0);
  std::uniform_int_distribution<int> pick_node(1, n);
  const int m = nedges(rng);
  for (int j = 0; j < m; ++j) {
    tcrrgu::Edge e;
    e.index = j + 1;
    e.from = pick_node(rng);
    do e.to = pick_node(rng); while (e.to == e.from);
    e.cap_neg = -cap(rng);
    e.cap_pos = cap(rng);
    inst.network.edges.push_back(e);
  }

  const int s_count = nscen(rng);
  std::vector<int> weights(s_count);
  int wsum = 0;
  for (int s = 0; s < s_count; ++s) wsum += weights[s] = weight(rng);
  for (int s = 0; s < s_count; ++s) {
    tcrrgu::Scenario sc;
    sc.index = s + 1;
    sc.probability = static_cast<double>(weights[s]) / wsum;
    sc.resources.resize(n);
    for (int i = 0; i < n; ++i) {
      const int hi = opt.allow_surplus ? static_cast<int>(total_demand[i]) + 4
                                       : static_cast<int>(total_demand[i]);
      std::uniform_int_distribution<int> res(0, hi);
      sc.resources[i] = res(rng);
    }
    sc.cap_neg.resize(m);
    sc.cap_pos.resize(m);
    for (int j = 0; j < m; ++j) {
      std::uniform_int_distribution<int> down(
          0, static_cast<int>(-inst.network.edges[j].cap_neg));
      std::uniform_int_distribution<int> up(
          0, static_cast<int>(inst.network.edges[j].cap_pos));
      sc.cap_neg[j] = -down(rng);
      sc.cap_pos[j] = up(rng);
    }
    inst.scenarios.push_back(std::move(sc));
  }

  std::uniform_real_distribution<double> alpha(0.1, 1.0);
  inst.alpha = std::min(1.0, alpha(rng));
  return inst;
}

inline tcrrgu::ParticipationProfile random_profile(std::mt19937& rng,
                                                   const tcrrgu::Instance& inst) {
  std::uniform_int_distribution<int> level(0, 6);
  Eigen::VectorXd q(inst.network.node_count());
  for (Eigen::Index i = 0; i < q.size(); ++i) q[i] = level(rng);
  return tcrrgu::ParticipationProfile(q);
}

// ---------------------------------------------------------------------------
// Integer-flow enumeration oracle.  With all-integer caps, resources, demand
// steps and participation levels the redistribution optimum is attained at an
// integer flow vector (the constraints form a transshipment structure), so
// scanning every integer flow and greedily consuming at each node bounds the
// LP from below and above.

inline double greedy_node_utility(const tcrrgu::DemandCurve& curve,
                                  double supply) {
  double value = 0.0;
  for (Eigen::Index w = 0; w < curve.step_count(); ++w) {
    const double used = std::min(supply, curve.quantities()[w]);
    if (used <= 0) break;
    value += used * curve.prices()[w];
    supply -= used;
  }
  return value;  // any remaining supply spills at zero value
}

struct OracleFlowResult {
  bool feasible = false;
  double utility = 0.0;
};

inline OracleFlowResult enumerate_integer_flows(
    const tcrrgu::Instance& inst, const tcrrgu::Scenario& scenario,
    const tcrrgu::ParticipationProfile& profile) {
  const int n = inst.network.node_count();
  const int m = inst.network.edge_count();
  std::vector<int> flow(m), lo(m), hi(m);
  for (int j = 0; j < m; ++j) {
    lo[j] = static_cast<int>(std::lround(scenario.cap_neg[j]));
    hi[j] = static_cast<int>(std::lround(scenario.cap_pos[j]));
    flow[j] = lo[j];
  }

  OracleFlowResult best;
  while (true) {
    // net received per node under this flow vector
    bool ok = true;
    double total = 0.0;
    for (int i = 0; i < n && ok; ++i) {
      double net = 0.0;
      for (int j = 0; j < m; ++j) {
        if (inst.network.edges[j].to == i + 1) net += flow[j];
        if (inst.network.edges[j].from == i + 1) net -= flow[j];
      }
      if (std::abs(net) > profile.levels[i] + 1e-9) ok = false;
      const double supply = scenario.resources[i] + net;
      if (supply < -1e-9) ok = false;
      if (ok) total += greedy_node_utility(inst.network.nodes[i].demand, supply);
    }
    if (ok && (!best.feasible || total > best.utility)) {
      best.feasible = true;
      best.utility = total;
    }

    int j = m - 1;
    while (j >= 0 && flow[j] == hi[j]) {
      flow[j] = lo[j];
      --j;
    }
    if (j < 0) break;
    ++flow[j];
  }
  return best;
}

}  // namespace testutil
