#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <string>
#include <vector>

#include "tcrrgu/demand.hpp"
#include "tcrrgu/errors.hpp"

namespace tcrrgu {

// A player.  `index` is 1-based and equals the position in Network::nodes.
struct Node {
  int index = 0;
  std::string name;
  DemandCurve demand;
};

// Directed transport link.  `from`/`to` fix the reference direction: a
// positive flow moves units from `from` to `to`, a negative flow the
// opposite way.  cap_neg <= 0 <= cap_pos bound the signed flow.
struct Edge {
  int index = 0;
  int from = 0;
  int to = 0;
  double cap_neg = 0.0;
  double cap_pos = 0.0;
};

struct Network {
  std::vector<Node> nodes;
  std::vector<Edge> edges;

  int node_count() const { return static_cast<int>(nodes.size()); }
  int edge_count() const { return static_cast<int>(edges.size()); }
};

// One realization of the uncertain world: per-node resources and
// direction-dependent per-edge capacities, which must lie inside the base
// capacities of the network's edges.
struct Scenario {
  int index = 0;
  double probability = 0.0;
  Eigen::VectorXd resources;  // length N, >= 0
  Eigen::VectorXd cap_neg;    // length M, base cap_neg <= cap_neg <= 0
  Eigen::VectorXd cap_pos;    // length M, 0 <= cap_pos <= base cap_pos
};

struct Instance {
  Network network;
  std::vector<Scenario> scenarios;
  double alpha = 1.0;  // tail level for expected-shortfall payoffs, in (0, 1]
};

// Per-player participation levels q^P >= 0: the maximum net quantity a
// player can be asked to give up, and symmetrically the maximum net quantity
// it may receive, in any single scenario.
struct ParticipationProfile {
  Eigen::VectorXd levels;

  ParticipationProfile() = default;
  explicit ParticipationProfile(Eigen::VectorXd l) : levels(std::move(l)) {}
  explicit ParticipationProfile(const std::vector<double>& l)
      : levels(Eigen::Map<const Eigen::VectorXd>(l.data(),
                                                 static_cast<Eigen::Index>(l.size()))) {}
};

enum class ViolationKind {
  probability_sum,  // scenario probabilities do not sum to one
  capacity_order,   // capacity signs or scenario-vs-base ordering broken
  demand_curve,     // non-positive quantity, non-increasing or non-positive price
  topology,         // dangling endpoints, self-loops, bad node indexing
  dimension,        // per-scenario vector length mismatch
  value_range,      // negative resource, probability or alpha out of range
};

struct Violation {
  ViolationKind kind;
  std::string path;     // element that violates, e.g. "scenarios[2].probability"
  std::string message;
};

const char* to_string(ViolationKind kind);

// Checks every instance invariant and returns all violations (not only the
// first).  An empty result means the instance is valid.
std::vector<Violation> validate(const Instance& instance);

// Aggregate error carrying the full violation list.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Violation> violations);
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

// Returns its argument if valid, otherwise throws ValidationError with every
// violated invariant.
const Instance& validate_or_throw(const Instance& instance);

// Checks a profile against an instance: length N and non-negative levels.
std::vector<Violation> validate_profile(const Instance& instance,
                                        const ParticipationProfile& profile);

}  // namespace tcrrgu
