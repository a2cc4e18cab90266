#include "tcrrgu/model.hpp"

#include <cmath>
#include <sstream>

namespace tcrrgu {

namespace {

std::string path_of(const char* array, int i, const char* field) {
  std::ostringstream os;
  os << array << '[' << i + 1 << ']';
  if (field && *field) os << '.' << field;
  return os.str();
}

void check_curve(const DemandCurve& curve, int node_i,
                 std::vector<Violation>& out) {
  const auto& p = curve.prices();
  const auto& q = curve.quantities();
  if (p.size() == 0) {
    out.push_back({ViolationKind::demand_curve, path_of("nodes", node_i, "demand"),
                   "demand curve has no steps"});
    return;
  }
  for (Eigen::Index w = 0; w < p.size(); ++w) {
    if (!(q[w] > 0.0))
      out.push_back({ViolationKind::demand_curve,
                     path_of("nodes", node_i, "demand"),
                     "step " + std::to_string(w + 1) + " quantity must be > 0"});
    if (!(p[w] > 0.0))
      out.push_back({ViolationKind::demand_curve,
                     path_of("nodes", node_i, "demand"),
                     "step " + std::to_string(w + 1) + " price must be > 0"});
    if (w > 0 && !(p[w] < p[w - 1]))
      out.push_back({ViolationKind::demand_curve,
                     path_of("nodes", node_i, "demand"),
                     "prices must be strictly decreasing (step " +
                         std::to_string(w + 1) + ")"});
  }
}

}  // namespace

const char* to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::probability_sum: return "probability_sum";
    case ViolationKind::capacity_order: return "capacity_order";
    case ViolationKind::demand_curve: return "demand_curve";
    case ViolationKind::topology: return "topology";
    case ViolationKind::dimension: return "dimension";
    case ViolationKind::value_range: return "value_range";
  }
  return "unknown";
}

std::vector<Violation> validate(const Instance& instance) {
  std::vector<Violation> out;
  const Network& net = instance.network;
  const int n = net.node_count();
  const int m = net.edge_count();

  if (n == 0)
    out.push_back({ViolationKind::topology, "nodes", "instance has no nodes"});

  for (int i = 0; i < n; ++i) {
    const Node& node = net.nodes[i];
    if (node.index != i + 1)
      out.push_back({ViolationKind::topology, path_of("nodes", i, "id"),
                     "node ids must be 1-based and match array order"});
    check_curve(node.demand, i, out);
  }

  for (int j = 0; j < m; ++j) {
    const Edge& e = net.edges[j];
    if (e.index != j + 1)
      out.push_back({ViolationKind::topology, path_of("edges", j, "id"),
                     "edge ids must be 1-based and match array order"});
    if (e.from < 1 || e.from > n)
      out.push_back({ViolationKind::topology, path_of("edges", j, "from"),
                     "edge endpoint refers to no node"});
    if (e.to < 1 || e.to > n)
      out.push_back({ViolationKind::topology, path_of("edges", j, "to"),
                     "edge endpoint refers to no node"});
    if (e.from == e.to)
      out.push_back({ViolationKind::topology, path_of("edges", j, ""),
                     "self-loop: from and to must differ"});
    if (!(e.cap_neg <= 0.0) || !(e.cap_pos >= 0.0))
      out.push_back({ViolationKind::capacity_order, path_of("edges", j, ""),
                     "base capacities must satisfy cap_neg <= 0 <= cap_pos"});
  }

  if (instance.scenarios.empty())
    out.push_back({ViolationKind::value_range, "scenarios",
                   "instance has no scenarios"});

  double prob_sum = 0.0;
  for (int s = 0; s < static_cast<int>(instance.scenarios.size()); ++s) {
    const Scenario& sc = instance.scenarios[s];
    if (sc.index != s + 1)
      out.push_back({ViolationKind::topology, path_of("scenarios", s, "id"),
                     "scenario ids must be 1-based and match array order"});
    if (!(sc.probability > 0.0) || sc.probability > 1.0)
      out.push_back({ViolationKind::value_range,
                     path_of("scenarios", s, "probability"),
                     "probability must lie in (0, 1]"});
    prob_sum += sc.probability;

    if (sc.resources.size() != n) {
      out.push_back({ViolationKind::dimension,
                     path_of("scenarios", s, "resources"),
                     "resources must have one entry per node"});
    } else {
      for (int i = 0; i < n; ++i)
        if (sc.resources[i] < 0.0)
          out.push_back({ViolationKind::value_range,
                         path_of("scenarios", s, "resources"),
                         "resource for node " + std::to_string(i + 1) +
                             " must be >= 0"});
    }

    const bool caps_sized = sc.cap_neg.size() == m && sc.cap_pos.size() == m;
    if (!caps_sized) {
      out.push_back({ViolationKind::dimension, path_of("scenarios", s, ""),
                     "cap_neg/cap_pos must have one entry per edge"});
    } else {
      for (int j = 0; j < m; ++j) {
        const Edge& e = net.edges[j];
        if (!(e.cap_neg - kTol <= sc.cap_neg[j] && sc.cap_neg[j] <= 0.0))
          out.push_back({ViolationKind::capacity_order,
                         path_of("scenarios", s, "cap_neg"),
                         "edge " + std::to_string(j + 1) +
                             ": need base cap_neg <= scenario cap_neg <= 0"});
        if (!(0.0 <= sc.cap_pos[j] && sc.cap_pos[j] <= e.cap_pos + kTol))
          out.push_back({ViolationKind::capacity_order,
                         path_of("scenarios", s, "cap_pos"),
                         "edge " + std::to_string(j + 1) +
                             ": need 0 <= scenario cap_pos <= base cap_pos"});
      }
    }
  }

  if (!instance.scenarios.empty() && std::abs(prob_sum - 1.0) > kTol)
    out.push_back({ViolationKind::probability_sum, "scenarios[*].probability",
                   "scenario probabilities must sum to 1"});

  if (!(instance.alpha > 0.0) || instance.alpha > 1.0)
    out.push_back({ViolationKind::value_range, "alpha",
                   "alpha must lie in (0, 1]"});

  return out;
}

namespace {

std::string summarize(const std::vector<Violation>& violations) {
  std::ostringstream os;
  os << "invalid instance (" << violations.size() << " violation"
     << (violations.size() == 1 ? "" : "s") << ")";
  for (const Violation& v : violations)
    os << "\n  [" << to_string(v.kind) << "] " << v.path << ": " << v.message;
  return os.str();
}

}  // namespace

ValidationError::ValidationError(std::vector<Violation> violations)
    : Error(summarize(violations)), violations_(std::move(violations)) {}

const Instance& validate_or_throw(const Instance& instance) {
  auto violations = validate(instance);
  if (!violations.empty()) throw ValidationError(std::move(violations));
  return instance;
}

std::vector<Violation> validate_profile(const Instance& instance,
                                        const ParticipationProfile& profile) {
  std::vector<Violation> out;
  const int n = instance.network.node_count();
  if (profile.levels.size() != n) {
    out.push_back({ViolationKind::dimension, "profile",
                   "profile must have one level per node"});
    return out;
  }
  for (int i = 0; i < n; ++i)
    if (profile.levels[i] < 0.0)
      out.push_back({ViolationKind::value_range,
                     "profile[" + std::to_string(i + 1) + "]",
                     "participation level must be >= 0"});
  return out;
}

}  // namespace tcrrgu
