#include "tcrrgu/game.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "tcrrgu/risk.hpp"

namespace tcrrgu {

namespace {

// Payoff cache keyed by the integer participation vector.  Deviation checks
// revisit the same profiles constantly during enumeration.
using PayoffCache = std::map<std::vector<int>, Eigen::VectorXd>;

Eigen::VectorXd payoffs_of(const Instance& instance,
                           const ParticipationProfile& profile,
                           const GameOptions& options) {
  return evaluate_profile(instance, profile, options).payoffs;
}

Eigen::VectorXd cached_payoffs(const Instance& instance,
                               const std::vector<int>& levels,
                               const GameOptions& options, PayoffCache* cache) {
  if (cache) {
    auto it = cache->find(levels);
    if (it != cache->end()) return it->second;
  }
  Eigen::VectorXd q(levels.size());
  for (size_t i = 0; i < levels.size(); ++i) q[static_cast<Eigen::Index>(i)] = levels[i];
  Eigen::VectorXd p = payoffs_of(instance, ParticipationProfile(q), options);
  if (cache) cache->emplace(levels, p);
  return p;
}

void check_profile(const Instance& instance,
                   const ParticipationProfile& profile) {
  auto violations = validate_profile(instance, profile);
  if (!violations.empty()) throw ValidationError(std::move(violations));
}

}  // namespace

ProfileEvaluation evaluate_profile(const Instance& instance,
                                   const ParticipationProfile& profile,
                                   const GameOptions& options) {
  check_profile(instance, profile);
  const int n = instance.network.node_count();
  const int s_count = static_cast<int>(instance.scenarios.size());
  const double alpha = options.alpha.value_or(instance.alpha);

  ProfileEvaluation eval;
  eval.profile = profile;
  eval.per_scenario.reserve(static_cast<size_t>(s_count));
  Eigen::MatrixXd value(s_count, n);
  Eigen::VectorXd prob(s_count);
  for (int s = 0; s < s_count; ++s) {
    const Scenario& sc = instance.scenarios[s];
    RedistributionOutcome outcome = redistribute(instance, sc, profile);
    for (int i = 0; i < n; ++i) {
      value(s, i) = outcome.uc[i];
      if (options.basis == PayoffBasis::uc_plus_uf) value(s, i) += outcome.uf[i];
    }
    prob[s] = sc.probability;
    eval.per_scenario.push_back(std::move(outcome));
  }

  eval.payoffs = Eigen::VectorXd(n);
  for (int i = 0; i < n; ++i)
    eval.payoffs[i] = expected_shortfall(value.col(i), prob, alpha);
  return eval;
}

Eigen::VectorXi default_grid(const Instance& instance) {
  const int n = instance.network.node_count();
  Eigen::VectorXi grid(n);
  for (int i = 0; i < n; ++i)
    grid[i] = static_cast<int>(
        std::ceil(instance.network.nodes[i].demand.total_quantity() - kTol));
  return grid;
}

ParticipationProfile default_initial_profile(const Instance& instance) {
  const int n = instance.network.node_count();
  Eigen::VectorXd levels(n);
  for (int i = 0; i < n; ++i) {
    const auto& q = instance.network.nodes[i].demand.quantities();
    levels[i] = q[q.size() - 1];
  }
  return ParticipationProfile(levels);
}

namespace {

// Shared core: best level for `player` (0-based) over 0..q_max with others
// fixed at `levels`.  Ascending scan with a strict kTol threshold keeps the
// smallest level on ties.
BestResponse best_response_impl(const Instance& instance,
                                std::vector<int> levels, int player, int q_max,
                                const GameOptions& options,
                                PayoffCache* cache) {
  BestResponse best;
  bool first = true;
  for (int level = 0; level <= q_max; ++level) {
    levels[static_cast<size_t>(player)] = level;
    const double payoff =
        cached_payoffs(instance, levels, options, cache)[player];
    if (first || payoff > best.payoff + kTol) {
      best = {level, payoff};
      first = false;
    }
  }
  return best;
}

std::vector<int> to_int_levels(const ParticipationProfile& profile) {
  std::vector<int> levels(static_cast<size_t>(profile.levels.size()));
  for (Eigen::Index i = 0; i < profile.levels.size(); ++i)
    levels[static_cast<size_t>(i)] =
        static_cast<int>(std::llround(profile.levels[i]));
  return levels;
}

ParticipationProfile to_profile(const std::vector<int>& levels) {
  Eigen::VectorXd q(levels.size());
  for (size_t i = 0; i < levels.size(); ++i)
    q[static_cast<Eigen::Index>(i)] = levels[i];
  return ParticipationProfile(q);
}

}  // namespace

BestResponse best_response(const Instance& instance,
                           const ParticipationProfile& profile, int player,
                           int q_max, const GameOptions& options) {
  check_profile(instance, profile);
  const int n = instance.network.node_count();
  if (player < 1 || player > n)
    throw DimensionError("best_response: player index out of range");
  if (q_max < 0) throw DimensionError("best_response: q_max must be >= 0");
  // Integer grid search over the player's own level; other players' levels
  // may be fractional and are used as given.
  BestResponse best;
  bool first = true;
  ParticipationProfile work = profile;
  for (int level = 0; level <= q_max; ++level) {
    work.levels[player - 1] = level;
    const double payoff = payoffs_of(instance, work, options)[player - 1];
    if (first || payoff > best.payoff + kTol) {
      best = {level, payoff};
      first = false;
    }
  }
  return best;
}

BestResponseTrace best_response_iteration(const Instance& instance,
                                          const ParticipationProfile& initial,
                                          int max_rounds,
                                          UpdateSchedule schedule,
                                          std::optional<Eigen::VectorXi> grid,
                                          const GameOptions& options) {
  check_profile(instance, initial);
  if (max_rounds < 1)
    throw DimensionError("best_response_iteration: max_rounds must be >= 1");
  const int n = instance.network.node_count();
  const Eigen::VectorXi bounds = grid.value_or(default_grid(instance));
  if (bounds.size() != n)
    throw DimensionError("best_response_iteration: grid must have one bound per player");

  PayoffCache cache;
  std::vector<int> current = to_int_levels(initial);
  BestResponseTrace trace;
  trace.iterations.push_back(to_profile(current));

  for (int round = 0; round < max_rounds; ++round) {
    const std::vector<int> before = current;
    if (schedule == UpdateSchedule::sequential) {
      for (int player = 0; player < n; ++player)
        current[static_cast<size_t>(player)] =
            best_response_impl(instance, current, player, bounds[player],
                               options, &cache)
                .level;
    } else {
      std::vector<int> next = current;
      for (int player = 0; player < n; ++player)
        next[static_cast<size_t>(player)] =
            best_response_impl(instance, before, player, bounds[player],
                               options, &cache)
                .level;
      current = next;
    }
    trace.iterations.push_back(to_profile(current));
    if (current == before) {
      trace.converged = true;
      break;
    }
  }
  return trace;
}

NashResult is_nash(const Instance& instance,
                   const ParticipationProfile& profile, int q_max,
                   const GameOptions& options) {
  check_profile(instance, profile);
  if (q_max < 0) throw DimensionError("is_nash: q_max must be >= 0");
  const int n = instance.network.node_count();

  NashResult result;
  result.payoffs = payoffs_of(instance, profile, options);
  ParticipationProfile work = profile;
  for (int player = 0; player < n; ++player) {
    const double base = result.payoffs[player];
    for (int level = 0; level <= q_max; ++level) {
      if (std::abs(profile.levels[player] - level) < 0.5) continue;
      work.levels[player] = level;
      const double payoff = payoffs_of(instance, work, options)[player];
      if (payoff > base + kTol)
        result.improvements.push_back(
            {player + 1, level, payoff, payoff - base});
    }
    work.levels[player] = profile.levels[player];
  }
  result.is_nash = result.improvements.empty();
  return result;
}

std::vector<ParticipationProfile> enumerate_equilibria(
    const Instance& instance, const Eigen::VectorXi& q_max_per_player,
    long budget, const GameOptions& options) {
  const int n = instance.network.node_count();
  if (q_max_per_player.size() != n)
    throw DimensionError("enumerate_equilibria: grid must have one bound per player");
  for (int i = 0; i < n; ++i)
    if (q_max_per_player[i] < 0)
      throw DimensionError("enumerate_equilibria: grid bounds must be >= 0");

  long grid_size = 1;
  for (int i = 0; i < n; ++i) {
    grid_size *= q_max_per_player[i] + 1;
    if (grid_size > budget) {
      std::ostringstream os;
      os << "enumerate_equilibria: grid holds more than " << budget
         << " profiles";
      throw BudgetExceededError(os.str());
    }
  }

  PayoffCache cache;
  std::vector<ParticipationProfile> equilibria;
  std::vector<int> levels(static_cast<size_t>(n), 0);

  // odometer over the grid, lexicographic by construction
  while (true) {
    const Eigen::VectorXd base =
        cached_payoffs(instance, levels, options, &cache);
    bool nash = true;
    std::vector<int> work = levels;
    for (int player = 0; player < n && nash; ++player) {
      for (int level = 0; level <= q_max_per_player[player]; ++level) {
        if (level == levels[static_cast<size_t>(player)]) continue;
        work[static_cast<size_t>(player)] = level;
        if (cached_payoffs(instance, work, options, &cache)[player] >
            base[player] + kTol) {
          nash = false;
          break;
        }
      }
      work[static_cast<size_t>(player)] = levels[static_cast<size_t>(player)];
    }
    if (nash) equilibria.push_back(to_profile(levels));

    int pos = n - 1;
    while (pos >= 0 && levels[static_cast<size_t>(pos)] ==
                           q_max_per_player[pos]) {
      levels[static_cast<size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
    ++levels[static_cast<size_t>(pos)];
  }
  return equilibria;
}

}  // namespace tcrrgu
