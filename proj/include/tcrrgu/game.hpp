#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "tcrrgu/model.hpp"
#include "tcrrgu/redistribution.hpp"

namespace tcrrgu {

// What enters a player's scenario payoff before the tail aggregation.
enum class PayoffBasis {
  uc,          // consumption utility only (the default)
  uc_plus_uf,  // consumption plus financial utility
};

struct GameOptions {
  PayoffBasis basis = PayoffBasis::uc;
  // Tail level for the expected-shortfall payoff; instance alpha if absent.
  std::optional<double> alpha;
};

struct ProfileEvaluation {
  ParticipationProfile profile;
  std::vector<RedistributionOutcome> per_scenario;  // one outcome per scenario
  Eigen::VectorXd payoffs;  // per-player expected shortfall of the basis
};

// Clears every scenario under the profile and aggregates each player's
// scenario payoffs into an expected shortfall.
ProfileEvaluation evaluate_profile(const Instance& instance,
                                   const ParticipationProfile& profile,
                                   const GameOptions& options = {});

// Integer grid 0..q_max for one player, everyone else held fixed.  Ties are
// broken toward the smallest level, so a player never participates more than
// the payoff justifies.
struct BestResponse {
  int level = 0;
  double payoff = 0.0;
};
BestResponse best_response(const Instance& instance,
                           const ParticipationProfile& profile, int player,
                           int q_max, const GameOptions& options = {});

// Default deviation grid: each player's level ranges over 0..ceil(total
// demand), participation beyond one's own demand being pointless.
Eigen::VectorXi default_grid(const Instance& instance);

// Default starting profile for the dynamics: each player's final-step
// quantity.
ParticipationProfile default_initial_profile(const Instance& instance);

enum class UpdateSchedule {
  sequential,    // players revise in index order within a round
  simultaneous,  // all players revise against the same previous profile
};

// Trace of the best-response dynamics.  `iterations` starts with the initial
// profile and appends the profile after each full round; on convergence the
// final two entries are equal.  `converged` is false when max_rounds ran out
// (the trace is still returned; no exception).
struct BestResponseTrace {
  std::vector<ParticipationProfile> iterations;
  bool converged = false;
};
BestResponseTrace best_response_iteration(
    const Instance& instance, const ParticipationProfile& initial,
    int max_rounds, UpdateSchedule schedule = UpdateSchedule::sequential,
    std::optional<Eigen::VectorXi> grid = std::nullopt,
    const GameOptions& options = {});

// One profitable unilateral deviation discovered by the Nash check.
struct Deviation {
  int player = 0;  // 1-based
  int level = 0;
  double payoff = 0.0;
  double gain = 0.0;
};

struct NashResult {
  bool is_nash = false;
  Eigen::VectorXd payoffs;            // payoffs at the checked profile
  std::vector<Deviation> improvements;  // strict improvements found (> kTol)
};

// Exhaustive unilateral deviation check over the integer grid 0..q_max.
NashResult is_nash(const Instance& instance,
                   const ParticipationProfile& profile, int q_max,
                   const GameOptions& options = {});

// Every integer profile on the grid, in lexicographic order, that passes the
// exhaustive deviation check.  Throws BudgetExceededError before any work if
// the grid holds more than `budget` profiles.
std::vector<ParticipationProfile> enumerate_equilibria(
    const Instance& instance, const Eigen::VectorXi& q_max_per_player,
    long budget, const GameOptions& options = {});

}  // namespace tcrrgu
