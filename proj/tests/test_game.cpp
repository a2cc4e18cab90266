#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "helpers.hpp"
#include "tcrrgu/game.hpp"

using namespace tcrrgu;

namespace {

ParticipationProfile prof(std::vector<double> q) {
  return ParticipationProfile(std::move(q));
}

std::vector<int> levels_of(const ParticipationProfile& p) {
  std::vector<int> out;
  for (Eigen::Index i = 0; i < p.levels.size(); ++i)
    out.push_back(static_cast<int>(std::llround(p.levels[i])));
  return out;
}

bool has_improvement(const NashResult& r, int player, int level, double gain) {
  return std::any_of(r.improvements.begin(), r.improvements.end(),
                     [&](const Deviation& d) {
                       return d.player == player && d.level == level &&
                              std::abs(d.gain - gain) < 1e-9;
                     });
}

// Two players behind one pipe; each is rich in one scenario and starving in
// the other, so participation is the only hedge.
Instance two_node_instance() {
  Instance inst;
  Eigen::VectorXd pa(2), qa(2), pb(2), qb(2);
  pa << 10, 6;
  qa << 3, 3;
  pb << 12, 5;
  qb << 4, 2;
  inst.network.nodes.push_back({1, "A", DemandCurve(pa, qa)});
  inst.network.nodes.push_back({2, "B", DemandCurve(pb, qb)});
  inst.network.edges.push_back({1, 1, 2, -6, 6});
  Scenario s1;
  s1.index = 1;
  s1.probability = 0.5;
  s1.resources = Eigen::Vector2d(6, 1);
  s1.cap_neg = Eigen::VectorXd::Constant(1, -6);
  s1.cap_pos = Eigen::VectorXd::Constant(1, 6);
  Scenario s2 = s1;
  s2.index = 2;
  s2.resources = Eigen::Vector2d(1, 5);
  inst.scenarios = {s1, s2};
  inst.alpha = 0.5;
  return inst;
}

}  // namespace

TEST_CASE("participation lifts the tail payoffs on the example instance") {
  const Instance inst = testutil::bundled_instance();
  const Eigen::VectorXd base = evaluate_profile(inst, prof({0, 0, 0})).payoffs;
  CHECK(std::abs(base[0] - 138) <= 1e-9);
  CHECK(std::abs(base[1] - 219) <= 1e-9);
  CHECK(std::abs(base[2] - 193) <= 1e-9);

  const ProfileEvaluation eval = evaluate_profile(inst, prof({2, 2, 4}));
  REQUIRE(eval.per_scenario.size() == 4);
  CHECK(eval.per_scenario[2].scenario_index == 3);
  CHECK(std::abs(eval.payoffs[0] - 159) <= 1e-9);
  CHECK(std::abs(eval.payoffs[1] - 253) <= 1e-9);
  CHECK(std::abs(eval.payoffs[2] - 261) <= 1e-9);
  // everyone gains relative to staying out
  CHECK(((eval.payoffs - base).array() >= 0).all());
}

TEST_CASE("the financial leg enters the payoff only under the richer basis") {
  const Instance inst = testutil::bundled_instance();
  GameOptions opt;
  opt.basis = PayoffBasis::uc_plus_uf;
  const Eigen::VectorXd pay = evaluate_profile(inst, prof({2, 2, 4}), opt).payoffs;
  CHECK(std::abs(pay[0] - 146.5) <= 1e-9);
  CHECK(std::abs(pay[1] - 223) <= 1e-9);
  CHECK(std::abs(pay[2] - 207) <= 1e-9);
}

TEST_CASE("the alpha override swaps the tail for the plain mean") {
  const Instance inst = testutil::bundled_instance();
  GameOptions opt;
  opt.alpha = 1.0;
  const Eigen::VectorXd pay = evaluate_profile(inst, prof({2, 2, 4}), opt).payoffs;
  CHECK(std::abs(pay[0] - 172) <= 1e-9);
  CHECK(std::abs(pay[1] - 269.5) <= 1e-9);
  CHECK(std::abs(pay[2] - 275) <= 1e-9);
}

TEST_CASE("default grid and starting profile come from the demand curves") {
  const Instance inst = testutil::bundled_instance();
  const Eigen::VectorXi grid = default_grid(inst);
  REQUIRE(grid.size() == 3);
  CHECK(grid[0] == 12);
  CHECK(grid[1] == 24);
  CHECK(grid[2] == 15);

  const ParticipationProfile start = default_initial_profile(inst);
  CHECK(levels_of(start) == std::vector<int>{5, 10, 4});
}

TEST_CASE("best responses break ties toward the smallest level") {
  const Instance inst = testutil::bundled_instance();
  // levels 2..12 are payoff-equivalent for both players here
  const BestResponse b2 = best_response(inst, prof({1, 1, 1}), 2, 12);
  CHECK(b2.level == 2);
  CHECK(std::abs(b2.payoff - 253) <= 1e-9);
  const BestResponse b3 = best_response(inst, prof({1, 1, 1}), 3, 12);
  CHECK(b3.level == 2);
  CHECK(std::abs(b3.payoff - 229) <= 1e-9);

  CHECK_THROWS_AS(best_response(inst, prof({1, 1, 1}), 0, 12), DimensionError);
  CHECK_THROWS_AS(best_response(inst, prof({1, 1, 1}), 4, 12), DimensionError);
  CHECK_THROWS_AS(best_response(inst, prof({1, 1, 1}), 1, -1), DimensionError);
}

TEST_CASE("deviation checks on the example instance") {
  const Instance inst = testutil::bundled_instance();

  const NashResult star = is_nash(inst, prof({2, 2, 4}), 12);
  CHECK(star.is_nash);
  CHECK(star.improvements.empty());
  CHECK(std::abs(star.payoffs[1] - 253) <= 1e-9);

  const NashResult alt = is_nash(inst, prof({1, 2, 3}), 12);
  CHECK(alt.is_nash);
  CHECK(std::abs(alt.payoffs[2] - 247) <= 1e-9);

  const NashResult ones = is_nash(inst, prof({1, 1, 1}), 12);
  CHECK(!ones.is_nash);
  CHECK(std::abs(ones.payoffs[1] - 236) <= 1e-9);
  CHECK(std::abs(ones.payoffs[2] - 211) <= 1e-9);
  // raising to 2 pays off for both players at every level up to the cap
  CHECK(has_improvement(ones, 2, 2, 17));
  CHECK(has_improvement(ones, 3, 2, 18));
  CHECK(ones.improvements.size() == 22);
  for (const Deviation& d : ones.improvements) CHECK(d.gain > 0);

  const NashResult mid = is_nash(inst, prof({1, 2, 1}), 12);
  CHECK(!mid.is_nash);
  CHECK(has_improvement(mid, 3, 2, 18));
  CHECK(has_improvement(mid, 3, 3, 36));
  CHECK(mid.improvements.size() == 11);
}

TEST_CASE("round-robin dynamics land on a verified equilibrium") {
  const Instance inst = testutil::bundled_instance();
  const BestResponseTrace tr =
      best_response_iteration(inst, default_initial_profile(inst), 10);
  REQUIRE(tr.converged);
  REQUIRE(tr.iterations.size() == 3);
  CHECK(levels_of(tr.iterations[0]) == std::vector<int>{5, 10, 4});
  CHECK(levels_of(tr.iterations[1]) == std::vector<int>{1, 2, 3});
  CHECK(levels_of(tr.iterations[2]) == std::vector<int>{1, 2, 3});
  CHECK(is_nash(inst, tr.iterations.back(), 12).is_nash);
}

TEST_CASE("simultaneous dynamics overshoot once and still settle") {
  const Instance inst = testutil::bundled_instance();
  const BestResponseTrace tr = best_response_iteration(
      inst, default_initial_profile(inst), 10, UpdateSchedule::simultaneous);
  REQUIRE(tr.converged);
  REQUIRE(tr.iterations.size() == 4);
  CHECK(levels_of(tr.iterations[1]) == std::vector<int>{1, 2, 5});
  CHECK(levels_of(tr.iterations[2]) == std::vector<int>{1, 2, 3});
  CHECK(levels_of(tr.iterations[3]) == std::vector<int>{1, 2, 3});

  // round one must equal per-player best responses against the start
  const Eigen::VectorXi grid = default_grid(inst);
  const ParticipationProfile start = default_initial_profile(inst);
  for (int player = 1; player <= 3; ++player) {
    const BestResponse br = best_response(inst, start, player, grid[player - 1]);
    CHECK(br.level ==
          static_cast<int>(std::llround(tr.iterations[1].levels[player - 1])));
  }
}

TEST_CASE("the round budget cuts the trace without converging") {
  const Instance inst = testutil::bundled_instance();
  const BestResponseTrace tr =
      best_response_iteration(inst, default_initial_profile(inst), 1);
  CHECK(!tr.converged);
  CHECK(tr.iterations.size() == 2);

  CHECK_THROWS_AS(
      best_response_iteration(inst, default_initial_profile(inst), 0),
      DimensionError);
  Eigen::VectorXi bad(2);
  bad << 3, 3;
  CHECK_THROWS_AS(best_response_iteration(inst, default_initial_profile(inst),
                                          5, UpdateSchedule::sequential, bad),
                  DimensionError);
  CHECK_THROWS_AS(
      best_response_iteration(inst, prof({-1, 2, 3}), 5),
      ValidationError);
}

TEST_CASE("equilibrium enumeration on the two-player pipe game") {
  const Instance inst = two_node_instance();
  const Eigen::VectorXi grid = Eigen::VectorXi::Constant(2, 6);
  const std::vector<ParticipationProfile> eqs =
      enumerate_equilibria(inst, grid, 49);

  REQUIRE(eqs.size() == 28);
  std::vector<std::vector<int>> got;
  for (const auto& e : eqs) got.push_back(levels_of(e));
  CHECK(std::is_sorted(got.begin(), got.end()));  // lexicographic order

  auto contains = [&](std::vector<int> v) {
    return std::find(got.begin(), got.end(), v) != got.end();
  };
  CHECK(contains({0, 0}));  // nobody participates: the classic trap
  CHECK(contains({1, 1}));
  CHECK(contains({2, 3}));
  CHECK(contains({6, 6}));
  CHECK(!contains({1, 0}));
  CHECK(!contains({0, 1}));
  CHECK(!contains({2, 1}));
  CHECK(!contains({3, 2}));

  // every reported profile survives the standalone deviation check
  for (const auto& e : eqs) CHECK(is_nash(inst, e, 6).is_nash);
  CHECK(!is_nash(inst, prof({2, 1}), 6).is_nash);

  const Eigen::VectorXd best = evaluate_profile(inst, prof({3, 3})).payoffs;
  CHECK(std::abs(best[0] - 20) <= 1e-9);
  CHECK(std::abs(best[1] - 48) <= 1e-9);
  const Eigen::VectorXd trap = evaluate_profile(inst, prof({0, 0})).payoffs;
  CHECK(std::abs(trap[0] - 10) <= 1e-9);
  CHECK(std::abs(trap[1] - 12) <= 1e-9);
}

TEST_CASE("enumeration refuses oversized grids up front") {
  const Instance inst = two_node_instance();
  const Eigen::VectorXi grid = Eigen::VectorXi::Constant(2, 6);
  CHECK_THROWS_AS(enumerate_equilibria(inst, grid, 48), BudgetExceededError);

  Eigen::VectorXi negative(2);
  negative << 3, -1;
  CHECK_THROWS_AS(enumerate_equilibria(inst, negative, 100), DimensionError);
  Eigen::VectorXi short_grid(1);
  short_grid << 3;
  CHECK_THROWS_AS(enumerate_equilibria(inst, short_grid, 100), DimensionError);
}

TEST_CASE("profile validation guards every game entry point") {
  const Instance inst = testutil::bundled_instance();
  CHECK_THROWS_AS(evaluate_profile(inst, prof({1, 2})), ValidationError);
  CHECK_THROWS_AS(evaluate_profile(inst, prof({1, -2, 3})), ValidationError);
  CHECK_THROWS_AS(is_nash(inst, prof({1, 2}), 5), ValidationError);
}
