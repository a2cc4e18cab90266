#include "tcrrgu/cli.hpp"

#include <cmath>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "tcrrgu/game.hpp"
#include "tcrrgu/json_io.hpp"
#include "tcrrgu/report.hpp"
#include "tcrrgu/risk.hpp"

namespace tcrrgu::cli {

namespace {

OutputFormat parse_format(const std::string& name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  return OutputFormat::table;
}

ParticipationProfile parse_profile(const std::string& text) {
  std::vector<double> levels;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw CLI::ValidationError("--profile",
                                 "'" + item + "' is not a number");
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used])))
      ++used;
    if (used != item.size())
      throw CLI::ValidationError("--profile", "'" + item + "' is not a number");
    levels.push_back(v);
  }
  if (levels.empty())
    throw CLI::ValidationError("--profile", "expected comma-separated levels");
  return ParticipationProfile(levels);
}

std::string profile_text(const ParticipationProfile& profile) {
  std::ostringstream os;
  for (Eigen::Index i = 0; i < profile.levels.size(); ++i) {
    if (i) os << ",";
    const double v = profile.levels[i];
    if (v == std::floor(v) && std::abs(v) < 1e15)
      os << static_cast<long long>(v);
    else
      os << format_fixed(v);
  }
  return os.str();
}

PayoffBasis parse_basis(const std::string& name) {
  return name == "uc_plus_uf" ? PayoffBasis::uc_plus_uf : PayoffBasis::uc;
}

const Scenario& scenario_by_id(const Instance& instance, int id) {
  if (id < 1 || id > static_cast<int>(instance.scenarios.size()))
    throw Error("scenario " + std::to_string(id) + " does not exist (instance has " +
                std::to_string(instance.scenarios.size()) + ")");
  return instance.scenarios[static_cast<size_t>(id - 1)];
}

void check_profile_or_throw(const Instance& instance,
                            const ParticipationProfile& profile) {
  auto violations = validate_profile(instance, profile);
  if (!violations.empty()) throw ValidationError(std::move(violations));
}

// ---- subcommand reports ---------------------------------------------------

Report report_validate(const Instance& instance, const std::string& path,
                       const std::vector<Violation>& violations) {
  Report report;
  report.command = "validate";
  report.summary = {
      {"instance", path},
      {"valid", violations.empty() ? "yes" : "no"},
      {"nodes", static_cast<long>(instance.network.node_count())},
      {"edges", static_cast<long>(instance.network.edge_count())},
      {"scenarios", static_cast<long>(instance.scenarios.size())},
      {"alpha", instance.alpha},
  };

  if (!violations.empty()) {
    ReportTable bad{"violations", {{"kind"}, {"path"}, {"message"}}, {}};
    for (const Violation& v : violations)
      bad.rows.push_back({std::string(to_string(v.kind)), v.path, v.message});
    report.tables.push_back(std::move(bad));
    return report;
  }

  ReportTable nodes{"nodes", {{"node"}, {"name"}, {"steps"}, {"total_demand"}}, {}};
  for (const Node& node : instance.network.nodes)
    nodes.rows.push_back({node.index, node.name,
                          static_cast<long>(node.demand.step_count()),
                          node.demand.total_quantity()});
  report.tables.push_back(std::move(nodes));

  ReportTable edges{"edges", {{"edge"}, {"from"}, {"to"}, {"cap_neg"}, {"cap_pos"}}, {}};
  for (const Edge& e : instance.network.edges)
    edges.rows.push_back({e.index, e.from, e.to, e.cap_neg, e.cap_pos});
  report.tables.push_back(std::move(edges));

  // demand curves as plain points, ready for external plotting
  ReportTable curves{"demand_curves", {{"node"}, {"step"}, {"price"}, {"quantity"}}, {}};
  for (const Node& node : instance.network.nodes)
    for (Eigen::Index w = 0; w < node.demand.step_count(); ++w)
      curves.rows.push_back({node.index, static_cast<long>(w + 1),
                             node.demand.prices()[w],
                             node.demand.quantities()[w]});
  report.tables.push_back(std::move(curves));
  return report;
}

Report report_solve(const Instance& instance, const Scenario& scenario,
                    const ParticipationProfile& profile) {
  const RedistributionOutcome outcome = redistribute(instance, scenario, profile);

  Report report;
  report.command = "solve";
  report.summary = {
      {"scenario", static_cast<long>(scenario.index)},
      {"profile", profile_text(profile)},
      {"total_utility", outcome.total_utility},
      {"rcp", outcome.rcp ? Cell(*outcome.rcp) : Cell()},
  };

  ReportTable flows{"flows", {{"edge"}, {"from"}, {"to"}, {"flow"}}, {}};
  for (int j = 0; j < instance.network.edge_count(); ++j) {
    const Edge& e = instance.network.edges[j];
    flows.rows.push_back({e.index, e.from, e.to, outcome.flows[j]});
  }
  report.tables.push_back(std::move(flows));

  ReportTable players{"players",
                      {{"player"}, {"uc"}, {"uc_ref", true}, {"mu"}, {"uf"},
                       {"net_received"}, {"spill"}},
                      {}};
  for (int i = 0; i < instance.network.node_count(); ++i)
    players.rows.push_back({i + 1, outcome.uc[i], outcome.uc_reference[i],
                            outcome.mu[i], outcome.uf[i],
                            outcome.net_received[i], outcome.spill[i]});
  report.tables.push_back(std::move(players));

  ReportTable cons{"consumptions", {{"player"}, {"step"}, {"price"}, {"consumed"}}, {}};
  for (int i = 0; i < instance.network.node_count(); ++i) {
    const auto& curve = instance.network.nodes[i].demand;
    for (Eigen::Index w = 0; w < curve.step_count(); ++w)
      cons.rows.push_back({i + 1, static_cast<long>(w + 1),
                           curve.prices()[w], outcome.consumptions[i][w]});
  }
  report.tables.push_back(std::move(cons));
  return report;
}

Report report_evaluate(const Instance& instance,
                       const ParticipationProfile& profile,
                       const GameOptions& options) {
  const ProfileEvaluation eval = evaluate_profile(instance, profile, options);
  const int n = instance.network.node_count();
  const ParticipationProfile zero{Eigen::VectorXd::Zero(n)};
  const ProfileEvaluation baseline = evaluate_profile(instance, zero, options);

  Report report;
  report.command = "evaluate";
  report.summary = {
      {"profile", profile_text(profile)},
      {"basis", options.basis == PayoffBasis::uc_plus_uf ? "uc_plus_uf" : "uc"},
      {"alpha", options.alpha.value_or(instance.alpha)},
  };
  ReportTable payoffs{"payoffs", {{"player"}, {"es"}, {"es_baseline"}, {"gain"}}, {}};
  for (int i = 0; i < n; ++i)
    payoffs.rows.push_back({i + 1, eval.payoffs[i], baseline.payoffs[i],
                            eval.payoffs[i] - baseline.payoffs[i]});
  report.tables.push_back(std::move(payoffs));
  return report;
}

Report report_best_response(const Instance& instance,
                            const ParticipationProfile& initial,
                            std::optional<int> max_level, bool simultaneous,
                            const GameOptions& options) {
  const int n = instance.network.node_count();
  Eigen::VectorXi grid = default_grid(instance);
  if (max_level) grid.setConstant(*max_level);
  constexpr int kMaxRounds = 50;

  const BestResponseTrace trace = best_response_iteration(
      instance, initial, kMaxRounds,
      simultaneous ? UpdateSchedule::simultaneous : UpdateSchedule::sequential,
      grid, options);

  Report report;
  report.command = "best-response";
  report.summary = {
      {"initial", profile_text(initial)},
      {"schedule", simultaneous ? "simultaneous" : "sequential"},
      {"basis", options.basis == PayoffBasis::uc_plus_uf ? "uc_plus_uf" : "uc"},
      {"alpha", options.alpha.value_or(instance.alpha)},
      {"rounds", static_cast<long>(trace.iterations.size() - 1)},
      {"converged", trace.converged ? "yes" : "no"},
  };

  ReportTable rounds{"trace", {{"round"}}, {}};
  for (int i = 0; i < n; ++i) rounds.columns.push_back({"q" + std::to_string(i + 1)});
  for (size_t r = 0; r < trace.iterations.size(); ++r) {
    std::vector<Cell> row{static_cast<long>(r)};
    for (int i = 0; i < n; ++i)
      row.push_back(trace.iterations[r].levels[i]);
    rounds.rows.push_back(std::move(row));
  }
  report.tables.push_back(std::move(rounds));

  if (trace.converged) {
    const ParticipationProfile& fixed = trace.iterations.back();
    const ProfileEvaluation eval = evaluate_profile(instance, fixed, options);
    ReportTable payoffs{"fixed_point", {{"player"}, {"level"}, {"es"}}, {}};
    for (int i = 0; i < n; ++i)
      payoffs.rows.push_back({i + 1, fixed.levels[i], eval.payoffs[i]});
    report.tables.push_back(std::move(payoffs));
  }
  return report;
}

Report report_equilibria(const Instance& instance, std::optional<int> max_level,
                         long budget, const GameOptions& options) {
  const int n = instance.network.node_count();
  Eigen::VectorXi grid = default_grid(instance);
  if (max_level) grid.setConstant(*max_level);

  const std::vector<ParticipationProfile> found =
      enumerate_equilibria(instance, grid, budget, options);

  std::ostringstream grid_text;
  for (int i = 0; i < n; ++i) grid_text << (i ? "," : "") << grid[i];

  Report report;
  report.command = "equilibria";
  report.summary = {
      {"basis", options.basis == PayoffBasis::uc_plus_uf ? "uc_plus_uf" : "uc"},
      {"alpha", options.alpha.value_or(instance.alpha)},
      {"max_level", grid_text.str()},
      {"budget", budget},
      {"count", static_cast<long>(found.size())},
  };

  ReportTable table{"equilibria", {}, {}};
  for (int i = 0; i < n; ++i) table.columns.push_back({"q" + std::to_string(i + 1)});
  for (int i = 0; i < n; ++i) table.columns.push_back({"es" + std::to_string(i + 1)});
  for (const ParticipationProfile& profile : found) {
    const ProfileEvaluation eval = evaluate_profile(instance, profile, options);
    std::vector<Cell> row;
    for (int i = 0; i < n; ++i) row.push_back(profile.levels[i]);
    for (int i = 0; i < n; ++i) row.push_back(eval.payoffs[i]);
    table.rows.push_back(std::move(row));
  }
  report.tables.push_back(std::move(table));
  return report;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"transaction-constrained resource-redistribution games under uncertainty"};
  app.name("tcrrgu");
  app.require_subcommand(1);

  std::string instance_path, format_name = "table", basis_name = "uc";
  std::string profile_text_arg;
  int scenario_id = 0;
  std::optional<int> max_level;
  std::optional<double> alpha;
  long budget = 20000;
  bool simultaneous = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--instance", instance_path, "instance JSON file")
        ->required();
    cmd->add_option("--format", format_name, "output format")
        ->check(CLI::IsMember({"table", "csv", "json"}));
  };
  auto add_game_flags = [&](CLI::App* cmd) {
    cmd->add_option("--basis", basis_name, "payoff basis")
        ->check(CLI::IsMember({"uc", "uc_plus_uf"}));
    cmd->add_option("--alpha", alpha, "tail level override in (0, 1]");
  };

  CLI::App* validate_cmd = app.add_subcommand("validate", "check an instance file");
  add_common(validate_cmd);

  CLI::App* solve_cmd = app.add_subcommand("solve", "clear one scenario");
  add_common(solve_cmd);
  solve_cmd->add_option("--scenario", scenario_id, "scenario id (1-based)")->required();
  solve_cmd->add_option("--profile", profile_text_arg, "participation levels a,b,c")
      ->required();

  CLI::App* evaluate_cmd =
      app.add_subcommand("evaluate", "expected-shortfall payoffs of a profile");
  add_common(evaluate_cmd);
  evaluate_cmd->add_option("--profile", profile_text_arg, "participation levels a,b,c")
      ->required();
  add_game_flags(evaluate_cmd);

  CLI::App* br_cmd =
      app.add_subcommand("best-response", "round-robin best-response dynamics");
  add_common(br_cmd);
  br_cmd->add_option("--profile", profile_text_arg,
                     "starting levels (default: each player's final-step quantity)");
  br_cmd->add_option("--max-level", max_level, "uniform grid bound per player");
  br_cmd->add_flag("--simultaneous", simultaneous,
                   "all players revise against the previous round");
  add_game_flags(br_cmd);

  CLI::App* eq_cmd =
      app.add_subcommand("equilibria", "enumerate grid equilibria");
  add_common(eq_cmd);
  eq_cmd->add_option("--max-level", max_level, "uniform grid bound per player");
  eq_cmd->add_option("--budget", budget, "largest grid size to enumerate");
  add_game_flags(eq_cmd);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return exit_ok;
    }
    err << "error: " << e.what() << "\n";
    return exit_usage;
  }

  try {
    const OutputFormat format = parse_format(format_name);
    GameOptions options{parse_basis(basis_name), alpha};

    if (validate_cmd->parsed()) {
      Instance instance = parse_instance([&] {
        std::ifstream in(instance_path, std::ios::binary);
        if (!in) throw IoError("cannot open instance file: " + instance_path);
        std::ostringstream buffer;
        buffer << in.rdbuf();
        return buffer.str();
      }());
      const std::vector<Violation> violations = validate(instance);
      out << render(report_validate(instance, instance_path, violations), format);
      return violations.empty() ? exit_ok : exit_validation;
    }

    const Instance instance = load_instance(instance_path);

    if (solve_cmd->parsed()) {
      const ParticipationProfile profile = parse_profile(profile_text_arg);
      check_profile_or_throw(instance, profile);
      const Scenario& scenario = scenario_by_id(instance, scenario_id);
      out << render(report_solve(instance, scenario, profile), format);
      return exit_ok;
    }
    if (evaluate_cmd->parsed()) {
      const ParticipationProfile profile = parse_profile(profile_text_arg);
      out << render(report_evaluate(instance, profile, options), format);
      return exit_ok;
    }
    if (br_cmd->parsed()) {
      const ParticipationProfile initial =
          profile_text_arg.empty() ? default_initial_profile(instance)
                                   : parse_profile(profile_text_arg);
      out << render(report_best_response(instance, initial, max_level,
                                         simultaneous, options),
                    format);
      return exit_ok;
    }
    if (eq_cmd->parsed()) {
      out << render(report_equilibria(instance, max_level, budget, options), format);
      return exit_ok;
    }
    return exit_usage;
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return exit_validation;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return exit_parse;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return exit_io;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_domain;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return exit_internal;
  }
}

}  // namespace tcrrgu::cli
