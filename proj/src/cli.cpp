#include "choiceevo/cli.hpp"

#include <charconv>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "choiceevo/dynamics.hpp"
#include "choiceevo/io.hpp"
#include "choiceevo/metagame.hpp"
#include "choiceevo/stability.hpp"

namespace choiceevo {

namespace {

struct ExperimentConfig {
  std::string command;
  int max_payoff = 10;
  std::int64_t sample_count = 50000;
  std::uint64_t seed = 0;
  int workers = 1;
  std::string mode = "exact";
  std::string format = "json";
  std::string output;
  std::string input;

  std::optional<double> eta;
  std::optional<double> p;
  std::optional<double> q;
  double grid_step = 0.001;

  double eps = 0.001;
  std::string kernel = "per-target";
  std::string init = "random";
  int starts = 1;
  double tol = 1e-12;
  std::int64_t max_iter = 1'000'000;
  std::int64_t record_every = 0;
};

// Thrown for flag combinations CLI11 cannot express; reported as usage errors.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void add_source_options(CLI::App& cmd, ExperimentConfig& cfg, bool accepts_input) {
  cmd.add_option("--mode", cfg.mode, "Meta-game builder")->check(CLI::IsMember({"exact", "mc"}));
  cmd.add_option("--N", cfg.max_payoff, "Largest payoff value")->check(CLI::NonNegativeNumber);
  cmd.add_option("--samples", cfg.sample_count, "Games sampled in mc mode")->check(CLI::PositiveNumber);
  cmd.add_option("--seed", cfg.seed, "Seed for every random stream");
  cmd.add_option("--workers", cfg.workers, "Worker threads")->check(CLI::PositiveNumber);
  if (accepts_input)
    cmd.add_option("--input", cfg.input, "Read the meta-game from a JSON or CSV file instead of building it");
}

void add_output_options(CLI::App& cmd, ExperimentConfig& cfg) {
  cmd.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  cmd.add_option("--output", cfg.output, "Output path (default: standard output)");
}

nlohmann::json run_info(const ExperimentConfig& cfg) {
  nlohmann::json info{{"command", cfg.command}, {"workers", cfg.workers}};
  if (!cfg.input.empty()) {
    info["input"] = cfg.input;
  } else {
    info["mode"] = cfg.mode;
    info["N"] = cfg.max_payoff;
    if (cfg.mode == "mc") {
      info["samples"] = cfg.sample_count;
      info["seed"] = cfg.seed;
    }
  }
  return info;
}

MetaGame full_metagame(const ExperimentConfig& cfg) {
  if (!cfg.input.empty()) return read_metagame_file(cfg.input);
  const auto types = all_player_types();
  if (cfg.mode == "exact") return build_metagame_exact(types, cfg.max_payoff, cfg.workers);
  GameClassConfig game_class{cfg.max_payoff, cfg.sample_count, cfg.seed};
  return build_metagame_mc(types, game_class, cfg.workers);
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

std::string metagame_text(const MetaGame& m, const ExperimentConfig& cfg) {
  if (cfg.format == "csv") {
    std::ostringstream os;
    write_metagame_csv(os, m);
    return os.str();
  }
  nlohmann::json j = m;
  j["run"] = run_info(cfg);
  return dump(j);
}

std::string cmd_metagame(const ExperimentConfig& cfg) {
  return metagame_text(full_metagame(cfg), cfg);
}

std::string cmd_derive(const ExperimentConfig& cfg) {
  if (cfg.p.has_value() == cfg.q.has_value()) throw UsageError("derive needs exactly one of --p or --q");
  const MetaGame full = full_metagame(cfg);
  const MetaGame derived = cfg.p ? uncorrelated_pref_metagame(full, *cfg.p)
                                 : correlated_pref_metagame(full, *cfg.q);
  if (cfg.format == "csv") return metagame_text(derived, cfg);
  nlohmann::json j = derived;
  j["run"] = run_info(cfg);
  if (cfg.p) j["run"]["p"] = *cfg.p;
  if (cfg.q) j["run"]["q"] = *cfg.q;
  return dump(j);
}

std::string cmd_stability(const ExperimentConfig& cfg) {
  if (cfg.input.empty() && cfg.mode == "mc" && !cfg.eta)
    throw UsageError("stability on a Monte-Carlo meta-game needs an explicit --eta");
  const double eta = cfg.eta.value_or(kExactTolerance);
  const MetaGame m = full_metagame(cfg);

  std::vector<StabilityReport> reports;
  for (int i = 0; i < m.size(); ++i) reports.push_back(is_ess(m, i, eta));

  if (cfg.format == "csv") {
    std::ostringstream os;
    os << "type,is_ess,is_neutrally_stable,violations\n";
    for (const auto& r : reports) {
      os << m.labels()[r.index] << ',' << r.is_ess << ',' << r.is_neutrally_stable << ',';
      for (std::size_t v = 0; v < r.violating_invaders.size(); ++v) {
        const auto& inv = r.violating_invaders[v];
        os << (v ? ";" : "") << m.labels()[inv.invader] << ':' << condition_name(inv.condition);
      }
      os << '\n';
    }
    return os.str();
  }
  nlohmann::json ess = nlohmann::json::array();
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : reports) {
    nlohmann::json row = r;
    row["label"] = m.labels()[r.index];
    for (auto& inv : row["violating_invaders"]) inv["invader_label"] = m.labels()[inv["invader"].get<int>()];
    rows.push_back(std::move(row));
    if (r.is_ess) ess.push_back(m.labels()[r.index]);
  }
  nlohmann::json j{{"labels", m.labels()}, {"eta", eta}, {"ess", ess}, {"reports", rows}};
  j["run"] = run_info(cfg);
  return dump(j);
}

std::string cmd_threshold(const ExperimentConfig& cfg) {
  const MetaGame full = full_metagame(cfg);
  const double eta = cfg.eta.value_or(kExactTolerance);
  const RegretThreshold t = find_regret_threshold(full, cfg.grid_step, eta);
  if (cfg.format == "csv") {
    std::ostringstream os;
    os << "threshold,never,grid_step\n" << format_fixed6(t.value) << ',' << t.never << ','
       << format_fixed6(cfg.grid_step) << '\n';
    return os.str();
  }
  nlohmann::json j{{"threshold", t.value}, {"never", t.never}, {"grid_step", cfg.grid_step}, {"eta", eta}};
  j["run"] = run_info(cfg);
  return dump(j);
}

std::vector<PopulationState> initial_states(const ExperimentConfig& cfg, const MetaGame& m) {
  const int dim = m.size();
  if (cfg.init == "random") {
    RandomStream rng(cfg.seed);
    return sample_initial_states(cfg.starts, dim, rng);
  }
  if (cfg.init.rfind("vertex:", 0) == 0) {
    const std::string which = cfg.init.substr(7);
    int idx = 0;
    const auto [ptr, ec] = std::from_chars(which.data(), which.data() + which.size(), idx);
    if (ec != std::errc() || ptr != which.data() + which.size()) {
      const auto found = m.find(which);
      if (!found) throw UsageError("--init vertex: unknown type '" + which + "'");
      idx = *found;
    }
    if (idx < 0 || idx >= dim) throw UsageError("--init vertex index out of range");
    return {PopulationState::vertex(dim, idx)};
  }
  // Comma-separated weights.
  std::vector<double> weights;
  std::stringstream ss(cfg.init);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      std::size_t used = 0;
      weights.push_back(std::stod(cell, &used));
      if (used != cell.size()) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      throw UsageError("--init expects 'random', 'vertex:<i>' or comma-separated weights");
    }
  }
  if (static_cast<int>(weights.size()) != dim)
    throw UsageError("--init has " + std::to_string(weights.size()) + " weights for " +
                     std::to_string(dim) + " types");
  return {PopulationState::from_weights(Eigen::Map<Eigen::VectorXd>(weights.data(), dim))};
}

std::string cmd_dynamics(const ExperimentConfig& cfg) {
  const MetaGame m = full_metagame(cfg);
  std::optional<MutationKernel> kernel;
  if (cfg.eps > 0.0) {
    std::vector<PlayerType> types;
    for (const auto& l : m.labels()) types.push_back(parse_player_type(l));
    kernel = mutation_kernel(types, cfg.eps,
                             cfg.kernel == "independent" ? MutationScheme::Independent
                                                         : MutationScheme::PerTarget);
  }
  const auto starts = initial_states(cfg, m);
  DynamicsOptions options{cfg.tol, cfg.max_iter, cfg.record_every};
  const auto runs = run_dynamics_batch(m, kernel, starts, options, cfg.workers);

  if (cfg.format == "csv") {
    std::ostringstream os;
    write_trajectory_csv_header(os, m.labels());
    for (std::size_t s = 0; s < runs.size(); ++s) write_trajectory_csv_rows(os, static_cast<int>(s), runs[s]);
    return os.str();
  }
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t s = 0; s < runs.size(); ++s) {
    const auto& t = runs[s];
    const auto& x0 = t.states.front().state.values();
    const auto& xf = t.final_state().values();
    rows.push_back({{"start", s},
                    {"converged", t.converged},
                    {"iterations", t.iterations},
                    {"recorded_states", t.states.size()},
                    {"initial", std::vector<double>(x0.data(), x0.data() + x0.size())},
                    {"final", std::vector<double>(xf.data(), xf.data() + xf.size())}});
  }
  nlohmann::json j{{"labels", m.labels()}, {"runs", rows}};
  j["run"] = run_info(cfg);
  j["run"]["eps"] = cfg.eps;
  j["run"]["kernel"] = kernel ? cfg.kernel : "none";
  j["run"]["tol"] = cfg.tol;
  j["run"]["max_iter"] = cfg.max_iter;
  return dump(j);
}

}  // namespace

int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  ExperimentConfig cfg;
  CLI::App app{"Evolution of choice principles on random symmetric 2x2 games", "choiceevo"};
  app.require_subcommand(1);

  auto* metagame = app.add_subcommand("metagame", "Build the 8-type meta-game");
  add_source_options(*metagame, cfg, false);
  add_output_options(*metagame, cfg);

  auto* stability = app.add_subcommand("stability", "ESS report for every type of a meta-game");
  add_source_options(*stability, cfg, true);
  add_output_options(*stability, cfg);
  stability->add_option("--eta", cfg.eta, "Equality tolerance")->check(CLI::NonNegativeNumber);

  auto* derive = app.add_subcommand("derive", "Preference-type meta-game for correlated (q) or uncorrelated (p) epistemic types");
  add_source_options(*derive, cfg, true);
  add_output_options(*derive, cfg);
  derive->add_option("--p", cfg.p, "Probability a player is a simplex (security) player")->check(CLI::Range(0.0, 1.0));
  derive->add_option("--q", cfg.q, "Probability both players are simplex players")->check(CLI::Range(0.0, 1.0));

  auto* threshold = app.add_subcommand("threshold", "Smallest p above which Regret is the unique ESS");
  add_source_options(*threshold, cfg, true);
  add_output_options(*threshold, cfg);
  threshold->add_option("--grid-step", cfg.grid_step, "Grid spacing on p")->check(CLI::Range(1e-9, 0.01));
  threshold->add_option("--eta", cfg.eta, "Equality tolerance")->check(CLI::NonNegativeNumber);

  auto* dynamics = app.add_subcommand("dynamics", "Replicator(-mutator) dynamics on a meta-game");
  add_source_options(*dynamics, cfg, true);
  add_output_options(*dynamics, cfg);
  dynamics->add_option("--eps", cfg.eps, "Mutation rate (0 runs the plain replicator)")->check(CLI::Range(0.0, 1.0));
  dynamics->add_option("--kernel", cfg.kernel, "Mutation scheme")->check(CLI::IsMember({"per-target", "independent"}));
  dynamics->add_option("--init", cfg.init, "'random', 'vertex:<index|label>' or comma-separated weights");
  dynamics->add_option("--starts", cfg.starts, "Number of random initial states")->check(CLI::PositiveNumber);
  dynamics->add_option("--tol", cfg.tol, "L1 convergence tolerance")->check(CLI::PositiveNumber);
  dynamics->add_option("--max-iter", cfg.max_iter, "Iteration cap")->check(CLI::PositiveNumber);
  dynamics->add_option("--record-every", cfg.record_every, "Record every k-th state (0: first and last only)")
      ->check(CLI::NonNegativeNumber);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  std::string text;
  try {
    cfg.command = app.get_subcommands().front()->get_name();
    if (metagame->parsed()) text = cmd_metagame(cfg);
    else if (stability->parsed()) text = cmd_stability(cfg);
    else if (derive->parsed()) text = cmd_derive(cfg);
    else if (threshold->parsed()) text = cmd_threshold(cfg);
    else text = cmd_dynamics(cfg);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntimeError;
  }

  if (cfg.output.empty() || cfg.output == "-") {
    out << text;
    return kExitOk;
  }
  std::ofstream file(cfg.output, std::ios::binary);
  if (!(file << text)) {
    err << "error: cannot write '" << cfg.output << "'\n";
    return kExitRuntimeError;
  }
  return kExitOk;
}

}  // namespace choiceevo
