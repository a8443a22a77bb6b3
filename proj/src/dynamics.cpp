#include "choiceevo/dynamics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <string>
#include <thread>

namespace choiceevo {

PopulationState::PopulationState(Eigen::VectorXd x) : x_(std::move(x)) {
  if (x_.size() < 1) throw std::invalid_argument("PopulationState: empty");
  if (!x_.allFinite() || (x_.array() < 0.0).any())
    throw std::invalid_argument("PopulationState: entries must be finite and non-negative");
  if (std::abs(x_.sum() - 1.0) > kSimplexTolerance)
    throw std::invalid_argument("PopulationState: entries must sum to 1");
}

PopulationState PopulationState::from_weights(Eigen::VectorXd weights) {
  if (!weights.allFinite() || (weights.array() < 0.0).any() || !(weights.sum() > 0.0))
    throw std::invalid_argument("PopulationState: weights must be non-negative with positive sum");
  const double total = weights.sum();
  return PopulationState(weights / total);
}

PopulationState PopulationState::vertex(int dim, int i) {
  if (dim < 1 || i < 0 || i >= dim) throw std::out_of_range("PopulationState: vertex index out of range");
  return PopulationState(Eigen::VectorXd::Unit(dim, i));
}

PopulationState PopulationState::uniform(int dim) {
  if (dim < 1) throw std::invalid_argument("PopulationState: dimension must be >= 1");
  return from_weights(Eigen::VectorXd::Ones(dim));
}

MutationKernel::MutationKernel(Eigen::MatrixXd q) : q_(std::move(q)) {
  if (q_.rows() != q_.cols() || q_.rows() < 1)
    throw std::invalid_argument("MutationKernel: matrix must be square and non-empty");
  if (!q_.allFinite() || (q_.array() < 0.0).any())
    throw std::invalid_argument("MutationKernel: entries must be finite and non-negative");
  for (Eigen::Index r = 0; r < q_.rows(); ++r)
    if (std::abs(q_.row(r).sum() - 1.0) > kSimplexTolerance)
      throw std::invalid_argument("MutationKernel: row " + std::to_string(r) + " does not sum to 1");
}

MutationKernel MutationKernel::identity(int dim) {
  return MutationKernel(Eigen::MatrixXd::Identity(dim, dim));
}

MutationKernel mutation_kernel(std::span<const PlayerType> types, double eps, MutationScheme scheme) {
  if (!(eps >= 0.0 && eps <= 1.0)) throw std::invalid_argument("mutation rate must lie in [0, 1]");
  if (types.size() != 8) throw std::invalid_argument("mutation kernel needs the 8 player types");
  for (const auto& t : all_player_types())
    if (std::find(types.begin(), types.end(), t) == types.end())
      throw std::invalid_argument("mutation kernel lacks player type '" + t.label() + "'");

  const auto n = static_cast<Eigen::Index>(types.size());
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);
  if (scheme == MutationScheme::PerTarget) {
    const double stay = 1.0 - 4.0 * eps - 3.0 * eps * eps;
    if (stay < 0.0)
      throw std::invalid_argument("per-target mutation needs 4 eps + 3 eps^2 <= 1");
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index i = 0; i < n; ++i) {
        const bool same_pref = types[j].pref == types[i].pref;
        const bool same_epi = types[j].epistemic == types[i].epistemic;
        if (same_pref && same_epi) q(j, i) = stay;
        else if (same_pref || same_epi) q(j, i) = eps;
        else q(j, i) = eps * eps;
      }
  } else {
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index i = 0; i < n; ++i) {
        const double pref = types[j].pref == types[i].pref ? 1.0 - eps : eps / 3.0;
        const double epi = types[j].epistemic == types[i].epistemic ? 1.0 - eps : eps;
        q(j, i) = pref * epi;
      }
  }
  return MutationKernel(std::move(q));
}

namespace {

// Selection part x_i f_i / fbar, not yet renormalized.
Eigen::VectorXd selection(const MetaGame& m, const PopulationState& x) {
  if (m.size() != x.size())
    throw std::invalid_argument("population dimension " + std::to_string(x.size()) +
                                " does not match meta-game size " + std::to_string(m.size()));
  const Eigen::VectorXd f = m.fitness() * x.values();
  const double mean_fitness = x.values().dot(f);
  if (!(mean_fitness > 0.0)) throw NonPositiveFitness("mean fitness is not positive");
  Eigen::VectorXd out = x.values().cwiseProduct(f) / mean_fitness;
  if ((out.array() < 0.0).any()) throw NonPositiveFitness("negative fitness for a present type");
  return out;
}

PopulationState renormalized(const Eigen::VectorXd& v) {
  return PopulationState(v / v.sum());
}

}  // namespace

PopulationState replicator_step(const MetaGame& m, const PopulationState& x) {
  return renormalized(selection(m, x));
}

PopulationState replicator_mutator_step(const MetaGame& m, const MutationKernel& k,
                                        const PopulationState& x) {
  if (k.size() != m.size())
    throw std::invalid_argument("mutation kernel size does not match meta-game size");
  return renormalized(k.matrix().transpose() * selection(m, x));
}

Trajectory run_dynamics(const MetaGame& m, const std::optional<MutationKernel>& k,
                        const PopulationState& x0, const DynamicsOptions& options) {
  if (!(options.tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (options.max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
  if (options.record_every < 0) throw std::invalid_argument("record_every must be >= 0");

  Trajectory traj;
  traj.states.push_back({0, x0});
  PopulationState x = x0;
  for (std::int64_t it = 1; it <= options.max_iter; ++it) {
    PopulationState next = k ? replicator_mutator_step(m, *k, x) : replicator_step(m, x);
    const double change = next.l1_distance(x);
    x = std::move(next);
    traj.iterations = it;
    if (change < options.tol) {
      traj.converged = true;
      break;
    }
    if (options.record_every > 0 && it % options.record_every == 0 && it != options.max_iter)
      traj.states.push_back({it, x});
  }
  if (traj.states.back().iteration != traj.iterations) traj.states.push_back({traj.iterations, x});
  return traj;
}

std::vector<Trajectory> run_dynamics_batch(const MetaGame& m, const std::optional<MutationKernel>& k,
                                           std::span<const PopulationState> starts,
                                           const DynamicsOptions& options, int workers) {
  if (workers < 1) throw std::invalid_argument("worker count must be >= 1");
  std::vector<std::optional<Trajectory>> results(starts.size());
  std::vector<std::exception_ptr> errors(starts.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < starts.size(); i = next++) {
      try {
        results[i] = run_dynamics(m, k, starts[i], options);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w) threads.emplace_back(work);
    for (auto& t : threads) t.join();
  }
  std::vector<Trajectory> out;
  out.reserve(starts.size());
  for (std::size_t i = 0; i < starts.size(); ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    out.push_back(std::move(*results[i]));
  }
  return out;
}

std::vector<PopulationState> sample_initial_states(int count, int dim, RandomStream& rng) {
  if (count < 1) throw std::invalid_argument("count must be >= 1");
  if (dim < 2) throw std::invalid_argument("dimension must be >= 2");
  std::vector<PopulationState> states;
  states.reserve(static_cast<std::size_t>(count));
  for (int s = 0; s < count; ++s) {
    Eigen::VectorXd w(dim);
    for (int i = 0; i < dim; ++i) w(i) = rng.exponential();
    states.push_back(PopulationState::from_weights(std::move(w)));
  }
  return states;
}

}  // namespace choiceevo
