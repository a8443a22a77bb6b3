#ifndef CHOICEEVO_DYNAMICS_HPP
#define CHOICEEVO_DYNAMICS_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "choiceevo/choice.hpp"
#include "choiceevo/metagame.hpp"
#include "choiceevo/random.hpp"

namespace choiceevo {

inline constexpr double kSimplexTolerance = 1e-12;

/// Raised when a step would divide by a non-positive mean fitness.
class NonPositiveFitness : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Frequency vector on the simplex.
class PopulationState {
 public:
  /// Requires non-negative entries summing to 1 within kSimplexTolerance.
  explicit PopulationState(Eigen::VectorXd x);

  /// Normalizes arbitrary non-negative weights with a positive sum.
  static PopulationState from_weights(Eigen::VectorXd weights);
  static PopulationState vertex(int dim, int i);
  static PopulationState uniform(int dim);

  int size() const { return static_cast<int>(x_.size()); }
  const Eigen::VectorXd& values() const { return x_; }
  double operator[](int i) const { return x_(i); }

  double l1_distance(const PopulationState& other) const { return (x_ - other.x_).lpNorm<1>(); }

 private:
  Eigen::VectorXd x_;
};

/// How a mutation rate becomes transition probabilities between the 8 player
/// types. A type differs from another in its preference, its epistemic type,
/// or both.
enum class MutationScheme {
  /// Each specific type differing in one component is reached with
  /// probability eps, each type differing in both with eps^2; the remainder
  /// stays. Defined while 4 eps + 3 eps^2 <= 1.
  PerTarget,
  /// Preference and epistemic type mutate independently with probability eps
  /// each; a mutated preference is uniform over the other three.
  Independent,
};

/// Row-stochastic matrix: (j, i) is the probability that an offspring of type
/// j is of type i.
class MutationKernel {
 public:
  explicit MutationKernel(Eigen::MatrixXd q);
  static MutationKernel identity(int dim);

  int size() const { return static_cast<int>(q_.rows()); }
  const Eigen::MatrixXd& matrix() const { return q_; }
  double operator()(int from, int to) const { return q_(from, to); }

 private:
  Eigen::MatrixXd q_;
};

/// `types` must be the 8 player types, in any order; rows and columns follow it.
MutationKernel mutation_kernel(std::span<const PlayerType> types, double eps,
                               MutationScheme scheme = MutationScheme::PerTarget);

/// x'_i = x_i f_i / fbar with f = m x and fbar = x . f.
PopulationState replicator_step(const MetaGame& m, const PopulationState& x);

/// Selection followed by mutation: x'_i = sum_j k(j, i) x_j f_j / fbar.
PopulationState replicator_mutator_step(const MetaGame& m, const MutationKernel& k,
                                        const PopulationState& x);

struct DynamicsOptions {
  double tol = 1e-12;
  std::int64_t max_iter = 1'000'000;
  /// Record every k-th state. 0 keeps only the initial and final state.
  std::int64_t record_every = 0;
};

struct RecordedState {
  std::int64_t iteration = 0;
  PopulationState state;
};

struct Trajectory {
  std::vector<RecordedState> states;  // starts with the initial state, ends with the final one
  bool converged = false;
  std::int64_t iterations = 0;

  const PopulationState& final_state() const { return states.back().state; }
};

/// Iterates the replicator map (or replicator-mutator map when a kernel is
/// given) until the L1 change of one step drops below tol or max_iter steps
/// have run.
Trajectory run_dynamics(const MetaGame& m, const std::optional<MutationKernel>& k,
                        const PopulationState& x0, const DynamicsOptions& options = {});

/// Runs one trajectory per initial state; results are in input order
/// regardless of the worker count.
std::vector<Trajectory> run_dynamics_batch(const MetaGame& m, const std::optional<MutationKernel>& k,
                                           std::span<const PopulationState> starts,
                                           const DynamicsOptions& options = {}, int workers = 1);

/// Uniform draws from the simplex (normalized unit exponentials).
std::vector<PopulationState> sample_initial_states(int count, int dim, RandomStream& rng);

}  // namespace choiceevo

#endif  // CHOICEEVO_DYNAMICS_HPP
