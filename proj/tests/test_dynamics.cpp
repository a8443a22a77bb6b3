#include <doctest.h>

#include <algorithm>
#include <random>

#include "choiceevo/dynamics.hpp"

using namespace choiceevo;

namespace {

const std::vector<PlayerType>& types8() {
  static const auto t = all_player_types();
  return t;
}

MetaGame matrix(Eigen::MatrixXd m) {
  std::vector<std::string> labels;
  for (Eigen::Index i = 0; i < m.rows(); ++i) labels.push_back("t" + std::to_string(i));
  return MetaGame(std::move(labels), std::move(m));
}

MetaGame mat2(double a, double b, double c, double d) {
  Eigen::MatrixXd m(2, 2);
  m << a, b, c, d;
  return matrix(m);
}

PopulationState state(std::initializer_list<double> v) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double e : v) x(i++) = e;
  return PopulationState(x);
}

const MetaGame& exact10() {
  static const MetaGame m = build_metagame_exact(types8(), 10);
  return m;
}

}  // namespace

TEST_CASE("mutation kernel, independent scheme") {
  CHECK(mutation_kernel(types8(), 0.0, MutationScheme::Independent).matrix().isIdentity(0.0));

  const auto forced = mutation_kernel(types8(), 1.0, MutationScheme::Independent);
  for (int j = 0; j < 8; ++j)
    for (int i = 0; i < 8; ++i) {
      const bool same_pref = types8()[j].pref == types8()[i].pref;
      const bool same_epi = types8()[j].epistemic == types8()[i].epistemic;
      if (!same_pref && !same_epi) CHECK(forced(j, i) == doctest::Approx(1.0 / 3.0));
      else CHECK(forced(j, i) == 0.0);
    }

  const auto k = mutation_kernel(types8(), 0.001, MutationScheme::Independent);
  CHECK(k(0, 0) == doctest::Approx(0.998001).epsilon(1e-12));
  CHECK(k(0, 5) == doctest::Approx(0.001 * 0.001 / 3).epsilon(1e-12));
  CHECK(k(0, 5) == doctest::Approx(3.33e-7).epsilon(1e-3));
  CHECK(k(0, 1) == doctest::Approx(0.999 * 0.001 / 3).epsilon(1e-12));
  CHECK(k(0, 4) == doctest::Approx(0.999 * 0.001).epsilon(1e-12));
}

TEST_CASE("mutation kernel, per-target scheme") {
  CHECK(mutation_kernel(types8(), 0.0).matrix().isIdentity(0.0));
  const auto k = mutation_kernel(types8(), 0.001);
  CHECK(k(0, 0) == doctest::Approx(1 - 0.004 - 3e-6).epsilon(1e-12));
  CHECK(k(0, 1) == 0.001);   // other preference, same epistemic type
  CHECK(k(0, 4) == 0.001);   // same preference, other epistemic type
  CHECK(k(0, 5) == doctest::Approx(1e-6).epsilon(1e-12));
  CHECK_THROWS_AS(mutation_kernel(types8(), 1.0), std::invalid_argument);
  CHECK_NOTHROW(mutation_kernel(types8(), 0.2));
}

TEST_CASE("mutation kernel rows sum to one") {
  for (double eps : {0.0, 1e-3, 0.1, 1.0}) {
    const auto k = mutation_kernel(types8(), eps, MutationScheme::Independent);
    for (int r = 0; r < 8; ++r) CHECK(std::abs(k.matrix().row(r).sum() - 1.0) < 1e-12);
  }
  for (double eps : {0.0, 1e-3, 0.1}) {
    const auto k = mutation_kernel(types8(), eps);
    for (int r = 0; r < 8; ++r) CHECK(std::abs(k.matrix().row(r).sum() - 1.0) < 1e-12);
  }
}

TEST_CASE("mutation kernel follows the type order it is given") {
  std::vector<PlayerType> reversed(types8().rbegin(), types8().rend());
  const auto a = mutation_kernel(types8(), 0.01);
  const auto b = mutation_kernel(reversed, 0.01);
  for (int j = 0; j < 8; ++j)
    for (int i = 0; i < 8; ++i) CHECK(b(7 - j, 7 - i) == a(j, i));
}

TEST_CASE("mutation kernel errors") {
  CHECK_THROWS(mutation_kernel(types8(), -0.1));
  CHECK_THROWS(mutation_kernel(types8(), 1.1));
  const std::vector<PlayerType> four(types8().begin(), types8().begin() + 4);
  CHECK_THROWS(mutation_kernel(four, 0.01));
  std::vector<PlayerType> dup = types8();
  dup[7] = dup[0];
  CHECK_THROWS(mutation_kernel(dup, 0.01));
  Eigen::MatrixXd bad = Eigen::MatrixXd::Identity(2, 2);
  bad(0, 1) = 0.5;
  CHECK_THROWS(MutationKernel(bad));
}

TEST_CASE("replicator_step") {
  SUBCASE("hand-evaluated step") {
    const auto x = replicator_step(mat2(2, 2, 1, 1), state({0.5, 0.5}));
    CHECK(x[0] == doctest::Approx(2.0 / 3.0));
    CHECK(x[1] == doctest::Approx(1.0 / 3.0));
  }
  SUBCASE("constant matrix leaves the state alone") {
    const auto x0 = state({0.2, 0.3, 0.5});
    const auto x = replicator_step(matrix(Eigen::MatrixXd::Constant(3, 3, 4.0)), x0);
    CHECK(x.l1_distance(x0) < 1e-15);
  }
  SUBCASE("vertices are fixed points") {
    for (int i = 0; i < 8; ++i) {
      const auto v = PopulationState::vertex(8, i);
      CHECK(replicator_step(exact10(), v).l1_distance(v) == 0.0);
    }
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(replicator_step(mat2(0, 0, 0, 0), state({0.5, 0.5})), NonPositiveFitness);
    CHECK_THROWS_AS(replicator_step(mat2(1, 1, 1, 1), PopulationState::uniform(3)), std::invalid_argument);
  }
}

TEST_CASE("replicator_mutator_step") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0.1, 10.0);
  RandomStream rng(4);
  const auto starts = sample_initial_states(50, 8, rng);
  const auto k = mutation_kernel(types8(), 0.05);
  for (const auto& x : starts) {
    CHECK(replicator_mutator_step(exact10(), MutationKernel::identity(8), x).l1_distance(
              replicator_step(exact10(), x)) < 1e-15);
    const MetaGame flat(exact10().labels(), Eigen::MatrixXd::Constant(8, 8, u(gen)));
    const Eigen::VectorXd expected = k.matrix().transpose() * x.values();
    CHECK((replicator_mutator_step(flat, k, x).values() - expected).lpNorm<1>() < 1e-14);
  }
  CHECK_THROWS(replicator_mutator_step(mat2(1, 1, 1, 1), k, state({0.5, 0.5})));
}

TEST_CASE("both step maps stay on the simplex") {
  std::mt19937_64 gen(10);
  std::uniform_real_distribution<double> entry(0.01, 10.0);
  std::uniform_int_distribution<int> dim_pick(2, 8);
  RandomStream rng(11);
  for (int s = 0; s < 10000; ++s) {
    const bool full = s % 2 == 0;
    const int dim = full ? 8 : dim_pick(gen);
    Eigen::MatrixXd m(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r)
      for (Eigen::Index c = 0; c < dim; ++c) m(r, c) = entry(gen);
    const MetaGame game = full ? MetaGame(exact10().labels(), m) : matrix(m);
    const auto x = sample_initial_states(1, dim, rng).front();
    const auto next = full ? replicator_mutator_step(game, mutation_kernel(types8(), 0.01), x)
                           : replicator_step(game, x);
    CHECK(next.values().minCoeff() >= 0.0);
    CHECK(std::abs(next.values().sum() - 1.0) < 1e-12);
  }
}

TEST_CASE("replicator growth is ordered by fitness") {
  std::mt19937_64 gen(12);
  std::uniform_real_distribution<double> entry(0.1, 10.0);
  RandomStream rng(13);
  for (int s = 0; s < 1000; ++s) {
    Eigen::MatrixXd m(4, 4);
    for (Eigen::Index r = 0; r < 4; ++r)
      for (Eigen::Index c = 0; c < 4; ++c) m(r, c) = entry(gen);
    const auto x = sample_initial_states(1, 4, rng).front();
    const auto next = replicator_step(matrix(m), x);
    const Eigen::VectorXd f = m * x.values();
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        if (f(i) > f(j) * (1 + 1e-12)) CHECK(next[i] / x[i] > next[j] / x[j]);
  }
}

TEST_CASE("run_dynamics") {
  SUBCASE("a vertex converges after one step") {
    const auto t = run_dynamics(exact10(), std::nullopt, PopulationState::vertex(8, 0));
    CHECK(t.converged);
    CHECK(t.iterations == 1);
    CHECK(t.final_state().l1_distance(PopulationState::vertex(8, 0)) == 0.0);
  }
  SUBCASE("coordination game flows to the payoff-dominant vertex") {
    const auto t = run_dynamics(mat2(2, 0, 0, 1), std::nullopt, state({0.9, 0.1}));
    CHECK(t.converged);
    CHECK(t.final_state()[0] == doctest::Approx(1.0).epsilon(1e-10));
  }
  SUBCASE("iteration cap") {
    const auto t = run_dynamics(mat2(2, 0, 0, 1), std::nullopt, state({0.6, 0.4}), {1e-15, 3, 1});
    CHECK_FALSE(t.converged);
    CHECK(t.iterations == 3);
    REQUIRE(t.states.size() == 4);
    CHECK(t.states[2].iteration == 2);
    CHECK(t.states.back().iteration == 3);
  }
  SUBCASE("recording interval") {
    const auto t = run_dynamics(mat2(2, 0, 0, 1), std::nullopt, state({0.6, 0.4}), {1e-12, 100000, 10});
    CHECK(t.converged);
    for (std::size_t i = 1; i + 1 < t.states.size(); ++i) CHECK(t.states[i].iteration % 10 == 0);
    CHECK(t.states.back().iteration == t.iterations);
  }
  SUBCASE("option validation") {
    const auto x = state({0.5, 0.5});
    CHECK_THROWS(run_dynamics(mat2(1, 1, 1, 1), std::nullopt, x, {0.0, 10, 0}));
    CHECK_THROWS(run_dynamics(mat2(1, 1, 1, 1), std::nullopt, x, {1e-9, 0, 0}));
  }
}

TEST_CASE("replicator-mutator fixed point on the exact N=10 meta-game") {
  const auto k = mutation_kernel(types8(), 0.001);
  RandomStream rng(2026);
  const auto starts = sample_initial_states(5, 8, rng);
  const auto runs = run_dynamics_batch(exact10(), k, starts, {1e-12, 1'000'000, 0}, 2);
  const int rs = exact10().index("reg-simplex"), rf = exact10().index("reg-flat"),
            pf = exact10().index("pi-flat");
  for (const auto& t : runs) {
    CHECK(t.converged);
    const auto& x = t.final_state();
    CHECK(x.values().minCoeff() > 0.0);
    CHECK(x[rs] + x[rf] + x[pf] > 0.9);
    CHECK(x.l1_distance(runs.front().final_state()) < 1e-6);
    CHECK(replicator_mutator_step(exact10(), k, x).l1_distance(x) < 1e-12);
  }
  const auto& x = runs.front().final_state();
  CHECK(x[rs] == doctest::Approx(0.279).epsilon(0.03 / 0.279));
  CHECK(x[rf] == doctest::Approx(0.383).epsilon(0.03 / 0.383));
  CHECK(x[pf] == doctest::Approx(0.281).epsilon(0.03 / 0.281));
}

TEST_CASE("batch results do not depend on the worker count") {
  RandomStream rng(7);
  const auto starts = sample_initial_states(6, 8, rng);
  const auto k = mutation_kernel(types8(), 0.01);
  const auto one = run_dynamics_batch(exact10(), k, starts, {1e-10, 100000, 0}, 1);
  const auto three = run_dynamics_batch(exact10(), k, starts, {1e-10, 100000, 0}, 3);
  REQUIRE(one.size() == three.size());
  for (std::size_t i = 0; i < one.size(); ++i) {
    CHECK(one[i].iterations == three[i].iterations);
    CHECK(one[i].final_state().values() == three[i].final_state().values());
  }
}

TEST_CASE("sample_initial_states") {
  SUBCASE("dim=2 marginal is uniform on [0,1]") {
    RandomStream rng(1);
    const auto states = sample_initial_states(100000, 2, rng);
    std::vector<double> first;
    for (const auto& s : states) first.push_back(s[0]);
    std::sort(first.begin(), first.end());
    double ks = 0.0;
    const double n = static_cast<double>(first.size());
    for (std::size_t i = 0; i < first.size(); ++i)
      ks = std::max({ks, std::abs((i + 1) / n - first[i]), std::abs(first[i] - i / n)});
    // Kolmogorov-Smirnov critical value at the 0.1% level.
    CHECK(ks < 1.95 / std::sqrt(n));
  }
  SUBCASE("reproducible and on the simplex") {
    RandomStream a(9), b(9);
    const auto x = sample_initial_states(3, 8, a);
    const auto y = sample_initial_states(3, 8, b);
    for (int i = 0; i < 3; ++i) {
      CHECK(x[i].values() == y[i].values());
      CHECK(std::abs(x[i].values().sum() - 1.0) < 1e-12);
    }
  }
  SUBCASE("errors") {
    RandomStream rng(1);
    CHECK_THROWS(sample_initial_states(0, 3, rng));
    CHECK_THROWS(sample_initial_states(3, 1, rng));
  }
}

TEST_CASE("PopulationState validation") {
  CHECK_THROWS(state({0.5, 0.6}));
  CHECK_THROWS(state({1.5, -0.5}));
  CHECK_THROWS(PopulationState::from_weights(Eigen::VectorXd::Zero(3)));
  CHECK(PopulationState::from_weights(Eigen::Vector3d(1, 1, 2))[2] == 0.5);
}
