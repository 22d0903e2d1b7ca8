#include <doctest.h>

#include <random>

#include "infoorder/counterexample.hpp"
#include "oracles.hpp"

using namespace infoorder;

namespace {

QuantumDichotomy qd(const ComplexMatrix& a, const ComplexMatrix& b) {
  return {DensityMatrix(a), DensityMatrix(b)};
}

ComplexMatrix diag(std::initializer_list<double> d) {
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Index>(d.size()), static_cast<Index>(d.size()));
  Index i = 0;
  for (double v : d) m(i, i) = v, ++i;
  return m;
}

POVM basis_measurement(Index d) {
  std::vector<HermitianMatrix> e;
  for (Index i = 0; i < d; ++i) {
    ComplexVector v = ComplexVector::Zero(d);
    v(i) = 1.0;
    e.push_back(HermitianMatrix::projector(v));
  }
  return POVM(e);
}

POVM to_povm(const std::vector<ComplexMatrix>& effects) {
  std::vector<HermitianMatrix> e;
  for (const auto& m : effects) e.emplace_back(m);
  return POVM(e);
}

}  // namespace

TEST_CASE("DensityMatrix and POVM validation") {
  CHECK_THROWS_AS(DensityMatrix(diag({0.5, 0.6})), InvalidInput);
  CHECK_THROWS_AS(DensityMatrix(diag({1.2, -0.2})), InvalidInput);
  CHECK_NOTHROW(DensityMatrix(diag({1.0, 0.0})));
  CHECK_THROWS_AS(POVM(std::vector<HermitianMatrix>{}), InvalidInput);
  CHECK_THROWS_AS(POVM({HermitianMatrix(diag({1.0, 0.5}))}), InvalidInput);
  CHECK_THROWS_AS(POVM({HermitianMatrix(diag({1.5, 1.0})), HermitianMatrix(diag({-0.5, 0.0}))}),
                  InvalidInput);
  CHECK_THROWS_AS(qd(diag({1, 0}), diag({1, 0, 0})), DimensionError);
}

TEST_CASE("induced_model examples") {
  std::mt19937_64 rng(1);
  const Dichotomy trivial = induced_model(qd(oracle::random_state(3, rng), oracle::random_state(3, rng)),
                                          POVM({HermitianMatrix::identity(3)}));
  CHECK(trivial.outcomes() == 1);
  CHECK(trivial.p0()(0) == doctest::Approx(1.0));
  CHECK(trivial.p1()(0) == doctest::Approx(1.0));

  for (double b : {0.0, 0.3, 0.5, 0.8, 1.0}) {
    const CounterexampleStates s = build_states({1.0, b});
    const Dichotomy m = induced_model(s.sigma, basis_measurement(2));
    CHECK(m.p0()(0) == doctest::Approx(1.0));
    CHECK(m.p0()(1) == doctest::Approx(0.0));
    CHECK(m.p1()(0) == doctest::Approx(1 - b * b).epsilon(1e-12));
    CHECK(m.p1()(1) == doctest::Approx(b * b).epsilon(1e-12));
  }
  CHECK_THROWS_AS(induced_model(build_states({0.5, 0.5}).rho, basis_measurement(2)), DimensionError);
}

TEST_CASE("quantum_l1_t examples") {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 5; ++i) {
    CHECK(quantum_l1_t(qd(oracle::random_state(3, rng), oracle::random_state(3, rng)), 0.0) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
  const CounterexampleStates s = build_states({0.6, 0.5});
  CHECK(quantum_l1_t(s.rho, 0.5) == doctest::Approx(0.6 * 1.5 + 0.4 * 0.5).epsilon(1e-12));
  CHECK(quantum_l1_t(s.sigma, 0.5) == doctest::Approx(std::sqrt(0.25 + 0.5)).epsilon(1e-12));
  CHECK(quantum_l1_t(s.sigma, 0.5) == doctest::Approx(0.8660).epsilon(1e-4));
  CHECK_THROWS_AS(quantum_l1_t(s.rho, -1.0), std::domain_error);
}

TEST_CASE("helstrom_measurement examples") {
  std::mt19937_64 rng(3);
  const ComplexMatrix r = oracle::random_state(3, rng);
  const QuantumDichotomy same = qd(r, r);
  const POVM h = helstrom_measurement(same, 1.0);
  CHECK(h.size() == 2);
  CHECK(l1_t_distance(induced_model(same, h), 1.0) <= 1e-9);

  const QuantumDichotomy orth = qd(diag({1, 0}), diag({0, 1}));
  const POVM ho = helstrom_measurement(orth, 1.0);
  CHECK(max_abs(ho.elements()[0].matrix() - diag({1, 0})) <= 1e-12);
  CHECK(max_abs(ho.elements()[1].matrix() - diag({0, 1})) <= 1e-12);
  CHECK(l1_t_distance(induced_model(orth, ho), 1.0) == doctest::Approx(2.0).epsilon(1e-12));

  const CounterexampleStates s = build_states({0.6, 0.5});
  const double value = l1_t_distance(induced_model(s.sigma, helstrom_measurement(s.sigma, 1.0)), 1.0);
  CHECK(value == doctest::Approx(2 * 0.5).epsilon(1e-9));
}

TEST_CASE("commutes examples") {
  std::mt19937_64 rng(4);
  CHECK(commutes(qd(diag({0.2, 0.3, 0.5}), diag({0.6, 0.1, 0.3})), 1e-9));
  CHECK(commutes(build_states({0.6, 0.5}).rho, 1e-9));
  for (double b : {0.1, 0.5, 0.9}) {
    const CounterexampleStates s = build_states({0.6, b});
    // [s0, s1] has off-diagonal entries of magnitude c*b
    const ComplexMatrix c = s.sigma.rho0().matrix() * s.sigma.rho1().matrix() -
                            s.sigma.rho1().matrix() * s.sigma.rho0().matrix();
    CHECK(std::abs(c(0, 1)) == doctest::Approx(std::sqrt(1 - b * b) * b).epsilon(1e-12));
    CHECK_FALSE(commutes(s.sigma, 1e-9));
  }
}

TEST_CASE("pencil roots are the kinks of the trace-norm curve") {
  const CounterexampleStates s = build_states({0.6, 0.5});
  const auto roots = pencil_roots(s.rho);
  // rho0 - t rho1 = diag(0.6, -0.6 t, 0.4 (1 - t)): only t = 1 is a zero on the support
  REQUIRE(roots.size() >= 1);
  bool has_one = false;
  for (double r : roots) has_one = has_one || std::abs(r - 1.0) < 1e-12;
  CHECK(has_one);

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const QuantumDichotomy q = qd(oracle::random_state(3, rng), oracle::random_state(3, rng));
    for (double t : pencil_roots(q)) {
      const Spectrum sp = eig_hermitian(HermitianMatrix::combination(q.rho0().hermitian(), t,
                                                                     q.rho1().hermitian()));
      CHECK(sp.eigenvalues.cwiseAbs().minCoeff() <= 1e-8 * (1 + t));
    }
  }
}

TEST_CASE("t_criterion examples") {
  std::mt19937_64 rng(6);
  const QuantumDichotomy a = qd(oracle::random_state(3, rng), oracle::random_state(3, rng));
  const CriterionVerdict self = t_criterion(a, a);
  CHECK(self.outcome == CriterionOutcome::HoldsCertified);
  CHECK_FALSE(self.witness_t);

  const CounterexampleStates good = build_states({0.6, 0.5});
  const CriterionVerdict v = t_criterion(good.rho, good.sigma);
  CHECK(v.outcome == CriterionOutcome::HoldsCertified);
  CHECK(v.uncertified.empty());

  const CounterexampleStates bad = build_states({0.3, 0.6});
  const CriterionVerdict f = t_criterion(bad.rho, bad.sigma);
  REQUIRE(f.outcome == CriterionOutcome::Fails);
  REQUIRE(f.witness_t);
  CHECK(std::abs(*f.witness_t - 1.0) <= 0.05);
  CHECK(f.witness_gap < 0);
  // g(1) = 2 alpha - 2 beta
  CHECK(quantum_l1_t(bad.rho, 1.0) - quantum_l1_t(bad.sigma, 1.0) ==
        doctest::Approx(2 * 0.3 - 2 * 0.6).epsilon(1e-12));
  CHECK(f.witness_gap <= 2 * 0.3 - 2 * 0.6 + 1e-9);

  CHECK_THROWS_AS(t_criterion(a, a, {0, 20}), std::invalid_argument);
}

TEST_CASE("classical_decision_ordering examples") {
  const CounterexampleStates s = build_states({0.6, 0.5});
  CHECK(classical_decision_ordering(s.rho, s.sigma).outcome == CriterionOutcome::HoldsCertified);
  CHECK(classical_decision_ordering(s.rho, s.rho).outcome == CriterionOutcome::HoldsCertified);

  std::mt19937_64 rng(7);
  const QuantumDichotomy perfect = qd(diag({1, 0}), diag({0, 1}));
  for (int i = 0; i < 10; ++i) {
    const Index d = 2 + i % 3;
    const QuantumDichotomy b = qd(oracle::random_state(d, rng), oracle::random_state(d, rng));
    CHECK(classical_decision_ordering(perfect, b).outcome == CriterionOutcome::HoldsCertified);
  }
  CHECK_THROWS_AS(classical_decision_ordering(s.sigma, s.rho), PreconditionError);
}

TEST_CASE("POVM monotonicity") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const Index d = 2 + trial % 3;
    const QuantumDichotomy q = qd(oracle::random_state(d, rng), oracle::random_state(d, rng, 1 + trial % d));
    const POVM m = to_povm(oracle::random_povm(d, 1 + trial % 6, rng));
    const Dichotomy induced = induced_model(q, m);
    for (double t : {0.0, 0.1, 0.5, 1.0, 2.0, 7.5}) {
      CHECK(l1_t_distance(induced, t) <= quantum_l1_t(q, t) + 1e-9);
    }
  }
}

TEST_CASE("Helstrom measurement attains the trace norm") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  for (int trial = 0; trial < 100; ++trial) {
    const Index d = 1 + trial % 4;
    const QuantumDichotomy q = qd(oracle::random_state(d, rng), oracle::random_state(d, rng));
    const double t = u(rng);
    const double value = l1_t_distance(induced_model(q, helstrom_measurement(q, t)), t);
    CHECK(std::abs(value - quantum_l1_t(q, t)) <= 1e-9);
    CHECK(std::abs(value - oracle::svd_trace_norm(q.rho0().matrix() - t * q.rho1().matrix())) <= 1e-9);
  }
}

TEST_CASE("scale identity behind the folding") {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(1e-3, 10.0);
  for (int trial = 0; trial < 200; ++trial) {
    const Index d = 2 + trial % 3;
    const QuantumDichotomy q = qd(oracle::random_state(d, rng), oracle::random_state(d, rng));
    const double t = u(rng);
    CHECK(std::abs(quantum_l1_t(q, t) - t * quantum_l1_t(q.swapped(), 1.0 / t)) <= 1e-10);
  }
}

TEST_CASE("quantum trace-norm curve is convex") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 6.0);
  for (int trial = 0; trial < 200; ++trial) {
    const QuantumDichotomy q = qd(oracle::random_state(3, rng), oracle::random_state(3, rng));
    const double a = u(rng), b = u(rng);
    CHECK(quantum_l1_t(q, 0.5 * (a + b)) <= 0.5 * (quantum_l1_t(q, a) + quantum_l1_t(q, b)) + 1e-10);
  }
}

TEST_CASE("t_criterion soundness against dense sampling") {
  std::mt19937_64 rng(12);
  int holds = 0, fails = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const Index da = 2 + trial % 2, db = 2;
    // mixing the left pair toward a common state makes both outcomes common
    const ComplexMatrix mix = oracle::random_state(da, rng);
    const double w = 0.1 * (trial % 10);
    const QuantumDichotomy a = qd((1 - w) * oracle::random_state(da, rng, 1) + w * mix,
                                  (1 - w) * oracle::random_state(da, rng, 1) + w * mix);
    const QuantumDichotomy b = qd(oracle::random_state(db, rng), oracle::random_state(db, rng));
    const CriterionVerdict v = t_criterion(a, b);
    double worst = 0;
    for (int i = 0; i <= 100000; ++i) {
      const double t = 10.0 * i / 100000;
      worst = std::min(worst, quantum_l1_t(a, t) - quantum_l1_t(b, t));
    }
    if (v.outcome == CriterionOutcome::HoldsCertified) {
      ++holds;
      CHECK(worst >= -1e-7);
    }
    if (v.outcome == CriterionOutcome::Fails) {
      ++fails;
      REQUIRE(v.witness_t);
      CHECK(quantum_l1_t(a, *v.witness_t) - quantum_l1_t(b, *v.witness_t) < 0);
    }
  }
  CHECK(holds > 0);
  CHECK(fails > 0);
}
