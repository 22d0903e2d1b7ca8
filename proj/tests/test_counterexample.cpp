#include <doctest.h>

#include <random>

#include "infoorder/io.hpp"
#include "oracles.hpp"

using namespace infoorder;

TEST_CASE("CounterexampleParams validation") {
  CHECK_THROWS_AS(CounterexampleParams(1.1, 0.5), InvalidInput);
  CHECK_THROWS_AS(CounterexampleParams(0.5, -0.1), InvalidInput);
  CHECK(CounterexampleParams(0.6, 0.5).in_hypothesis());
  CHECK(CounterexampleParams(0.5, 0.5).in_hypothesis());
  CHECK_FALSE(CounterexampleParams(0.3, 0.6).in_hypothesis());
}

TEST_CASE("build_states examples") {
  const CounterexampleStates one = build_states({1.0, 0.3});
  CHECK(max_abs(one.rho.rho0().matrix() - HermitianMatrix::diagonal(RealVector{{1.0, 0.0, 0.0}}).matrix()) == 0.0);
  CHECK(max_abs(one.rho.rho1().matrix() - HermitianMatrix::diagonal(RealVector{{0.0, 1.0, 0.0}}).matrix()) == 0.0);

  const CounterexampleStates zero = build_states({0.4, 0.0});
  CHECK(max_abs(zero.sigma.rho1().matrix() - zero.sigma.rho0().matrix()) == 0.0);

  const CounterexampleStates s = build_states({0.6, 0.5});
  const ComplexMatrix& s1 = s.sigma.rho1().matrix();
  CHECK(s1(0, 0).real() == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(s1(1, 1).real() == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(s1(0, 1).real() == doctest::Approx(std::sqrt(0.75) * 0.5).epsilon(1e-15));
  CHECK(s1(1, 0).real() == doctest::Approx(std::sqrt(0.75) * 0.5).epsilon(1e-15));
  CHECK(max_abs(s1 * s1 - s1) <= 1e-15);
  CHECK(commutes(s.rho, 1e-12));
}

TEST_CASE("closed-form examples") {
  CHECK(rho_norm_closed(0.6, 0.0) == 1.0);
  CHECK(rho_norm_closed(0.6, 1.0) == doctest::Approx(1.2).epsilon(1e-15));
  CHECK(rho_norm_closed(0.6, 2.0) == doctest::Approx(0.6 * 3 + 0.4 * 1).epsilon(1e-15));
  CHECK(rho_norm_closed(0.6, 2.0) == doctest::Approx(2.2).epsilon(1e-15));
  CHECK(sigma_norm_closed(0.5, 0.0) == 1.0);
  CHECK(sigma_norm_closed(0.5, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(sigma_norm_closed(0.5, 4.0) == doctest::Approx(std::sqrt(13.0)).epsilon(1e-15));

  // eigenvalue oracle for the same points
  const CounterexampleStates s = build_states({0.6, 0.5});
  CHECK(oracle::svd_trace_norm(s.rho.rho0().matrix() - 2.0 * s.rho.rho1().matrix()) ==
        doctest::Approx(2.2).epsilon(1e-12));
  CHECK(oracle::trace_norm_2x2(s.sigma.rho0().matrix() - 4.0 * s.sigma.rho1().matrix()) ==
        doctest::Approx(std::sqrt(13.0)).epsilon(1e-12));

  CHECK(f_gap({0.6, 0.5}, 0.0) == 0.0);
  for (double a : {0.0, 0.3, 0.77, 1.0}) CHECK(std::abs(f_gap({a, a}, 1.0)) <= 1e-15);
  CHECK(f_gap({0.6, 0.5}, 1.0) == doctest::Approx(1.44 - 1.0).epsilon(1e-14));
  const double t1_oracle = std::pow(oracle::svd_trace_norm(s.rho.rho0().matrix() - s.rho.rho1().matrix()), 2) -
                           std::pow(oracle::trace_norm_2x2(s.sigma.rho0().matrix() - s.sigma.rho1().matrix()), 2);
  CHECK(t1_oracle == doctest::Approx(0.44).epsilon(1e-12));
}

TEST_CASE("closed forms agree with eigenvalue norms on random parameters") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0), ut(0.0, 10.0);
  for (int trial = 0; trial < 50; ++trial) {
    const double a = u(rng), b = u(rng);
    const CounterexampleStates s = build_states({a, b});
    for (int k = 0; k < 200; ++k) {
      const double t = ut(rng);
      CHECK(std::abs(rho_norm_closed(a, t) - quantum_l1_t(s.rho, t)) <= 1e-10);
      CHECK(std::abs(sigma_norm_closed(b, t) - quantum_l1_t(s.sigma, t)) <= 1e-10);
    }
  }
}

TEST_CASE("f vanishes at zero for every parameter") {
  for (double a = 0; a <= 1.0; a += 0.125)
    for (double b = 0; b <= 1.0; b += 0.125) CHECK(std::abs(f_gap({a, b}, 0.0)) <= 1e-15);
}

TEST_CASE("gap_curve samples store f as the difference of squares") {
  const GapCurve c = gap_curve({0.6, 0.5}, 10.0, 101);
  REQUIRE(c.samples.size() == 101);
  CHECK(c.samples.front().t == 0.0);
  CHECK(c.samples.back().t == 10.0);
  for (const auto& s : c.samples) {
    CHECK(s.rho_norm >= 0);
    CHECK(s.sigma_norm >= 0);
    CHECK(s.f == s.rho_norm * s.rho_norm - s.sigma_norm * s.sigma_norm);
  }
  CHECK_THROWS_AS(gap_curve({0.6, 0.5}, 10.0, 1), std::invalid_argument);
}

TEST_CASE("piecewise_bound_check examples") {
  const CounterexampleParams p{0.6, 0.5};
  CHECK(f_gap(p, 0.5) >= 4 * 0.6 * 0.4 * 0.25);
  CHECK(4 * 0.6 * 0.4 * 0.25 == doctest::Approx(0.24));
  std::vector<double> grid;
  for (int i = 0; i <= 1000; ++i) grid.push_back(10.0 * i / 1000);
  const BoundCheckReport r = piecewise_bound_check(p, grid);
  CHECK(r.passed);
  CHECK(r.points_checked == grid.size());
  CHECK(piecewise_bound_check({1.0, 0.7}, grid).passed);
  CHECK(piecewise_bound_check({0.5, 0.5}, grid).passed);

  const BoundCheckReport bad = piecewise_bound_check({0.3, 0.6}, grid);
  CHECK_FALSE(bad.passed);
  REQUIRE_FALSE(bad.violations.empty());
  bool domination = false;
  for (const auto& v : bad.violations) domination = domination || v.which == "domination";
  CHECK(domination);
}

TEST_CASE("minimum of f is non-increasing in beta") {
  for (double a : {0.2, 0.5, 0.8, 1.0}) {
    double previous = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= 20; ++k) {
      const double b = k / 20.0;
      double lowest = std::numeric_limits<double>::infinity();
      for (int i = 0; i <= 2000; ++i) lowest = std::min(lowest, f_gap({a, b}, 10.0 * i / 2000));
      CHECK(lowest <= previous + 1e-12);
      previous = lowest;
    }
  }
}

TEST_CASE("f is nonnegative under the hypothesis and the criterion certifies") {
  for (double a : {0.2, 0.5, 0.9})
    for (double b : {0.1, 0.2, 0.5, 0.9}) {
      if (b > a) continue;
      const CounterexampleParams p{a, b};
      for (int i = 0; i <= 10000; ++i) CHECK(f_gap(p, 10.0 * i / 10000) >= -1e-9);
      const CounterexampleStates s = build_states(p);
      CHECK(t_criterion(s.rho, s.sigma).outcome == CriterionOutcome::HoldsCertified);
    }
}

TEST_CASE("reproduce examples") {
  const ReproductionReport r = reproduce({0.6, 0.5});
  CHECK(r.success);
  CHECK(r.hypothesis_holds);
  REQUIRE(r.stages.size() == 8);
  for (const auto& s : r.stages) CHECK_MESSAGE(s.passed, s.name);
  CHECK(r.first_failure() == nullptr);
  REQUIRE(r.obstruction);
  CHECK(std::abs(r.obstruction->psi(2)) >= 1 - 1e-8);
  REQUIRE(r.ptp);
  CHECK(r.ptp->exactness == Exactness::ExactForDims);
  CHECK(r.curve.samples.size() == 1001);

  CHECK(reproduce({0.5, 0.5}).success);

  CHECK_THROWS_AS(reproduce({0.3, 0.6}), HypothesisError);
  CHECK_THROWS_AS(reproduce({0.6, 0.0}), HypothesisError);
  ReproductionConfig loose;
  loose.allow_out_of_hypothesis = true;
  const ReproductionReport out = reproduce({0.3, 0.6}, loose);
  CHECK_FALSE(out.success);
  CHECK_FALSE(out.hypothesis_holds);
  REQUIRE(out.first_failure());
  CHECK(out.first_failure()->name == "trace-norm-criterion");
  REQUIRE(out.criterion);
  REQUIRE(out.criterion->witness_t);
  CHECK(std::abs(*out.criterion->witness_t - 1.0) <= 0.05);
}

TEST_CASE("reproduce is deterministic") {
  const std::string a = to_json(reproduce({0.7, 0.4})).dump();
  const std::string b = to_json(reproduce({0.7, 0.4})).dump();
  CHECK(a == b);
}
