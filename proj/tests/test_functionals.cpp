#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "hardylab/functionals.hpp"

using namespace hardylab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("reference constants", "[functionals]") {
  CHECK_THAT(reference_constant(FunctionalKind::critical_hardy_half(2)), WithinRel(0.25, 1e-15));
  CHECK_THAT(reference_constant(FunctionalKind::improved_hardy_half(5, 3.0)), WithinRel(8.0 / 27.0, 1e-15));
  CHECK_THAT(reference_constant(FunctionalKind::hardy_subcritical(4, 2.0)), WithinRel(1.0, 1e-15));
  CHECK_THAT(reference_constant(FunctionalKind::bliss(2.0, 4.0)), WithinRel(0.903602003609845, 1e-13));
  CHECK_THROWS_AS(FunctionalKind::improved_hardy_half(3, 3.0), DomainError);
  CHECK_THROWS_AS(FunctionalKind::bliss(2.0, 1.5), DomainError);
}

TEST_CASE("quotients stay above the sharp constants", "[functionals]") {
  QuadratureSpec spec;
  spec.rel_tol = 1e-7;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    for (int N : {2, 3}) {
      const auto k = FunctionalKind::critical_hardy_half(N);
      const auto u = transplant_from_ball(PotentialContext(N, N), random_smooth_profile(seed, 1.0));
      const auto q = rayleigh(k, u, spec);
      CHECK(q.converged);
      CHECK(q.value >= reference_constant(k) - 1e-6);
    }
    const auto hk = FunctionalKind::hardy_subcritical(3, 2.0);
    CHECK(rayleigh(hk, RadialFunction{3, random_smooth_profile(seed, 2.0)}, spec).value >= 0.25 - 1e-9);
    const auto bk = FunctionalKind::bliss(2.0, 4.0);
    CHECK(rayleigh(bk, LineFunction{random_smooth_profile(seed, 3.0, true)}, spec).value >= reference_constant(bk) - 1e-9);
  }
}

TEST_CASE("log cut-off family", "[functionals]") {
  QuadratureSpec spec;
  spec.rel_tol = 1e-12;
  for (int N : {2, 3})
    for (double R : {std::exp(1.0), std::exp(4.0)})
      CHECK_THAT(radial_energy_rn(N, N, family_log_cutoff(R), spec).value, WithinRel(log_cutoff_energy(N, R), 1e-10));
  CHECK_THROWS_AS(family_log_cutoff(1.0), DomainError);
}

TEST_CASE("Moser functions have unit energy", "[functionals]") {
  const QuadratureSpec spec;
  for (int N : {2, 3})
    for (double K : {1.0, 10.0}) CHECK_THAT(radial_energy_ball(N, N, moser_profile(N, K), spec).value, WithinRel(1.0, 1e-10));
}

TEST_CASE("one-dimensional critical Hardy reduction", "[functionals]") {
  QuadratureSpec spec;
  spec.rel_tol = 1e-9;
  const int N = 2;
  const auto w = log_plateau_profile((N - 1.0) / N, 1.0, 2.0);
  const auto line = critical_hardy_line(N, w, spec);
  std::vector<double> br;
  for (double L : w.knots(0.0, kInf)) br.push_back(std::exp(-L));
  std::sort(br.begin(), br.end());
  const RadialProfile v{[w](double t) { return t >= 1.0 ? 0.0 : w(-std::log(t)); },
                        [w](double t) { return t >= 1.0 ? 0.0 : -w.d(-std::log(t)) / t; }, 1.0, br};
  const auto u = transplant_from_ball(PotentialContext(N, N), v);
  const auto direct = rayleigh(FunctionalKind::critical_hardy_half(N), u, spec);
  CHECK_THAT(direct.value, WithinRel(line.quotient(), 1e-5));
}

TEST_CASE("function types must match the functional", "[functionals]") {
  const QuadratureSpec spec;
  CHECK_THROWS_AS(rayleigh(FunctionalKind::bliss(2.0, 4.0), RadialFunction{3, random_smooth_profile(1, 1.0)}, spec),
                  AdmissibilityError);
  CHECK_THROWS_AS(rayleigh(FunctionalKind::hardy_subcritical(3, 2.0), RadialFunction{4, random_smooth_profile(1, 1.0)}, spec),
                  AdmissibilityError);
}

TEST_CASE("bubbles touching the boundary", "[functionals]") {
  QuadratureSpec spec;
  spec.rel_tol = 1e-7;
  const auto k = FunctionalKind::hardy_sobolev_improved(3, 2.0, 1.0);
  const double q1 = rayleigh(k, family_bubble(3, 2.0, 0.1), spec).value;
  const double q2 = rayleigh(k, family_bubble(3, 2.0, 0.05), spec).value;
  CHECK(q2 < q1);
  CHECK_THAT(std::log(q1 / q2) / std::log(2.0), WithinAbs(1.0, 0.1));
  CHECK_THROWS_AS(family_bubble(3, 2.0, 0.6), DomainError);
}
