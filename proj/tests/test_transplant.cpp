#include <catch_amalgamated.hpp>

#include <cmath>

#include "hardylab/functionals.hpp"
#include "hardylab/transplant.hpp"

using namespace hardylab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("Moser transform preserves the N-energy", "[transplant]") {
  const QuadratureSpec spec;
  for (int N : {2, 3, 4}) {
    for (double R : {1.0, 3.0}) {
      for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto u = random_smooth_profile(seed, R);
        const auto v = moser_transform(N, R, u);
        CHECK_THAT(line_energy(N, v, spec).value, WithinRel(radial_energy_ball(N, N, u, spec, R).value, 1e-6));
        const auto back = moser_inverse(N, R, v);
        for (double t : {0.1 * R, 0.5 * R, 0.9 * R}) CHECK_THAT(back(t), WithinAbs(u(t), 1e-13));
      }
    }
  }
  const RadialProfile bad{[](double) { return 1.0; }, [](double) { return 0.0; }, 5.0, {}};
  CHECK_THROWS_AS(moser_transform(2, 1.0, bad), InvalidProfileError);
}

TEST_CASE("dimension transform preserves the energy", "[transplant]") {
  const QuadratureSpec spec;
  for (std::uint64_t seed : {4u, 5u}) {
    const auto u = random_smooth_profile(seed, 1.0);
    const double e = radial_energy_ball(2, 2, u, spec).value;
    for (int m : {3, 4, 6}) CHECK_THAT(radial_energy_ball(m, 2, dimension_transform(2, m, 1.0, u), spec).value, WithinRel(e, 1e-6));
  }
  CHECK_THROWS_AS(dimension_transform(3, 3, 1.0, random_smooth_profile(1, 1.0)), DomainError);
}

TEST_CASE("level-set energy of the Green function", "[transplant]") {
  const QuadratureSpec spec;
  for (auto [N, p] : std::vector<std::pair<int, double>>{{3, 2.0}, {5, 3.0}, {4, 2.5}, {6, 1.5}, {5, 2.0}}) {
    const PotentialContext ctx(N, p);
    for (double t : {0.1, 1.0, 10.0}) {
      const auto e = green_level_energy(ctx, t, spec);
      CHECK(e.converged);
      CHECK_THAT(e.value, WithinRel(t, 1e-8));
    }
  }
  CHECK_THROWS_AS(green_level_energy(PotentialContext(3, 3.0), 1.0, spec), DomainError);
}

TEST_CASE("transplanted energy equals the source energy when F vanishes", "[transplant]") {
  const QuadratureSpec spec;
  for (auto [N, p] : std::vector<std::pair<int, double>>{{2, 2.0}, {3, 3.0}, {3, 2.0}}) {
    const PotentialContext ctx(N, p);
    const auto u = transplant_from_ball(ctx, random_smooth_profile(9, 1.0));
    const auto c = dirichlet_energy_symmetric(u, spec);
    REQUIRE(c.identity);
    CHECK(c.relative_gap() < 1e-6);
  }
}

TEST_CASE("F_p table reproduces direct evaluations", "[transplant]") {
  QuadratureSpec spec;
  spec.rel_tol = 1e-9;
  const PotentialContext ctx(5, 3.0);
  const FpTable table(ctx, spec);
  CHECK(table.converged());
  CHECK_FALSE(table.vanishes());
  for (double s : {0.05, 0.1, 1.0}) CHECK_THAT(table(s), WithinRel(superlevel_integral(ctx, s, spec).value, 1e-3));
  CHECK(FpTable(PotentialContext(3, 2.0), spec).vanishes());
  CHECK(FpTable(PotentialContext(3, 2.0), spec)(0.3) == 0.0);
}

TEST_CASE("transplant identities with the F_p correction", "[transplant]") {
  const QuadratureSpec spec;
  const PotentialContext ctx(4, 2.5);
  const FpTable table(ctx, spec.scaled(0.01));
  const auto ub = transplant_from_ball(ctx, random_smooth_profile(12, 1.0));
  const auto e = dirichlet_energy_symmetric(ub, spec, &table);
  REQUIRE(e.identity);
  CHECK(e.relative_gap() < 1e-4);
  const auto ur = transplant_from_rn(ctx, random_smooth_profile(13, 2.0));
  const auto h = hardy_side_symmetric(ur, spec, &table);
  REQUIRE(h.identity);
  CHECK(h.relative_gap() < 1e-4);
}
