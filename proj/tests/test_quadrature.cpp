#include <catch_amalgamated.hpp>

#include <cmath>

#include "hardylab/quadrature.hpp"

using namespace hardylab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("one-dimensional integrals", "[quadrature]") {
  const QuadratureSpec spec;
  auto r = integrate_1d([](double t) { return std::cos(t); }, 0.0, kPi / 2.0, spec);
  CHECK(r.converged);
  CHECK_THAT(r.value, WithinRel(1.0, 1e-12));
  CHECK(r.error_estimate < 1e-8);

  r = integrate_1d([](double t) { return std::exp(-t); }, 0.0, kInf, spec);
  CHECK(r.converged);
  CHECK_THAT(r.value, WithinRel(1.0, 1e-9));

  r = integrate_1d([](double t) { return std::pow(1.0 + t, -4.0); }, 0.0, kInf, spec);
  CHECK(r.converged);
  CHECK_THAT(r.value, WithinRel(1.0 / 3.0, 1e-8));

  // Kink at a declared breakpoint.
  Interval1dOptions o;
  o.breakpoints = {0.3};
  r = integrate_1d([](double t) { return std::abs(t - 0.3); }, 0.0, 1.0, spec, o);
  CHECK_THAT(r.value, WithinRel(0.5 * (0.09 + 0.49), 1e-13));
}

TEST_CASE("declared endpoint singularities", "[quadrature]") {
  const QuadratureSpec spec;
  Interval1dOptions o;
  o.left = EndpointBehavior{-0.5, 0.0, 1.0};
  auto r = integrate_1d([](double t) { return 1.0 / std::sqrt(t); }, 0.0, 1.0, spec, o);
  CHECK(r.converged);
  CHECK_THAT(r.value, WithinRel(2.0, 1e-8));

  // int_0^{1/2} t^{-1} log(1/t)^{-2} dt = 1/log 2
  o.left = EndpointBehavior{-1.0, -2.0, 1.0};
  r = integrate_1d([](double t) { return 1.0 / (t * std::pow(std::log(1.0 / t), 2.0)); }, 0.0, 0.5, spec, o);
  CHECK_THAT(r.value, WithinRel(1.0 / std::log(2.0), 1e-6));

  Interval1dOptions rt;
  rt.right = EndpointBehavior{-0.5, 0.0, 1.0};
  r = integrate_1d([](double t) { return 1.0 / std::sqrt(1.0 - t); }, 0.0, 1.0, spec, rt);
  CHECK_THAT(r.value, WithinRel(2.0, 1e-8));
}

TEST_CASE("invalid specifications", "[quadrature]") {
  QuadratureSpec bad;
  bad.rel_tol = 0.0;
  CHECK_THROWS_AS(integrate_1d([](double t) { return t; }, 0.0, 1.0, bad), DomainError);
  CHECK_THROWS_AS(integrate_1d([](double t) { return t; }, 1.0, 0.0, QuadratureSpec{}), DomainError);
  QuadratureSpec shallow;
  shallow.max_depth = 2;
  CHECK_THROWS_AS(shallow.validate(), DomainError);
}

TEST_CASE("axisymmetric integrals", "[quadrature]") {
  const QuadratureSpec spec;
  for (int N : {2, 3, 5}) {
    AxisymOptions o;
    o.center_y = 0.0;
    o.radius = 1.0;
    o.pole = PoleBehavior{};
    const auto vol = integrate_rn_axisym(N, [](double, double) { return 1.0; }, spec, o);
    CHECK_THAT(vol.value, WithinRel(unit_ball_volume(N), 1e-10));

    // Half of a Gaussian about a boundary point.
    AxisymOptions h;
    h.center_y = 0.5;
    h.pole = PoleBehavior{};
    const auto g = integrate_halfspace_axisym(
        N, [](double r, double y) { return std::exp(-(r * r + y * y)); }, spec, h);
    CHECK_THAT(g.value, WithinRel(0.5 * std::pow(kPi, 0.5 * N), 1e-8));
  }
}

TEST_CASE("integrand near the polar centre must declare its order", "[quadrature]") {
  AxisymOptions o;
  CHECK_THROWS_AS(integrate_halfspace_axisym(
                      3, [](double r, double y) { return 1.0 / (r * r + (y - 1.0) * (y - 1.0)); }, QuadratureSpec{}, o),
                  MissingExponentError);
}

TEST_CASE("superlevel integrals of the p-Laplacian", "[quadrature][oracle]") {
  QuadratureSpec spec;
  spec.rel_tol = 1e-10;
  spec.abs_tol = 1e-13;
  // Independent high-precision evaluations.
  const struct {
    int N;
    double p, s, F;
  } cases[] = {{5, 3.0, 1.0, -0.000522486667428},
               {5, 3.0, 0.1, -0.0569629530684},
               {4, 2.5, 1.0, -9.3934806661e-05},
               {6, 3.5, 1.0, -0.00161799780062}};
  for (const auto& c : cases) {
    const PotentialContext ctx(c.N, c.p);
    const auto F = superlevel_integral(ctx, c.s, spec);
    CHECK(F.converged);
    CHECK_THAT(F.value, WithinRel(c.F, 1e-8));
    // Flux through the level set equals 1 + F.
    const auto flux = level_set_flux(ctx, c.s, spec);
    CHECK_THAT(flux.value - 1.0, WithinAbs(c.F, 1e-9));
  }
  for (auto [N, p] : std::vector<std::pair<int, double>>{{3, 2.0}, {4, 4.0}}) {
    const PotentialContext ctx(N, p);
    CHECK(superlevel_integral(ctx, 0.5, spec).value == 0.0);
    CHECK_THAT(level_set_flux(ctx, 0.5, spec).value, WithinRel(1.0, 1e-9));
  }
}
