#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <random>

#include "hardylab/potentials.hpp"

using namespace hardylab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

std::vector<HalfSpacePoint> sample_points(std::uint64_t seed, int n) {
  std::mt19937_64 g(seed);
  std::uniform_real_distribution<double> u(-4.0, 3.0);
  std::vector<HalfSpacePoint> out;
  for (int i = 0; i < n; ++i) out.push_back({std::exp(u(g)), std::exp(u(g))});
  return out;
}

}  // namespace

TEST_CASE("U vanishes on the boundary and is positive inside", "[potentials]") {
  for (auto [N, p] : std::vector<std::pair<int, double>>{{2, 2.0}, {3, 1.5}, {3, 3.0}, {5, 3.0}}) {
    const PotentialContext ctx(N, p);
    for (double r : {0.0, 0.5, 3.0}) {
      CHECK_THAT(U(ctx, {r, 1e-12}), WithinAbs(0.0, 1e-10));
      CHECK_THROWS_AS(U(ctx, {r, 0.0}), DomainError);
    }
    for (const auto& pt : sample_points(1, 50)) CHECK(U(ctx, pt) > 0.0);
  }
}

TEST_CASE("gradient matches finite differences", "[potentials]") {
  for (auto [N, p] : std::vector<std::pair<int, double>>{{3, 2.0}, {4, 2.5}, {3, 3.0}, {6, 5.0}}) {
    const PotentialContext ctx(N, p);
    for (const auto& pt : sample_points(2, 30)) {
      const double h = 1e-6 * (1.0 + pt.r + pt.y);
      const auto g = grad_U(ctx, pt);
      const double dr = (U(ctx, {pt.r + h, pt.y}) - U(ctx, {std::abs(pt.r - h), pt.y})) / (2.0 * h);
      const double dy = (U(ctx, {pt.r, pt.y + h}) - U(ctx, {pt.r, pt.y - h})) / (2.0 * h);
      const double scale = g.norm + 1e-300;
      CHECK(std::abs(g.dy - dy) < 1e-6 * scale);
      if (pt.r > 2.0 * h) CHECK(std::abs(g.dr - dr) < 1e-6 * scale);
    }
  }
}

TEST_CASE("p-Laplacian of U vanishes exactly for p = 2 and p = N", "[potentials]") {
  for (auto [N, p] : std::vector<std::pair<int, double>>{{3, 2.0}, {5, 2.0}, {2, 2.0}, {4, 4.0}, {3, 3.0}}) {
    const PotentialContext ctx(N, p);
    for (const auto& pt : sample_points(3, 100)) CHECK(p_laplacian_U(ctx, pt) == 0.0);
  }
}

TEST_CASE("p-Laplacian of U has a fixed sign", "[potentials]") {
  // <= 0 for 2 < p < N and >= 0 for p < 2.
  for (auto [N, p] : std::vector<std::pair<int, double>>{{5, 3.0}, {6, 5.0}, {4, 2.5}}) {
    const PotentialContext ctx(N, p);
    for (const auto& pt : sample_points(4, 200)) CHECK(p_laplacian_U(ctx, pt) <= 0.0);
  }
  const PotentialContext ctx(3, 1.5);
  for (const auto& pt : sample_points(5, 200)) CHECK(p_laplacian_U(ctx, pt) >= 0.0);
}

TEST_CASE("V_p bound and spot value", "[potentials][oracle]") {
  const PotentialContext c32(3, 2.0);
  CHECK_THAT(V_p(c32, {0.0, 2.0}), WithinRel(16.0 / 9.0, 1e-14));
  for (auto [N, p] : std::vector<std::pair<int, double>>{{3, 2.0}, {4, 2.5}, {5, 3.0}, {6, 1.5}}) {
    const PotentialContext ctx(N, p);
    for (const auto& pt : sample_points(6, 300)) CHECK(V_p(ctx, pt) >= 1.0 - 1e-12);
  }
  CHECK_THROWS_AS(V_p(PotentialContext(3, 3.0), {0.5, 0.5}), DomainError);
  CHECK_THROWS_AS(V_p(c32, {0.0, 1.0}), PoleError);
}

TEST_CASE("Green functions", "[potentials]") {
  for (auto [N, p] : std::vector<std::pair<int, double>>{{3, 2.0}, {4, 2.5}, {3, 3.0}}) {
    const PotentialContext ctx(N, p);
    for (double t : {0.01, 0.3, 0.9}) {
      CHECK_THAT(green_ball_inverse(ctx, green_ball(ctx, t)), WithinRel(t, 1e-13));
      const double h = 1e-6 * t;
      CHECK_THAT(green_ball_derivative(ctx, t),
                 WithinRel((green_ball(ctx, t + h) - green_ball(ctx, t - h)) / (2.0 * h), 1e-7));
      // Unit flux: omega t^{N-1} |G'|^{p-1} = 1.
      CHECK_THAT(ctx.omega() * std::pow(t, N - 1) * std::pow(std::abs(green_ball_derivative(ctx, t)), p - 1.0),
                 WithinRel(1.0, 1e-13));
    }
    CHECK_THAT(green_ball(ctx, 1.0), WithinAbs(0.0, 1e-15));
    if (!ctx.critical()) {
      for (double r : {0.1, 1.0, 7.0}) CHECK_THAT(green_rn_inverse(ctx, green_rn(ctx, r)), WithinRel(r, 1e-13));
      for (const auto& pt : sample_points(7, 10)) CHECK_THAT(green_rn(ctx, h_map(ctx, pt)), WithinRel(U(ctx, pt), 1e-12));
    }
  }
}

TEST_CASE("critical weight is the limit of the subcritical one", "[potentials]") {
  const HalfSpacePoint pt{0.7, 1.6};
  const double ref = critical_hardy_constant(3) * std::pow(V_N_weight(3, pt), 1.5);
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 2; k <= 9; ++k) {
    const PotentialContext ctx(3, 3.0 - std::ldexp(1.0, -k));
    const double d = std::abs(hardy_constant(ctx.params()) * hardy_weight(ctx, pt) - ref) / ref;
    CHECK(d < prev);
    prev = d;
  }
  CHECK(prev < 1e-2);
}
