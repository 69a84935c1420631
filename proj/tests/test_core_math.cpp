#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "hardylab/core_math.hpp"

using namespace hardylab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("gamma and sphere areas", "[core]") {
  CHECK_THAT(hardylab::gamma(5.0), WithinRel(24.0, 1e-15));
  CHECK_THAT(hardylab::gamma(0.5), WithinRel(std::sqrt(kPi), 1e-15));
  CHECK_THAT(log_gamma(100.0), WithinRel(359.13420536957540, 1e-14));
  CHECK_THAT(sphere_area(2), WithinRel(2.0 * kPi, 1e-15));
  CHECK_THAT(sphere_area(3), WithinRel(4.0 * kPi, 1e-15));
  CHECK_THAT(sphere_area(4), WithinRel(2.0 * kPi * kPi, 1e-15));
  CHECK_THAT(unit_ball_volume(3), WithinRel(4.0 * kPi / 3.0, 1e-15));
  CHECK_THROWS_AS(hardylab::gamma(0.0), DomainError);
  CHECK_THROWS_AS(hardylab::gamma(-1.5), DomainError);
}

TEST_CASE("parameter validation", "[core]") {
  CHECK_NOTHROW(make_params(3, 2.0));
  CHECK_NOTHROW(make_params(3, 3.0));
  CHECK_THROWS_AS(make_params(1, 1.5), DomainError);
  CHECK_THROWS_AS(make_params(3, 1.0), DomainError);
  CHECK_THROWS_AS(make_params(3, 3.5), DomainError);
  CHECK_THROWS_AS(make_params(kMaxDim + 1, 2.0), DomainError);
  Params P = make_params(4, 2.0);
  P.s = 2.0;
  CHECK_THROWS_AS(P.validate(), DomainError);
  P.s = 1.0;
  CHECK_THAT(P.hardy_sobolev_exponent(), WithinRel(3.0, 1e-15));
  CHECK_THAT(make_params(3, 2.0).sobolev_exponent(), WithinRel(6.0, 1e-15));
}

TEST_CASE("best constants", "[core][oracle]") {
  CHECK_THAT(hardy_constant(make_params(5, 3.0)), WithinRel(8.0 / 27.0, 1e-15));
  CHECK_THAT(critical_hardy_constant(2), WithinRel(0.25, 1e-15));
  CHECK_THAT(critical_hardy_constant(3), WithinRel(8.0 / 27.0, 1e-15));
  CHECK_THROWS_AS(hardy_constant(make_params(3, 3.0)), DomainError);

  // Independent high-precision evaluations.
  CHECK_THAT(sobolev_constant(make_params(3, 2.0)), WithinRel(5.47790408953133, 1e-13));
  CHECK_THAT(sobolev_constant(make_params(3, 2.0)), WithinRel(3.0 * std::pow(kPi / 2.0, 4.0 / 3.0), 1e-14));
  CHECK_THAT(bliss_constant(2.0, 4.0), WithinRel(0.903602003609845, 1e-13));
  CHECK_THAT(hardy_sobolev_constant(3, 1.0), WithinRel(2.89440501823307, 1e-13));
  // s = 0 reduces to the Sobolev constant.
  CHECK_THAT(hardy_sobolev_constant(3, 0.0), WithinRel(sobolev_constant(make_params(3, 2.0)), 1e-13));

  CHECK_THAT(tm_threshold(2), WithinRel(4.0 * kPi, 1e-15));
  CHECK_THAT(tm_threshold(3), WithinRel(3.0 * std::sqrt(4.0 * kPi), 1e-15));
}

TEST_CASE("logarithmic Bliss constants approach the critical Hardy constant", "[core]") {
  for (int N : {2, 3}) {
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= 10; ++k) {
      const double d = std::abs(bliss_log_constant(N, N + std::ldexp(1.0, -k)) - critical_hardy_constant(N));
      CHECK(d < prev);
      prev = d;
    }
    CHECK(prev < 1e-3);
  }
  CHECK_THROWS_AS(bliss_log_constant(2, 2.0), DomainError);
  CHECK_THROWS_AS(bliss_constant(2.0, 2.0), DomainError);
}

TEST_CASE("rank-one updates", "[core]") {
  Vec v(3);
  v << 2.0, -1.0, 2.0;
  v /= 3.0;
  for (double t : {-0.5, 0.3, 4.0}) {
    Mat A = Mat::Identity(3, 3) + t * v * v.transpose();
    CHECK_THAT(rank_one_det(v, t), WithinRel(A.determinant(), 1e-14));
    CHECK_THAT((rank_one_inverse(v, t) * A - Mat::Identity(3, 3)).cwiseAbs().maxCoeff(), WithinAbs(0.0, 1e-14));
  }
  CHECK_THROWS_AS(rank_one_inverse(v, -1.0), SingularMatrixError);
  Vec w(2);
  w << 1.0, 1.0;
  CHECK_THROWS_AS(rank_one_det(w, 1.0), DomainError);
}
