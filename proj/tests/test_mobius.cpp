#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "hardylab/mobius.hpp"

using namespace hardylab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

Vec random_point(std::mt19937_64& g, int N, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Vec z(N);
  for (int i = 0; i < N; ++i) z(i) = u(g);
  return z;
}

Mat rotation(int N, double angle) {
  Mat R = Mat::Identity(N, N);
  R(0, 0) = std::cos(angle);
  R(0, 1) = -std::sin(angle);
  R(1, 0) = std::sin(angle);
  R(1, 1) = std::cos(angle);
  return R;
}

}  // namespace

TEST_CASE("elementary maps and inverses", "[mobius]") {
  std::mt19937_64 g(7);
  for (int N : {2, 3, 5}) {
    Vec b = random_point(g, N, -1.0, 1.0);
    const MobiusMap M(N, {translation(b), Inversion{}, scaling(2.5), orthogonal(rotation(N, 0.7)), Inversion{}});
    for (int i = 0; i < 20; ++i) {
      const Vec z = random_point(g, N, -2.0, 2.0);
      CHECK((apply(M.inverse(), apply(M, z)) - z).norm() < 1e-12);
      CHECK((apply(compose(M.inverse(), M), z) - z).norm() < 1e-12);
    }
  }
}

TEST_CASE("Jacobian determinant matches the differential", "[mobius]") {
  std::mt19937_64 g(11);
  for (int N : {2, 3, 4}) {
    const MobiusMap M(N, {translation(unit_vector(N, 0)), Inversion{}, scaling(0.3), reflection_last(N)});
    for (int i = 0; i < 20; ++i) {
      const Vec z = random_point(g, N, 0.2, 2.0);
      const Mat D = differential(M, z);
      CHECK_THAT(jacobian_det(M, z), WithinRel(D.determinant(), 1e-12));
      // Conformality: D^T D is a multiple of the identity.
      const Mat G = D.transpose() * D;
      const double c = G(0, 0);
      CHECK((G - c * Mat::Identity(N, N)).cwiseAbs().maxCoeff() < 1e-12 * c);
      // Central differences.
      const double h = 1e-6;
      for (int j = 0; j < N; ++j) {
        const Vec e = unit_vector(N, j);
        const Vec col = (apply(M, z + h * e) - apply(M, z - h * e)) / (2.0 * h);
        CHECK((col - D.col(j)).norm() < 1e-7 * (1.0 + D.col(j).norm()));
      }
    }
  }
}

TEST_CASE("inversion at the origin is a pole", "[mobius]") {
  const MobiusMap J(3, {Inversion{}});
  CHECK_THROWS_AS(apply(J, Vec::Zero(3)), PoleError);
  CHECK_THROWS_AS(scaling(-1.0), DomainError);
  Mat A = Mat::Identity(2, 2);
  A(0, 1) = 0.5;
  CHECK_THROWS_AS(orthogonal(A), DomainError);
  CHECK_THROWS_AS(apply(J, Vec::Zero(2)), DomainError);
}

TEST_CASE("Cayley map", "[mobius]") {
  std::mt19937_64 g(3);
  for (int N : {2, 3, 4}) {
    const auto B = cayley_as_composition(N);
    for (int i = 0; i < 200; ++i) {
      Vec z = random_point(g, N, -3.0, 3.0);
      z(N - 1) = std::abs(z(N - 1)) + 1e-3;
      const Vec w = cayley(z);
      CHECK(w.norm() < 1.0);
      CHECK((cayley(w) - z).norm() < 1e-12 * (1.0 + z.norm()));
      CHECK((apply(B, z) - w).norm() < 1e-13);
      CHECK_THAT(cayley_jacobian_det(z), WithinRel(jacobian_det(B, z), 1e-12));
      CHECK_THAT(cayley_jacobian_det(z), WithinRel(differential(B, z).determinant(), 1e-11));
    }
    // Boundary to sphere; the point at (0, 1) goes to the centre.
    Vec x = random_point(g, N, -2.0, 2.0);
    x(N - 1) = 0.0;
    CHECK_THAT(cayley(x).norm(), WithinAbs(1.0, 1e-14));
    CHECK(cayley(unit_vector(N, N - 1)).norm() < 1e-15);
    CHECK_THROWS_AS(cayley(-unit_vector(N, N - 1)), PoleError);
  }
}
