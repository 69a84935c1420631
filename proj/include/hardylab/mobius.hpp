#pragma once

#include <cmath>
#include <functional>
#include <utility>
#include <variant>
#include <vector>

#include "hardylab/core_math.hpp"

namespace hardylab {

inline constexpr double kPoleThreshold = 1e-300;

struct Translation {
  Vec b;
};

struct Scaling {
  double lambda = 1.0;
};

struct Orthogonal {
  Mat R;
  double det = 1.0;
};

struct Inversion {};

using ElementaryMap = std::variant<Translation, Scaling, Orthogonal, Inversion>;

inline Translation translation(Vec b) { return Translation{std::move(b)}; }

inline Scaling scaling(double lambda) {
  require_domain(lambda > 0.0 && std::isfinite(lambda), "scaling factor must be positive");
  return Scaling{lambda};
}

inline Orthogonal orthogonal(Mat R) {
  require_domain(R.rows() == R.cols(), "orthogonal map needs a square matrix");
  const Mat I = Mat::Identity(R.rows(), R.cols());
  require_domain((R.transpose() * R - I).cwiseAbs().maxCoeff() <= 1e-12, "matrix is not orthogonal");
  const double d = R.determinant();
  return Orthogonal{std::move(R), d < 0.0 ? -1.0 : 1.0};
}

// diag(1, ..., 1, -1)
inline Orthogonal reflection_last(int N) {
  Mat R = Mat::Identity(N, N);
  R(N - 1, N - 1) = -1.0;
  return orthogonal(std::move(R));
}

inline Vec unit_vector(int N, int i) {
  Vec e = Vec::Zero(N);
  e(i) = 1.0;
  return e;
}

// Composition of elementary maps; the first list entry acts first.
class MobiusMap {
 public:
  explicit MobiusMap(int N, std::vector<ElementaryMap> maps = {}) : N_(N), maps_(std::move(maps)) {
    require_domain(N >= 1 && N <= kMaxDim, "Mobius map dimension out of range");
    for (const auto& m : maps_) check(m);
  }

  int dim() const { return N_; }
  const std::vector<ElementaryMap>& maps() const { return maps_; }
  bool is_identity() const { return maps_.empty(); }

  MobiusMap then(ElementaryMap m) const {
    auto out = maps_;
    out.push_back(std::move(m));
    return MobiusMap(N_, std::move(out));
  }

  MobiusMap inverse() const {
    std::vector<ElementaryMap> out;
    out.reserve(maps_.size());
    for (auto it = maps_.rbegin(); it != maps_.rend(); ++it) {
      out.push_back(std::visit(
          [](const auto& m) -> ElementaryMap {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, Translation>) return Translation{-m.b};
            else if constexpr (std::is_same_v<T, Scaling>) return Scaling{1.0 / m.lambda};
            else if constexpr (std::is_same_v<T, Orthogonal>) return Orthogonal{m.R.transpose(), m.det};
            else return Inversion{};
          },
          *it));
    }
    return MobiusMap(N_, std::move(out));
  }

 private:
  void check(const ElementaryMap& m) const {
    if (auto t = std::get_if<Translation>(&m)) require_domain(t->b.size() == N_, "translation dimension mismatch");
    if (auto s = std::get_if<Scaling>(&m)) require_domain(s->lambda > 0.0, "scaling factor must be positive");
    if (auto o = std::get_if<Orthogonal>(&m)) require_domain(o->R.rows() == N_, "orthogonal dimension mismatch");
  }

  int N_;
  std::vector<ElementaryMap> maps_;
};

// outer o inner: inner acts first.
inline MobiusMap compose(const MobiusMap& outer, const MobiusMap& inner) {
  require_domain(outer.dim() == inner.dim(), "composition dimension mismatch");
  auto maps = inner.maps();
  maps.insert(maps.end(), outer.maps().begin(), outer.maps().end());
  return MobiusMap(outer.dim(), std::move(maps));
}

namespace detail {

inline double checked_norm(const Vec& w) {
  const double n = w.stableNorm();
  if (n < kPoleThreshold) throw PoleError("inversion evaluated at the origin");
  return n;
}

inline Vec apply_one(const ElementaryMap& m, const Vec& w) {
  return std::visit(
      [&](const auto& e) -> Vec {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, Translation>) return w + e.b;
        else if constexpr (std::is_same_v<T, Scaling>) return e.lambda * w;
        else if constexpr (std::is_same_v<T, Orthogonal>) return e.R * w;
        else {
          const double n = checked_norm(w);
          return (w / n) / n;
        }
      },
      m);
}

}  // namespace detail

inline Vec apply(const MobiusMap& M, const Vec& z) {
  require_domain(z.size() == M.dim(), "point dimension mismatch");
  Vec w = z;
  for (const auto& m : M.maps()) w = detail::apply_one(m, w);
  return w;
}

// Image point together with the Jacobian determinant, in one pass.
inline std::pair<Vec, double> apply_with_det(const MobiusMap& M, const Vec& z) {
  require_domain(z.size() == M.dim(), "point dimension mismatch");
  const int N = M.dim();
  Vec w = z;
  double det = 1.0;
  for (const auto& m : M.maps()) {
    if (auto s = std::get_if<Scaling>(&m)) det *= std::pow(s->lambda, N);
    else if (auto o = std::get_if<Orthogonal>(&m)) det *= o->det;
    else if (std::holds_alternative<Inversion>(m)) det *= -std::pow(detail::checked_norm(w), -2.0 * N);
    w = detail::apply_one(m, w);
  }
  return {w, det};
}

inline double jacobian_det(const MobiusMap& M, const Vec& z) { return apply_with_det(M, z).second; }

inline Mat differential(const MobiusMap& M, const Vec& z) {
  require_domain(z.size() == M.dim(), "point dimension mismatch");
  const int N = M.dim();
  Mat D = Mat::Identity(N, N);
  Vec w = z;
  for (const auto& m : M.maps()) {
    if (auto s = std::get_if<Scaling>(&m)) D = s->lambda * D;
    else if (auto o = std::get_if<Orthogonal>(&m)) D = o->R * D;
    else if (std::holds_alternative<Inversion>(m)) {
      const double n = detail::checked_norm(w);
      const Vec u = w / n;
      Mat J = Mat::Identity(N, N) - 2.0 * (u * u.transpose());
      D = (J / (n * n)) * D;
    }
    w = detail::apply_one(m, w);
  }
  return D;
}

using ScalarField = std::function<double(const Vec&)>;

// (M^# f)(z) = |det M'(z)|^{(N-p)/(Np)} f(M(z))
inline ScalarField pushforward(const MobiusMap& M, ScalarField f, double p) {
  const int N = M.dim();
  require_domain(p > 1.0, "pushforward needs p > 1");
  if (p == static_cast<double>(N)) return [M, f = std::move(f)](const Vec& z) { return f(apply(M, z)); };
  const double e = (N - p) / (N * p);
  return [M, f = std::move(f), e](const Vec& z) {
    const auto [w, det] = apply_with_det(M, z);
    return std::pow(std::abs(det), e) * f(w);
  };
}

// B(x, y) = (2x, 1 - |x|^2 - y^2) / ((1 + y)^2 + |x|^2)
inline Vec cayley(const Vec& z) {
  const auto N = z.size();
  require_domain(N >= 2, "cayley needs N >= 2");
  const double y = z(N - 1);
  const double x2 = z.head(N - 1).squaredNorm();
  const double den = (1.0 + y) * (1.0 + y) + x2;
  if (den < kPoleThreshold) throw PoleError("cayley map evaluated at its pole (0, -1)");
  Vec out(N);
  out.head(N - 1) = 2.0 * z.head(N - 1) / den;
  out(N - 1) = (1.0 - x2 - y * y) / den;
  return out;
}

inline double cayley_jacobian_det(const Vec& z) {
  const auto N = z.size();
  require_domain(N >= 2, "cayley needs N >= 2");
  const double y = z(N - 1);
  const double den = (1.0 + y) * (1.0 + y) + z.head(N - 1).squaredNorm();
  if (den < kPoleThreshold) throw PoleError("cayley map evaluated at its pole (0, -1)");
  return -std::pow(2.0 / den, static_cast<double>(N));
}

// R o J o T_{e_N} o S_2 o J o T_{-e_N}
inline MobiusMap cayley_as_composition(int N) {
  require_domain(N >= 2, "cayley needs N >= 2");
  const Vec e = unit_vector(N, N - 1);
  return MobiusMap(N, {translation(-e), Inversion{}, scaling(2.0), translation(e), Inversion{}, reflection_last(N)});
}

}  // namespace hardylab
