#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include <Eigen/Dense>
#include <boost/math/special_functions/gamma.hpp>

#include "hardylab/errors.hpp"

namespace hardylab {

inline constexpr int kMaxDim = 16;

// Fixed-capacity dynamic vectors: no heap traffic in inner loops.
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;

inline constexpr double kPi = std::numbers::pi;

struct Params {
  int N = 2;
  double p = 2.0;
  std::optional<double> s;
  std::optional<double> q;

  void validate() const {
    require_domain(N >= 2 && N <= kMaxDim, "dimension N must lie in [2, " + std::to_string(kMaxDim) + "]");
    require_domain(p > 1.0 && p <= N, "exponent p must lie in (1, N]");
    if (s) require_domain(*s >= 0.0 && *s < p, "Hardy-Sobolev exponent s must lie in [0, p)");
    if (q) require_domain(*q > p, "Bliss exponent q must exceed p");
  }

  bool critical() const { return p == static_cast<double>(N); }

  // p* = Np/(N-p)
  double sobolev_exponent() const {
    require_domain(p < N, "p* needs p < N");
    return N * p / (N - p);
  }

  // p*(s) = p(N-s)/(N-p)
  double hardy_sobolev_exponent() const {
    require_domain(p < N, "p*(s) needs p < N");
    const double sv = s.value_or(0.0);
    return p * (N - sv) / (N - p);
  }
};

inline Params make_params(int N, double p) {
  Params P{N, p, std::nullopt, std::nullopt};
  P.validate();
  return P;
}

inline double gamma(double x) {
  require_domain(x > 0.0 && std::isfinite(x), "gamma needs x > 0");
  return boost::math::tgamma(x);
}

inline double log_gamma(double x) {
  require_domain(x > 0.0 && std::isfinite(x), "log_gamma needs x > 0");
  return boost::math::lgamma(x);
}

// omega_{N-1}: area of the unit sphere in R^N.
inline double sphere_area(int N) {
  require_domain(N >= 1, "sphere_area needs N >= 1");
  return 2.0 * std::pow(kPi, 0.5 * N) / gamma(0.5 * N);
}

inline double unit_ball_volume(int N) { return sphere_area(N) / N; }

inline double hardy_constant(const Params& P) {
  P.validate();
  require_domain(P.p < P.N, "hardy_constant needs p < N");
  return std::pow((P.N - P.p) / P.p, P.p);
}

inline double critical_hardy_constant(int N) {
  require_domain(N >= 2, "critical_hardy_constant needs N >= 2");
  return std::pow((N - 1.0) / N, N);
}

// Best constant S_{N,p} of the Sobolev inequality on R^N.
inline double sobolev_constant(const Params& P) {
  P.validate();
  require_domain(P.p < P.N, "sobolev_constant needs p < N");
  require_domain(P.p >= 1.0 + 1e-9, "sobolev_constant needs p > 1");
  const double N = P.N, p = P.p;
  const double lg = log_gamma(N / p) + log_gamma(1.0 + N - N / p) - log_gamma(1.0 + N / 2.0) - log_gamma(N);
  return std::pow(kPi, p / 2.0) * N * std::pow((N - p) / (p - 1.0), p - 1.0) * std::exp(lg * p / N);
}

// Best constant of the Hardy-Sobolev inequality on R^N for p = 2 and weight |z|^{-s}.
inline double hardy_sobolev_constant(int N, double s) {
  require_domain(N >= 3, "hardy_sobolev_constant needs N >= 3");
  require_domain(s >= 0.0 && s < 2.0, "hardy_sobolev_constant needs s in [0, 2)");
  const double k = (N - s) / (2.0 - s);
  const double lg = std::log(sphere_area(N) / (2.0 - s)) + 2.0 * log_gamma(k) - log_gamma(2.0 * k);
  return (N - 2.0) * (N - s) * std::exp(lg / k);
}

// Sharp constant C(p,q) of the one-dimensional Bliss inequality.
inline double bliss_constant(double p, double q) {
  require_domain(p > 1.0, "bliss_constant needs p > 1");
  require_domain(q - p >= 1e-9, "bliss_constant needs q > p");
  const double d = q - p;
  const double lg = log_gamma(q / d) + log_gamma(p * (q - 1.0) / d) - log_gamma(p * q / d);
  return std::exp(lg * (1.0 / p - 1.0 / q)) * std::pow(q * (p - 1.0) / p, 1.0 / q);
}

// Constant C(q) of the logarithmic Bliss inequality on the unit ball.
inline double bliss_log_constant(int N, double q) {
  require_domain(N >= 2, "bliss_log_constant needs N >= 2");
  require_domain(q - N >= 1e-9, "bliss_log_constant needs q > N");
  const double d = q - N;
  const double e = 1.0 - N / q;
  const double lg = log_gamma(q / d) + log_gamma(N * (q - 1.0) / d) - log_gamma(N * q / d);
  return std::exp(e * (std::log(sphere_area(N)) + lg)) * std::pow(q * (N - 1.0) / N, N / q);
}

// Sharp Trudinger-Moser exponent N omega_{N-1}^{1/(N-1)}.
inline double tm_threshold(int N) {
  require_domain(N >= 2, "tm_threshold needs N >= 2");
  return N * std::pow(sphere_area(N), 1.0 / (N - 1.0));
}

inline void require_unit(const Vec& v) {
  require_domain(std::abs(v.norm() - 1.0) <= 1e-12, "vector must have unit length");
}

// det(I + t v v^T) for unit v.
inline double rank_one_det(const Vec& v, double t) {
  require_unit(v);
  return 1.0 + t;
}

// (I + t v v^T)^{-1} for unit v.
inline Mat rank_one_inverse(const Vec& v, double t) {
  require_unit(v);
  if (t == -1.0) throw SingularMatrixError("I + t v v^T is singular at t = -1");
  const auto n = v.size();
  Mat I = Mat::Identity(n, n);
  return I - (t / (t + 1.0)) * (v * v.transpose());
}

}  // namespace hardylab
