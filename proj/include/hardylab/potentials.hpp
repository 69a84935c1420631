#pragma once

#include <cmath>
#include <limits>
#include <utility>

#include "hardylab/core_math.hpp"

namespace hardylab {

// A point of the half-space in axisymmetric coordinates r = |x|, y > 0.
struct HalfSpacePoint {
  double r = 0.0;
  double y = 1.0;
};

inline double dminus2(HalfSpacePoint pt) { return pt.r * pt.r + (pt.y - 1.0) * (pt.y - 1.0); }
inline double dplus2(HalfSpacePoint pt) { return pt.r * pt.r + (pt.y + 1.0) * (pt.y + 1.0); }

class PotentialContext {
 public:
  explicit PotentialContext(Params P) : P_(P) {
    P_.validate();
    omega_ = sphere_area(P_.N);
    critical_ = P_.critical();
    if (critical_) {
      a_ = 0.0;
      coeff_ = std::pow(omega_, -1.0 / (P_.N - 1.0));
    } else {
      a_ = (P_.N - P_.p) / (P_.p - 1.0);
      coeff_ = (P_.p - 1.0) / (P_.N - P_.p) * std::pow(omega_, -1.0 / (P_.p - 1.0));
    }
  }
  PotentialContext(int N, double p) : PotentialContext(make_params(N, p)) {}

  const Params& params() const { return P_; }
  int N() const { return P_.N; }
  double p() const { return P_.p; }
  bool critical() const { return critical_; }
  double omega() const { return omega_; }
  // (N-p)/(p-1), zero in the critical case.
  double a() const { return a_; }
  // C(N,p) = ((p-1)/(N-p)) omega^{-1/(p-1)}; omega^{-1/(N-1)} when p = N.
  double coeff() const { return coeff_; }

 private:
  Params P_;
  double omega_ = 0.0;
  double a_ = 0.0;
  double coeff_ = 0.0;
  bool critical_ = false;
};

namespace detail {

inline void check_point(HalfSpacePoint pt) {
  require_domain(pt.r >= 0.0, "radius r must be nonnegative");
  require_domain(pt.y > 0.0, "point must lie in the open half-space");
}

inline double checked_dminus2(HalfSpacePoint pt) {
  check_point(pt);
  const double d2 = dminus2(pt);
  if (!(d2 > 0.0)) throw PoleError("evaluation at the pole (0, 1)");
  return d2;
}

// log X = -log(1 + 4y / d_-^2), exact near the boundary where d_+^2 - d_-^2 = 4y is small.
inline double log_X(HalfSpacePoint pt, double dm2) { return -std::log1p(4.0 * pt.y / dm2); }

}  // namespace detail

inline double X_ratio(HalfSpacePoint pt) {
  detail::check_point(pt);
  return dminus2(pt) / dplus2(pt);
}

// Reflected fundamental solution with pole at (0, 1).
inline double U(const PotentialContext& ctx, HalfSpacePoint pt) {
  const double dm2 = detail::checked_dminus2(pt);
  const double lx = detail::log_X(pt, dm2);
  if (ctx.critical()) return -0.5 * ctx.coeff() * lx;
  // d_-^{-a} - d_+^{-a} = d_-^{-a} (1 - X^{a/2})
  const double h = 0.5 * ctx.a();
  return ctx.coeff() * std::pow(dm2, -h) * -std::expm1(h * lx);
}

struct Gradient {
  double dr = 0.0;
  double dy = 0.0;
  double norm = 0.0;
};

inline Gradient grad_U(const PotentialContext& ctx, HalfSpacePoint pt) {
  const double dm2 = detail::checked_dminus2(pt);
  const double dp2 = dplus2(pt);
  const double k = ctx.critical() ? ctx.coeff() : std::pow(ctx.omega(), -1.0 / (ctx.p() - 1.0));
  const double e = -0.5 * ctx.a() - 1.0;
  const double m = std::pow(dm2, e);
  const double q = std::pow(dp2, e);
  Gradient g;
  g.dr = k * pt.r * (q - m);
  g.dy = k * (q * (pt.y + 1.0) - m * (pt.y - 1.0));
  g.norm = std::hypot(g.dr, g.dy);
  return g;
}

// -Delta_p U_p in closed form; exactly zero for p = 2 and p = N.
// Uses d_-^2 d_+^2 - (r^2 + y^2 - 1)^2 = 4 r^2, so the sign is that of (2 - p) off the axis.
inline double p_laplacian_U(const PotentialContext& ctx, HalfSpacePoint pt) {
  const double dm2 = detail::checked_dminus2(pt);
  if (ctx.critical() || ctx.p() == 2.0) return 0.0;
  const double N = ctx.N(), p = ctx.p();
  const double dp2 = dplus2(pt);
  const double g = grad_U(ctx, pt).norm;
  const double e = -0.5 * ctx.a() - 1.0;
  const double factor = (N - p) * (p - 2.0) / ((p - 1.0) * (p - 1.0) * std::pow(ctx.omega(), 2.0 / (p - 1.0)));
  const double bracket = -4.0 * (N + p - 2.0) * pt.r * pt.r / (dm2 * dp2);
  return factor * std::pow(g, p - 4.0) * U(ctx, pt) * std::pow(dm2, e) * std::pow(dp2, e) * bracket;
}

// The bracketed factor N - p + (N + p - 2) c^2 / (d_-^2 d_+^2) of the published closed form, kept for comparison.
inline double p_laplacian_U_published(const PotentialContext& ctx, HalfSpacePoint pt) {
  const double dm2 = detail::checked_dminus2(pt);
  if (ctx.critical() || ctx.p() == 2.0) return 0.0;
  const double N = ctx.N(), p = ctx.p();
  const double dp2 = dplus2(pt);
  const double g = grad_U(ctx, pt).norm;
  const double c = pt.r * pt.r + pt.y * pt.y - 1.0;
  const double e = -0.5 * ctx.a() - 1.0;
  const double factor = (N - p) * (p - 2.0) / ((p - 1.0) * (p - 1.0) * std::pow(ctx.omega(), 2.0 / (p - 1.0)));
  const double bracket = (N - p) + (N + p - 2.0) * c * c / (dm2 * dp2);
  return factor * std::pow(g, p - 4.0) * U(ctx, pt) * std::pow(dm2, e) * std::pow(dp2, e) * bracket;
}

// Improved Hardy potential V_p (p < N).
inline double V_p(const PotentialContext& ctx, HalfSpacePoint pt) {
  require_domain(!ctx.critical(), "V_p needs p < N; use V_N_weight");
  const double dm2 = detail::checked_dminus2(pt);
  const double dp2 = dplus2(pt);
  const double N = ctx.N(), p = ctx.p();
  const double lx = detail::log_X(pt, dm2);
  const double h = 0.5 * ctx.a();
  const double xh = std::exp(h * lx);
  const double num = 1.0 + std::exp((N - 1.0) / (p - 1.0) * lx) - 2.0 * xh * (pt.r * pt.r + pt.y * pt.y - 1.0) / dp2;
  const double den = std::expm1(h * lx);
  return num / (den * den);
}

// Critical potential V_N; the inequality weight is V_N^{N/2}.
inline double V_N_weight(int N, HalfSpacePoint pt) {
  require_domain(N >= 2, "V_N needs N >= 2");
  const double dm2 = detail::checked_dminus2(pt);
  const double dp2 = dplus2(pt);
  const double L = -0.5 * detail::log_X(pt, dm2);
  return 1.0 / (dm2 * (dp2 / 4.0) * L * L);
}

// V_p^{p/2} d_-^{-p} for p < N and V_N^{N/2} for p = N.
inline double hardy_weight(const PotentialContext& ctx, HalfSpacePoint pt) {
  if (ctx.critical()) return std::pow(V_N_weight(ctx.N(), pt), 0.5 * ctx.N());
  const double p = ctx.p();
  return std::pow(V_p(ctx, pt), 0.5 * p) * std::pow(dminus2(pt), -0.5 * p);
}

inline double green_ball(const PotentialContext& ctx, double t) {
  require_domain(t > 0.0 && t <= 1.0, "green_ball needs t in (0, 1]");
  if (ctx.critical()) return -ctx.coeff() * std::log(t);
  return ctx.coeff() * std::expm1(-ctx.a() * std::log(t));
}

inline double green_ball_inverse(const PotentialContext& ctx, double s) {
  require_domain(s >= 0.0, "green_ball_inverse needs s >= 0");
  if (ctx.critical()) return std::exp(-s / ctx.coeff());
  return std::exp(-std::log1p(s / ctx.coeff()) / ctx.a());
}

// d/dt G_B(t)
inline double green_ball_derivative(const PotentialContext& ctx, double t) {
  require_domain(t > 0.0 && t <= 1.0, "green_ball needs t in (0, 1]");
  if (ctx.critical()) return -ctx.coeff() / t;
  return -ctx.coeff() * ctx.a() * std::pow(t, -ctx.a() - 1.0);
}

inline double green_rn(const PotentialContext& ctx, double r) {
  require_domain(!ctx.critical(), "green_rn needs p < N");
  require_domain(r > 0.0, "green_rn needs r > 0");
  return ctx.coeff() * std::pow(r, -ctx.a());
}

inline double green_rn_inverse(const PotentialContext& ctx, double s) {
  require_domain(!ctx.critical(), "green_rn needs p < N");
  require_domain(s > 0.0, "green_rn_inverse needs s > 0");
  return std::pow(s / ctx.coeff(), -1.0 / ctx.a());
}

inline double green_rn_derivative(const PotentialContext& ctx, double r) {
  require_domain(!ctx.critical(), "green_rn needs p < N");
  require_domain(r > 0.0, "green_rn needs r > 0");
  return -ctx.coeff() * ctx.a() * std::pow(r, -ctx.a() - 1.0);
}

// Radius h with U(pt) = G_{R^N}(h).
inline double h_map(const PotentialContext& ctx, HalfSpacePoint pt) {
  require_domain(!ctx.critical(), "h_map needs p < N");
  const double dm2 = detail::checked_dminus2(pt);
  const double h = 0.5 * ctx.a();
  const double base = std::pow(dm2, -h) * -std::expm1(h * detail::log_X(pt, dm2));
  return std::pow(base, -1.0 / ctx.a());
}

// (psi_2, G) for p = 2: psi_2 = d_+^{-(N-2)} and G = omega^{-1}/(N-2) [d_-^{-(N-2)} - psi_2].
inline std::pair<double, double> psi2_and_G2(int N, HalfSpacePoint pt) {
  require_domain(N >= 3, "psi2_and_G2 needs N >= 3");
  const double dm2 = detail::checked_dminus2(pt);
  const double dp2 = dplus2(pt);
  const double h = 0.5 * (N - 2.0);
  const double psi = std::pow(dp2, -h);
  const double G = std::pow(dm2, -h) * -std::expm1(h * detail::log_X(pt, dm2)) / ((N - 2.0) * sphere_area(N));
  return {psi, G};
}

// Radius delta_2 with [U >= M] inside the ball of radius delta_2 about the pole.
inline double superlevel_outer_radius(const PotentialContext& ctx, double M) {
  require_domain(M > 0.0, "level must be positive");
  if (ctx.critical()) return 2.0 / std::expm1(M / ctx.coeff());
  return std::pow(ctx.coeff() / M, 1.0 / ctx.a());
}

}  // namespace hardylab
