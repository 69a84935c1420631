#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include <boost/math/special_functions/fpclassify.hpp>
#include <boost/math/interpolators/pchip.hpp>

#include "hardylab/core_math.hpp"
#include "hardylab/potentials.hpp"
#include "hardylab/quadrature.hpp"

namespace hardylab {

using ScalarFn = std::function<double(double)>;

// Piecewise-smooth function of one variable; vanishes identically beyond support_end.
struct RadialProfile {
  ScalarFn value;
  ScalarFn derivative;
  double support_end = kInf;
  std::vector<double> breakpoints;

  double operator()(double t) const { return t >= support_end ? 0.0 : value(t); }
  double d(double t) const { return t >= support_end ? 0.0 : derivative(t); }

  // Breakpoints and the support end inside (a, b).
  std::vector<double> knots(double a, double b) const {
    std::vector<double> out;
    for (double t : breakpoints)
      if (t > a && t < b) out.push_back(t);
    if (support_end > a && support_end < b) out.push_back(support_end);
    return out;
  }
};

inline RadialProfile zero_profile(double support_end = kInf) {
  return RadialProfile{[](double) { return 0.0; }, [](double) { return 0.0; }, support_end, {}};
}

// u = profile(U_p) on the half-space; profile vanishes at level 0.
struct SymmetricFunction {
  PotentialContext ctx;
  ScalarFn value;
  ScalarFn slope;
  // Non-smooth levels of the profile.
  std::vector<double> level_breaks;
  // The profile vanishes for levels at or below this one.
  double support_level = 0.0;
  // Local orders at the pole of the energy density and of the Hardy-side integrand.
  PoleBehavior energy_pole{0.0, 0.0, 2.0};
  PoleBehavior hardy_pole{0.0, 0.0, 2.0};
  std::optional<RadialProfile> ball_source;
  std::optional<RadialProfile> rn_source;

  double at_level(double s) const { return s <= support_level ? 0.0 : value(s); }
  double slope_at_level(double s) const { return s <= support_level ? 0.0 : slope(s); }
  double operator()(HalfSpacePoint pt) const { return at_level(U(ctx, pt)); }
  double grad_norm(HalfSpacePoint pt) const { return std::abs(slope_at_level(U(ctx, pt))) * grad_U(ctx, pt).norm; }
};

namespace detail {

inline PoleBehavior hardy_pole_for(const PotentialContext& ctx) {
  if (ctx.critical()) return PoleBehavior{static_cast<double>(ctx.N()), -static_cast<double>(ctx.N()), 2.0};
  return PoleBehavior{ctx.p(), 0.0, 2.0};
}

inline void require_zero_trace(const RadialProfile& v, double end) {
  if (v.support_end <= end) return;
  if (std::abs(v.value(end)) > 1e-12) throw InvalidProfileError("profile must vanish at the boundary");
}

}  // namespace detail

inline SymmetricFunction transplant_from_ball(const PotentialContext& ctx, const RadialProfile& v) {
  detail::require_zero_trace(v, 1.0);
  SymmetricFunction u{ctx, {}, {}, {}, 0.0, {}, detail::hardy_pole_for(ctx), v, std::nullopt};
  u.value = [ctx, v](double s) { return v(green_ball_inverse(ctx, s)); };
  u.slope = [ctx, v](double s) {
    const double t = green_ball_inverse(ctx, s);
    return v.d(t) / green_ball_derivative(ctx, t);
  };
  for (double t : v.knots(0.0, 1.0)) u.level_breaks.push_back(green_ball(ctx, t));
  if (v.support_end < 1.0) u.support_level = green_ball(ctx, v.support_end);
  std::sort(u.level_breaks.begin(), u.level_breaks.end());
  return u;
}

inline SymmetricFunction transplant_from_rn(const PotentialContext& ctx, const RadialProfile& w) {
  require_domain(!ctx.critical(), "transplant_from_rn needs p < N");
  SymmetricFunction u{ctx, {}, {}, {}, 0.0, {}, detail::hardy_pole_for(ctx), std::nullopt, w};
  u.value = [ctx, w](double s) { return w(green_rn_inverse(ctx, s)); };
  u.slope = [ctx, w](double s) {
    const double r = green_rn_inverse(ctx, s);
    return w.d(r) / green_rn_derivative(ctx, r);
  };
  for (double r : w.knots(0.0, kInf)) u.level_breaks.push_back(green_rn(ctx, r));
  if (std::isfinite(w.support_end)) u.support_level = green_rn(ctx, w.support_end);
  std::sort(u.level_breaks.begin(), u.level_breaks.end());
  return u;
}

// Radial function on B_R with matching Green levels: G_{B_1}(|y|) = G_{B_R}(|z|).
inline RadialProfile classical_transplant_ball_to_ball(const Params& P, double R, const RadialProfile& v) {
  P.validate();
  require_domain(R > 0.0, "radius must be positive");
  detail::require_zero_trace(v, 1.0);
  std::vector<double> br;
  if (P.critical()) {
    for (double t : v.knots(0.0, 1.0)) br.push_back(R * t);
    return RadialProfile{[v, R](double z) { return v(z / R); }, [v, R](double z) { return v.d(z / R) / R; },
                         R * std::min(v.support_end, 1.0), br};
  }
  const double a = (P.N - P.p) / (P.p - 1.0);
  const double Ra = std::pow(R, -a);
  auto y_of = [a, Ra](double z) { return std::pow(std::pow(z, -a) - Ra + 1.0, -1.0 / a); };
  for (double t : v.knots(0.0, 1.0)) br.push_back(std::pow(std::pow(t, -a) - 1.0 + Ra, -1.0 / a));
  const double end = v.support_end < 1.0 ? std::pow(std::pow(v.support_end, -a) - 1.0 + Ra, -1.0 / a) : R;
  return RadialProfile{
      [v, y_of](double z) { return v(y_of(z)); },
      [v, a, Ra](double z) {
        const double base = std::pow(z, -a) - Ra + 1.0;
        return v.d(std::pow(base, -1.0 / a)) * std::pow(base, -1.0 / a - 1.0) * std::pow(z, -a - 1.0);
      },
      end, br};
}

// v(t) = u(r) with t = omega^{-1/(N-1)} log(R/r).
inline RadialProfile moser_transform(int N, double R, const RadialProfile& u) {
  require_domain(N >= 2 && R > 0.0, "moser_transform needs N >= 2 and R > 0");
  detail::require_zero_trace(u, R);
  const double c = std::pow(sphere_area(N), 1.0 / (N - 1.0));
  std::vector<double> br;
  for (double r : u.knots(0.0, R)) br.push_back(std::log(R / r) / c);
  std::sort(br.begin(), br.end());
  RadialProfile v{[u, R, c](double t) { return u(R * std::exp(-c * t)); },
                  [u, R, c](double t) {
                    const double r = R * std::exp(-c * t);
                    return -c * r * u.d(r);
                  },
                  kInf, br};
  if (u.support_end < R) v.breakpoints.push_back(std::log(R / u.support_end) / c);
  std::sort(v.breakpoints.begin(), v.breakpoints.end());
  return v;
}

inline RadialProfile moser_inverse(int N, double R, const RadialProfile& v) {
  require_domain(N >= 2 && R > 0.0, "moser_inverse needs N >= 2 and R > 0");
  const double c = std::pow(sphere_area(N), 1.0 / (N - 1.0));
  std::vector<double> br;
  for (double t : v.knots(0.0, kInf)) br.push_back(R * std::exp(-c * t));
  std::sort(br.begin(), br.end());
  return RadialProfile{[v, R, c](double r) { return v(std::log(R / r) / c); },
                       [v, R, c](double r) { return -v.d(std::log(R / r) / c) / (c * r); }, R, br};
}

// v(z) = u(r) with G_{B_R}(r) = z for p < N.
inline RadialProfile moser_transform_subcritical(const Params& P, double R, const RadialProfile& u) {
  P.validate();
  require_domain(!P.critical(), "subcritical Moser transform needs p < N");
  detail::require_zero_trace(u, R);
  const PotentialContext ctx(P);
  const double a = ctx.a(), C = ctx.coeff(), Ra = std::pow(R, -a);
  auto r_of = [a, C, Ra](double z) { return std::pow(z / C + Ra, -1.0 / a); };
  std::vector<double> br;
  for (double r : u.knots(0.0, R)) br.push_back(C * (std::pow(r, -a) - Ra));
  std::sort(br.begin(), br.end());
  return RadialProfile{[u, r_of](double z) { return u(r_of(z)); },
                       [u, a, C, Ra](double z) {
                         const double base = z / C + Ra;
                         return u.d(std::pow(base, -1.0 / a)) * (-1.0 / (a * C)) * std::pow(base, -1.0 / a - 1.0);
                       },
                       kInf, br};
}

// u on B_R^N to v on B_R^m with G_{B_R^N}(|y|) = G_{B_R^m}(|z|) for the N-Laplacian.
inline RadialProfile dimension_transform(int N, int m, double R, const RadialProfile& u) {
  require_domain(N >= 2 && m > N, "dimension_transform needs m > N >= 2");
  require_domain(R > 0.0, "radius must be positive");
  detail::require_zero_trace(u, R);
  const double cN = std::pow(sphere_area(N), 1.0 / (N - 1.0));
  const double wm = std::pow(sphere_area(m), -1.0 / (N - 1.0));
  const double b = (m - N) / (N - 1.0);
  const double Rb = std::pow(R, -b);
  const double Cm = (N - 1.0) / (m - N) * wm;
  auto y_of = [=](double z) { return R * std::exp(-cN * Cm * (std::pow(z, -b) - Rb)); };
  std::vector<double> br;
  for (double y : u.knots(0.0, R)) br.push_back(std::pow(std::log(R / y) / (cN * Cm) + Rb, -1.0 / b));
  std::sort(br.begin(), br.end());
  return RadialProfile{[u, y_of](double z) { return u(y_of(z)); },
                       [=](double z) {
                         const double y = y_of(z);
                         return u.d(y) * y * cN * wm * std::pow(z, -b - 1.0);
                       },
                       R, br};
}

// u(|y|) = w(|z|) on B_1 with omega^{-1/(p-1)} log(1/|y|) = G_{R^N}(|z|).
inline RadialProfile weighted_transform(const Params& P, const RadialProfile& w) {
  P.validate();
  require_domain(!P.critical(), "weighted_transform needs p < N");
  const double a = (P.N - P.p) / (P.p - 1.0);
  auto z_of = [a](double y) { return std::pow(a * std::log(1.0 / y), -1.0 / a); };
  std::vector<double> br;
  for (double z : w.knots(0.0, kInf)) br.push_back(std::exp(-std::pow(z, -a) / a));
  std::sort(br.begin(), br.end());
  return RadialProfile{[w, z_of](double y) { return y >= 1.0 ? 0.0 : w(z_of(y)); },
                       [w, a, z_of](double y) {
                         if (y >= 1.0) return 0.0;
                         const double L = a * std::log(1.0 / y);
                         return w.d(z_of(y)) * std::pow(L, -1.0 / a - 1.0) / y;
                       },
                       1.0, br};
}

// omega int_0^end |v'|^p t^{N-1} dt
inline IntegralResult radial_energy_ball(int N, double p, const RadialProfile& v, const QuadratureSpec& spec,
                                         double end = 1.0) {
  Interval1dOptions o;
  o.breakpoints = v.knots(0.0, end);
  auto r = integrate_1d([&](double t) { return std::pow(std::abs(v.d(t)), p) * std::pow(t, N - 1); }, 0.0,
                        std::min(end, v.support_end), spec, o);
  const double w = sphere_area(N);
  r.value *= w;
  r.error_estimate *= w;
  return r;
}

inline IntegralResult radial_energy_rn(int N, double p, const RadialProfile& w, const QuadratureSpec& spec) {
  return radial_energy_ball(N, p, w, spec, kInf);
}

// int_0^inf |v'|^p dt
inline IntegralResult line_energy(double p, const RadialProfile& v, const QuadratureSpec& spec) {
  Interval1dOptions o;
  o.breakpoints = v.knots(0.0, kInf);
  return integrate_1d([&](double t) { return std::pow(std::abs(v.d(t)), p); }, 0.0, v.support_end, spec, o);
}

// omega int_0^1 |u'|^p t^{p-1} dt: the |y|^{p-N}-weighted energy of a radial function on B_1.
inline IntegralResult weighted_radial_energy(int N, double p, const RadialProfile& u, const QuadratureSpec& spec) {
  Interval1dOptions o;
  o.breakpoints = u.knots(0.0, 1.0);
  auto r = integrate_1d([&](double t) { return std::pow(std::abs(u.d(t)), p) * std::pow(t, p - 1.0); }, 0.0,
                        std::min(1.0, u.support_end), spec, o);
  const double w = sphere_area(N);
  r.value *= w;
  r.error_estimate *= w;
  return r;
}

// F_p tabulated on log-spaced levels, monotone cubic in (log s, log|F|), power law beyond the top level.
class FpTable {
 public:
  FpTable(const PotentialContext& ctx, const QuadratureSpec& spec, int levels = 64, double h_min = 1e-3,
          double h_max = 1e5)
      : ctx_(ctx) {
    if (ctx.critical() || ctx.p() == 2.0) return;
    require_domain(levels >= 4, "F_p table needs at least 4 levels");
    sign_ = ctx.p() > 2.0 ? -1.0 : 1.0;
    decay_ = (ctx.N() + ctx.p() - 2.0) / (ctx.N() - ctx.p());
    std::vector<double> xs, ys;
    for (int i = 0; i < levels; ++i) {
      const double h = h_max * std::pow(h_min / h_max, static_cast<double>(i) / (levels - 1));
      const double s = green_rn(ctx, h);
      const auto r = superlevel_integral(ctx, s, spec);
      converged_ = converged_ && r.converged;
      max_rel_error_ = std::max(max_rel_error_, r.error_estimate / std::abs(r.value));
      xs.push_back(std::log(s));
      ys.push_back(std::log(std::abs(r.value)));
    }
    lo_ = xs.front();
    hi_ = xs.back();
    f_lo_ = sign_ * std::exp(ys.front());
    f_hi_ = sign_ * std::exp(ys.back());
    interp_.emplace(std::move(xs), std::move(ys));
  }

  double operator()(double s) const {
    if (!interp_) return 0.0;
    require_domain(s >= 0.0, "F_p needs s >= 0");
    if (s == 0.0) return f_lo_;
    const double x = std::log(s);
    if (x <= lo_) return f_lo_;
    if (x >= hi_) return f_hi_ * std::exp(-decay_ * (x - hi_));
    return sign_ * std::exp((*interp_)(x));
  }

  bool vanishes() const { return !interp_; }
  bool converged() const { return converged_; }
  double max_rel_error() const { return max_rel_error_; }
  const PotentialContext& context() const { return ctx_; }

 private:
  PotentialContext ctx_;
  std::optional<boost::math::interpolators::pchip<std::vector<double>>> interp_;
  double lo_ = 0.0, hi_ = 0.0, f_lo_ = 0.0, f_hi_ = 0.0, sign_ = 1.0, decay_ = 1.0;
  bool converged_ = true;
  double max_rel_error_ = 0.0;
};

namespace detail {

// Axisymmetric options restricting rays to the support of u and breaking at its profile knots.
inline AxisymOptions symmetric_options(const SymmetricFunction& u, const PoleBehavior& pole) {
  AxisymOptions opt;
  opt.pole = pole;
  const PotentialContext ctx = u.ctx;
  if (u.support_level > 0.0) {
    const double s0 = u.support_level;
    opt.ray_limit = [ctx, s0](double th) { return ray_level_radius(ctx, th, s0); };
  }
  if (!u.level_breaks.empty()) {
    const auto levels = u.level_breaks;
    opt.ray_breaks = [ctx, levels](double th, double rmax, std::vector<double>& out) {
      for (double s : levels) {
        const double rho = ray_level_radius(ctx, th, s);
        if (rho < rmax) out.push_back(rho);
      }
    };
  }
  return opt;
}

}  // namespace detail

struct IdentityCheck {
  IntegralResult direct;
  std::optional<IntegralResult> identity;

  double relative_gap() const {
    if (!identity) return 0.0;
    const double scale = std::max(std::abs(direct.value), std::abs(identity->value));
    return scale == 0.0 ? 0.0 : std::abs(direct.value - identity->value) / scale;
  }
};

inline IntegralResult symmetric_energy_direct(const SymmetricFunction& u, const QuadratureSpec& spec) {
  const double p = u.ctx.p();
  return integrate_halfspace_axisym(
      u.ctx.N(), [&u, p](double r, double y) { return std::pow(u.grad_norm({r, y}), p); }, spec,
      detail::symmetric_options(u, u.energy_pole));
}

inline IntegralResult symmetric_hardy_direct(const SymmetricFunction& u, const QuadratureSpec& spec) {
  require_domain(!u.ctx.critical(), "symmetric_hardy_direct needs p < N");
  const double p = u.ctx.p();
  return integrate_halfspace_axisym(
      u.ctx.N(),
      [&u, p](double r, double y) {
        const double val = u({r, y});
        if (val == 0.0) return 0.0;
        return hardy_weight(u.ctx, {r, y}) * std::pow(std::abs(val), p);
      },
      spec, detail::symmetric_options(u, u.hardy_pole));
}

namespace detail {

inline bool needs_table(const PotentialContext& ctx) { return !(ctx.critical() || ctx.p() == 2.0); }

// omega int g(t) (1 + F_p(level(t))) dt over the source profile's support with the pole order at t = 0.
template <class G, class L>
IntegralResult corrected_radial(const PotentialContext& ctx, const RadialProfile& src, double end, const G& g,
                                const L& level, const PoleBehavior& pole, const FpTable* table,
                                const QuadratureSpec& spec) {
  const bool corr = needs_table(ctx);
  require_domain(!corr || table != nullptr, "an F_p table is required for p not in {2, N}");
  const double om = sphere_area(ctx.N());
  Interval1dOptions o;
  o.breakpoints = src.knots(0.0, end);
  if (pole.beta > 0.0) o.left = EndpointBehavior{ctx.N() - 1.0 - pole.beta, pole.log_power, pole.log_scale};
  auto r = integrate_1d(
      [&](double t) {
        const double base = g(t);
        if (base == 0.0) return 0.0;
        return base * (corr ? 1.0 + (*table)(level(t)) : 1.0);
      },
      0.0, std::min(end, src.support_end), spec.scaled(1.0 / om), o);
  r.value *= om;
  r.error_estimate *= om;
  r.converged = r.converged && (!corr || table->converged());
  return r;
}

}  // namespace detail

// Energy through the source profile: its radial energy plus the F_p correction integral.
inline std::optional<IntegralResult> symmetric_energy_identity(const SymmetricFunction& u, const QuadratureSpec& spec,
                                                               const FpTable* table = nullptr) {
  const auto& ctx = u.ctx;
  const int N = ctx.N();
  const double p = ctx.p();
  if (u.ball_source) {
    const auto& v = *u.ball_source;
    return detail::corrected_radial(
        ctx, v, 1.0, [&](double t) { return std::pow(std::abs(v.d(t)), p) * std::pow(t, N - 1); },
        [&](double t) { return green_ball(ctx, t); }, u.energy_pole, table, spec);
  }
  if (u.rn_source) {
    const auto& w = *u.rn_source;
    return detail::corrected_radial(
        ctx, w, kInf, [&](double r) { return std::pow(std::abs(w.d(r)), p) * std::pow(r, N - 1); },
        [&](double r) { return green_rn(ctx, r); }, u.energy_pole, table, spec);
  }
  return std::nullopt;
}

// Hardy-side integral through the source profile: the flat weight plus the F_p correction integral.
inline std::optional<IntegralResult> symmetric_hardy_identity(const SymmetricFunction& u, const QuadratureSpec& spec,
                                                              const FpTable* table = nullptr) {
  const auto& ctx = u.ctx;
  require_domain(!ctx.critical(), "symmetric_hardy_identity needs p < N");
  const int N = ctx.N();
  const double p = ctx.p();
  if (u.rn_source) {
    const auto& w = *u.rn_source;
    return detail::corrected_radial(
        ctx, w, kInf, [&](double r) { return std::pow(std::abs(w(r)), p) * std::pow(r, N - 1.0 - p); },
        [&](double r) { return green_rn(ctx, r); }, u.hardy_pole, table, spec);
  }
  if (u.ball_source) {
    const auto& v = *u.ball_source;
    const double a = ctx.a();
    return detail::corrected_radial(
        ctx, v, 1.0,
        [&](double t) {
          const double val = v(t);
          if (val == 0.0) return 0.0;
          return std::pow(std::abs(val), p) * std::pow(t, N - 1.0 - p) * std::pow(-std::expm1(a * std::log(t)), -p);
        },
        [&](double t) { return green_ball(ctx, t); }, u.hardy_pole, table, spec);
  }
  return std::nullopt;
}

// Energy of u computed directly and through the transplant identity.
inline IdentityCheck dirichlet_energy_symmetric(const SymmetricFunction& u, const QuadratureSpec& spec,
                                                const FpTable* table = nullptr) {
  return IdentityCheck{symmetric_energy_direct(u, spec), symmetric_energy_identity(u, spec, table)};
}

// Integral of V_p^{p/2} d_-^{-p} |u|^p computed directly and through the transplant identity.
inline IdentityCheck hardy_side_symmetric(const SymmetricFunction& u, const QuadratureSpec& spec,
                                          const FpTable* table = nullptr) {
  return IdentityCheck{symmetric_hardy_direct(u, spec), symmetric_hardy_identity(u, spec, table)};
}

// Both sides of the one-dimensional weighted Hardy inequality with weight F_p(G_{R^N}(r)).
struct WeightedHardy1d {
  IntegralResult lhs;  // ((N-p)/p)^p int |w|^p r^{N-1-p} F dr
  IntegralResult rhs;  // int |w'|^p r^{N-1} F dr
};

inline WeightedHardy1d weighted_hardy_1d(const FpTable& table, const RadialProfile& w, const QuadratureSpec& spec) {
  const auto& ctx = table.context();
  const int N = ctx.N();
  const double p = ctx.p();
  Interval1dOptions o;
  o.breakpoints = w.knots(0.0, kInf);
  WeightedHardy1d out;
  out.lhs = integrate_1d(
      [&](double r) { return std::pow(std::abs(w(r)), p) * std::pow(r, N - 1.0 - p) * table(green_rn(ctx, r)); }, 0.0,
      w.support_end, spec, o);
  const double c = hardy_constant(ctx.params());
  out.lhs.value *= c;
  out.lhs.error_estimate *= c;
  out.rhs = integrate_1d(
      [&](double r) { return std::pow(std::abs(w.d(r)), p) * std::pow(r, N - 1.0) * table(green_rn(ctx, r)); }, 0.0,
      w.support_end, spec, o);
  return out;
}

// omega int_{[G < t]} |grad G|^p for G = green_rn, in radial form.
inline IntegralResult green_level_energy(const PotentialContext& ctx, double t, const QuadratureSpec& spec) {
  require_domain(!ctx.critical(), "green_level_energy needs p < N");
  require_domain(t > 0.0, "level must be positive");
  const double r0 = green_rn_inverse(ctx, t);
  const int N = ctx.N();
  const double p = ctx.p();
  // r = r0 / u on u in (0, 1]; the integrand behaves like u^{(N-1)/(p-1) - 2} at u = 0.
  Interval1dOptions o;
  o.left = EndpointBehavior{(N - 1.0) / (p - 1.0) - 2.0, 0.0, 1.0};
  auto r = integrate_1d(
      [&](double u) {
        const double rr = r0 / u;
        return std::pow(std::abs(green_rn_derivative(ctx, rr)), p) * std::pow(rr, N - 1) * r0 / (u * u);
      },
      0.0, 1.0, spec, o);
  const double w = sphere_area(N);
  r.value *= w;
  r.error_estimate *= w;
  return r;
}

}  // namespace hardylab
