#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <utility>
#include <variant>
#include <vector>

#include "hardylab/core_math.hpp"
#include "hardylab/potentials.hpp"
#include "hardylab/quadrature.hpp"
#include "hardylab/transplant.hpp"

namespace hardylab {

// Axisymmetric function on the half-space, not necessarily constant on the level sets of U_p.
struct AxisymFunction {
  int N = 2;
  std::function<double(double, double)> value;
  // (d/dr, d/dy)
  std::function<std::pair<double, double>(double, double)> gradient;
  // Polar centre, support radius and ray knots; the pole field is filled per integrand.
  AxisymOptions domain;
  PoleBehavior energy_pole{0.0, 0.0, 2.0};
  PoleBehavior hardy_pole{0.0, 0.0, 2.0};

  double operator()(HalfSpacePoint pt) const { return value(pt.r, pt.y); }
  double grad_norm(HalfSpacePoint pt) const {
    const auto [gr, gy] = gradient(pt.r, pt.y);
    return std::hypot(gr, gy);
  }
};

// Radial function on R^N; on B_1 when the profile's support ends at or before 1.
struct RadialFunction {
  int N = 2;
  RadialProfile profile;
};

// Function of t in (0, inf).
struct LineFunction {
  RadialProfile profile;
};

using TestFunction = std::variant<SymmetricFunction, AxisymFunction, RadialFunction, LineFunction>;

enum class FunctionalTag {
  HardySubcritical,
  CriticalHardyHalf,
  ImprovedHardyHalf,
  HardySobolevImproved,
  TrudingerMoser,
  Bliss,
  BlissLog,
  SobolevRN,
  WeightedCandidate
};

struct FunctionalKind {
  FunctionalTag tag = FunctionalTag::HardySubcritical;
  Params params;
  double alpha = 0.0;
  // Radial weight g(|x|) of a candidate weighted inequality, with its knots.
  std::function<double(double)> weight;
  std::vector<double> weight_breaks;

  static FunctionalKind hardy_subcritical(int N, double p) {
    return {FunctionalTag::HardySubcritical, make_params(N, p), 0.0, {}, {}};
  }
  static FunctionalKind critical_hardy_half(int N) {
    return {FunctionalTag::CriticalHardyHalf, make_params(N, N), 0.0, {}, {}};
  }
  static FunctionalKind improved_hardy_half(int N, double p) {
    require_domain(p < N, "improved Hardy functional needs p < N");
    return {FunctionalTag::ImprovedHardyHalf, make_params(N, p), 0.0, {}, {}};
  }
  static FunctionalKind hardy_sobolev_improved(int N, double p, double s) {
    Params P = make_params(N, p);
    require_domain(p < N, "Hardy-Sobolev functional needs p < N");
    P.s = s;
    P.validate();
    return {FunctionalTag::HardySobolevImproved, P, 0.0, {}, {}};
  }
  static FunctionalKind trudinger_moser(int N, double alpha) {
    require_domain(alpha > 0.0, "Trudinger-Moser exponent must be positive");
    return {FunctionalTag::TrudingerMoser, make_params(N, N), alpha, {}, {}};
  }
  static FunctionalKind bliss(double p, double q) {
    require_domain(p > 1.0 && q > p, "Bliss functional needs q > p > 1");
    Params P{std::max(2, static_cast<int>(std::ceil(p))), p, std::nullopt, q};
    return {FunctionalTag::Bliss, P, 0.0, {}, {}};
  }
  static FunctionalKind bliss_log(int N, double q) {
    Params P = make_params(N, N);
    P.q = q;
    P.validate();
    return {FunctionalTag::BlissLog, P, 0.0, {}, {}};
  }
  static FunctionalKind sobolev_rn(int N, double p) {
    require_domain(p < N, "Sobolev functional needs p < N");
    return {FunctionalTag::SobolevRN, make_params(N, p), 0.0, {}, {}};
  }
  static FunctionalKind weighted_candidate(int N, double q, std::function<double(double)> g,
                                           std::vector<double> breaks = {}) {
    require_domain(q >= 1.0, "weighted candidate needs q >= 1");
    Params P = make_params(N, N);
    P.q = q;
    return {FunctionalTag::WeightedCandidate, P, 0.0, std::move(g), std::move(breaks)};
  }
};

// The constant the quotient is compared with.
inline double reference_constant(const FunctionalKind& k) {
  const auto& P = k.params;
  switch (k.tag) {
    case FunctionalTag::HardySubcritical:
    case FunctionalTag::ImprovedHardyHalf: return hardy_constant(P);
    case FunctionalTag::CriticalHardyHalf: return critical_hardy_constant(P.N);
    case FunctionalTag::HardySobolevImproved:
      require_domain(P.p == 2.0, "the Hardy-Sobolev constant is known for p = 2 only");
      return hardy_sobolev_constant(P.N, P.s.value_or(0.0));
    case FunctionalTag::Bliss: return bliss_constant(P.p, *P.q);
    case FunctionalTag::BlissLog: return bliss_log_constant(P.N, *P.q);
    case FunctionalTag::SobolevRN: return sobolev_constant(P);
    case FunctionalTag::WeightedCandidate: return 0.0;
    case FunctionalTag::TrudingerMoser: break;
  }
  throw DomainError("the Trudinger-Moser functional has no quotient form");
}

namespace detail {

inline IntegralResult powered(IntegralResult r, double e) {
  if (e == 1.0) return r;
  const double v = std::abs(r.value);
  r.error_estimate = v > 0.0 ? std::abs(e) * std::pow(v, e - 1.0) * r.error_estimate : 0.0;
  r.value = std::pow(v, e);
  return r;
}

// Uniform access to half-space test functions.
struct HalfSpaceView {
  int N = 2;
  std::function<double(HalfSpacePoint)> value;
  std::function<double(HalfSpacePoint)> grad_norm;
  std::function<AxisymOptions(const PoleBehavior&)> options;
  PoleBehavior energy_pole, hardy_pole;
};

inline HalfSpaceView halfspace_view(const TestFunction& u) {
  if (auto s = std::get_if<SymmetricFunction>(&u)) {
    return {s->ctx.N(), [s](HalfSpacePoint pt) { return (*s)(pt); },
            [s](HalfSpacePoint pt) { return s->grad_norm(pt); },
            [s](const PoleBehavior& pole) { return symmetric_options(*s, pole); }, s->energy_pole, s->hardy_pole};
  }
  if (auto a = std::get_if<AxisymFunction>(&u)) {
    return {a->N, [a](HalfSpacePoint pt) { return (*a)(pt); }, [a](HalfSpacePoint pt) { return a->grad_norm(pt); },
            [a](const PoleBehavior& pole) {
              AxisymOptions o = a->domain;
              o.pole = pole;
              return o;
            },
            a->energy_pole, a->hardy_pole};
  }
  throw AdmissibilityError("functional needs a function on the half-space");
}

inline const RadialFunction& radial_of(const TestFunction& u) {
  if (auto r = std::get_if<RadialFunction>(&u)) return *r;
  throw AdmissibilityError("functional needs a radial function");
}

inline const LineFunction& line_of(const TestFunction& u) {
  if (auto l = std::get_if<LineFunction>(&u)) return *l;
  throw AdmissibilityError("functional needs a function on the half-line");
}

inline void require_dim(const FunctionalKind& k, int N) {
  if (k.params.N != N) throw AdmissibilityError("dimension of the function does not match the functional");
}

// omega int_0^end g(t) t^{N-1} dt over a radial profile's support.
template <class G>
IntegralResult radial_integral(int N, const RadialProfile& w, double end, const G& g, const QuadratureSpec& spec,
                               std::optional<EndpointBehavior> left = std::nullopt,
                               const std::vector<double>& extra = {}) {
  Interval1dOptions o;
  o.breakpoints = w.knots(0.0, end);
  for (double t : extra)
    if (t > 0.0 && t < end) o.breakpoints.push_back(t);
  o.left = left;
  const double om = sphere_area(N);
  auto r = integrate_1d([&](double t) { return g(t) * std::pow(t, N - 1); }, 0.0, std::min(end, w.support_end),
                        spec.scaled(1.0 / om), o);
  r.value *= om;
  r.error_estimate *= om;
  return r;
}

inline IntegralResult halfspace_energy(const HalfSpaceView& v, double p, const QuadratureSpec& spec) {
  return integrate_axisym(
      v.N, [&v, p](double r, double y) { return std::pow(v.grad_norm({r, y}), p); }, spec, v.options(v.energy_pole));
}

}  // namespace detail

// Weighted side of the functional, raised to the power of its inequality; constants are left out.
inline IntegralResult lhs(const FunctionalKind& k, const TestFunction& u, const QuadratureSpec& spec) {
  const auto& P = k.params;
  const int N = P.N;
  const double p = P.p;
  switch (k.tag) {
    case FunctionalTag::HardySubcritical: {
      const auto& f = detail::radial_of(u);
      detail::require_dim(k, f.N);
      const auto& w = f.profile;
      return detail::radial_integral(
          N, w, kInf, [&](double t) { return std::pow(std::abs(w(t)), p) * std::pow(t, -p); }, spec,
          EndpointBehavior{N - 1.0 - p, 0.0, 1.0});
    }
    case FunctionalTag::SobolevRN: {
      const auto& f = detail::radial_of(u);
      detail::require_dim(k, f.N);
      const auto& w = f.profile;
      const double ps = P.sobolev_exponent();
      return detail::powered(
          detail::radial_integral(N, w, kInf, [&](double t) { return std::pow(std::abs(w(t)), ps); }, spec), p / ps);
    }
    case FunctionalTag::WeightedCandidate: {
      const auto& f = detail::radial_of(u);
      detail::require_dim(k, f.N);
      const auto& w = f.profile;
      const double q = *P.q;
      return detail::powered(
          detail::radial_integral(
              N, w, kInf, [&](double t) { return std::pow(std::abs(w(t)), q) * k.weight(t); }, spec, std::nullopt,
              k.weight_breaks),
          N / q);
    }
    case FunctionalTag::BlissLog: {
      const auto& f = detail::radial_of(u);
      detail::require_dim(k, f.N);
      const auto& w = f.profile;
      if (w.support_end > 1.0) throw AdmissibilityError("logarithmic Bliss functional needs support in the unit ball");
      const double q = *P.q;
      const double e = 1.0 + q * (N - 1.0) / N;
      return detail::powered(
          detail::radial_integral(
              N, w, 1.0,
              [&](double t) {
                const double val = w(t);
                if (val == 0.0) return 0.0;
                return std::pow(std::abs(val), q) * std::pow(t, -static_cast<double>(N)) * std::pow(-std::log(t), -e);
              },
              spec, EndpointBehavior{-1.0, -e, 1.0}),
          N / q);
    }
    case FunctionalTag::Bliss: {
      const auto& v = detail::line_of(u).profile;
      if (std::abs(v(0.0)) > 1e-12) throw AdmissibilityError("Bliss functional needs v(0) = 0");
      const double q = *P.q;
      const double e = 1.0 + q * (p - 1.0) / p;
      Interval1dOptions o;
      o.breakpoints = v.knots(0.0, kInf);
      o.left = EndpointBehavior{q - e, 0.0, 1.0};
      return detail::powered(
          integrate_1d([&](double t) { return std::pow(std::abs(v(t)), q) * std::pow(t, -e); }, 0.0, v.support_end,
                       spec, o),
          1.0 / q);
    }
    case FunctionalTag::CriticalHardyHalf: {
      const auto v = detail::halfspace_view(u);
      detail::require_dim(k, v.N);
      return integrate_axisym(
          N,
          [&v, N](double r, double y) {
            const double val = v.value({r, y});
            if (val == 0.0) return 0.0;
            return std::pow(V_N_weight(N, {r, y}), 0.5 * N) * std::pow(std::abs(val), N);
          },
          spec, v.options(v.hardy_pole));
    }
    case FunctionalTag::ImprovedHardyHalf: {
      const auto v = detail::halfspace_view(u);
      detail::require_dim(k, v.N);
      const PotentialContext ctx(P);
      return integrate_axisym(
          N,
          [&v, &ctx, p](double r, double y) {
            const double val = v.value({r, y});
            if (val == 0.0) return 0.0;
            return hardy_weight(ctx, {r, y}) * std::pow(std::abs(val), p);
          },
          spec, v.options(v.hardy_pole));
    }
    case FunctionalTag::HardySobolevImproved: {
      const auto v = detail::halfspace_view(u);
      detail::require_dim(k, v.N);
      const PotentialContext ctx(P);
      const double s = P.s.value_or(0.0);
      const double ps = P.hardy_sobolev_exponent();
      const double h = 0.5 * ctx.a();
      const double ex = (p - 1.0) * (p - s) / (N - p);
      // |u| ~ d_-^{-(beta_h - p)/p} near the pole.
      const PoleBehavior pole{s + ps * (v.hardy_pole.beta - p) / p, ps / p * v.hardy_pole.log_power,
                              v.hardy_pole.log_scale};
      return detail::powered(
          integrate_axisym(
              N,
              [&](double r, double y) {
                const HalfSpacePoint pt{r, y};
                const double val = v.value(pt);
                if (val == 0.0) return 0.0;
                const double lx = -std::log1p(4.0 * y / dminus2(pt));
                return std::pow(std::abs(val), ps) * std::pow(dminus2(pt), -0.5 * s) *
                       std::pow(V_p(ctx, pt), 0.5 * p) * std::pow(-std::expm1(h * lx), -ex);
              },
              spec, v.options(pole)),
          p / ps);
    }
    case FunctionalTag::TrudingerMoser: {
      const auto v = detail::halfspace_view(u);
      detail::require_dim(k, v.N);
      const double e = N / (N - 1.0);
      const double alpha = k.alpha;
      const double c = std::pow(2.0, N);
      auto r = integrate_axisym(
          N,
          [&](double rr, double y) {
            const double val = v.value({rr, y});
            if (val == 0.0) return 0.0;
            return std::expm1(alpha * std::pow(std::abs(val), e)) * c * std::pow(dplus2({rr, y}), -N);
          },
          spec, v.options(PoleBehavior{0.0, 0.0, 2.0}));
      // The measure has total mass |B_1|.
      r.value += unit_ball_volume(N);
      return r;
    }
  }
  throw DomainError("unknown functional");
}

// Gradient side of the functional: the p-energy, or its p-th root for the one-dimensional Bliss form.
inline IntegralResult rhs(const FunctionalKind& k, const TestFunction& u, const QuadratureSpec& spec) {
  const auto& P = k.params;
  const double p = P.p;
  switch (k.tag) {
    case FunctionalTag::HardySubcritical:
    case FunctionalTag::SobolevRN:
    case FunctionalTag::WeightedCandidate: {
      const auto& f = detail::radial_of(u);
      detail::require_dim(k, f.N);
      return radial_energy_rn(f.N, p, f.profile, spec.scaled(1.0 / sphere_area(f.N)));
    }
    case FunctionalTag::BlissLog: {
      const auto& f = detail::radial_of(u);
      detail::require_dim(k, f.N);
      return radial_energy_ball(f.N, p, f.profile, spec.scaled(1.0 / sphere_area(f.N)));
    }
    case FunctionalTag::Bliss: return detail::powered(line_energy(p, detail::line_of(u).profile, spec), 1.0 / p);
    case FunctionalTag::CriticalHardyHalf:
    case FunctionalTag::ImprovedHardyHalf:
    case FunctionalTag::HardySobolevImproved:
    case FunctionalTag::TrudingerMoser: {
      const auto v = detail::halfspace_view(u);
      detail::require_dim(k, v.N);
      return detail::halfspace_energy(v, p, spec);
    }
  }
  throw DomainError("unknown functional");
}

// rhs / lhs, to be compared with reference_constant(k).
inline IntegralResult rayleigh(const FunctionalKind& k, const TestFunction& u, const QuadratureSpec& spec) {
  if (k.tag == FunctionalTag::TrudingerMoser) throw DomainError("the Trudinger-Moser functional has no quotient form");
  const auto den = lhs(k, u, spec);
  if (!(den.value > 0.0)) throw UndefinedQuotientError("weighted side vanishes");
  const auto num = rhs(k, u, spec);
  IntegralResult q;
  q.value = num.value / den.value;
  q.error_estimate = std::abs(q.value) * (num.error_estimate / std::max(std::abs(num.value), 1e-300) +
                                          den.error_estimate / den.value);
  q.evaluations = num.evaluations + den.evaluations;
  q.converged = num.converged && den.converged;
  return q;
}

// Cubic smoothstep: 0 for s <= M/2, 1 for s >= M.
inline double smoothstep_cutoff(double s, double M) {
  if (s <= 0.5 * M) return 0.0;
  if (s >= M) return 1.0;
  const double x = (s - 0.5 * M) / (0.5 * M);
  return x * x * (3.0 - 2.0 * x);
}

inline double smoothstep_cutoff_derivative(double s, double M) {
  if (s <= 0.5 * M || s >= M) return 0.0;
  const double x = (s - 0.5 * M) / (0.5 * M);
  return 6.0 * x * (1.0 - x) / (0.5 * M);
}

inline double family_ih_eps_max(const PotentialContext& ctx) {
  const double p = ctx.p();
  return 0.5 * (ctx.N() - p) / (p - 1.0) * p / (p - 1.0);
}

// u = U^gamma psi_M(U) with gamma = (p-1)/p - (p-1)/(N-p) eps.
inline SymmetricFunction family_ih(const PotentialContext& ctx, double eps, double M) {
  require_domain(!ctx.critical(), "family_ih needs p < N");
  require_domain(eps > 0.0 && eps < family_ih_eps_max(ctx), "eps out of range");
  require_domain(M > 0.0, "cutoff level must be positive");
  const double N = ctx.N(), p = ctx.p();
  const double g = (p - 1.0) / p - (p - 1.0) / (N - p) * eps;
  SymmetricFunction u{ctx, {}, {}, {}, 0.0, {}, {}, std::nullopt, std::nullopt};
  u.value = [g, M](double s) { return std::pow(s, g) * smoothstep_cutoff(s, M); };
  u.slope = [g, M](double s) {
    return g * std::pow(s, g - 1.0) * smoothstep_cutoff(s, M) + std::pow(s, g) * smoothstep_cutoff_derivative(s, M);
  };
  u.level_breaks = {M};
  u.support_level = 0.5 * M;
  u.energy_pole = PoleBehavior{N - eps * p, 0.0, 2.0};
  u.hardy_pole = PoleBehavior{N - eps * p, 0.0, 2.0};
  const double rs = green_rn_inverse(ctx, 0.5 * M);
  u.rn_source = RadialProfile{[ctx, v = u.value](double r) { return v(green_rn(ctx, r)); },
                              [ctx, sl = u.slope](double r) { return sl(green_rn(ctx, r)) * green_rn_derivative(ctx, r); },
                              rs,
                              {green_rn_inverse(ctx, M)}};
  return u;
}

// 1 on [0,1], log(R/t)/log R on (1,R), 0 beyond.
inline RadialProfile family_log_cutoff(double R) {
  require_domain(R > 1.0, "family_log_cutoff needs R > 1");
  const double L = std::log(R);
  return RadialProfile{[R, L](double t) { return t <= 1.0 ? 1.0 : std::log(R / t) / L; },
                       [L](double t) { return t <= 1.0 ? 0.0 : -1.0 / (t * L); }, R, {1.0}};
}

inline double log_cutoff_energy(int N, double R) {
  require_domain(R > 1.0, "log_cutoff_energy needs R > 1");
  return sphere_area(N) * std::pow(std::log(R), 1.0 - N);
}

// v(|z - (0, eps)| / eps) with v = 1 on [0, 1/2] and 2(1 - t) on (1/2, 1].
inline AxisymFunction family_bubble(int N, double p, double eps) {
  make_params(N, p);
  require_domain(eps > 0.0 && eps < 0.5, "bubble needs 0 < eps < 1/2");
  AxisymFunction u;
  u.N = N;
  u.value = [eps](double r, double y) {
    const double t = std::hypot(r, y - eps) / eps;
    if (t <= 0.5) return 1.0;
    return t < 1.0 ? 2.0 * (1.0 - t) : 0.0;
  };
  u.gradient = [eps](double r, double y) {
    const double d = std::hypot(r, y - eps);
    const double t = d / eps;
    if (t <= 0.5 || t >= 1.0) return std::pair{0.0, 0.0};
    const double k = -2.0 / (eps * d);
    return std::pair{k * r, k * (y - eps)};
  };
  u.domain.center_y = eps;
  u.domain.radius = eps;
  u.domain.ray_breaks = [eps](double, double rmax, std::vector<double>& out) {
    if (0.5 * eps < rmax) out.push_back(0.5 * eps);
  };
  return u;
}

// Seeded superposition of C^1 quartic bumps vanishing at support_end, and at 0 when anchored.
inline RadialProfile random_smooth_profile(std::uint64_t seed, double support_end, bool anchored = false) {
  require_domain(support_end > 0.0 && std::isfinite(support_end), "support_end must be finite and positive");
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  struct Bump {
    double c, w, amp;
  };
  std::vector<Bump> bumps;
  const double L = support_end;
  double plateau = anchored ? 0.0 : 0.5 + unit(gen);
  const int n = 2 + static_cast<int>(unit(gen) * 3.0);
  for (int i = 0; i < n; ++i) {
    const double c = (0.15 + 0.7 * unit(gen)) * L;
    const double w = std::min({c, L - c, (0.1 + 0.4 * unit(gen)) * L});
    bumps.push_back({c, w, 2.0 * unit(gen) - 1.0});
  }
  std::vector<double> br;
  for (const auto& b : bumps)
    for (double t : {b.c - b.w, b.c + b.w})
      if (t > 0.0 && t < L) br.push_back(t);
  std::sort(br.begin(), br.end());
  auto value = [bumps, plateau, L](double t) {
    if (t >= L) return 0.0;
    const double x = t / L;
    double v = plateau * (1.0 - x * x) * (1.0 - x * x);
    for (const auto& b : bumps) {
      const double z = (t - b.c) / b.w;
      if (std::abs(z) < 1.0) v += b.amp * (1.0 - z * z) * (1.0 - z * z);
    }
    return v;
  };
  auto deriv = [bumps, plateau, L](double t) {
    if (t >= L) return 0.0;
    const double x = t / L;
    double d = plateau * -4.0 * x * (1.0 - x * x) / L;
    for (const auto& b : bumps) {
      const double z = (t - b.c) / b.w;
      if (std::abs(z) < 1.0) d += b.amp * -4.0 * z * (1.0 - z * z) / b.w;
    }
    return d;
  };
  return RadialProfile{value, deriv, support_end, br};
}

// u * (1 + A sin(k1 r^2/(1+r^2) + k2 y/(1+y) + phi)): axisymmetric, not constant on level sets of U_p.
inline AxisymFunction perturbed(const SymmetricFunction& u, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double A = 0.2 + 0.5 * unit(gen);
  const double k1 = 0.5 + 2.0 * unit(gen);
  const double k2 = 0.5 + 2.0 * unit(gen);
  const double phi = 2.0 * kPi * unit(gen);
  AxisymFunction out;
  out.N = u.ctx.N();
  out.value = [u, A, k1, k2, phi](double r, double y) {
    const double base = u({r, y});
    if (base == 0.0) return 0.0;
    return base * (1.0 + A * std::sin(k1 * r * r / (1.0 + r * r) + k2 * y / (1.0 + y) + phi));
  };
  out.gradient = [u, A, k1, k2, phi](double r, double y) {
    const HalfSpacePoint pt{r, y};
    const double base = u(pt);
    const double sl = u.slope_at_level(U(u.ctx, pt));
    if (base == 0.0 && sl == 0.0) return std::pair{0.0, 0.0};
    const auto g = grad_U(u.ctx, pt);
    const double r2 = 1.0 + r * r, y1 = 1.0 + y;
    const double arg = k1 * r * r / r2 + k2 * y / y1 + phi;
    const double m = 1.0 + A * std::sin(arg);
    const double c = A * std::cos(arg);
    return std::pair{sl * g.dr * m + base * c * 2.0 * k1 * r / (r2 * r2), sl * g.dy * m + base * c * k2 / (y1 * y1)};
  };
  out.domain = detail::symmetric_options(u, PoleBehavior{});
  out.domain.pole.reset();
  out.energy_pole = u.energy_pole;
  out.hardy_pole = u.hardy_pole;
  return out;
}

// Unit-energy Moser function on B_1: (omega K)^{-1/N} min(log(1/t), K).
inline RadialProfile moser_profile(int N, double K) {
  require_domain(N >= 2 && K > 0.0, "moser_profile needs N >= 2 and K > 0");
  const double c = std::pow(sphere_area(N) * K, -1.0 / N);
  const double t0 = std::exp(-K);
  return RadialProfile{[c, K, t0](double t) { return t <= t0 ? c * K : c * std::log(1.0 / t); },
                       [c, t0](double t) { return t <= t0 ? 0.0 : -c / t; }, 1.0, {t0}};
}

// x^kappa phi(log x) with phi = 1 on [-P, P] and linear ramps of length L on both sides.
inline RadialProfile log_plateau_profile(double kappa, double P, double L) {
  require_domain(P >= 0.0 && L > 0.0, "log_plateau_profile needs P >= 0 and L > 0");
  auto phi = [P, L](double s) {
    const double d = std::abs(s);
    return d <= P ? 1.0 : d >= P + L ? 0.0 : (P + L - d) / L;
  };
  auto dphi = [P, L](double s) {
    const double d = std::abs(s);
    if (d <= P || d >= P + L) return 0.0;
    return s > 0.0 ? -1.0 / L : 1.0 / L;
  };
  const double lo = std::exp(-(P + L)), hi = std::exp(P + L);
  return RadialProfile{[=](double x) { return x <= lo ? 0.0 : std::pow(x, kappa) * phi(std::log(x)); },
                       [=](double x) {
                         if (x <= lo) return 0.0;
                         const double s = std::log(x);
                         return std::pow(x, kappa - 1.0) * (kappa * phi(s) + dphi(s));
                       },
                       hi,
                       {lo, std::exp(-P), std::exp(P)}};
}

// Both sides of the one-dimensional critical Hardy inequality int |w'|^N dL >= c int |w|^N L^{-N} dL,
// to which the critical Hardy quotient of a level-set function reduces.
struct LineHardy {
  IntegralResult energy;
  IntegralResult weighted;
  double quotient() const { return energy.value / weighted.value; }
};

inline LineHardy critical_hardy_line(int N, const RadialProfile& w, const QuadratureSpec& spec) {
  Interval1dOptions o;
  o.breakpoints = w.knots(0.0, kInf);
  LineHardy out;
  out.energy = integrate_1d([&](double L) { return std::pow(std::abs(w.d(L)), N); }, 0.0, w.support_end, spec, o);
  out.weighted = integrate_1d([&](double L) { return std::pow(std::abs(w(L)) / L, N); }, 0.0, w.support_end, spec, o);
  return out;
}

}  // namespace hardylab
