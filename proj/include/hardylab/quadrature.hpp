#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <string>
#include <type_traits>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include "hardylab/core_math.hpp"
#include "hardylab/potentials.hpp"

namespace hardylab {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct QuadratureSpec {
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  int max_depth = 40;
  // Radius of the neighbourhood of a declared singular point replaced by an analytic tail.
  double pole_exclusion = 1e-6;
  // Improper integrals are cut at this radius at the latest.
  double truncation = 1e6;

  void validate() const {
    require_domain(rel_tol > 0.0 && abs_tol > 0.0, "quadrature tolerances must be positive");
    require_domain(max_depth >= 4, "max_depth must be at least 4");
    require_domain(pole_exclusion > 0.0 && truncation > 0.0, "pole_exclusion and truncation must be positive");
  }

  QuadratureSpec scaled(double factor) const {
    QuadratureSpec s = *this;
    s.rel_tol *= factor;
    s.abs_tol *= factor;
    return s;
  }
};

struct IntegralResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
  bool converged = true;

  IntegralResult& operator+=(const IntegralResult& o) {
    value += o.value;
    error_estimate += o.error_estimate;
    evaluations += o.evaluations;
    converged = converged && o.converged;
    return *this;
  }
  friend IntegralResult operator+(IntegralResult a, const IntegralResult& b) { return a += b; }
};

// An integrand value carrying its own error, used for iterated integrals.
struct Sample {
  double value = 0.0;
  double error = 0.0;
  std::size_t evaluations = 1;
  bool converged = true;
};

// Near an endpoint e: |f(e + tau)| ~ C tau^power (log(log_scale / tau))^log_power.
struct EndpointBehavior {
  double power = 0.0;
  double log_power = 0.0;
  double log_scale = 1.0;
};

struct Interval1dOptions {
  std::optional<EndpointBehavior> left;
  std::optional<EndpointBehavior> right;
  std::vector<double> breakpoints;
};

namespace detail {

struct KronrodTable {
  std::array<double, 11> x{};
  std::array<double, 11> wk{};
  std::array<double, 11> wg{};
};

inline const KronrodTable& kronrod21() {
  static const KronrodTable table = [] {
    KronrodTable t;
    const auto& xk = boost::math::quadrature::gauss_kronrod<double, 21>::abscissa();
    const auto& wk = boost::math::quadrature::gauss_kronrod<double, 21>::weights();
    const auto& xg = boost::math::quadrature::gauss<double, 10>::abscissa();
    const auto& wg = boost::math::quadrature::gauss<double, 10>::weights();
    for (std::size_t i = 0; i < 11; ++i) {
      t.x[i] = xk[i];
      t.wk[i] = wk[i];
      for (std::size_t j = 0; j < xg.size(); ++j)
        if (std::abs(xg[j] - xk[i]) < 1e-14) t.wg[i] = wg[j];
    }
    return t;
  }();
  return table;
}

template <class R>
Sample as_sample(R&& r) {
  if constexpr (std::is_same_v<std::decay_t<R>, Sample>) return r;
  else return Sample{static_cast<double>(r), 0.0, 1, true};
}

struct Segment {
  double a = 0.0, b = 0.0;
  double value = 0.0;
  double error = 0.0;
  double carried = 0.0;  // error inherited from Sample integrands
  int depth = 0;
  bool carried_ok = true;
};

template <class F>
Segment gk21(const F& f, double a, double b, int depth, std::size_t& evals) {
  const auto& T = kronrod21();
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  std::array<double, 21> fv{};
  std::array<double, 21> wk{};
  double rk = 0.0, rg = 0.0, carried = 0.0;
  bool ok = true;
  auto take = [&](std::size_t slot, double t, double w_k, double w_g) {
    Sample s = as_sample(f(t));
    if (!std::isfinite(s.value)) throw DomainError("integrand is not finite at t = " + std::to_string(t));
    evals += s.evaluations;
    ok = ok && s.converged;
    fv[slot] = s.value;
    wk[slot] = w_k;
    rk += w_k * s.value;
    rg += w_g * s.value;
    carried += w_k * std::abs(s.error);
  };
  take(0, c, T.wk[0], T.wg[0]);
  for (std::size_t i = 1; i < 11; ++i) {
    take(2 * i - 1, c - h * T.x[i], T.wk[i], T.wg[i]);
    take(2 * i, c + h * T.x[i], T.wk[i], T.wg[i]);
  }
  const double mean = rk * 0.5;
  double resabs = 0.0, resasc = 0.0;
  for (std::size_t i = 0; i < 21; ++i) {
    resabs += wk[i] * std::abs(fv[i]);
    resasc += wk[i] * std::abs(fv[i] - mean);
  }
  double err = std::abs((rk - rg) * h);
  resasc *= std::abs(h);
  resabs *= std::abs(h);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  err = std::max(err, 50.0 * std::numeric_limits<double>::epsilon() * resabs);
  return Segment{a, b, rk * h, err, carried * std::abs(h), depth, ok};
}

inline double target(const QuadratureSpec& spec, double value) {
  return std::max(spec.abs_tol, spec.rel_tol * std::abs(value));
}

inline constexpr std::size_t kMaxSegments = 40000;

// Global adaptive refinement over a fixed initial partition; returns final segments.
template <class F>
std::vector<Segment> adaptive(const F& f, const std::vector<double>& partition, const QuadratureSpec& spec,
                              std::size_t& evals, bool& converged) {
  std::vector<Segment> segs;
  segs.reserve(partition.size() * 4);
  for (std::size_t i = 0; i + 1 < partition.size(); ++i)
    if (partition[i + 1] > partition[i]) segs.push_back(gk21(f, partition[i], partition[i + 1], 0, evals));
  auto cmp = [&](std::size_t l, std::size_t r) { return segs[l].error < segs[r].error; };
  std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(cmp)> heap(cmp);
  double total = 0.0, err = 0.0;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    heap.push(i);
    total += segs[i].value;
    err += segs[i].error;
  }
  converged = true;
  double frozen = 0.0;
  while (err > target(spec, total)) {
    // Stop once only unrefinable segments stand between the estimate and the target.
    if (heap.empty() || segs.size() >= kMaxSegments || err - frozen <= 0.5 * target(spec, total)) {
      converged = false;
      break;
    }
    const std::size_t i = heap.top();
    heap.pop();
    const Segment s = segs[i];
    const double m = 0.5 * (s.a + s.b);
    if (s.depth >= spec.max_depth || !(m > s.a && m < s.b)) {
      frozen += s.error;
      continue;
    }
    Segment l = gk21(f, s.a, m, s.depth + 1, evals);
    Segment r = gk21(f, m, s.b, s.depth + 1, evals);
    total += l.value + r.value - s.value;
    err += l.error + r.error - s.error;
    segs[i] = l;
    heap.push(i);
    segs.push_back(r);
    heap.push(segs.size() - 1);
  }
  return segs;
}

inline double range_sum(const std::vector<Segment>& segs, double lo, double hi) {
  double s = 0.0;
  for (const auto& g : segs)
    if (g.a >= lo && g.b <= hi) s += g.value;
  return s;
}

// Phi(x) = int_0^x tau^alpha (log(scale/tau))^beta dtau for the tail model.
inline double tail_primitive(const EndpointBehavior& e, double x);

inline std::vector<double> chain_points(double width, double stop) {
  std::vector<double> pts;
  for (double w = 0.5 * width; w > 0.0; w *= 0.5) {
    pts.push_back(w);
    if (w <= stop && pts.size() >= 3) break;
  }
  return pts;
}

struct TailEstimate {
  double value = 0.0;
  double error = 0.0;
};

// Model C tau^alpha L^beta (1 + c tau) fitted on [w, 2w] and [2w, 4w]; returns the integral over [0, w].
inline double fitted_tail(const EndpointBehavior& e, double I_a, double I_b, double w) {
  const EndpointBehavior e1{e.power + 1.0, e.log_power, e.log_scale};
  const double P1 = tail_primitive(e, w), P2 = tail_primitive(e, 2 * w), P4 = tail_primitive(e, 4 * w);
  const double Q1 = tail_primitive(e1, w), Q2 = tail_primitive(e1, 2 * w), Q4 = tail_primitive(e1, 4 * w);
  const double a11 = P2 - P1, a12 = Q2 - Q1, a21 = P4 - P2, a22 = Q4 - Q2;
  const double det = a11 * a22 - a12 * a21;
  const double C = (I_a * a22 - a12 * I_b) / det;
  const double D = (a11 * I_b - a21 * I_a) / det;
  return C * P1 + D * Q1;
}

// I[k] is the integral over [2^k w, 2^{k+1} w] measured from the endpoint; needs three pieces.
inline TailEstimate chain_tail(const EndpointBehavior& e, const std::array<double, 3>& I, double w) {
  const double T = fitted_tail(e, I[0], I[1], w);
  const double T_prev = fitted_tail(e, I[1], I[2], 2 * w);
  return {T, std::abs(T_prev - (T + I[0]))};
}

}  // namespace detail

template <class F>
IntegralResult integrate_1d(const F& f, double a, double b, const QuadratureSpec& spec,
                            const Interval1dOptions& opt = {}) {
  spec.validate();
  require_domain(std::isfinite(a) && a < b, "integrate_1d needs finite a < b");
  const bool infinite = std::isinf(b);
  require_domain(!(infinite && opt.right), "right endpoint behaviour needs a finite endpoint");

  std::vector<double> pts{a};
  for (double t : opt.breakpoints)
    if (t > a && t < b) pts.push_back(t);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  double last = pts.back();
  if (!infinite) pts.push_back(b);

  IntegralResult res;
  std::size_t evals = 0;

  // Dyadic shells for [last, inf): stop once two successive shells are negligible.
  std::vector<double> shells;
  if (infinite) {
    double x = std::max(last, a + 1.0);
    if (x > last) pts.push_back(x);
    double running = 0.0;
    {
      bool ok = true;
      const std::vector<double> probe(pts.begin() + (opt.left && pts.size() > 2 ? 1 : 0), pts.end());
      for (const auto& s : detail::adaptive(f, probe, spec.scaled(1e3), evals, ok)) running += s.value;
    }
    int quiet = 0;
    shells.push_back(x);
    bool accepted = false;
    while (x < spec.truncation) {
      const double nx = x > 0.0 ? 2.0 * x : 1.0;
      const auto s = detail::gk21(f, x, nx, 0, evals);
      running += s.value;
      shells.push_back(nx);
      x = nx;
      const double mag = std::abs(s.value) + s.error;
      quiet = mag <= detail::target(spec, running) ? quiet + 1 : 0;
      if (quiet >= 2) {
        accepted = true;
        break;
      }
    }
    if (!accepted) res.converged = false;
    for (std::size_t i = 1; i < shells.size(); ++i) pts.push_back(shells[i]);
  }

  // Geometric chains toward declared singular endpoints.
  double left_w = 0.0, right_w = 0.0;
  auto extend_chain = [&](double end, double width, int dir, const std::vector<double>& brk) {
    double stop = spec.pole_exclusion;
    for (double t : brk) {
      const double d = std::abs(t - end);
      if (d > 0.0 && d < width) stop = std::min(stop, 0.5 * d);
    }
    const auto ws = detail::chain_points(width, stop);
    for (double w : ws) pts.push_back(end + dir * w);
    return ws.back();
  };
  std::sort(pts.begin(), pts.end());
  if (opt.left) {
    const double first = pts.size() > 1 ? pts[1] : b;
    left_w = extend_chain(a, first - a, +1, opt.breakpoints);
  }
  if (opt.right) {
    std::sort(pts.begin(), pts.end());
    const double prev = pts.size() > 1 ? pts[pts.size() - 2] : a;
    right_w = extend_chain(b, b - prev, -1, opt.breakpoints);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  // Remove the excluded end pieces from the partition.
  std::vector<double> part;
  for (double t : pts)
    if ((!opt.left || t >= a + left_w) && (!opt.right || t <= b - right_w)) part.push_back(t);

  bool ok = true;
  const auto segs = detail::adaptive(f, part, spec, evals, ok);
  res.converged = res.converged && ok;
  double total = 0.0, err = 0.0, carried = 0.0;
  for (const auto& s : segs) {
    total += s.value;
    err += s.error;
    carried += s.carried;
    res.converged = res.converged && s.carried_ok;
  }

  if (opt.left) {
    const double w = left_w;
    const auto t = detail::chain_tail(*opt.left,
                                      {detail::range_sum(segs, a + w, a + 2 * w), detail::range_sum(segs, a + 2 * w, a + 4 * w),
                                       detail::range_sum(segs, a + 4 * w, a + 8 * w)},
                                      w);
    total += t.value;
    err += t.error;
  }
  if (opt.right) {
    const double w = right_w;
    const auto t = detail::chain_tail(*opt.right,
                                      {detail::range_sum(segs, b - 2 * w, b - w), detail::range_sum(segs, b - 4 * w, b - 2 * w),
                                       detail::range_sum(segs, b - 8 * w, b - 4 * w)},
                                      w);
    total += t.value;
    err += t.error;
  }
  if (infinite && shells.size() >= 3) {
    const std::size_t n = shells.size();
    const double s1 = detail::range_sum(segs, shells[n - 3], shells[n - 2]);
    const double s2 = detail::range_sum(segs, shells[n - 2], shells[n - 1]);
    double tail = 0.0, terr = std::abs(s2);
    if (s1 != 0.0) {
      const double ratio = s2 / s1;
      if (ratio > 0.0 && ratio < 0.9) {
        tail = s2 * ratio / (1.0 - ratio);
        terr = std::abs(tail);
      }
    }
    total += tail;
    err += terr;
  }

  res.value = total;
  res.error_estimate = err + carried;
  res.evaluations = evals;
  res.converged = res.converged && res.error_estimate <= detail::target(spec, total);
  return res;
}

namespace detail {

inline double tail_primitive(const EndpointBehavior& e, double x) {
  const double al = e.power, be = e.log_power;
  if (be == 0.0) {
    require_domain(al > -1.0, "endpoint behaviour is not integrable");
    return std::pow(x, al + 1.0) / (al + 1.0);
  }
  const double L = std::log(e.log_scale / x);
  require_domain(L > 0.0, "logarithmic endpoint model used outside its range");
  if (al == -1.0) {
    require_domain(be < -1.0, "endpoint behaviour is not integrable");
    return std::pow(L, be + 1.0) / (-be - 1.0);
  }
  require_domain(al > -1.0, "endpoint behaviour is not integrable");
  const double k = al + 1.0;
  QuadratureSpec s;
  s.rel_tol = 1e-12;
  s.abs_tol = 1e-300;
  const auto I = integrate_1d([&](double v) { return std::exp(-k * v) * std::pow(L + v, be); }, 0.0, kInf, s);
  return std::pow(e.log_scale, k) * std::exp(-k * L) * I.value;
}

}  // namespace detail

// omega_{N-1} int_0^1 g(t) t^{N-1} dt
template <class G>
IntegralResult integrate_radial_ball(int N, const G& g, const QuadratureSpec& spec, const Interval1dOptions& opt = {}) {
  require_domain(N >= 1, "dimension must be positive");
  const double w = sphere_area(N);
  auto r = integrate_1d([&](double t) { return g(t) * std::pow(t, N - 1); }, 0.0, 1.0, spec.scaled(1.0 / w), opt);
  r.value *= w;
  r.error_estimate *= w;
  return r;
}

// omega_{N-1} int_0^inf g(r) r^{N-1} dr; a finite support_end truncates exactly.
template <class G>
IntegralResult integrate_radial_rn(int N, const G& g, const QuadratureSpec& spec, const Interval1dOptions& opt = {},
                                   double support_end = kInf) {
  require_domain(N >= 1, "dimension must be positive");
  const double w = sphere_area(N);
  auto r = integrate_1d([&](double t) { return g(t) * std::pow(t, N - 1); }, 0.0, support_end, spec.scaled(1.0 / w),
                        opt);
  r.value *= w;
  r.error_estimate *= w;
  return r;
}

// Local behaviour of an axisymmetric integrand at the polar centre: |f| ~ C rho^{-beta} (log(scale/rho))^log_power.
struct PoleBehavior {
  double beta = 0.0;
  double log_power = 0.0;
  double log_scale = 2.0;
};

struct AxisymOptions {
  // Polar centre (0, center_y) on the symmetry axis.
  double center_y = 1.0;
  // Clip rays at y = 0.
  bool halfspace = true;
  // Support radius about the centre.
  double radius = kInf;
  std::optional<PoleBehavior> pole;
  // Optional extra upper bound on the ray length at angle theta.
  std::function<double(double)> ray_limit;
  // Optional ray breakpoints at angle theta for rays of length rho_max.
  std::function<void(double, double, std::vector<double>&)> ray_breaks;
  std::vector<double> theta_breaks;
};

using AxisymIntegrand = std::function<double(double, double)>;

// Integral over R^N (or the half-space) of an integrand depending on (|x|, y), in polar coordinates about a point of
// the axis: omega_{N-2} int_0^pi sin^{N-2} theta int rho^{N-1} f drho dtheta.
inline IntegralResult integrate_axisym(int N, const AxisymIntegrand& f, const QuadratureSpec& spec,
                                       const AxisymOptions& opt) {
  spec.validate();
  require_domain(N >= 2 && N <= kMaxDim, "dimension out of range");
  const double c = opt.center_y;
  require_domain(!opt.halfspace || c > 0.0, "polar centre must lie in the half-space");
  const double wN2 = sphere_area(N - 1);

  if (!opt.pole) {
    // An integrand that is not negligible near the centre must declare its local order.
    double m = 0.0;
    for (double th : {0.1, 0.9, 1.6, 2.3, 3.0}) {
      const double d = spec.pole_exclusion;
      if (d < opt.radius) m = std::max(m, std::abs(f(d * std::sin(th), c + d * std::cos(th))));
    }
    const double est = sphere_area(N) * m * std::pow(spec.pole_exclusion, N) / N;
    if (est > spec.abs_tol)
      throw MissingExponentError("integrand is not negligible near the polar centre; declare its local exponent");
  }

  QuadratureSpec inner = spec;
  inner.rel_tol = 0.1 * spec.rel_tol;
  inner.abs_tol = 0.1 * spec.abs_tol / (wN2 * kPi);

  std::optional<EndpointBehavior> left;
  if (opt.pole) left = EndpointBehavior{N - 1.0 - opt.pole->beta, opt.pole->log_power, opt.pole->log_scale};

  auto ray = [&](double th) -> Sample {
    const double st = std::sin(th), ct = std::cos(th);
    double rmax = opt.radius;
    if (opt.halfspace && ct < 0.0) rmax = std::min(rmax, c / -ct);
    if (opt.ray_limit) rmax = std::min(rmax, opt.ray_limit(th));
    if (!(rmax > 0.0)) return Sample{0.0, 0.0, 1, true};
    Interval1dOptions o;
    o.left = left;
    if (opt.ray_breaks) opt.ray_breaks(th, rmax, o.breakpoints);
    const bool at_boundary = opt.halfspace && ct < 0.0 && std::isfinite(rmax) && rmax >= c / -ct;
    auto g = [&](double rho) {
      const double y = c + rho * ct;
      if (at_boundary && y <= 0.0) return 0.0;
      return f(rho * st, y) * std::pow(rho, N - 1);
    };
    const auto r = integrate_1d(g, 0.0, rmax, inner, o);
    const double w = wN2 * std::pow(st, N - 2);
    // A ray's error is carried into the outer estimate, which is checked against the global target.
    return Sample{w * r.value, w * r.error_estimate, r.evaluations, true};
  };

  Interval1dOptions outer;
  outer.breakpoints = opt.theta_breaks;
  if (opt.halfspace) outer.breakpoints.push_back(0.5 * kPi);
  return integrate_1d(ray, 0.0, kPi, spec, outer);
}

inline IntegralResult integrate_halfspace_axisym(int N, const AxisymIntegrand& f, const QuadratureSpec& spec,
                                                 AxisymOptions opt = {}) {
  opt.halfspace = true;
  return integrate_axisym(N, f, spec, opt);
}

inline IntegralResult integrate_rn_axisym(int N, const AxisymIntegrand& f, const QuadratureSpec& spec,
                                          AxisymOptions opt) {
  opt.halfspace = false;
  return integrate_axisym(N, f, spec, opt);
}

// Distance rho from the pole along direction theta where U reaches the level s; U decreases strictly along such rays.
inline double ray_level_radius(const PotentialContext& ctx, double theta, double s) {
  require_domain(s > 0.0, "level must be positive");
  const double st = std::sin(theta), ct = std::cos(theta);
  const double boundary = ct < 0.0 ? 1.0 / -ct : kInf;
  double hi = std::min(boundary, superlevel_outer_radius(ctx, s));
  auto g = [&](double rho) {
    if (rho >= boundary) return -s;
    return U(ctx, {rho * st, 1.0 + rho * ct}) - s;
  };
  double ghi = g(hi);
  if (ghi >= 0.0) return hi;
  double lo = 0.5 * hi;
  double glo = g(lo);
  while (glo <= 0.0) {
    hi = lo;
    ghi = glo;
    lo *= 0.5;
    glo = g(lo);
  }
  std::uintmax_t iters = 200;
  const auto br = boost::math::tools::toms748_solve(g, lo, hi, glo, ghi, boost::math::tools::eps_tolerance<double>(50),
                                                    iters);
  return 0.5 * (br.first + br.second);
}

// Local order of -Delta_p U_p at the pole.
inline PoleBehavior p_laplacian_pole(const PotentialContext& ctx) {
  const double p = ctx.p();
  return PoleBehavior{(ctx.N() - 1.0) * (p - 2.0) / (p - 1.0), 0.0, 2.0};
}

// F_p(s): integral of -Delta_p U_p over the superlevel set [U_p > s].
inline IntegralResult superlevel_integral(const PotentialContext& ctx, double s, const QuadratureSpec& spec) {
  require_domain(s > 0.0, "superlevel_integral needs s > 0");
  if (ctx.critical() || ctx.p() == 2.0) return IntegralResult{0.0, 0.0, 0, true};
  AxisymOptions opt;
  opt.pole = p_laplacian_pole(ctx);
  opt.ray_limit = [&ctx, s](double th) { return ray_level_radius(ctx, th, s); };
  return integrate_halfspace_axisym(
      ctx.N(), [&ctx](double r, double y) { return p_laplacian_U(ctx, {r, y}); }, spec, opt);
}

// Flux of |grad U_p|^{p-1} through the level set [U_p = s], integrated over the polar angle about the pole.
// Equals 1 + F_p(s).
inline IntegralResult level_set_flux(const PotentialContext& ctx, double s, const QuadratureSpec& spec) {
  require_domain(s > 0.0, "level_set_flux needs s > 0");
  const int N = ctx.N();
  const double p = ctx.p();
  const double w = sphere_area(N - 1);
  auto f = [&](double th) {
    const double st = std::sin(th), ct = std::cos(th);
    const double rho = ray_level_radius(ctx, th, s);
    const auto g = grad_U(ctx, {rho * st, 1.0 + rho * ct});
    const double radial = std::abs(g.dr * st + g.dy * ct);
    return w * std::pow(st, N - 2) * std::pow(rho, N - 1) * std::pow(g.norm, p) / radial;
  };
  Interval1dOptions o;
  o.breakpoints = {0.5 * kPi};
  return integrate_1d(f, 0.0, kPi, spec, o);
}

}  // namespace hardylab
