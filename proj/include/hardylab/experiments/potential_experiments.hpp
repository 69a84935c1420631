#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "hardylab/experiments/common.hpp"
#include "hardylab/potentials.hpp"
#include "hardylab/quadrature.hpp"

namespace hardylab::experiments {

namespace potential_detail {

inline bool is_trivial(int N, double p) { return p == 2.0 || p == static_cast<double>(N); }

// Orientation of -Delta_p U_p and of F_p asserted for p in (1, N): <= 0 for p <= 2, >= 0 for p >= 2.
inline double claimed_sign(double p) { return p < 2.0 ? -1.0 : 1.0; }

// div(|grad U|^{p-2} grad U) by fourth-order central differences in (r, y).
inline double fd_p_laplacian(const PotentialContext& ctx, HalfSpacePoint pt, double h) {
  const int N = ctx.N();
  const double p = ctx.p();
  auto flux = [&](double r, double y) {
    const auto g = grad_U(ctx, {r, y});
    const double m = std::pow(g.norm, p - 2.0);
    return std::pair{m * g.dr, m * g.dy};
  };
  auto d4 = [h](double fm2, double fm1, double fp1, double fp2) { return (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h); };
  const double r = pt.r, y = pt.y;
  const double dFr = d4(flux(r - 2 * h, y).first, flux(r - h, y).first, flux(r + h, y).first, flux(r + 2 * h, y).first);
  const double dFy =
      d4(flux(r, y - 2 * h).second, flux(r, y - h).second, flux(r, y + h).second, flux(r, y + 2 * h).second);
  return dFr + (N - 2.0) * flux(r, y).first / r + dFy;
}

// Random point of the half-space with log-uniform coordinates.
inline HalfSpacePoint log_uniform_point(Rng& g, double lo, double hi) {
  return {g.log_uniform(lo, hi), g.log_uniform(lo, hi)};
}

}  // namespace potential_detail

inline ExperimentConfig plaplacian_sign_defaults() {
  ExperimentConfig c;
  c.experiment = "plaplacian-sign";
  c.params_grid = {{"N", {3, 4, 5, 6, 4}}, {"p", {1.5, 2, 3, 5, 4}}};
  c.family_grid = {{"fd_points", {200}}};
  c.samples = 10000;
  return c;
}

inline std::vector<Row> run_plaplacian_sign(const ExperimentConfig& cfg, const RunOptions& opt) {
  using namespace potential_detail;
  const RowMaker row{opt.tol_scale};
  const int n = samples_or(cfg, 10000);
  const int nfd = has_key(cfg.family_grid, "fd_points") ? as_int(list_of(cfg.family_grid, "fd_points").front(), "fd_points") : 200;
  std::vector<Task> tasks;
  std::uint64_t idx = 0;
  for (const auto& [N, p] : np_pairs(cfg.params_grid)) {
    const PotentialContext ctx(N, p);
    const std::uint64_t stream = idx++;
    tasks.push_back([=, &cfg] {
      Rng g(task_seed(cfg.seed, 10, stream));
      const Record in{{"N", double(N)}, {"p", p}};
      auto with = [&](const char* clause) {
        Record r = in;
        r["clause"] = clause;
        return r;
      };
      std::vector<Row> rows;
      const double claim = claimed_sign(p);
      int wrong = 0, opposite_wrong = 0, nonzero = 0;
      double max_abs = 0.0;
      for (int i = 0; i < n; ++i) {
        const auto pt = log_uniform_point(g, std::exp(-5.0), std::exp(4.0));
        const double v = p_laplacian_U(ctx, pt);
        max_abs = std::max(max_abs, std::abs(v));
        if (v != 0.0) ++nonzero;
        if (claim * v < 0.0) ++wrong;
        if (claim * v > 0.0) ++opposite_wrong;
      }
      if (is_trivial(N, p)) {
        rows.push_back(row(with("zero"), {{"points", double(n)}, {"max_abs", max_abs}}, max_abs, 0.0));
      } else {
        rows.push_back(row(with("sign"), {{"points", double(n)}, {"wrong_fraction", double(wrong) / n}},
                           double(wrong) / n, 0.0));
        rows.push_back(row(with("sign-observed"),
                           {{"points", double(n)}, {"nonzero", double(nonzero)},
                            {"wrong_fraction", double(opposite_wrong) / n}},
                           double(opposite_wrong) / n, 0.0));
      }
      double worst = 0.0, worst_published = 0.0;
      for (int i = 0; i < nfd; ++i) {
        const HalfSpacePoint pt{g.uniform(0.2, 3.0), g.uniform(0.2, 3.0)};
        const double cf = p_laplacian_U(ctx, pt);
        const double fd = fd_p_laplacian(ctx, pt, 1e-3);
        double scale = std::abs(cf);
        if (is_trivial(N, p)) {
          const auto gr = grad_U(ctx, pt);
          scale = std::pow(gr.norm, p - 1.0) / std::hypot(pt.r, pt.y - 1.0);
        }
        worst = std::max(worst, std::abs(cf + fd) / scale);
        if (!is_trivial(N, p))
          worst_published = std::max(worst_published, std::abs(p_laplacian_U_published(ctx, pt) + fd) / std::abs(fd));
      }
      Record out{{"points", double(nfd)}, {"max_rel_error", worst}};
      if (!is_trivial(N, p)) out["published_max_rel_error"] = worst_published;
      rows.push_back(row(with("fd"), out, worst, 1e-4));
      return rows;
    });
  }
  return run_tasks(tasks, opt);
}

inline ExperimentConfig weak_form_defaults() {
  ExperimentConfig c;
  c.experiment = "weak-form";
  c.params_grid = {{"N", {3, 4, 5}}, {"p", {1.5, 2.5, 3}}};
  c.samples = 5;
  c.quadrature.rel_tol = 1e-7;
  return c;
}

inline std::vector<Row> run_weak_form(const ExperimentConfig& cfg, const RunOptions& opt) {
  const RowMaker row{opt.tol_scale};
  const QuadratureSpec spec = cfg.spec();
  const int n = samples_or(cfg, 5);
  std::vector<Task> tasks;
  for (const auto& [N, p] : np_pairs(cfg.params_grid)) {
    const PotentialContext ctx(N, p);
    for (int i = 0; i < n; ++i) {
      tasks.push_back([=, &cfg] {
        Rng g(task_seed(cfg.seed, 11, static_cast<std::uint64_t>(i)));
        // phi = (1 - |z - c|^2/R^2)^4 (1 + a (y - c)/R) on a ball about (0, c) containing the pole and inside y > 0.
        const double c = g.uniform(0.75, 1.45);
        const double d = std::abs(1.0 - c);
        const double R = d + g.uniform(0.25, 0.75) * (c - d);
        const double a = g.uniform(-0.5, 0.5);
        auto phi = [=](double r, double y) {
          const double w = 1.0 - (r * r + (y - c) * (y - c)) / (R * R);
          if (w <= 0.0) return 0.0;
          return w * w * w * w * (1.0 + a * (y - c) / R);
        };
        auto dphi = [=](double r, double y) {
          const double w = 1.0 - (r * r + (y - c) * (y - c)) / (R * R);
          if (w <= 0.0) return std::pair{0.0, 0.0};
          const double lin = 1.0 + a * (y - c) / R;
          const double w3 = 4.0 * w * w * w;
          return std::pair{w3 * (-2.0 * r / (R * R)) * lin, w3 * (-2.0 * (y - c) / (R * R)) * lin + w * w * w * w * a / R};
        };
        AxisymOptions o;
        o.center_y = 1.0;
        const double delta = 1.0 - c;
        o.ray_limit = [=](double th) {
          const double ct = std::cos(th);
          return -delta * ct + std::sqrt(delta * delta * ct * ct - delta * delta + R * R);
        };
        o.pole = PoleBehavior{N - 1.0, 0.0, 2.0};
        const auto flux = integrate_halfspace_axisym(
            N,
            [&](double r, double y) {
              const auto gu = grad_U(ctx, {r, y});
              const auto [pr, py] = dphi(r, y);
              return std::pow(gu.norm, p - 2.0) * (gu.dr * pr + gu.dy * py);
            },
            spec, o);
        o.pole = p_laplacian_pole(ctx);
        const auto source = integrate_halfspace_axisym(
            N, [&](double r, double y) { return p_laplacian_U(ctx, {r, y}) * phi(r, y); }, spec, o);
        const auto published = integrate_halfspace_axisym(
            N, [&](double r, double y) { return p_laplacian_U_published(ctx, {r, y}) * phi(r, y); }, spec, o);
        const double at_pole = phi(0.0, 1.0);
        const double res = std::abs(flux.value - source.value - at_pole) / std::abs(at_pole);
        const double res_pub = std::abs(flux.value - published.value - at_pole) / std::abs(at_pole);
        return std::vector<Row>{row({{"clause", "identity"}, {"N", double(N)}, {"p", p}, {"sample", double(i)}},
                                    {{"center", c}, {"radius", R}, {"flux_term", flux.value},
                                     {"source_term", source.value}, {"phi_at_pole", at_pole}, {"residual", res},
                                     {"published_residual", res_pub}},
                                    res, 1e-3, flux.converged && source.converged)};
      });
    }
  }
  return run_tasks(tasks, opt);
}

inline ExperimentConfig vp_bound_defaults() {
  ExperimentConfig c;
  c.experiment = "vp-bound";
  c.params_grid = {{"N", {3, 4, 5}}, {"p", {2, 2.5, 3}}};
  c.samples = 10000;
  return c;
}

inline std::vector<Row> run_vp_bound(const ExperimentConfig& cfg, const RunOptions& opt) {
  const RowMaker row{opt.tol_scale};
  const int n = samples_or(cfg, 10000);
  std::vector<Task> tasks;
  std::uint64_t idx = 0;
  for (const auto& [N, p] : np_pairs(cfg.params_grid)) {
    const PotentialContext ctx(N, p);
    require_domain(!ctx.critical(), "vp-bound needs p < N");
    const std::uint64_t stream = idx++;
    tasks.push_back([=, &cfg] {
      Rng g(task_seed(cfg.seed, 12, stream));
      double vmin = kInf;
      HalfSpacePoint arg{};
      for (int i = 0; i < n; ++i) {
        HalfSpacePoint pt;
        if (3 * i < 2 * n) {
          pt = potential_detail::log_uniform_point(g, std::exp(-5.0), std::exp(4.0));
        } else {
          const double rho = g.log_uniform(1e-6, 1e-1), th = g.uniform(0.0, kPi);
          pt = {rho * std::sin(th), 1.0 + rho * std::cos(th)};
        }
        const double v = V_p(ctx, pt);
        if (v < vmin) {
          vmin = v;
          arg = pt;
        }
      }
      std::vector<Row> rows;
      rows.push_back(row({{"clause", "bound"}, {"N", double(N)}, {"p", p}},
                         {{"points", double(n)}, {"min_V", vmin}, {"argmin_r", arg.r}, {"argmin_y", arg.y}},
                         1.0 - vmin, 1e-12));
      if (N == 3 && p == 2.0) {
        const double v = V_p(ctx, {0.0, 2.0});
        rows.push_back(row({{"clause", "spot"}, {"N", double(N)}, {"p", p}},
                           {{"value", v}, {"expected", 16.0 / 9.0}}, std::abs(v - 16.0 / 9.0), 1e-12));
      }
      return rows;
    });
  }
  return run_tasks(tasks, opt);
}

inline ExperimentConfig limit_p_to_n_defaults() {
  ExperimentConfig c;
  c.experiment = "limit-p-to-N";
  c.params_grid = {{"N", {3}}, {"k", {2, 3, 4, 5, 6, 7}}};
  c.samples = 20;
  return c;
}

// Relative distance between ((N-p)/p)^p V_p^{p/2} d_-^{-p} and ((N-1)/N)^N V_N^{N/2} along p = N - 2^{-k}.
inline std::vector<Row> run_limit_p_to_n(const ExperimentConfig& cfg, const RunOptions& opt) {
  const RowMaker row{opt.tol_scale};
  const int n = samples_or(cfg, 20);
  auto ks = list_of(cfg.params_grid, "k");
  std::sort(ks.begin(), ks.end());
  std::vector<Task> tasks;
  for (double Nd : list_of(cfg.params_grid, "N")) {
    const int N = as_int(Nd, "N");
    for (double k : ks) make_params(N, N - std::ldexp(1.0, -as_int(k, "k")));
    tasks.push_back([=, &cfg] {
      Rng g(task_seed(cfg.seed, 13, static_cast<std::uint64_t>(N)));
      std::vector<Row> rows;
      for (int i = 0; i < n; ++i) {
        HalfSpacePoint pt;
        do {
          pt = potential_detail::log_uniform_point(g, 0.05, 3.0);
        } while (dminus2(pt) < 0.05 * 0.05);
        const double ref = critical_hardy_constant(N) * std::pow(V_N_weight(N, pt), 0.5 * N);
        Record out{{"r", pt.r}, {"y", pt.y}};
        std::vector<double> D;
        for (double k : ks) {
          const PotentialContext ctx(N, N - std::ldexp(1.0, -static_cast<int>(k)));
          D.push_back(std::abs(hardy_constant(ctx.params()) * hardy_weight(ctx, pt) - ref) / ref);
          out["D_k" + std::to_string(static_cast<int>(k))] = D.back();
        }
        double rise = 0.0;
        for (std::size_t j = 1; j < D.size(); ++j) rise = std::max(rise, D[j] - D[j - 1]);
        rows.push_back(row({{"clause", "monotone"}, {"N", double(N)}, {"point", double(i)}}, out, rise / D.front(), 0.0));
      }
      return rows;
    });
  }
  return run_tasks(tasks, opt);
}

inline ExperimentConfig fp_properties_defaults() {
  ExperimentConfig c;
  c.experiment = "fp-properties";
  c.params_grid = {{"N", {3, 4, 5, 4, 6, 3}}, {"p", {2, 4, 3, 2.5, 3.5, 1.5}}};
  c.family_grid = {{"s", {0.1, 0.5, 1, 5}}};
  c.quadrature.rel_tol = 1e-10;
  c.quadrature.abs_tol = 1e-13;
  return c;
}

inline std::vector<Row> run_fp_properties(const ExperimentConfig& cfg, const RunOptions& opt) {
  using namespace potential_detail;
  const RowMaker row{opt.tol_scale};
  const QuadratureSpec spec = cfg.spec();
  auto levels = list_of(cfg.family_grid, "s");
  std::sort(levels.begin(), levels.end());
  for (double s : levels) require_domain(s > 0.0, "levels must be positive");
  std::vector<Task> tasks;
  for (const auto& [N, p] : np_pairs(cfg.params_grid)) {
    const PotentialContext ctx(N, p);
    tasks.push_back([=] {
      std::vector<Row> rows;
      std::vector<double> F;
      bool all_conv = true;
      for (double s : levels) {
        const Record in{{"N", double(N)}, {"p", p}, {"s", s}};
        auto with = [&](const char* clause) {
          Record r = in;
          r["clause"] = clause;
          return r;
        };
        const auto fl = level_set_flux(ctx, s, spec);
        const double f_flux = fl.value - 1.0;
        if (is_trivial(N, p)) {
          rows.push_back(row(with("vanish"), {{"F_flux", f_flux}}, std::abs(f_flux), 1e-8, fl.converged));
          continue;
        }
        const auto fq = superlevel_integral(ctx, s, spec);
        F.push_back(fq.value);
        all_conv = all_conv && fq.converged;
        const double claim = claimed_sign(p);
        rows.push_back(row(with("sign"), {{"F", fq.value}}, std::max(0.0, -claim * fq.value), 0.0, fq.converged));
        rows.push_back(
            row(with("sign-observed"), {{"F", fq.value}}, std::max(0.0, claim * fq.value), 0.0, fq.converged));
        rows.push_back(row(with("flux"), {{"F", fq.value}, {"F_flux", f_flux}}, std::abs(fq.value - f_flux), 1e-6,
                           fq.converged && fl.converged));
      }
      if (!is_trivial(N, p) && p > 2.0) {
        double rise = 0.0, fall = 0.0;
        for (std::size_t j = 1; j < F.size(); ++j) {
          rise = std::max(rise, F[j] - F[j - 1]);
          fall = std::max(fall, F[j - 1] - F[j]);
        }
        const Record in{{"N", double(N)}, {"p", p}};
        Record a = in, b = in;
        a["clause"] = "monotone";
        b["clause"] = "monotone-observed";
        rows.push_back(row(a, {{"max_increase", rise}}, rise, 0.0, all_conv));
        rows.push_back(row(b, {{"max_decrease", fall}}, fall, 0.0, all_conv));
      }
      return rows;
    });
  }
  return run_tasks(tasks, opt);
}

}  // namespace hardylab::experiments
