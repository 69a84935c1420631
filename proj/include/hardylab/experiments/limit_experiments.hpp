#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "hardylab/experiments/common.hpp"
#include "hardylab/functionals.hpp"
#include "hardylab/transplant.hpp"

namespace hardylab::experiments {

inline ExperimentConfig tm_scan_defaults() {
  ExperimentConfig c;
  c.experiment = "tm-scan";
  c.params_grid = {{"N", {2}}};
  c.family_grid = {{"K", {1, 2, 4, 8, 16}}, {"factor", {0.9, 1.1}}};
  c.quadrature.rel_tol = 1e-7;
  return c;
}

// Trudinger-Moser functional along unit-energy Moser functions concentrating at the pole.
inline std::vector<Row> run_tm_scan(const ExperimentConfig& cfg, const RunOptions& opt) {
  const RowMaker row{opt.tol_scale};
  const QuadratureSpec spec = cfg.spec();
  auto Ks = list_of(cfg.family_grid, "K");
  std::sort(Ks.begin(), Ks.end());
  const auto& factors = list_of(cfg.family_grid, "factor");
  std::vector<Task> tasks;
  for (double Nd : list_of(cfg.params_grid, "N")) {
    const int N = as_int(Nd, "N");
    const PotentialContext ctx(N, N);
    for (double K : Ks) {
      tasks.push_back([=] {
        const auto u = transplant_from_ball(ctx, moser_profile(N, K));
        const auto e = rhs(FunctionalKind::trudinger_moser(N, 1.0), u, spec);
        return std::vector<Row>{row({{"clause", "unit-energy"}, {"N", double(N)}, {"K", K}}, {{"energy", e.value}},
                                    std::abs(e.value - 1.0), 1e-6, e.converged)};
      });
    }
    for (double fac : factors) {
      tasks.push_back([=] {
        const auto kind = FunctionalKind::trudinger_moser(N, fac * tm_threshold(N));
        std::vector<double> vals;
        bool conv = true;
        Record out;
        for (std::size_t j = 0; j < Ks.size(); ++j) {
          const auto l = lhs(kind, transplant_from_ball(ctx, moser_profile(N, Ks[j])), spec);
          vals.push_back(l.value);
          conv = conv && l.converged;
          out["value_K" + std::to_string(static_cast<int>(Ks[j]))] = l.value;
        }
        const double first = vals.front();
        const double top = *std::max_element(vals.begin(), vals.end());
        out["alpha"] = fac * tm_threshold(N);
        if (fac < 1.0) {
          out["max_over_first"] = top / first;
          return std::vector<Row>{
              row({{"clause", "bounded"}, {"N", double(N)}, {"factor", fac}}, out, top / first - 2.0, 0.0, conv)};
        }
        double drop = 0.0;
        for (std::size_t j = 1; j < vals.size(); ++j) drop = std::max(drop, (vals[j - 1] - vals[j]) / first);
        out["last_over_first"] = vals.back() / first;
        return std::vector<Row>{row({{"clause", "growth"}, {"N", double(N)}, {"factor", fac}}, out,
                                    std::max(drop, 2.0 - vals.back() / first), 0.0, conv)};
      });
    }
  }
  return run_tasks(tasks, opt);
}

inline ExperimentConfig no_weight_rn_defaults() {
  ExperimentConfig c;
  c.experiment = "no-weight-rn";
  c.params_grid = {{"N", {2, 3}}};
  c.family_grid = {{"logR", {1, 2, 4, 8}}};
  return c;
}

// phi_R = 1 on B_1, log(R/|x|)/log R on B_R \ B_1: its N-energy vanishes as R grows while a weighted L^q norm
// over B_1 stays fixed.
inline std::vector<Row> run_no_weight_rn(const ExperimentConfig& cfg, const RunOptions& opt) {
  const RowMaker row{opt.tol_scale};
  const QuadratureSpec spec = cfg.spec();
  auto logs = list_of(cfg.family_grid, "logR");
  std::sort(logs.begin(), logs.end());
  for (double l : logs) require_domain(l > 0.0, "logR must be positive");
  std::vector<Task> tasks;
  for (double Nd : list_of(cfg.params_grid, "N")) {
    const int N = as_int(Nd, "N");
    make_params(N, N);
    tasks.push_back([=] {
      const auto kind = FunctionalKind::weighted_candidate(
          N, N + 1.0, [](double t) { return t < 1.0 ? 1.0 : 0.0; }, {1.0});
      QuadratureSpec tight = spec;
      tight.rel_tol = 1e-12;
      tight.abs_tol = 1e-300;
      std::vector<Row> rows;
      std::vector<double> Rs, Q;
      bool conv = true;
      for (double l : logs) {
        const double R = std::exp(l);
        const double closed = sphere_area(N) * std::pow(l, 1.0 - N);
        const RadialFunction f{N, family_log_cutoff(R)};
        const auto e = rhs(kind, f, tight);
        rows.push_back(row({{"clause", "closed-form"}, {"N", double(N)}, {"logR", l}},
                           {{"energy", e.value}, {"closed_form", closed}, {"formula", log_cutoff_energy(N, R)}},
                           std::max(relative_difference(e.value, closed), relative_difference(log_cutoff_energy(N, R), closed)),
                           1e-8, e.converged));
        // The same energy as an N-dimensional integral of |grad phi_R(|z|)|^N.
        AxisymOptions o;
        o.center_y = 0.0;
        o.halfspace = false;
        o.radius = R;
        o.pole = PoleBehavior{0.0, 0.0, 2.0};
        o.ray_breaks = [](double, double rmax, std::vector<double>& out) {
          if (1.0 < rmax) out.push_back(1.0);
        };
        const auto eq = integrate_rn_axisym(
            N,
            [l, N](double r, double y) {
              const double t = std::hypot(r, y);
              return t <= 1.0 ? 0.0 : std::pow(1.0 / (t * l), N);
            },
            spec, o);
        rows.push_back(row({{"clause", "quadrature"}, {"N", double(N)}, {"logR", l}},
                           {{"energy", eq.value}, {"closed_form", closed}}, relative_difference(eq.value, closed), 1e-5,
                           eq.converged));
        const auto q = rayleigh(kind, f, spec);
        Rs.push_back(R);
        Q.push_back(q.value);
        conv = conv && q.converged;
      }
      // Slope of log Q against log log R.
      const double slope = loglog_slope(logs, Q);
      rows.push_back(row({{"clause", "slope"}, {"N", double(N)}},
                         {{"slope", slope}, {"expected", 1.0 - N}, {"quotient_last", Q.back()}},
                         std::abs(slope / (1.0 - N) - 1.0), 0.05, conv));
      return rows;
    });
  }
  return run_tasks(tasks, opt);
}

inline ExperimentConfig asym_counterexample_defaults() {
  ExperimentConfig c;
  c.experiment = "asym-counterexample";
  c.params_grid = {{"N", {3}}, {"p", {2}}, {"s", {1}}};
  c.family_grid = {{"eps", {0.2, 0.1, 0.05}}};
  c.quadrature.rel_tol = 1e-7;
  return c;
}

// Bubbles of radius eps touching the boundary: the improved Hardy-Sobolev quotient vanishes like
// eps^{(N-1)(p-s)/(N-s)}.
inline std::vector<Row> run_asym_counterexample(const ExperimentConfig& cfg, const RunOptions& opt) {
  const RowMaker row{opt.tol_scale};
  const QuadratureSpec spec = cfg.spec();
  auto eps = list_of(cfg.family_grid, "eps");
  std::sort(eps.rbegin(), eps.rend());
  const auto n = zipped_size(cfg.params_grid, {"N", "p", "s"});
  std::vector<Task> tasks;
  for (std::size_t j = 0; j < n; ++j) {
    const int N = as_int(zipped_at(cfg.params_grid, "N", j), "N");
    const double p = zipped_at(cfg.params_grid, "p", j), s = zipped_at(cfg.params_grid, "s", j);
    const auto kind = FunctionalKind::hardy_sobolev_improved(N, p, s);
    for (std::size_t i = 0; i < eps.size(); ++i) {
      tasks.push_back([=] {
        const auto u = family_bubble(N, p, eps[i]);
        const auto num = rhs(kind, u, spec);
        const auto den = lhs(kind, u, spec);
        Row r;
        r.inputs = {{"index", double(i)}};
        r.outputs = {{"eps", eps[i]}, {"quotient", num.value / den.value}, {"energy", num.value}};
        r.converged = num.converged && den.converged;
        return std::vector<Row>{r};
      });
    }
  }
  // Per-eps values are combined into the two slope rows.
  const auto raw = run_tasks(tasks, opt);
  std::vector<Row> rows;
  for (std::size_t j = 0; j < n; ++j) {
    const int N = as_int(zipped_at(cfg.params_grid, "N", j), "N");
    const double p = zipped_at(cfg.params_grid, "p", j), s = zipped_at(cfg.params_grid, "s", j);
    std::vector<double> Q, E;
    bool conv = true;
    Record out;
    for (std::size_t i = 0; i < eps.size(); ++i) {
      const auto& r = raw[j * eps.size() + i];
      Q.push_back(as_number(r.outputs.at("quotient")));
      E.push_back(as_number(r.outputs.at("energy")));
      conv = conv && r.converged;
      out["quotient_" + std::to_string(i)] = Q.back();
      out["eps_" + std::to_string(i)] = eps[i];
    }
    const double expected = (N - 1.0) * (p - s) / (N - s);
    const double sq = loglog_slope(eps, Q), se = loglog_slope(eps, E);
    Record a = out;
    a["slope"] = sq;
    a["expected"] = expected;
    rows.push_back(row({{"clause", "quotient-slope"}, {"N", double(N)}, {"p", p}, {"s", s}}, a,
                       std::abs(sq / expected - 1.0), 0.1, conv));
    rows.push_back(row({{"clause", "energy-slope"}, {"N", double(N)}, {"p", p}, {"s", s}},
                       {{"slope", se}, {"expected", N - p}}, std::abs(se - (N - p)), 1e-3, conv));
  }
  return rows;
}

inline ExperimentConfig bliss_limit_defaults() {
  ExperimentConfig c;
  c.experiment = "bliss-limit";
  c.params_grid = {{"N", {2, 3}}};
  c.family_grid = {{"k", {0, 1, 2, 3, 4, 5, 6}},
                   {"bliss_p", {2, 2}},
                   {"bliss_q", {4, 6}},
                   {"log_N", {3}},
                   {"log_q", {4}}};
  c.samples = 10;
  return c;
}

inline std::vector<Row> run_bliss_limit(const ExperimentConfig& cfg, const RunOptions& opt) {
  const RowMaker row{opt.tol_scale};
  const QuadratureSpec spec = cfg.spec();
  const auto& fg = cfg.family_grid;
  const int n = samples_or(cfg, 10);
  auto ks = list_of(fg, "k");
  std::sort(ks.begin(), ks.end());
  std::vector<Task> tasks;
  for (double Nd : list_of(cfg.params_grid, "N")) {
    const int N = as_int(Nd, "N");
    make_params(N, N);
    tasks.push_back([=] {
      const double target = critical_hardy_constant(N);
      std::vector<Row> rows;
      double prev = kInf;
      for (double k : ks) {
        const double q = N + std::ldexp(1.0, -as_int(k, "k"));
        const double C = bliss_log_constant(N, q);
        const double d = std::abs(C - target);
        rows.push_back(row({{"clause", "sequence"}, {"N", double(N)}, {"k", k}},
                           {{"q", q}, {"constant", C}, {"limit", target}, {"distance", d}},
                           std::isfinite(prev) ? std::max(0.0, d - prev) : 0.0, 0.0));
        prev = d;
      }
      const double q = N + std::ldexp(1.0, -static_cast<int>(ks.back()));
      const double C = bliss_log_constant(N, q);
      rows.push_back(row({{"clause", "limit"}, {"N", double(N)}, {"k", ks.back()}},
                         {{"q", q}, {"constant", C}, {"limit", target}}, std::abs(C - target), 0.01));
      return rows;
    });
  }
  tasks.push_back([=] {
    const double S = sobolev_constant(make_params(3, 2.0));
    const double expected = 3.0 * std::pow(kPi / 2.0, 4.0 / 3.0);
    return std::vector<Row>{row({{"clause", "sobolev-constant"}, {"N", 3.0}, {"p", 2.0}},
                                {{"constant", S}, {"expected", expected}}, std::abs(S - expected), 1e-9)};
  });
  const auto m = zipped_size(fg, {"bliss_p", "bliss_q"});
  for (std::size_t j = 0; j < m; ++j) {
    const double p = zipped_at(fg, "bliss_p", j), q = zipped_at(fg, "bliss_q", j);
    const auto kind = FunctionalKind::bliss(p, q);
    for (int i = 0; i < n; ++i) {
      tasks.push_back([=, &cfg] {
        const LineFunction f{random_smooth_profile(task_seed(cfg.seed, 100 + j, static_cast<std::uint64_t>(i)), 3.0, true)};
        const auto Q = rayleigh(kind, f, spec);
        const double C = reference_constant(kind);
        return std::vector<Row>{row({{"clause", "bliss"}, {"p", p}, {"q", q}, {"sample", double(i)}},
                                    {{"quotient", Q.value}, {"constant", C}}, C - Q.value, 1e-6, Q.converged)};
      });
    }
  }
  const auto ml = zipped_size(fg, {"log_N", "log_q"});
  for (std::size_t j = 0; j < ml; ++j) {
    const int N = as_int(zipped_at(fg, "log_N", j), "log_N");
    const double q = zipped_at(fg, "log_q", j);
    const auto kind = FunctionalKind::bliss_log(N, q);
    for (int i = 0; i < n; ++i) {
      tasks.push_back([=, &cfg] {
        const RadialFunction f{N, random_smooth_profile(task_seed(cfg.seed, 110 + j, static_cast<std::uint64_t>(i)), 1.0)};
        const auto Q = rayleigh(kind, f, spec);
        const double C = reference_constant(kind);
        return std::vector<Row>{row({{"clause", "bliss-log"}, {"N", double(N)}, {"q", q}, {"sample", double(i)}},
                                    {{"quotient", Q.value}, {"constant", C}}, C - Q.value, 1e-6, Q.converged)};
      });
    }
  }
  return run_tasks(tasks, opt);
}

inline ExperimentConfig transplant_isometries_defaults() {
  ExperimentConfig c;
  c.experiment = "transplant-isometries";
  c.params_grid = {{"N", {2, 3}}};
  c.family_grid = {{"R", {1, 2}},
                   {"m", {3, 4}},
                   {"level_N", {3, 5, 4}},
                   {"level_p", {2, 3, 2.5}},
                   {"t", {0.1, 1, 10}}};
  c.samples = 5;
  return c;
}

inline std::vector<Row> run_transplant_isometries(const ExperimentConfig& cfg, const RunOptions& opt) {
  const RowMaker row{opt.tol_scale};
  const QuadratureSpec spec = cfg.spec();
  const auto& fg = cfg.family_grid;
  const int n = samples_or(cfg, 5);
  std::vector<Task> tasks;
  for (double Nd : list_of(cfg.params_grid, "N")) {
    const int N = as_int(Nd, "N");
    const PotentialContext ctx(N, N);
    for (double R : list_of(fg, "R")) {
      require_domain(R > 0.0, "R must be positive");
      tasks.push_back([=, &cfg] {
        std::vector<Row> rows;
        for (int i = 0; i < n; ++i) {
          const auto u = random_smooth_profile(task_seed(cfg.seed, 120 + N, static_cast<std::uint64_t>(i)), R);
          const auto e = radial_energy_ball(N, N, u, spec, R);
          const auto v = moser_transform(N, R, u);
          const auto l = line_energy(N, v, spec);
          rows.push_back(row({{"clause", "moser"}, {"N", double(N)}, {"R", R}, {"sample", double(i)}},
                             {{"ball_energy", e.value}, {"line_energy", l.value}}, relative_difference(e.value, l.value),
                             1e-4, e.converged && l.converged));
          const auto back = moser_inverse(N, R, v);
          double err = 0.0;
          for (int k = 1; k < 64; ++k) {
            const double t = R * k / 64.0;
            err = std::max(err, std::abs(back(t) - u(t)));
          }
          rows.push_back(row({{"clause", "moser-roundtrip"}, {"N", double(N)}, {"R", R}, {"sample", double(i)}},
                             {{"max_error", err}}, err, 1e-12));
          for (double md : list_of(fg, "m")) {
            const int mm = as_int(md, "m");
            if (mm <= N) continue;
            const auto w = dimension_transform(N, mm, R, u);
            const auto em = radial_energy_ball(mm, N, w, spec, R);
            rows.push_back(row({{"clause", "dimension"}, {"N", double(N)}, {"m", double(mm)}, {"R", R},
                                {"sample", double(i)}},
                               {{"energy_N", e.value}, {"energy_m", em.value}}, relative_difference(e.value, em.value),
                               1e-4, e.converged && em.converged));
          }
        }
        return rows;
      });
    }
    // Conformal invariance of the N-energy under the transplant from the unit ball.
    tasks.push_back([=, &cfg] {
      std::vector<Row> rows;
      for (int i = 0; i < n; ++i) {
        const auto u = transplant_from_ball(
            ctx, random_smooth_profile(task_seed(cfg.seed, 130 + N, static_cast<std::uint64_t>(i)), 1.0));
        const auto c = dirichlet_energy_symmetric(u, spec);
        rows.push_back(row({{"clause", "ball-energy"}, {"N", double(N)}, {"sample", double(i)}},
                           {{"direct", c.direct.value}, {"ball", c.identity->value}}, c.relative_gap(), 1e-4,
                           c.direct.converged && c.identity->converged));
      }
      return rows;
    });
  }
  const auto ml = zipped_size(fg, {"level_N", "level_p"});
  for (std::size_t j = 0; j < ml; ++j) {
    const int N = as_int(zipped_at(fg, "level_N", j), "level_N");
    const double p = zipped_at(fg, "level_p", j);
    const PotentialContext ctx(N, p);
    require_domain(!ctx.critical(), "level-set energy needs p < N");
    tasks.push_back([=] {
      std::vector<Row> rows;
      for (double t : list_of(fg, "t")) {
        const auto e = green_level_energy(ctx, t, spec);
        rows.push_back(row({{"clause", "level-set"}, {"N", double(N)}, {"p", p}, {"t", t}}, {{"energy", e.value}},
                           std::abs(e.value - t) / t, 1e-6, e.converged));
      }
      return rows;
    });
  }
  return run_tasks(tasks, opt);
}

}  // namespace hardylab::experiments
