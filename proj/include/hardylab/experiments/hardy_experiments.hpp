#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "hardylab/experiments/common.hpp"
#include "hardylab/functionals.hpp"
#include "hardylab/transplant.hpp"

namespace hardylab::experiments {

namespace hardy_detail {

inline int int_key(const Grid& g, const std::string& key, int fallback) {
  return has_key(g, key) ? as_int(list_of(g, key).front(), key) : fallback;
}

inline Row quotient_row(const RowMaker& row, Record in, const IntegralResult& q, double C) {
  return row(std::move(in), {{"quotient", q.value}, {"constant", C}, {"quotient_error", q.error_estimate}},
             C - q.value, 1e-6, q.converged);
}

// v(t) = w(log(1/t)) on the unit ball for a profile w of L = log(1/t).
inline RadialProfile ball_profile_from_line(const RadialProfile& w) {
  std::vector<double> br;
  for (double L : w.knots(0.0, kInf)) br.push_back(std::exp(-L));
  std::sort(br.begin(), br.end());
  return RadialProfile{[w](double t) { return t >= 1.0 ? 0.0 : w(-std::log(t)); },
                       [w](double t) { return t >= 1.0 ? 0.0 : -w.d(-std::log(t)) / t; }, 1.0, br};
}

// Quotient of int |kappa phi + phi'|^p (1 + F) ds over int |phi|^p (1 + F) ds with F = F_p(G(e^s)) and phi the
// plateau of height 1 on [-P, P] with linear ramps of length T: the improved Hardy quotient of the symmetric
// function transplanted from r^kappa phi(log r), kappa = -(N-p)/p.
struct PlateauQuotient {
  IntegralResult energy, weighted;
  double value() const { return energy.value / weighted.value; }
};

inline PlateauQuotient plateau_quotient(const FpTable& table, double P, double T, const QuadratureSpec& spec) {
  const auto& ctx = table.context();
  const double p = ctx.p();
  const double kappa = -(ctx.N() - p) / p;
  auto weight = [&](double s) { return 1.0 + table(green_rn(ctx, std::exp(s))); };
  auto phi = [P, T](double s) {
    const double d = std::abs(s);
    return d <= P ? 1.0 : d >= P + T ? 0.0 : (P + T - d) / T;
  };
  auto dphi = [P, T](double s) {
    const double d = std::abs(s);
    if (d <= P || d >= P + T) return 0.0;
    return s > 0.0 ? -1.0 / T : 1.0 / T;
  };
  Interval1dOptions o;
  if (P > 0.0) o.breakpoints = {-P, P};
  else o.breakpoints = {0.0};
  PlateauQuotient q;
  q.energy = integrate_1d([&](double s) { return std::pow(std::abs(kappa * phi(s) + dphi(s)), p) * weight(s); },
                          -(P + T), P + T, spec, o);
  q.weighted = integrate_1d([&](double s) { return std::pow(phi(s), p) * weight(s); }, -(P + T), P + T, spec, o);
  q.energy.converged = q.energy.converged && table.converged();
  return q;
}

}  // namespace hardy_detail

inline ExperimentConfig critical_hardy_defaults() {
  ExperimentConfig c;
  c.experiment = "critical-hardy";
  c.params_grid = {{"N", {2, 3}}};
  c.family_grid = {{"P", {0, 0.5, 1, 2, 4, 8}}, {"T", {1, 1.5, 2, 4, 8, 8}}, {"reduction_max", {2.6}}};
  c.samples = 25;
  c.quadrature.rel_tol = 1e-7;
  return c;
}

inline std::vector<Row> run_critical_hardy(const ExperimentConfig& cfg, const RunOptions& opt) {
  using namespace hardy_detail;
  const RowMaker row{opt.tol_scale};
  const QuadratureSpec spec = cfg.spec();
  const int n = samples_or(cfg, 25);
  const auto members = zipped_size(cfg.family_grid, {"P", "T"});
  const double reduction_max = list_of(cfg.family_grid, "reduction_max").front();
  std::vector<Task> tasks;
  for (double Nd : list_of(cfg.params_grid, "N")) {
    const int N = as_int(Nd, "N");
    const PotentialContext ctx(N, N);
    const auto kind = FunctionalKind::critical_hardy_half(N);
    const double C = reference_constant(kind);
    for (int i = 0; i < n; ++i) {
      tasks.push_back([=, &cfg] {
        const auto v = random_smooth_profile(task_seed(cfg.seed, 20 + N, static_cast<std::uint64_t>(i)), 1.0);
        const auto u = transplant_from_ball(ctx, v);
        std::vector<Row> rows;
        if (i % 2 == 1) {
          const auto a = perturbed(u, task_seed(cfg.seed, 30 + N, static_cast<std::uint64_t>(i)));
          rows.push_back(quotient_row(
              row, {{"clause", "quotient"}, {"N", double(N)}, {"sample", double(i)}, {"kind", "perturbed"}},
              rayleigh(kind, a, spec), C));
          return rows;
        }
        const auto den = lhs(kind, u, spec);
        const auto num = rhs(kind, u, spec);
        IntegralResult q;
        q.value = num.value / den.value;
        q.error_estimate = q.value * (num.error_estimate / num.value + den.error_estimate / den.value);
        q.converged = num.converged && den.converged;
        rows.push_back(quotient_row(
            row, {{"clause", "quotient"}, {"N", double(N)}, {"sample", double(i)}, {"kind", "symmetric"}}, q, C));
        // The same two integrals on the unit ball.
        const double om = sphere_area(N);
        Interval1dOptions o;
        o.breakpoints = v.knots(0.0, 1.0);
        o.left = EndpointBehavior{-1.0, -double(N), 1.0};
        auto wb = integrate_1d(
            [&](double t) {
              const double val = v(t);
              return val == 0.0 ? 0.0 : std::pow(std::abs(val), N) / (t * std::pow(-std::log(t), N));
            },
            0.0, 1.0, spec.scaled(1.0 / om), o);
        const auto eb = radial_energy_ball(N, N, v, spec.scaled(1.0 / om));
        const double gw = relative_difference(den.value, om * wb.value);
        const double ge = relative_difference(num.value, eb.value);
        rows.push_back(row({{"clause", "ball-identity"}, {"N", double(N)}, {"sample", double(i)}},
                           {{"weighted", den.value}, {"weighted_ball", om * wb.value}, {"energy", num.value},
                            {"energy_ball", eb.value}},
                           std::max(gw, ge), 1e-4, wb.converged && eb.converged && q.converged));
        return rows;
      });
    }
    tasks.push_back([=, &cfg] {
      const double kappa = (N - 1.0) / N;
      std::vector<Row> rows;
      double best = kInf;
      bool conv = true;
      for (std::size_t j = 0; j < members; ++j) {
        const double P = zipped_at(cfg.family_grid, "P", j), T = zipped_at(cfg.family_grid, "T", j);
        const auto w = log_plateau_profile(kappa, P, T);
        const auto line = critical_hardy_line(N, w, spec);
        IntegralResult q;
        q.value = line.quotient();
        q.converged = line.energy.converged && line.weighted.converged;
        conv = conv && q.converged;
        best = std::min(best, q.value);
        rows.push_back(quotient_row(row, {{"clause", "sweep"}, {"N", double(N)}, {"P", P}, {"T", T}}, q, C));
        if (P + T <= reduction_max) {
          const auto u = transplant_from_ball(ctx, ball_profile_from_line(w));
          const auto direct = rayleigh(kind, u, spec);
          const double gap = relative_difference(direct.value, q.value);
          rows.push_back(row({{"clause", "reduction"}, {"N", double(N)}, {"P", P}, {"T", T}},
                             {{"direct", direct.value}, {"line", q.value}}, gap, 1e-4,
                             direct.converged && q.converged));
        }
      }
      rows.push_back(row({{"clause", "sweep-reach"}, {"N", double(N)}},
                         {{"best_quotient", best}, {"constant", C}, {"ratio", best / C}}, best / C - 1.0, 0.1, conv));
      return rows;
    });
  }
  return run_tasks(tasks, opt);
}

inline ExperimentConfig improved_hardy_defaults() {
  ExperimentConfig c;
  c.experiment = "improved-hardy";
  c.params_grid = {{"N", {4, 5}}, {"p", {2, 3}}};
  c.family_grid = {{"perturbed", {10}},
                   {"eps", {0.4, 0.2, 0.1, 0.05}},
                   {"M", {1}},
                   {"identity_N", {4, 5, 6}},
                   {"identity_p", {2.5, 3, 3.5}},
                   {"identity_samples", {5}},
                   {"claim_N", {4, 5}},
                   {"claim_p", {2.5, 3}},
                   {"claim_samples", {10}},
                   {"hs_N", {3}},
                   {"hs_s", {0, 1}},
                   {"plateau_N", {5, 4}},
                   {"plateau_p", {3, 2.5}},
                   {"plateau_P", {8}},
                   {"plateau_T", {60}}};
  c.samples = 25;
  c.quadrature.rel_tol = 1e-7;
  return c;
}

inline std::vector<Row> run_improved_hardy(const ExperimentConfig& cfg, const RunOptions& opt) {
  using namespace hardy_detail;
  const RowMaker row{opt.tol_scale};
  const QuadratureSpec spec = cfg.spec();
  const auto& fg = cfg.family_grid;
  const int n = samples_or(cfg, 25);
  const int n_pert = int_key(fg, "perturbed", 10);
  std::vector<Task> tasks;

  for (const auto& [N, p] : np_pairs(cfg.params_grid)) {
    const PotentialContext ctx(N, p);
    const auto kind = FunctionalKind::improved_hardy_half(N, p);
    const double C = reference_constant(kind);
    auto source = [=, &cfg](int i) {
      const auto seed = task_seed(cfg.seed, 40 + N, static_cast<std::uint64_t>(i));
      return i % 2 == 0 ? transplant_from_rn(ctx, random_smooth_profile(seed, 2.0))
                        : transplant_from_ball(ctx, random_smooth_profile(seed, 1.0));
    };
    for (int i = 0; i < n; ++i) {
      tasks.push_back([=] {
        return std::vector<Row>{quotient_row(row,
                                             {{"clause", "quotient"}, {"N", double(N)}, {"p", p},
                                              {"sample", double(i)}, {"kind", i % 2 == 0 ? "rn" : "ball"}},
                                             rayleigh(kind, source(i), spec), C)};
      });
    }
    for (int i = 0; i < n_pert; ++i) {
      tasks.push_back([=, &cfg] {
        const auto a = perturbed(source(i), task_seed(cfg.seed, 50 + N, static_cast<std::uint64_t>(i)));
        return std::vector<Row>{quotient_row(row,
                                             {{"clause", "quotient"}, {"N", double(N)}, {"p", p},
                                              {"sample", double(i)}, {"kind", "perturbed"}},
                                             rayleigh(kind, a, spec), C)};
      });
    }
    // u = U^gamma psi_M(U) as eps decreases: quotients above the constant, decreasing, extrapolating to it.
    tasks.push_back([=, &fg] {
      auto eps = list_of(fg, "eps");
      std::sort(eps.rbegin(), eps.rend());
      const double M = list_of(fg, "M").front();
      std::vector<Row> rows;
      std::vector<double> Q;
      bool conv = true;
      for (double e : eps) {
        const auto q = rayleigh(kind, family_ih(ctx, e, M), spec);
        Q.push_back(q.value);
        conv = conv && q.converged;
        rows.push_back(
            quotient_row(row, {{"clause", "family"}, {"N", double(N)}, {"p", p}, {"eps", e}, {"M", M}}, q, C));
      }
      double rise = 0.0;
      for (std::size_t j = 1; j < Q.size(); ++j) rise = std::max(rise, Q[j] - Q[j - 1]);
      rows.push_back(row({{"clause", "family-monotone"}, {"N", double(N)}, {"p", p}}, {{"max_increase", rise}}, rise,
                         0.0, conv));
      if (Q.size() >= 3) {
        const std::size_t k = Q.size();
        // Quadratic extrapolation in eps on the three smallest values, each half the previous.
        const double ext = (8.0 * Q[k - 1] - 6.0 * Q[k - 2] + Q[k - 3]) / 3.0;
        rows.push_back(row({{"clause", "family-extrapolation"}, {"N", double(N)}, {"p", p}},
                           {{"extrapolated", ext}, {"constant", C}, {"ratio", ext / C}}, std::abs(ext / C - 1.0), 0.1,
                           conv));
      }
      return rows;
    });
    // One-dimensional Hardy inequality for radial functions on R^N.
    for (int i = 0; i < n; ++i) {
      tasks.push_back([=, &cfg] {
        const auto k = FunctionalKind::hardy_subcritical(N, p);
        const RadialFunction f{N, random_smooth_profile(task_seed(cfg.seed, 60 + N, static_cast<std::uint64_t>(i)), 2.0)};
        return std::vector<Row>{quotient_row(
            row, {{"clause", "hardy-rn"}, {"N", double(N)}, {"p", p}, {"sample", double(i)}}, rayleigh(k, f, spec),
            reference_constant(k))};
      });
    }
  }

  // Energy and Hardy side computed directly and through the source profile with the F_p correction.
  {
    const auto m = zipped_size(fg, {"identity_N", "identity_p"});
    const int ns = int_key(fg, "identity_samples", 5);
    for (std::size_t j = 0; j < m; ++j) {
      const int N = as_int(zipped_at(fg, "identity_N", j), "identity_N");
      const double p = zipped_at(fg, "identity_p", j);
      const PotentialContext ctx(N, p);
      require_domain(!ctx.critical(), "identity checks need p < N");
      const auto table = std::make_shared<const FpTable>(ctx, spec.scaled(0.01));
      for (int i = 0; i < ns; ++i) {
        tasks.push_back([=, &cfg] {
          const auto seed = task_seed(cfg.seed, 70 + N, static_cast<std::uint64_t>(i));
          const auto ub = transplant_from_ball(ctx, random_smooth_profile(seed, 1.0));
          const auto ur = transplant_from_rn(ctx, random_smooth_profile(seed, 2.0));
          const auto e = dirichlet_energy_symmetric(ub, spec, table.get());
          const auto h = hardy_side_symmetric(ur, spec, table.get());
          std::vector<Row> rows;
          rows.push_back(row({{"clause", "energy-identity"}, {"N", double(N)}, {"p", p}, {"sample", double(i)}},
                             {{"direct", e.direct.value}, {"identity", e.identity->value}}, e.relative_gap(), 1e-3,
                             e.direct.converged && e.identity->converged));
          rows.push_back(row({{"clause", "hardy-identity"}, {"N", double(N)}, {"p", p}, {"sample", double(i)}},
                             {{"direct", h.direct.value}, {"identity", h.identity->value}}, h.relative_gap(), 1e-3,
                             h.direct.converged && h.identity->converged));
          return rows;
        });
      }
    }
  }

  // One-dimensional Hardy inequality with the weight F_p(G(r)).
  {
    const auto m = zipped_size(fg, {"claim_N", "claim_p"});
    const int ns = int_key(fg, "claim_samples", 10);
    for (std::size_t j = 0; j < m; ++j) {
      const int N = as_int(zipped_at(fg, "claim_N", j), "claim_N");
      const double p = zipped_at(fg, "claim_p", j);
      const PotentialContext ctx(N, p);
      require_domain(!ctx.critical(), "weighted Hardy checks need p < N");
      tasks.push_back([=, &cfg] {
        const FpTable table(ctx, spec.scaled(0.01));
        std::vector<Row> rows;
        for (int i = 0; i < ns; ++i) {
          const auto w = random_smooth_profile(task_seed(cfg.seed, 80 + N, static_cast<std::uint64_t>(i)), 2.0);
          const auto r = weighted_hardy_1d(table, w, spec);
          rows.push_back(row({{"clause", "claim-2"}, {"N", double(N)}, {"p", p}, {"sample", double(i)}},
                             {{"lhs", r.lhs.value}, {"rhs", r.rhs.value}}, r.lhs.value - r.rhs.value, 1e-9,
                             r.lhs.converged && r.rhs.converged && table.converged()));
        }
        return rows;
      });
    }
  }

  // Improved Hardy-Sobolev inequality at p = 2.
  for (double Nd : list_of(fg, "hs_N")) {
    const int N = as_int(Nd, "hs_N");
    const PotentialContext ctx(N, 2.0);
    for (double s : list_of(fg, "hs_s")) {
      const auto kind = FunctionalKind::hardy_sobolev_improved(N, 2.0, s);
      const double C = reference_constant(kind);
      for (int i = 0; i < n; ++i) {
        tasks.push_back([=, &cfg] {
          const auto u =
              transplant_from_rn(ctx, random_smooth_profile(task_seed(cfg.seed, 90 + N, static_cast<std::uint64_t>(i)), 2.0));
          return std::vector<Row>{quotient_row(
              row, {{"clause", "hardy-sobolev"}, {"N", double(N)}, {"p", 2.0}, {"s", s}, {"sample", double(i)}},
              rayleigh(kind, u, spec), C)};
        });
      }
    }
  }

  // Symmetric functions r^{-(N-p)/p} phi(log r) with a long plateau: quotient through the one-dimensional reduction,
  // and the reduction checked against direct quadrature on a short member.
  {
    const auto m = zipped_size(fg, {"plateau_N", "plateau_p"});
    const double P = list_of(fg, "plateau_P").front(), T = list_of(fg, "plateau_T").front();
    for (std::size_t j = 0; j < m; ++j) {
      const int N = as_int(zipped_at(fg, "plateau_N", j), "plateau_N");
      const double p = zipped_at(fg, "plateau_p", j);
      const PotentialContext ctx(N, p);
      const auto kind = FunctionalKind::improved_hardy_half(N, p);
      const double C = reference_constant(kind);
      tasks.push_back([=] {
        const FpTable table(ctx, spec.scaled(0.01));
        std::vector<Row> rows;
        const auto q = plateau_quotient(table, P, T, spec.scaled(0.01));
        IntegralResult qr;
        qr.value = q.value();
        qr.converged = q.energy.converged && q.weighted.converged;
        rows.push_back(quotient_row(row, {{"clause", "log-plateau"}, {"N", double(N)}, {"p", p}, {"P", P}, {"T", T}},
                                    qr, C));
        const double Ps = 0.5, Ts = 1.5;
        const auto qs = plateau_quotient(table, Ps, Ts, spec.scaled(0.01));
        const auto u = transplant_from_rn(ctx, log_plateau_profile(-(N - p) / p, Ps, Ts));
        const auto direct = rayleigh(kind, u, spec);
        rows.push_back(row({{"clause", "log-plateau-reduction"}, {"N", double(N)}, {"p", p}, {"P", Ps}, {"T", Ts}},
                           {{"direct", direct.value}, {"reduced", qs.value()}},
                           relative_difference(direct.value, qs.value()), 1e-3,
                           direct.converged && qs.energy.converged && qs.weighted.converged));
        return rows;
      });
    }
  }
  return run_tasks(tasks, opt);
}

}  // namespace hardylab::experiments
