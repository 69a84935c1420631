#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <cmath>
#include <string>
#include <vector>

#include "hardylab/experiments/common.hpp"
#include "hardylab/mobius.hpp"
#include "hardylab/quadrature.hpp"

namespace hardylab::experiments {

namespace mobius_detail {

inline Vec axis_point(int N, double r, double y) {
  Vec z = Vec::Zero(N);
  z(0) = r;
  z(N - 1) = y;
  return z;
}

// Axisymmetric bump (1 - s^2)^4 (1 + A sin(k (y - c)/rho + phi) + B cos(k2 r^2/rho^2)) on the ball of radius rho
// about (0, c).
struct Bump {
  double c, rho, A, k, phi, B, k2;

  static Bump draw(std::uint64_t seed) {
    Rng g(seed);
    Bump b{};
    b.c = g.uniform(1.0, 2.0);
    b.rho = (0.3 + 0.4 * g.uniform()) * b.c;
    b.A = g.uniform(-0.4, 0.4);
    b.k = g.uniform(0.5, 3.0);
    b.phi = g.uniform(0.0, 2.0 * kPi);
    b.B = g.uniform(-0.4, 0.4);
    b.k2 = g.uniform(0.5, 3.0);
    return b;
  }

  double operator()(const Vec& z) const {
    const auto N = z.size();
    const double r2 = z.head(N - 1).squaredNorm();
    const double y = z(N - 1);
    const double s2 = (r2 + (y - c) * (y - c)) / (rho * rho);
    if (s2 >= 1.0) return 0.0;
    const double w = 1.0 - s2;
    return w * w * w * w * (1.0 + A * std::sin(k * (y - c) / rho + phi) + B * std::cos(k2 * r2 / (rho * rho)));
  }
};

struct Transformed {
  std::function<double(const Vec&)> g;
  // Axis interval [lo, hi] containing the support.
  double lo, hi;
};

enum class Quantity { Energy, Lebesgue, Hardy };

inline const char* quantity_name(Quantity q) {
  switch (q) {
    case Quantity::Energy: return "energy";
    case Quantity::Lebesgue: return "lebesgue";
    case Quantity::Hardy: return "hardy";
  }
  return "";
}

inline IntegralResult measure(int N, double p, const Transformed& t, Quantity q, const QuadratureSpec& spec) {
  const double c = 0.5 * (t.lo + t.hi);
  const double R = 0.5 * (t.hi - t.lo) * (1.0 + 1e-12);
  AxisymOptions opt;
  opt.center_y = c;
  opt.radius = R;
  opt.pole = PoleBehavior{0.0, 0.0, 2.0};
  auto g2 = [&t, N](double r, double y) { return t.g(axis_point(N, r, y)); };
  AxisymIntegrand f;
  QuadratureSpec s = spec;
  if (q == Quantity::Energy) {
    // Central differences bound the attainable relative accuracy near 1e-8.
    s.rel_tol = std::max(s.rel_tol, 1e-7);
    f = [&, p](double r, double y) {
      const double h = 1e-5 * (1.0 + std::hypot(r, y));
      const double gr = (g2(r + h, y) - g2(std::abs(r - h), y)) / (2.0 * h);
      const double gy = (g2(r, y + h) - g2(r, y - h)) / (2.0 * h);
      return std::pow(std::hypot(gr, gy), p);
    };
  } else if (q == Quantity::Lebesgue) {
    const double ps = N * p / (N - p);
    f = [&, ps](double r, double y) { return std::pow(std::abs(g2(r, y)), ps); };
  } else {
    f = [&, p](double r, double y) {
      const double v = g2(r, y);
      return v == 0.0 ? 0.0 : std::pow(std::abs(v) / std::hypot(r, y), p);
    };
  }
  return integrate_rn_axisym(N, f, s, opt);
}

inline Mat reflect_and_rotate(int N) {
  Mat R = Mat::Identity(N, N);
  if (N == 2) {
    R(0, 0) = -1.0;
  } else {
    const double a = 0.9;
    R(0, 0) = std::cos(a);
    R(0, 1) = -std::sin(a);
    R(1, 0) = std::sin(a);
    R(1, 1) = std::cos(a);
  }
  R(N - 1, N - 1) = -1.0;
  return R;
}

inline std::vector<std::string> map_names() { return {"T", "S", "R", "J", "Cayley"}; }

// Pull back f by the named map with the factor |det|^{(N-p)/(Np)}.
inline Transformed pull_back(const std::string& name, int N, double p, const Bump& f) {
  const double e = (N - p) / (N * p);
  const double ya = f.c - f.rho, yb = f.c + f.rho;
  if (name == "Id") return {[f](const Vec& z) { return f(z); }, ya, yb};
  if (name == "Cayley") {
    auto g = [f, e](const Vec& z) {
      const Vec w = cayley(z);
      return std::pow(std::abs(cayley_jacobian_det(z)), e) * f(w);
    };
    const double a = cayley(axis_point(N, 0.0, ya))(N - 1), b = cayley(axis_point(N, 0.0, yb))(N - 1);
    return {g, std::min(a, b), std::max(a, b)};
  }
  MobiusMap M(N);
  if (name == "T") M = M.then(translation(0.7 * unit_vector(N, N - 1)));
  else if (name == "S") M = M.then(scaling(1.6));
  else if (name == "R") M = M.then(orthogonal(reflect_and_rotate(N)));
  else if (name == "J") M = M.then(Inversion{});
  else throw ConfigError("unknown map '" + name + "'");
  const MobiusMap inv = M.inverse();
  const double a = apply(inv, axis_point(N, 0.0, ya))(N - 1), b = apply(inv, axis_point(N, 0.0, yb))(N - 1);
  return {pushforward(M, [f](const Vec& w) { return f(w); }, p), std::min(a, b), std::max(a, b)};
}

// Quantities preserved by the named map at exponent p.
inline std::vector<Quantity> preserved(const std::string& map, int N, double p) {
  std::vector<Quantity> q{Quantity::Energy};
  if (p < N) q.push_back(Quantity::Lebesgue);
  if (map == "S" || map == "R" || map == "J") q.push_back(Quantity::Hardy);
  return q;
}

}  // namespace mobius_detail

inline ExperimentConfig mobius_invariance_defaults() {
  ExperimentConfig c;
  c.experiment = "mobius-invariance";
  c.params_grid = {{"N", {2, 3, 3}}, {"p", {2, 2, 3}}};
  c.family_grid = {{"kelvin_N", {5}}, {"kelvin_p", {3}}, {"kelvin_samples", {5}}};
  c.samples = 20;
  return c;
}

inline std::vector<Row> run_mobius_invariance(const ExperimentConfig& cfg, const RunOptions& opt) {
  using namespace mobius_detail;
  const RowMaker row{opt.tol_scale};
  const QuadratureSpec spec = cfg.spec();
  const int n = samples_or(cfg, 20);
  std::vector<Task> tasks;
  for (const auto& [N, p] : np_pairs(cfg.params_grid)) {
    make_params(N, p);
    for (int i = 0; i < n; ++i) {
      tasks.push_back([=, &cfg] {
        const Bump f = Bump::draw(task_seed(cfg.seed, 1, static_cast<std::uint64_t>(i)));
        const auto id = pull_back("Id", N, p, f);
        std::vector<Row> rows;
        std::array<std::optional<IntegralResult>, 3> ref;
        for (const auto& m : map_names()) {
          const auto t = pull_back(m, N, p, f);
          for (Quantity q : preserved(m, N, p)) {
            auto& r0 = ref[static_cast<int>(q)];
            if (!r0) r0 = measure(N, p, id, q, spec);
            const auto r1 = measure(N, p, t, q, spec);
            const double d = relative_difference(r0->value, r1.value);
            rows.push_back(row({{"clause", "invariance"}, {"N", double(N)}, {"p", p}, {"sample", double(i)},
                                {"map", m}, {"quantity", quantity_name(q)}},
                               {{"original", r0->value}, {"transformed", r1.value}, {"rel_diff", d}}, d, 1e-5,
                               r0->converged && r1.converged));
          }
        }
        return rows;
      });
    }
  }
  // The radial factor |z|^{-2(N-p)/p} of the inversion does not preserve the p-energy when p is not 2 or N.
  if (has_key(cfg.family_grid, "kelvin_N")) {
    const auto m = zipped_size(cfg.family_grid, {"kelvin_N", "kelvin_p"});
    const int nk = has_key(cfg.family_grid, "kelvin_samples")
                       ? as_int(list_of(cfg.family_grid, "kelvin_samples").front(), "kelvin_samples")
                       : 5;
    for (std::size_t j = 0; j < m; ++j) {
      const int N = as_int(zipped_at(cfg.family_grid, "kelvin_N", j), "kelvin_N");
      const double p = zipped_at(cfg.family_grid, "kelvin_p", j);
      make_params(N, p);
      tasks.push_back([=, &cfg] {
        double lo = kInf, hi = 0.0;
        bool conv = true;
        for (int i = 0; i < nk; ++i) {
          const Bump f = Bump::draw(task_seed(cfg.seed, 2, static_cast<std::uint64_t>(i)));
          const auto r0 = measure(N, p, pull_back("Id", N, p, f), Quantity::Energy, spec);
          const auto r1 = measure(N, p, pull_back("J", N, p, f), Quantity::Energy, spec);
          const double d = relative_difference(r0.value, r1.value);
          lo = std::min(lo, d);
          hi = std::max(hi, d);
          conv = conv && r0.converged && r1.converged;
        }
        return std::vector<Row>{row({{"clause", "kelvin-mismatch"}, {"N", double(N)}, {"p", p}, {"map", "J"},
                                     {"quantity", "energy"}},
                                    {{"samples", double(nk)}, {"min_rel_diff", lo}, {"max_rel_diff", hi}}, 0.01 - hi,
                                    0.0, conv)};
      });
    }
  }
  return run_tasks(tasks, opt);
}

inline ExperimentConfig cayley_identities_defaults() {
  ExperimentConfig c;
  c.experiment = "cayley-identities";
  c.params_grid = {{"N", {2, 3, 4}}};
  c.samples = 1000;
  return c;
}

inline std::vector<Row> run_cayley_identities(const ExperimentConfig& cfg, const RunOptions& opt) {
  const RowMaker row{opt.tol_scale};
  const int n = samples_or(cfg, 1000);
  std::vector<Task> tasks;
  for (double Nd : list_of(cfg.params_grid, "N")) {
    const int N = as_int(Nd, "N");
    require_domain(N >= 2 && N <= kMaxDim, "dimension out of range");
    tasks.push_back([=, &cfg] {
      Rng g(task_seed(cfg.seed, 3, static_cast<std::uint64_t>(N)));
      const MobiusMap chain = cayley_as_composition(N);
      const Vec pole = -unit_vector(N, N - 1), e = unit_vector(N, N - 1);
      double inv = 0.0, into = 0.0, outof = 0.0, boundary = 0.0, back = 0.0, det_chain = 0.0, det_diff = 0.0, dec = 0.0;
      int count = 0;
      while (count < n) {
        Vec z(N);
        for (int k = 0; k < N; ++k) z(k) = g.uniform(-3.0, 3.0);
        if ((z - pole).norm() < 0.1 || (z - e).norm() < 0.1) continue;
        ++count;
        const Vec w = cayley(z);
        inv = std::max(inv, (cayley(w) - z).norm() / (1.0 + z.norm()));
        const double nw = w.norm();
        if (z(N - 1) > 0.0) into = std::max(into, std::max(0.0, nw - 1.0));
        else outof = std::max(outof, std::max(0.0, 1.0 - nw));
        Vec zb = z;
        zb(N - 1) = 0.0;
        boundary = std::max(boundary, std::abs(cayley(zb).norm() - 1.0));
        // A point of the unit ball is mapped into the upper half-space.
        Vec b = z / (z.norm() + 1.0);
        back = std::max(back, std::max(0.0, -cayley(b)(N - 1)));
        const double d = cayley_jacobian_det(z);
        det_chain = std::max(det_chain, std::abs(jacobian_det(chain, z) - d) / std::abs(d));
        det_diff = std::max(det_diff, std::abs(differential(chain, z).determinant() - d) / std::abs(d));
        dec = std::max(dec, (apply(chain, z) - w).norm() / (1.0 + w.norm()));
      }
      std::vector<Row> rows;
      auto add = [&](const char* clause, double v) {
        rows.push_back(row({{"clause", clause}, {"N", double(N)}}, {{"points", double(n)}, {"max_error", v}}, v, 1e-10));
      };
      add("involution", inv);
      add("halfspace-into-ball", into);
      add("lower-halfspace-outside-ball", outof);
      add("boundary-to-sphere", boundary);
      add("ball-into-halfspace", back);
      add("det-vs-composition", det_chain);
      add("det-vs-differential", det_diff);
      add("decomposition", dec);
      return rows;
    });
  }
  return run_tasks(tasks, opt);
}

}  // namespace hardylab::experiments
