#pragma once

#include <algorithm>
#include <chrono>
#include <string>
#include <vector>

#include "hardylab/experiments/hardy_experiments.hpp"
#include "hardylab/experiments/limit_experiments.hpp"
#include "hardylab/experiments/mobius_experiments.hpp"
#include "hardylab/experiments/potential_experiments.hpp"

namespace hardylab::experiments {

struct Experiment {
  std::string name;
  std::string claim;
  std::string tolerance;
  ExperimentConfig (*defaults)();
  std::vector<Row> (*run)(const ExperimentConfig&, const RunOptions&);
};

inline const std::vector<Experiment>& registry() {
  static const std::vector<Experiment> list{
      {"mobius-invariance",
       "Mobius maps (translation, scaling, rotation, inversion, Cayley map) preserve the N-energy for p = N and, "
       "for p < N, the p-energy and the L^{Np/(N-p)} norm of the Kelvin-type pushforward; maps fixing 0 and infinity "
       "also preserve int |u|^p |x|^{-p}.",
       "relative mismatch <= 1e-5 per sample and map", mobius_invariance_defaults, run_mobius_invariance},
      {"cayley-identities",
       "The Cayley map with pole (0,-1) is an involution exchanging the half-space and the unit ball, its Jacobian "
       "determinant matches the chain of its elementary factors, and it factors into those elementary maps.",
       "absolute error <= 1e-10 at random points", cayley_identities_defaults, run_cayley_identities},
      {"plaplacian-sign",
       "-div(|grad U_p|^{p-2} grad U_p) for the reflected fundamental solution vanishes for p in {2, N} and has a "
       "fixed sign on the half-space otherwise; the closed form agrees with finite differences.",
       "zero rows exact; wrong-sign fraction 0; finite differences <= 1e-4 relative", plaplacian_sign_defaults,
       run_plaplacian_sign},
      {"weak-form",
       "int |grad U_p|^{p-2} grad U_p . grad phi - int (-Delta_p U_p) phi = phi(e_N) for bumps phi compactly "
       "supported in the half-space.",
       "residual <= 1e-3 relative to phi(e_N)", weak_form_defaults, run_weak_form},
      {"vp-bound", "V_p >= 1 on the half-space, with V_2(0,2) = 16/9 for N = 3.",
       "min V_p >= 1 - 1e-12; spot value within 1e-12", vp_bound_defaults, run_vp_bound},
      {"critical-hardy",
       "int_{R^N_+} |grad u|^N >= ((N-1)/N)^N int |u|^N V_N^{N/2} d_-^{-N} with a sharp constant approached by "
       "log-plateau concentration.",
       "quotient >= constant - 1e-6; sweep within 10% of the constant", critical_hardy_defaults, run_critical_hardy},
      {"improved-hardy",
       "int_{R^N_+} |grad u|^p >= ((N-p)/p)^p int |u|^p V_p^{p/2} d_-^{-p} for 1 < p < N, together with the "
       "transplant identities for the energy and the weighted side.",
       "quotient >= constant - 1e-6; family within 10%; identities <= 1e-3 relative", improved_hardy_defaults,
       run_improved_hardy},
      {"limit-p-to-N",
       "((N-p)/p)^p V_p^{p/2} d_-^{-p} tends to ((N-1)/N)^N V_N^{N/2} d_-^{-N} as p increases to N.",
       "discrepancy nonincreasing along p = N - 2^{-k}", limit_p_to_n_defaults, run_limit_p_to_n},
      {"fp-properties",
       "F_p(s), the integral of -Delta_p U_p over [U_p > s], vanishes for p in {2, N} and has a fixed sign and "
       "monotone dependence on s otherwise.",
       "|F| <= 1e-8 for p in {2, N}; sign and monotonicity exact", fp_properties_defaults, run_fp_properties},
      {"tm-scan",
       "Along unit-energy Moser functions the Trudinger-Moser functional stays bounded below the sharp exponent and "
       "grows without bound above it.",
       "bounded within a factor 2 at 0.9 x threshold; growth factor >= 2 at 1.1 x threshold", tm_scan_defaults,
       run_tm_scan},
      {"no-weight-rn",
       "The log cut-off phi_R has N-energy omega_{N-1} (log R)^{1-N}, so no weighted L^q inequality on R^N holds "
       "with a fixed weight supported in B_1.",
       "closed form <= 1e-8; quadrature <= 1e-5; log-log slope 1-N within 5%", no_weight_rn_defaults,
       run_no_weight_rn},
      {"asym-counterexample",
       "Bubbles of radius eps touching the boundary drive the improved Hardy-Sobolev quotient to zero like "
       "eps^{(N-1)(p-s)/(N-s)}.",
       "slope within 10%; energy slope N-p within 1e-3", asym_counterexample_defaults, run_asym_counterexample},
      {"bliss-limit",
       "The Bliss-type constants C(q) on the ball tend to ((N-1)/N)^N as q decreases to N; S_{3,2} = 3(pi/2)^{4/3}; "
       "the one-dimensional Bliss inequality holds.",
       "|C(N + 1/64) - ((N-1)/N)^N| <= 0.01; S within 1e-9; quotient >= constant - 1e-6", bliss_limit_defaults,
       run_bliss_limit},
      {"transplant-isometries",
       "The Moser and dimension transforms preserve the energy of radial functions, and the level-set energy "
       "int_{[G < t]} |grad G|^p equals t.",
       "norm identities <= 1e-4 relative; level-set energy <= 1e-6 relative", transplant_isometries_defaults,
       run_transplant_isometries},
  };
  return list;
}

inline const Experiment& find_experiment(const std::string& name) {
  const auto& r = registry();
  const auto it = std::find_if(r.begin(), r.end(), [&](const Experiment& e) { return e.name == name; });
  if (it == r.end()) throw ConfigError("unknown experiment '" + name + "'");
  return *it;
}

// Defaults of the named experiment with the fields of a JSON document laid over them.
inline ExperimentConfig resolve_config(const std::string& name, const nlohmann::json& doc = nlohmann::json::object()) {
  auto c = merge_config(find_experiment(name).defaults(), doc);
  if (c.experiment != name) throw ConfigError("configuration names experiment '" + c.experiment + "'");
  return c;
}

inline ExperimentReport run_experiment(const ExperimentConfig& cfg, const RunOptions& opt = {}) {
  const auto& e = find_experiment(cfg.experiment);
  if (!(opt.tol_scale > 0.0)) throw ConfigError("tolerance scale must be positive");
  if (opt.jobs < 1) throw ConfigError("jobs must be at least 1");
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentReport r;
  r.experiment = e.name;
  // The echo describes what was computed, not where the report is written.
  r.config = to_json(cfg);
  r.config.erase("output");
  r.config["tol_scale"] = opt.tol_scale;
  r.rows = e.run(cfg, opt);
  r.summary = summarize(r.rows);
  if (opt.timing) r.summary.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace hardylab::experiments
