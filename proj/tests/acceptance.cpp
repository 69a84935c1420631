#include <chrono>
#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "hardylab/experiments/registry.hpp"

namespace {

namespace ex = hardylab::experiments;

struct Criterion {
  int id;
  std::string experiment;
  double budget_seconds;
  // Clauses whose rows fail because the stated property is false.
  std::set<std::string> known_red;
};

const std::vector<Criterion> kCriteria{
    {1, "mobius-invariance", 120, {}},
    {2, "cayley-identities", 60, {}},
    {3, "plaplacian-sign", 120, {"sign"}},
    {4, "weak-form", 300, {}},
    {5, "vp-bound", 60, {}},
    {6, "critical-hardy", 300, {}},
    {7, "improved-hardy", 900, {"claim-2", "log-plateau"}},
    {8, "limit-p-to-N", 60, {}},
    {9, "fp-properties", 600, {"sign", "monotone"}},
    {10, "tm-scan", 300, {}},
    {11, "no-weight-rn", 300, {}},
    {12, "asym-counterexample", 300, {}},
    {13, "bliss-limit", 300, {"limit"}},
    {14, "transplant-isometries", 300, {}},
};

std::string join(const std::set<std::string>& s) {
  std::string out;
  for (const auto& x : s) out += (out.empty() ? "" : ",") + x;
  return out;
}

enum class Verdict { Pass, KnownRed, Fail };

const char* tag(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "[PASS]     ";
    case Verdict::KnownRed: return "[KNOWN-RED]";
    default: return "[FAIL]     ";
  }
}

}  // namespace

int main() {
  int unexpected = 0;
  std::map<std::string, ex::ExperimentReport> reports;
  for (const auto& c : kCriteria) {
    Verdict v = Verdict::Pass;
    std::string detail;
    try {
      const auto t0 = std::chrono::steady_clock::now();
      const auto r = ex::run_experiment(ex::resolve_config(c.experiment));
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      std::set<std::string> red, other, unconverged;
      for (const auto& row : r.rows) {
        if (!row.converged) unconverged.insert(row.clause());
        else if (!row.passes()) (c.known_red.count(row.clause()) ? red : other).insert(row.clause());
      }
      char buf[160];
      std::snprintf(buf, sizeof buf, "%zu rows, %zu failed, %.1f s", r.rows.size(), r.summary.failed_rows, secs);
      detail = buf;
      if (!other.empty() || !unconverged.empty() || secs > c.budget_seconds) {
        v = Verdict::Fail;
        if (!other.empty()) detail += "; failing clauses: " + join(other);
        if (!unconverged.empty()) detail += "; unconverged clauses: " + join(unconverged);
        if (secs > c.budget_seconds) detail += "; over the runtime budget";
      } else if (!red.empty()) {
        v = Verdict::KnownRed;
        detail += "; property false, clauses: " + join(red);
      }
      std::set<std::string> now_green;
      for (const auto& k : c.known_red)
        if (!red.count(k)) now_green.insert(k);
      if (!now_green.empty()) detail += "; known-red clauses now passing: " + join(now_green);
      reports.emplace(c.experiment, r);
    } catch (const std::exception& e) {
      v = Verdict::Fail;
      detail = std::string("error: ") + e.what();
    }
    if (v == Verdict::Fail) ++unexpected;
    std::printf("%s %2d %-22s %s\n", tag(v), c.id, c.experiment.c_str(), detail.c_str());
    std::fflush(stdout);
  }

  // Byte-identical reports across two single-threaded runs and an eight-thread run.
  {
    std::string detail;
    bool ok = true;
    try {
      ex::RunOptions eight;
      eight.jobs = 8;
      std::size_t compared = 0;
      for (const auto& c : kCriteria) {
        const auto cfg = ex::resolve_config(c.experiment);
        const auto it = reports.find(c.experiment);
        if (it == reports.end()) continue;
        const auto again = ex::run_experiment(cfg);
        const auto par = ex::run_experiment(cfg, eight);
        const std::string csv = ex::to_csv(it->second), json = ex::to_json_text(it->second);
        if (ex::to_csv(again) != csv || ex::to_json_text(again) != json) {
          ok = false;
          detail += " " + c.experiment + " differs between runs;";
        }
        if (ex::to_csv(par) != csv || ex::to_json_text(par) != json) {
          ok = false;
          detail += " " + c.experiment + " differs with 8 jobs;";
        }
        ++compared;
      }
      detail = std::to_string(compared) + " experiments compared as CSV and JSON" + (ok ? "" : ":" + detail);
    } catch (const std::exception& e) {
      ok = false;
      detail = std::string("error: ") + e.what();
    }
    if (!ok) ++unexpected;
    std::printf("%s %2d %-22s %s\n", tag(ok ? Verdict::Pass : Verdict::Fail), 15, "determinism", detail.c_str());
  }
  return unexpected == 0 ? 0 : 1;
}
