#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "hardylab/experiments/config.hpp"
#include "hardylab/experiments/parallel.hpp"
#include "hardylab/experiments/report.hpp"

namespace hardylab::experiments {

struct RunOptions {
  int jobs = 1;
  double tol_scale = 1.0;
  bool allow_unconverged = false;
  bool timing = false;
  // Called with (finished, total) as tasks complete; order of calls is unspecified.
  std::function<void(std::size_t, std::size_t)> progress;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent seed for sample `index` of stream `stream`.
inline std::uint64_t task_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  return splitmix64(splitmix64(seed ^ splitmix64(stream)) + index);
}

// Uniform deviates with a bit-exact definition on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  double log_uniform(double a, double b) { return std::exp(uniform(std::log(a), std::log(b))); }

 private:
  std::mt19937_64 gen_;
};

using Task = std::function<std::vector<Row>()>;

// Runs tasks on the configured number of threads and concatenates their rows in task order.
inline std::vector<Row> run_tasks(const std::vector<Task>& tasks, const RunOptions& opt) {
  std::atomic<std::size_t> done{0};
  const auto parts = parallel_map(tasks.size(), opt.jobs, [&](std::size_t i) {
    auto rows = tasks[i]();
    const std::size_t d = ++done;
    if (opt.progress) opt.progress(d, tasks.size());
    return rows;
  });
  std::vector<Row> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

// Row construction bound to a run's tolerance scale.
struct RowMaker {
  double tol_scale = 1.0;

  Row operator()(Record inputs, Record outputs, double violation, double tolerance, bool converged = true) const {
    return make_row(std::move(inputs), std::move(outputs), violation, tolerance, converged, tol_scale);
  }
};

inline double relative_difference(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

// Least-squares slope of log y against log x.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

inline std::vector<std::pair<int, double>> np_pairs(const Grid& g) {
  std::vector<std::pair<int, double>> out;
  const auto n = zipped_size(g, {"N", "p"});
  for (std::size_t i = 0; i < n; ++i) out.emplace_back(as_int(zipped_at(g, "N", i), "N"), zipped_at(g, "p", i));
  return out;
}

inline int samples_or(const ExperimentConfig& c, int fallback) { return c.samples > 0 ? c.samples : fallback; }

}  // namespace hardylab::experiments
