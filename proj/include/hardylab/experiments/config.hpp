#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hardylab/errors.hpp"
#include "hardylab/quadrature.hpp"

namespace hardylab::experiments {

// Named lists of numbers; lists of unequal length are zipped with length-1 lists broadcast.
using Grid = std::map<std::string, std::vector<double>>;

struct QuadratureOverrides {
  std::optional<double> rel_tol;
  std::optional<double> abs_tol;
  std::optional<int> max_depth;
  std::optional<double> pole_exclusion;
  std::optional<double> truncation;

  QuadratureSpec apply(QuadratureSpec s) const {
    if (rel_tol) s.rel_tol = *rel_tol;
    if (abs_tol) s.abs_tol = *abs_tol;
    if (max_depth) s.max_depth = *max_depth;
    if (pole_exclusion) s.pole_exclusion = *pole_exclusion;
    if (truncation) s.truncation = *truncation;
    return s;
  }
};

struct ExperimentConfig {
  std::string experiment;
  Grid params_grid;
  Grid family_grid;
  QuadratureOverrides quadrature;
  std::uint64_t seed = 42;
  // Seeded samples or points per grid point.
  int samples = 0;
  std::string output;

  QuadratureSpec spec() const { return quadrature.apply(QuadratureSpec{}); }
};

namespace detail {

inline const std::vector<double>& grid_list(const Grid& g, const std::string& key) {
  const auto it = g.find(key);
  if (it == g.end() || it->second.empty()) throw ConfigError("grid entry '" + key + "' is missing or empty");
  return it->second;
}

}  // namespace detail

inline bool has_key(const Grid& g, const std::string& key) { return g.count(key) > 0; }

// Number of zipped points over the given keys.
inline std::size_t zipped_size(const Grid& g, const std::vector<std::string>& keys) {
  std::size_t n = 1;
  for (const auto& k : keys) n = std::max(n, detail::grid_list(g, k).size());
  for (const auto& k : keys) {
    const auto m = detail::grid_list(g, k).size();
    if (m != 1 && m != n) throw ConfigError("grid entries to be zipped have incompatible lengths");
  }
  return n;
}

inline double zipped_at(const Grid& g, const std::string& key, std::size_t i) {
  const auto& v = detail::grid_list(g, key);
  return v.size() == 1 ? v.front() : v.at(i);
}

inline const std::vector<double>& list_of(const Grid& g, const std::string& key) { return detail::grid_list(g, key); }

inline int as_int(double v, const std::string& what) {
  if (v != static_cast<double>(static_cast<int>(v))) throw ConfigError(what + " must be an integer");
  return static_cast<int>(v);
}

inline nlohmann::json to_json(const QuadratureOverrides& q) {
  nlohmann::json j = nlohmann::json::object();
  if (q.rel_tol) j["rel_tol"] = *q.rel_tol;
  if (q.abs_tol) j["abs_tol"] = *q.abs_tol;
  if (q.max_depth) j["max_depth"] = *q.max_depth;
  if (q.pole_exclusion) j["pole_exclusion"] = *q.pole_exclusion;
  if (q.truncation) j["truncation"] = *q.truncation;
  return j;
}

inline nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["experiment"] = c.experiment;
  j["params_grid"] = c.params_grid;
  j["family_grid"] = c.family_grid;
  j["quadrature"] = to_json(c.quadrature);
  j["seed"] = c.seed;
  j["samples"] = c.samples;
  j["output"] = c.output;
  return j;
}

namespace detail {

inline Grid parse_grid(const nlohmann::json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object of number lists");
  Grid g;
  for (const auto& [k, v] : j.items()) {
    std::vector<double> xs;
    if (v.is_number()) xs.push_back(v.get<double>());
    else if (v.is_array()) {
      for (const auto& x : v) {
        if (!x.is_number()) throw ConfigError(where + "." + k + " must hold numbers");
        xs.push_back(x.get<double>());
      }
    } else throw ConfigError(where + "." + k + " must be a number or a list of numbers");
    if (xs.empty()) throw ConfigError(where + "." + k + " must not be empty");
    g[k] = std::move(xs);
  }
  return g;
}

inline double positive_number(const nlohmann::json& v, const std::string& key) {
  if (!v.is_number() || !(v.get<double>() > 0.0)) throw ConfigError("quadrature." + key + " must be a positive number");
  return v.get<double>();
}

}  // namespace detail

// Overlays the fields present in a JSON document onto a base configuration.
inline ExperimentConfig merge_config(ExperimentConfig base, const nlohmann::json& doc) {
  if (!doc.is_object()) throw ConfigError("configuration must be a JSON object");
  for (const auto& [key, v] : doc.items()) {
    if (key == "experiment") {
      if (!v.is_string()) throw ConfigError("experiment must be a string");
      base.experiment = v.get<std::string>();
    } else if (key == "params_grid") {
      base.params_grid = detail::parse_grid(v, key);
    } else if (key == "family_grid") {
      for (auto& [k, xs] : detail::parse_grid(v, key)) base.family_grid[k] = std::move(xs);
    } else if (key == "quadrature") {
      if (!v.is_object()) throw ConfigError("quadrature must be an object");
      for (const auto& [qk, qv] : v.items()) {
        if (qk == "rel_tol") base.quadrature.rel_tol = detail::positive_number(qv, qk);
        else if (qk == "abs_tol") base.quadrature.abs_tol = detail::positive_number(qv, qk);
        else if (qk == "pole_exclusion") base.quadrature.pole_exclusion = detail::positive_number(qv, qk);
        else if (qk == "truncation") base.quadrature.truncation = detail::positive_number(qv, qk);
        else if (qk == "max_depth") {
          if (!qv.is_number_integer() || qv.get<int>() < 4) throw ConfigError("quadrature.max_depth must be an integer >= 4");
          base.quadrature.max_depth = qv.get<int>();
        } else throw ConfigError("unknown quadrature field '" + qk + "'");
      }
    } else if (key == "seed") {
      if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
        throw ConfigError("seed must be a nonnegative integer");
      base.seed = v.get<std::uint64_t>();
    } else if (key == "samples") {
      if (!v.is_number_integer() || v.get<long long>() < 1) throw ConfigError("samples must be a positive integer");
      base.samples = v.get<int>();
    } else if (key == "output") {
      if (!v.is_string()) throw ConfigError("output must be a string");
      base.output = v.get<std::string>();
    } else {
      throw ConfigError("unknown configuration field '" + key + "'");
    }
  }
  return base;
}

inline nlohmann::json parse_json_text(const std::string& text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("configuration is not valid JSON: ") + e.what());
  }
}

}  // namespace hardylab::experiments
