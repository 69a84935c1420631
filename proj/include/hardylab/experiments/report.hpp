#pragma once

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "hardylab/errors.hpp"
#include "hardylab/experiments/config.hpp"

namespace hardylab::experiments {

using Cell = std::variant<double, std::string>;
using Record = std::map<std::string, Cell>;

struct Row {
  Record inputs;
  Record outputs;
  // violation - tolerance; the row passes when margin <= 0.
  double margin = 0.0;
  bool converged = true;

  bool passes() const { return margin <= 0.0; }
  std::string clause() const {
    const auto it = inputs.find("clause");
    return it != inputs.end() && std::holds_alternative<std::string>(it->second) ? std::get<std::string>(it->second)
                                                                                  : std::string{};
  }
};

// A checked row: outputs gain violation and tolerance, margin = violation - tol_scale * tolerance.
inline Row make_row(Record inputs, Record outputs, double violation, double tolerance, bool converged,
                    double tol_scale) {
  Row r;
  const double tol = tolerance * tol_scale;
  outputs["violation"] = violation;
  outputs["tolerance"] = tol;
  r.inputs = std::move(inputs);
  r.outputs = std::move(outputs);
  r.margin = std::isnan(violation) ? std::numeric_limits<double>::infinity() : violation - tol;
  r.converged = converged;
  return r;
}

struct Summary {
  bool pass = true;
  double worst_violation = 0.0;
  double worst_margin = -std::numeric_limits<double>::infinity();
  std::size_t failed_rows = 0;
  std::size_t unconverged_rows = 0;
  std::optional<double> runtime_seconds;
};

struct ExperimentReport {
  std::string experiment;
  nlohmann::json config;
  std::vector<Row> rows;
  Summary summary;
};

inline double as_number(const Cell& c) {
  if (auto d = std::get_if<double>(&c)) return *d;
  throw DomainError("cell holds a string");
}

inline Summary summarize(const std::vector<Row>& rows) {
  Summary s;
  for (const auto& r : rows) {
    if (!r.passes()) ++s.failed_rows;
    if (!r.converged) ++s.unconverged_rows;
    if (r.margin > s.worst_margin) {
      s.worst_margin = r.margin;
      const auto it = r.outputs.find("violation");
      s.worst_violation = it != r.outputs.end() ? as_number(it->second) : 0.0;
    }
  }
  if (rows.empty()) s.worst_margin = 0.0;
  s.pass = s.failed_rows == 0 && s.unconverged_rows == 0;
  return s;
}

// 0 = all pass, 1 = violation, 2 = unconverged quadrature (unless allowed).
inline int exit_status(const ExperimentReport& r, bool allow_unconverged) {
  if (r.summary.unconverged_rows > 0 && !allow_unconverged) return 2;
  return r.summary.failed_rows > 0 ? 1 : 0;
}

// Shortest form is not used: 17 significant digits, independent of the locale.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string cell_text(const Cell& c) {
  if (auto d = std::get_if<double>(&c)) return format_number(*d);
  return csv_field(std::get<std::string>(c));
}

inline nlohmann::json cell_json(const Cell& c) {
  if (auto d = std::get_if<double>(&c)) {
    if (std::isfinite(*d)) return *d;
    return format_number(*d);
  }
  return std::get<std::string>(c);
}

inline nlohmann::json number_json(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

}  // namespace detail

inline std::string to_csv(const ExperimentReport& r) {
  std::set<std::string> in, out;
  for (const auto& row : r.rows) {
    for (const auto& [k, v] : row.inputs) in.insert(k);
    for (const auto& [k, v] : row.outputs) out.insert(k);
  }
  std::string s = "experiment,row_index";
  for (const auto& k : in) s += "," + detail::csv_field(k);
  for (const auto& k : out) s += "," + detail::csv_field(k);
  s += ",margin,converged\n";
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    const auto& row = r.rows[i];
    s += detail::csv_field(r.experiment) + "," + std::to_string(i);
    for (const auto& k : in) {
      const auto it = row.inputs.find(k);
      s += "," + (it == row.inputs.end() ? std::string{} : detail::cell_text(it->second));
    }
    for (const auto& k : out) {
      const auto it = row.outputs.find(k);
      s += "," + (it == row.outputs.end() ? std::string{} : detail::cell_text(it->second));
    }
    s += "," + format_number(row.margin) + "," + (row.converged ? "true" : "false") + "\n";
  }
  return s;
}

inline nlohmann::json to_json(const ExperimentReport& r) {
  nlohmann::json j;
  j["experiment"] = r.experiment;
  j["config"] = r.config;
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    const auto& row = r.rows[i];
    nlohmann::json jr;
    jr["row_index"] = i;
    jr["inputs"] = nlohmann::json::object();
    for (const auto& [k, v] : row.inputs) jr["inputs"][k] = detail::cell_json(v);
    jr["outputs"] = nlohmann::json::object();
    for (const auto& [k, v] : row.outputs) jr["outputs"][k] = detail::cell_json(v);
    jr["margin"] = detail::number_json(row.margin);
    jr["converged"] = row.converged;
    rows.push_back(std::move(jr));
  }
  j["rows"] = std::move(rows);
  nlohmann::json s;
  s["pass"] = r.summary.pass;
  s["worst_violation"] = detail::number_json(r.summary.worst_violation);
  s["worst_margin"] = detail::number_json(r.summary.worst_margin);
  s["failed_rows"] = r.summary.failed_rows;
  s["unconverged_rows"] = r.summary.unconverged_rows;
  s["runtime_seconds"] = r.summary.runtime_seconds ? nlohmann::json(*r.summary.runtime_seconds) : nlohmann::json();
  j["summary"] = std::move(s);
  return j;
}

inline std::string to_json_text(const ExperimentReport& r) { return to_json(r).dump(2) + "\n"; }

// Reads a report back from its JSON form.
inline ExperimentReport report_from_json(const nlohmann::json& j) {
  auto cell = [](const nlohmann::json& v) -> Cell {
    if (v.is_number()) return v.get<double>();
    const auto s = v.get<std::string>();
    if (s == "nan") return std::nan("");
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    return s;
  };
  auto number = [&](const nlohmann::json& v) { return as_number(cell(v)); };
  ExperimentReport r;
  r.experiment = j.at("experiment").get<std::string>();
  r.config = j.at("config");
  for (const auto& jr : j.at("rows")) {
    Row row;
    for (const auto& [k, v] : jr.at("inputs").items()) row.inputs[k] = cell(v);
    for (const auto& [k, v] : jr.at("outputs").items()) row.outputs[k] = cell(v);
    row.margin = number(jr.at("margin"));
    row.converged = jr.at("converged").get<bool>();
    r.rows.push_back(std::move(row));
  }
  const auto& s = j.at("summary");
  r.summary.pass = s.at("pass").get<bool>();
  r.summary.worst_violation = number(s.at("worst_violation"));
  r.summary.worst_margin = number(s.at("worst_margin"));
  r.summary.failed_rows = s.at("failed_rows").get<std::size_t>();
  r.summary.unconverged_rows = s.at("unconverged_rows").get<std::size_t>();
  if (!s.at("runtime_seconds").is_null()) r.summary.runtime_seconds = s.at("runtime_seconds").get<double>();
  return r;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
  f << text;
  f.flush();
  if (!f) throw IoError("failed writing '" + path.string() + "'");
}

enum class Format { Csv, Json };

inline void emit(const ExperimentReport& r, Format fmt, const std::filesystem::path& path) {
  write_text(path, fmt == Format::Csv ? to_csv(r) : to_json_text(r));
}

}  // namespace hardylab::experiments
