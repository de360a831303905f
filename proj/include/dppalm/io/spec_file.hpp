#pragma once

#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "dppalm/errors.hpp"
#include "dppalm/finite_dpp.hpp"
#include "dppalm/kernel.hpp"
#include "dppalm/models/euclidean.hpp"
#include "dppalm/models/sphere.hpp"

namespace dppalm::io {

// A kernel specification file after parsing and validation.
//
//   {"family": "ginibre", "params": {"alpha": 0.5, "beta": 1.5}}
//   {"family": "finite", "matrix": [[[0.3, 0], [0, 0]], [[0, 0], [0.7, 0]]]}
//   {"family": "sphere-coefficients", "params": {"d": 2, "rho": 0.1, "coefficients": [0.5, 0.5]}}
struct LoadedSpec {
  std::string family;
  Kernel kernel;
  std::optional<FiniteDpp> finite;
  std::optional<SphereModel> sphere;
  std::optional<std::pair<double, double>> multiquadric;  // (delta, rho)
};

namespace detail {

using nlohmann::json;

inline std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

inline double finite_number(const json& v, const std::string& field) {
  if (!v.is_number()) throw parse_error("field '" + field + "': expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw parse_error("field '" + field + "': value is not finite");
  return x;
}

inline int integer_number(const json& v, const std::string& field) {
  const double x = finite_number(v, field);
  if (x != std::floor(x) || std::abs(x) > 1e6) throw parse_error("field '" + field + "': expected an integer");
  return static_cast<int>(x);
}

// Numeric params of one family: rejects unknown and missing keys.
class Params {
 public:
  Params(const json& params, std::set<std::string> allowed) : params_(params) {
    if (!params_.is_object()) throw parse_error("field 'params': expected an object");
    for (const auto& [key, value] : params_.items()) {
      if (!allowed.count(key)) throw parse_error("field 'params." + key + "': unknown parameter");
    }
  }

  bool has(const std::string& key) const { return params_.contains(key); }
  double number(const std::string& key) const {
    if (!has(key)) throw parse_error("field 'params." + key + "': required parameter is missing");
    return finite_number(params_.at(key), "params." + key);
  }
  double number_or(const std::string& key, double fallback) const { return has(key) ? number(key) : fallback; }
  int integer_or(const std::string& key, int fallback) const {
    return has(key) ? integer_number(params_.at(key), "params." + key) : fallback;
  }
  int integer(const std::string& key) const {
    if (!has(key)) throw parse_error("field 'params." + key + "': required parameter is missing");
    return integer_number(params_.at(key), "params." + key);
  }
  std::vector<double> numbers(const std::string& key) const {
    if (!has(key)) throw parse_error("field 'params." + key + "': required parameter is missing");
    const json& arr = params_.at(key);
    if (!arr.is_array()) throw parse_error("field 'params." + key + "': expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      out.push_back(finite_number(arr[i], "params." + key + "[" + std::to_string(i) + "]"));
    }
    return out;
  }

 private:
  const json& params_;
};

inline CMatrix parse_matrix(const json& m) {
  if (!m.is_array() || m.empty()) throw parse_error("field 'matrix': expected a non-empty array of rows");
  const std::size_t n = m.size();
  CMatrix out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const std::string row = "matrix[" + std::to_string(i) + "]";
    if (!m[i].is_array()) throw parse_error("field '" + row + "': expected an array");
    if (m[i].size() != n) {
      throw parse_error("field '" + row + "': matrix is not square (" + std::to_string(m[i].size()) + " entries, " +
                        std::to_string(n) + " rows)");
    }
    for (std::size_t j = 0; j < n; ++j) {
      const std::string cell = row + "[" + std::to_string(j) + "]";
      const json& e = m[i][j];
      if (!e.is_array() || e.size() != 2) throw parse_error("field '" + cell + "': expected a [re, im] pair");
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          Complex(finite_number(e[0], cell + "[0]"), finite_number(e[1], cell + "[1]"));
    }
  }
  return out;
}

}  // namespace detail

/// Parses and validates a kernel specification document.
///
/// Syntax and schema problems raise parse errors naming the line and column
/// or the offending field; kernels that parse but break a model condition
/// raise validation errors with the condition token.
inline LoadedSpec parse_spec(const std::string& text) {
  using detail::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = detail::line_column(text, e.byte > 0 ? e.byte - 1 : 0);
    throw parse_error("line " + std::to_string(line) + ", column " + std::to_string(col) + ": malformed document");
  }
  if (!doc.is_object()) throw parse_error("line 1: top level must be an object");
  for (const auto& [key, value] : doc.items()) {
    if (key != "family" && key != "params" && key != "matrix") throw parse_error("field '" + key + "': unknown key");
  }
  if (!doc.contains("family") || !doc["family"].is_string()) {
    throw parse_error("field 'family': required string is missing");
  }
  const std::string family = doc["family"].get<std::string>();
  const json empty = json::object();
  const json& params = doc.contains("params") ? doc["params"] : empty;
  if (family != "finite" && doc.contains("matrix")) {
    throw parse_error("field 'matrix': only the finite family takes a matrix");
  }

  if (family == "finite") {
    detail::Params p(params, {});
    if (!doc.contains("matrix")) throw parse_error("field 'matrix': required for the finite family");
    FiniteDpp dpp = validate(detail::parse_matrix(doc["matrix"]));
    Kernel k = dpp.kernel();
    return {family, std::move(k), std::move(dpp), std::nullopt, std::nullopt};
  }
  if (family == "ginibre") {
    detail::Params p(params, {"alpha", "beta"});
    return {family, ginibre_kernel({p.number("alpha"), p.number("beta")}), std::nullopt, std::nullopt, std::nullopt};
  }
  if (family == "jinc" || family == "sinc") {
    detail::Params p(params, {"d", "alpha", "beta"});
    const int d = p.integer_or("d", family == "jinc" ? 2 : 1);
    if ((family == "jinc") != (d == 2)) {
      throw validation_error(condition::param_bound, family + " kernel needs d = " + (family == "jinc" ? "2" : "1"));
    }
    Kernel k = jinc_kernel(d);
    if (p.has("alpha") || p.has("beta")) k = thin_rescale(k, p.number_or("alpha", 1.0), p.number_or("beta", 1.0));
    return {family, std::move(k), std::nullopt, std::nullopt, std::nullopt};
  }
  if (family == "sphere-multiquadric") {
    detail::Params p(params, {"delta", "rho"});
    const double delta = p.number("delta");
    const double rho = p.number("rho");
    MultiquadricModel mq = multiquadric(delta, rho);
    return {family, std::move(mq.kernel), std::nullopt, std::move(mq.model), std::make_pair(delta, rho)};
  }
  if (family == "sphere-coefficients") {
    detail::Params p(params, {"d", "rho", "coefficients", "tail_bound"});
    std::optional<double> tail;
    if (p.has("tail_bound")) tail = p.number("tail_bound");
    SphereModel m = sphere_model(p.integer("d"), p.number("rho"), p.numbers("coefficients"), tail);
    Kernel k = sphere_series_kernel(m);
    return {family, std::move(k), std::nullopt, std::move(m), std::nullopt};
  }
  throw parse_error("field 'family': unknown family '" + family + "'");
}

inline LoadedSpec load_spec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw parse_error("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_spec(buf.str());
}

}  // namespace dppalm::io
