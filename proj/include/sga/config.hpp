// Copyright 2026 The sga-games Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef SGA_CONFIG_HPP_
#define SGA_CONFIG_HPP_

#include <charconv>
#include <fstream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "sga/experiments.hpp"

namespace sga {

inline double parse_double(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw InvalidArgument("malformed number '" + std::string(s) + "'");
  }
  return v;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

// "1,2.5,-3e-2" -> vector.
inline Vector parse_vector(std::string_view s) {
  if (s.empty()) throw InvalidArgument("empty vector literal");
  const auto parts = split(s, ',');
  Vector v(static_cast<Index>(parts.size()));
  for (std::size_t i = 0; i < parts.size(); ++i) v[static_cast<Index>(i)] = parse_double(parts[i]);
  return v;
}

// "0.1" or "1,0;0,1" (rows separated by ';').
inline Matrix parse_matrix(std::string_view s) {
  const auto rows = split(s, ';');
  std::vector<Vector> parsed;
  for (auto r : rows) parsed.push_back(parse_vector(r));
  const Index cols = parsed.front().size();
  Matrix m(static_cast<Index>(parsed.size()), cols);
  for (std::size_t r = 0; r < parsed.size(); ++r) {
    if (parsed[r].size() != cols) throw InvalidArgument("ragged matrix literal '" + std::string(s) + "'");
    m.row(static_cast<Index>(r)) = parsed[r].transpose();
  }
  return m;
}

// "key=value" with a matrix-literal value.
inline std::pair<std::string, Matrix> parse_param(std::string_view s) {
  const std::size_t eq = s.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw InvalidArgument("parameter must look like key=value, got '" + std::string(s) + "'");
  }
  return {std::string(s.substr(0, eq)), parse_matrix(s.substr(eq + 1))};
}

// "kind", "kind:lambda" or "kind:lambda:epsilon".
inline AdjusterSpec parse_adjuster(std::string_view s) {
  const auto parts = split(s, ':');
  if (parts.size() > 3) throw InvalidArgument("adjuster must look like kind[:lambda[:epsilon]]");
  AdjusterSpec spec;
  spec.kind = parse_adjuster_kind(std::string(parts[0]));
  if (parts.size() > 1) spec.lambda = parse_double(parts[1]);
  if (parts.size() > 2) spec.epsilon = parse_double(parts[2]);
  spec.validate();
  return spec;
}

// "lo:hi:count[:log|linear]"; spacing defaults to log.
inline EtaGrid parse_eta_range(std::string_view s) {
  const auto parts = split(s, ':');
  if (parts.size() != 3 && parts.size() != 4) {
    throw InvalidArgument("eta range must look like lo:hi:count[:log|linear]");
  }
  const double count = parse_double(parts[2]);
  if (!(count >= 1.0) || count != std::floor(count) || count > 1e6) {
    throw InvalidArgument("eta range count must be a positive integer");
  }
  EtaGrid::Spacing spacing = EtaGrid::Spacing::Log;
  if (parts.size() == 4) {
    if (parts[3] == "linear") {
      spacing = EtaGrid::Spacing::Linear;
    } else if (parts[3] != "log") {
      throw InvalidArgument("eta spacing must be log or linear");
    }
  }
  return EtaGrid::range(parse_double(parts[0]), parse_double(parts[1]),
                        static_cast<std::size_t>(count), spacing);
}

// ---------------------------------------------------------------------------
// JSON sweep configuration. Unknown keys are rejected.

namespace detail {

using nlohmann::json;

inline void expect_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw InvalidArgument(where + " must be an object");
  for (const auto& [k, v] : j.items()) {
    if (!allowed.contains(k)) throw InvalidArgument("unknown key '" + k + "' in " + where);
  }
}

inline double json_number(const json& j, const std::string& what) {
  if (!j.is_number()) throw InvalidArgument(what + " must be a number");
  return j.get<double>();
}

inline std::size_t json_count(const json& j, const std::string& what) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0)) {
    throw InvalidArgument(what + " must be a nonnegative integer");
  }
  return j.get<std::size_t>();
}

inline Vector json_vector(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) throw InvalidArgument(what + " must be a nonempty array");
  Vector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Index>(i)] = json_number(j[i], what);
  return v;
}

inline Matrix json_param(const json& j, const std::string& key) {
  if (j.is_number()) return scalar_param(j.get<double>());
  if (j.is_string()) return parse_matrix(j.get<std::string>());
  if (!j.is_array() || j.empty()) throw InvalidArgument("parameter '" + key + "' is malformed");
  std::vector<Vector> rows;
  for (const auto& r : j) rows.push_back(json_vector(r, "parameter '" + key + "' row"));
  Matrix m(static_cast<Index>(rows.size()), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != m.cols()) throw InvalidArgument("parameter '" + key + "' is ragged");
    m.row(static_cast<Index>(r)) = rows[r].transpose();
  }
  return m;
}

}  // namespace detail

inline SweepConfig sweep_config_from_json(const nlohmann::json& j) {
  using detail::json;
  detail::expect_keys(j, {"games", "adjusters", "etas", "eta_range", "w0", "stop", "seed", "jobs"},
                      "sweep config");
  SweepConfig c;
  if (j.contains("games")) {
    for (const auto& g : j.at("games")) {
      detail::expect_keys(g, {"id", "params"}, "game");
      GameSpec spec;
      spec.id = g.at("id").get<std::string>();
      if (g.contains("params")) {
        for (const auto& [k, v] : g.at("params").items()) spec.params[k] = detail::json_param(v, k);
      }
      c.games.push_back(std::move(spec));
    }
  }
  if (j.contains("adjusters")) {
    for (const auto& a : j.at("adjusters")) {
      detail::expect_keys(a, {"kind", "lambda", "epsilon"}, "adjuster");
      AdjusterSpec spec;
      spec.kind = parse_adjuster_kind(a.at("kind").get<std::string>());
      if (a.contains("lambda")) spec.lambda = detail::json_number(a.at("lambda"), "lambda");
      if (a.contains("epsilon")) spec.epsilon = detail::json_number(a.at("epsilon"), "epsilon");
      c.adjusters.push_back(spec);
    }
  }
  if (j.contains("etas") && j.contains("eta_range")) {
    throw InvalidArgument("give either etas or eta_range, not both");
  }
  if (j.contains("etas")) {
    const Vector v = detail::json_vector(j.at("etas"), "etas");
    c.etas = EtaGrid::list(std::vector<double>(v.data(), v.data() + v.size()));
  }
  if (j.contains("eta_range")) {
    const json& r = j.at("eta_range");
    detail::expect_keys(r, {"lo", "hi", "count", "spacing"}, "eta_range");
    std::string spacing = r.value("spacing", std::string("log"));
    if (spacing != "log" && spacing != "linear") throw InvalidArgument("eta spacing must be log or linear");
    c.etas = EtaGrid::range(detail::json_number(r.at("lo"), "lo"), detail::json_number(r.at("hi"), "hi"),
                            detail::json_count(r.at("count"), "count"),
                            spacing == "log" ? EtaGrid::Spacing::Log : EtaGrid::Spacing::Linear);
  }
  if (j.contains("w0")) {
    const json& w = j.at("w0");
    detail::expect_keys(w, {"policy", "points", "radius", "count"}, "w0");
    const std::string policy = w.value("policy", std::string("fixed"));
    if (policy == "fixed") {
      c.w0.kind = W0Policy::Kind::Fixed;
      c.w0.points.clear();
      for (const auto& p : w.at("points")) c.w0.points.push_back(detail::json_vector(p, "w0 point"));
    } else if (policy == "ball") {
      c.w0.kind = W0Policy::Kind::Ball;
      if (w.contains("radius")) c.w0.radius = detail::json_number(w.at("radius"), "radius");
      if (w.contains("count")) c.w0.count = detail::json_count(w.at("count"), "count");
    } else {
      throw InvalidArgument("w0 policy must be fixed or ball");
    }
  }
  if (j.contains("stop")) {
    const json& s = j.at("stop");
    detail::expect_keys(s, {"max_iters", "loss_window", "loss_threshold", "divergence_norm", "xi_threshold"},
                        "stop");
    if (s.contains("max_iters")) c.stop.max_iters = detail::json_count(s.at("max_iters"), "max_iters");
    if (s.contains("loss_window")) c.stop.loss_window = detail::json_count(s.at("loss_window"), "loss_window");
    if (s.contains("loss_threshold")) c.stop.loss_threshold = detail::json_number(s.at("loss_threshold"), "loss_threshold");
    if (s.contains("divergence_norm")) c.stop.divergence_norm = detail::json_number(s.at("divergence_norm"), "divergence_norm");
    if (s.contains("xi_threshold") && !s.at("xi_threshold").is_null()) {
      c.stop.xi_threshold = detail::json_number(s.at("xi_threshold"), "xi_threshold");
    }
  }
  if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("jobs")) c.jobs = detail::json_count(j.at("jobs"), "jobs");
  return c;
}

inline nlohmann::json to_json(const SweepConfig& c) {
  nlohmann::json games = nlohmann::json::array();
  for (const auto& g : c.games) {
    nlohmann::json params = nlohmann::json::object();
    for (const auto& [k, v] : g.params) {
      params[k] = v.size() == 1 ? nlohmann::json(v(0, 0)) : matrix_json(v);
    }
    games.push_back({{"id", g.id}, {"params", params}});
  }
  nlohmann::json adjusters = nlohmann::json::array();
  for (const auto& a : c.adjusters) {
    adjusters.push_back({{"kind", to_string(a.kind)}, {"lambda", a.lambda}, {"epsilon", a.epsilon}});
  }
  nlohmann::json w0;
  if (c.w0.kind == W0Policy::Kind::Fixed) {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : c.w0.points) pts.push_back(vector_json(p));
    w0 = {{"policy", "fixed"}, {"points", pts}};
  } else {
    w0 = {{"policy", "ball"}, {"radius", c.w0.radius}, {"count", c.w0.count}};
  }
  nlohmann::json stop{{"max_iters", c.stop.max_iters},
                      {"loss_window", c.stop.loss_window},
                      {"loss_threshold", c.stop.loss_threshold},
                      {"divergence_norm", c.stop.divergence_norm},
                      {"xi_threshold", c.stop.xi_threshold ? nlohmann::json(*c.stop.xi_threshold)
                                                           : nlohmann::json(nullptr)}};
  return {{"games", games},   {"adjusters", adjusters}, {"etas", c.etas.values},
          {"w0", w0},         {"stop", stop},           {"seed", c.seed},
          {"jobs", c.jobs}};
}

inline SweepConfig load_sweep_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument("config file '" + path + "' is not valid JSON: " + e.what());
  }
  try {
    return sweep_config_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument("config file '" + path + "': " + e.what());
  }
}

}  // namespace sga

#endif  // SGA_CONFIG_HPP_
