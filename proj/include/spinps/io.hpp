// Copyright 2026 The spinps Authors
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

// File formats: state and coefficient JSON, grid CSV, PGM/PPM rasters and
// the experiment config/report JSON. Needs nlohmann/json (vendor/json.hpp).

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "spinps/ensemble.hpp"
#include "spinps/error.hpp"
#include "spinps/parity.hpp"
#include "spinps/phasespace.hpp"
#include "spinps/spinstates.hpp"

namespace spinps::io {

using nlohmann::json;

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("io", "cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("io", "cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw DomainError("io", "write to '" + path + "' failed");
}

inline json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw DomainError("io", std::string("malformed JSON: ") + e.what());
  }
}

template <class T>
T get_field(const json& j, const char* key) {
  if (!j.contains(key)) throw DomainError("io", std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw DomainError("io", std::string("bad field '") + key + "': " + e.what());
  }
}

/// %.17g: enough digits to round-trip any double.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// States

using State = std::variant<PureState, DensityMatrix>;

inline json complex_pair(cplx z) { return json::array({z.real(), z.imag()}); }

inline cplx read_pair(const json& p) {
  if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
    throw DomainError("io", "expected a [re, im] pair");
  return {p[0].get<double>(), p[1].get<double>()};
}

inline json state_to_json(const State& state) {
  json out;
  if (const auto* psi = std::get_if<PureState>(&state)) {
    out["twice_J"] = psi->J.twice();
    out["kind"] = "pure";
    json amps = json::array();
    for (Eigen::Index i = 0; i < psi->amplitudes.size(); ++i) amps.push_back(complex_pair(psi->amplitudes(i)));
    out["amplitudes"] = amps;
  } else {
    const auto& rho = std::get<DensityMatrix>(state);
    out["twice_J"] = rho.J.twice();
    out["kind"] = "density";
    json rows = json::array();
    for (Eigen::Index r = 0; r < rho.matrix.rows(); ++r) {
      json row = json::array();
      for (Eigen::Index c = 0; c < rho.matrix.cols(); ++c) row.push_back(complex_pair(rho.matrix(r, c)));
      rows.push_back(row);
    }
    out["matrix"] = rows;
  }
  return out;
}

/// Parses and validates a state document.
inline State state_from_json(const json& j) {
  const int twice_J = get_field<int>(j, "twice_J");
  if (twice_J < 0) throw DomainError("io", "twice_J must be non-negative");
  const HalfInteger J = HalfInteger::from_twice(twice_J);
  const auto kind = get_field<std::string>(j, "kind");
  const auto n = static_cast<std::size_t>(J.dim());
  if (kind == "pure") {
    const json& a = j.at("amplitudes");
    if (!a.is_array() || a.size() != n) throw DomainError("io", "amplitudes must have 2J+1 entries");
    PureState psi{J, CVector(static_cast<Eigen::Index>(n))};
    for (std::size_t i = 0; i < n; ++i) psi.amplitudes(static_cast<Eigen::Index>(i)) = read_pair(a[i]);
    psi.validate();
    return psi;
  }
  if (kind == "density") {
    if (!j.contains("matrix")) throw DomainError("io", "missing field 'matrix'");
    const json& m = j.at("matrix");
    if (!m.is_array() || m.size() != n) throw DomainError("io", "matrix must have 2J+1 rows");
    DensityMatrix rho{J, CMatrix(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n))};
    for (std::size_t r = 0; r < n; ++r) {
      if (!m[r].is_array() || m[r].size() != n) throw DomainError("io", "matrix rows must have 2J+1 entries");
      for (std::size_t c = 0; c < n; ++c)
        rho.matrix(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = read_pair(m[r][c]);
    }
    rho.validate();
    return rho;
  }
  throw DomainError("io", "state kind must be 'pure' or 'density'");
}

inline DensityMatrix as_density(const State& state) {
  if (const auto* psi = std::get_if<PureState>(&state)) return DensityMatrix::from_pure(*psi);
  return std::get<DensityMatrix>(state);
}

inline State read_state(const std::string& path) { return state_from_json(parse_json(read_text(path))); }

inline void write_state(const std::string& path, const State& state) {
  write_text(path, state_to_json(state).dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// Coefficients

inline json function_to_json(const SphericalFunction& f) {
  json out;
  out["twice_J"] = f.twice_J;
  out["s"] = f.s_tag ? json(*f.s_tag) : json(nullptr);
  json coeffs = json::array();
  for (int j = 0; j <= f.twice_J; ++j)
    for (int m = -j; m <= j; ++m) {
      const cplx c = f.coeff(j, m);
      coeffs.push_back(json::array({j, m, c.real(), c.imag()}));
    }
  out["coeffs"] = coeffs;
  return out;
}

/// Missing (j, m) entries are zero; out-of-range entries are rejected.
inline SphericalFunction function_from_json(const json& j) {
  const int twice_J = get_field<int>(j, "twice_J");
  if (twice_J <= 0) throw DomainError("io", "twice_J must be positive");
  std::optional<double> s;
  if (j.contains("s") && !j.at("s").is_null()) s = get_field<double>(j, "s");
  SphericalFunction f = SphericalFunction::zeros(HalfInteger::from_twice(twice_J), s);
  if (!j.contains("coeffs") || !j.at("coeffs").is_array()) throw DomainError("io", "coeffs must be an array");
  for (const json& row : j.at("coeffs")) {
    if (!row.is_array() || row.size() != 4 || !row[0].is_number_integer() || !row[1].is_number_integer() ||
        !row[2].is_number() || !row[3].is_number())
      throw DomainError("io", "coefficient rows are [j, m, re, im]");
    const int jj = row[0].get<int>();
    const int mm = row[1].get<int>();
    if (jj < 0 || jj > twice_J || std::abs(mm) > jj) throw DomainError("io", "coefficient index out of range");
    f.coeff(jj, mm) = cplx(row[2].get<double>(), row[3].get<double>());
  }
  f.validate();
  return f;
}

inline SphericalFunction read_function(const std::string& path) {
  return function_from_json(parse_json(read_text(path)));
}

inline void write_function(const std::string& path, const SphericalFunction& f) {
  write_text(path, function_to_json(f).dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// Grid CSV: header theta,phi,value; row-major in theta then phi.

struct GridTable {
  std::vector<double> thetas;
  std::vector<double> phis;
  std::vector<double> values;  // thetas.size() * phis.size()
};

inline std::string grid_to_csv(const GridTable& g) {
  std::string out = "theta,phi,value\n";
  for (std::size_t k = 0; k < g.thetas.size(); ++k)
    for (std::size_t q = 0; q < g.phis.size(); ++q) {
      out += format_double(g.thetas[k]);
      out += ',';
      out += format_double(g.phis[q]);
      out += ',';
      out += format_double(g.values[k * g.phis.size() + q]);
      out += '\n';
    }
  return out;
}

/// Reads rows back; the theta/phi axes are recovered from their first
/// appearance order.
inline GridTable grid_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "theta,phi,value") throw DomainError("io", "grid CSV header must be theta,phi,value");
  GridTable g;
  std::vector<double> all_phi;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    double t = 0, p = 0, v = 0;
    char tail = 0;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf%c", &t, &p, &v, &tail) != 3)
      throw DomainError("io", "bad grid CSV row '" + line + "'");
    if (g.thetas.empty() || g.thetas.back() != t) g.thetas.push_back(t);
    all_phi.push_back(p);
    g.values.push_back(v);
  }
  if (g.thetas.empty() || g.values.size() % g.thetas.size() != 0) throw DomainError("io", "grid CSV is not rectangular");
  g.phis.assign(all_phi.begin(), all_phi.begin() + static_cast<std::ptrdiff_t>(g.values.size() / g.thetas.size()));
  for (std::size_t i = 0; i < all_phi.size(); ++i)
    if (all_phi[i] != g.phis[i % g.phis.size()]) throw DomainError("io", "grid CSV is not rectangular");
  return g;
}

// ---------------------------------------------------------------------------
// Rasters

/// 8-bit greyscale PGM (P5), rows = theta, columns = phi, linear in value.
inline std::string grid_to_pgm(const GridTable& g) {
  const auto [lo, hi] = std::minmax_element(g.values.begin(), g.values.end());
  const double span = (*hi - *lo) > 0.0 ? (*hi - *lo) : 1.0;
  std::string out = "P5\n" + std::to_string(g.phis.size()) + " " + std::to_string(g.thetas.size()) + "\n255\n";
  for (double v : g.values) out += static_cast<char>(static_cast<unsigned char>(std::lround(255.0 * (v - *lo) / span)));
  return out;
}

/// 8-bit PPM (P6) diverging map: white at zero, red for positive and green
/// for negative values, scaled by the largest magnitude.
inline std::string grid_to_ppm(const GridTable& g) {
  double scale = 0.0;
  for (double v : g.values) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) scale = 1.0;
  std::string out = "P6\n" + std::to_string(g.phis.size()) + " " + std::to_string(g.thetas.size()) + "\n255\n";
  for (double v : g.values) {
    const double t = std::clamp(std::abs(v) / scale, 0.0, 1.0);
    const auto fade = static_cast<unsigned char>(std::lround(255.0 * (1.0 - t)));
    if (v >= 0.0) {
      out += static_cast<char>(255);
      out += static_cast<char>(fade);
      out += static_cast<char>(fade);
    } else {
      out += static_cast<char>(fade);
      out += static_cast<char>(255);
      out += static_cast<char>(fade);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Parity CSV (m, weight), m = J..-J

inline std::string parity_to_csv(const ParityOperator& p) {
  std::string out = "m,weight\n";
  for (Eigen::Index i = 0; i < p.diag.size(); ++i) {
    const HalfInteger m = HalfInteger::from_twice(p.J.twice() - 2 * static_cast<int>(i));
    out += format_double(m.value()) + "," + format_double(p.diag(i)) + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Experiment config and report

inline ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig c;
  c.twice_J = get_field<int>(j, "twice_J");
  if (j.contains("s")) c.s = get_field<double>(j, "s");
  if (j.contains("N_rho")) c.n_rho = get_field<int>(j, "N_rho");
  if (j.contains("N_r")) c.n_r = get_field<std::vector<std::int64_t>>(j, "N_r");
  if (j.contains("N_p")) c.n_p = get_field<int>(j, "N_p");
  if (j.contains("seed")) c.seed = get_field<std::uint64_t>(j, "seed");
  if (j.contains("mode")) c.mode = parse_mode(get_field<std::string>(j, "mode"));
  if (j.contains("ensemble")) {
    const auto e = get_field<std::string>(j, "ensemble");
    if (e == "hs")
      c.ensemble = StateEnsemble::kHilbertSchmidt;
    else if (e == "pure")
      c.ensemble = StateEnsemble::kHaarPure;
    else
      throw DomainError("io", "ensemble must be 'hs' or 'pure'");
  }
  if (j.contains("threads")) c.threads = get_field<unsigned>(j, "threads");
  c.validate();
  return c;
}

inline json config_to_json(const ExperimentConfig& c) {
  return json{{"twice_J", c.twice_J},
              {"s", c.s},
              {"N_rho", c.n_rho},
              {"N_r", c.n_r},
              {"N_p", c.n_p},
              {"seed", c.seed},
              {"mode", mode_name(c.mode)},
              {"ensemble", c.ensemble == StateEnsemble::kHilbertSchmidt ? "hs" : "pure"}};
}

inline ExperimentConfig read_config(const std::string& path) { return config_from_json(parse_json(read_text(path))); }

inline json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

/// Thread count is left out of the report so that it is byte-identical for
/// any degree of parallelism.
inline json report_to_json(const EnsembleErrorReport& r) {
  json out;
  out["config"] = config_to_json(r.config);
  json results = json::array();
  const char* names[3] = {"P", "W", "Q"};
  for (const auto& res : r.results) {
    json e;
    e["N_r"] = res.n_r;
    if (res.comparison) {
      json cmp = json::object();
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          const std::string key = std::string(names[a]) + "->" + names[b];
          const auto& pw = res.comparison->pointwise[a][b];
          const auto& l2 = res.comparison->l2[a][b];
          cmp[key] = {{"pointwise", pw},
                      {"pointwise_mu", stats::mean(pw)},
                      {"pointwise_sigma", stats::stddev(pw)},
                      {"l2", l2},
                      {"l2_mean", stats::mean(l2)}};
        }
      e["comparison"] = cmp;
    } else {
      e["pointwise"] = res.pointwise;
      e["pointwise_fit"] = {{"family", "gaussian"}, {"mu", res.pointwise_fit.mu}, {"sigma", res.pointwise_fit.sigma}};
      e["pointwise_skewness"] = res.pointwise_skewness;
      if (!res.grid_average.empty()) {
        e["grid_average"] = res.grid_average;
        e["grid_fit"] = {{"family", "gaussian"}, {"mu", res.grid_fit.mu}, {"sigma", res.grid_fit.sigma}};
      }
      if (!res.l2.empty()) {
        e["l2"] = res.l2;
        e["l2_mean"] = res.l2_mean;
        e["l2_fit"] = {{"family", "lognormal"},
                       {"mu", res.l2_fit.mu},
                       {"sigma", res.l2_fit.sigma},
                       {"positive_support", res.l2_fit.positive_support}};
      }
    }
    results.push_back(e);
  }
  out["results"] = results;
  out["scaling"] = {{"pointwise_sigma_exponent", optional_json(r.pointwise_sigma_exponent)},
                    {"grid_sigma_exponent", optional_json(r.grid_sigma_exponent)},
                    {"l2_mean_exponent", optional_json(r.l2_mean_exponent)}};
  return out;
}

}  // namespace spinps::io
