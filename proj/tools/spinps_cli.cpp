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


// spinps: command-line front end.
//
//   spinps <group> <command> [options] [--seed N] [--out PATH] [--format json|csv|pgm] [--threads N]
//
// Exit codes: 0 ok, 2 domain/contract error (stderr line "E:<module>:<code>: ..."),
// 64 usage error. Relative output paths land in $SPINPS_OUT_DIR when it is set.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <deque>
#include <filesystem>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "spinps.hpp"
#include "spinps/io.hpp"

namespace {

using namespace spinps;
using io::json;

constexpr int kExitOk = 0;
constexpr int kExitError = 2;
constexpr int kExitUsage = 64;
constexpr const char* kOutDirEnv = "SPINPS_OUT_DIR";

/// Missing or malformed arguments found after parsing; exits like a parse error.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void need(bool present, const char* flag) {
  if (!present) throw UsageError(std::string(flag) + " is required");
}

struct Globals {
  std::uint64_t seed = 1;
  std::string out;
  std::string format;
  unsigned threads = 0;
  bool seed_given = false;
};

// ---------------------------------------------------------------------------
// small helpers

HalfInteger parse_spin(const std::string& text) {
  try {
    std::size_t used = 0;
    const auto slash = text.find('/');
    if (slash != std::string::npos) {
      if (text.substr(slash + 1) != "2") throw DomainError("cli", "spin '" + text + "' must be n or n/2");
      const int num = std::stoi(text.substr(0, slash), &used);
      if (used != slash) throw DomainError("cli", "bad spin '" + text + "'");
      return HalfInteger::from_twice(num);
    }
    const double v = std::stod(text, &used);
    if (used != text.size()) throw DomainError("cli", "bad spin '" + text + "'");
    const double twice = 2.0 * v;
    if (twice != std::round(twice)) throw DomainError("cli", "spin '" + text + "' is not a half-integer");
    return HalfInteger::from_twice(static_cast<int>(twice));
  } catch (const std::logic_error&) {
    throw DomainError("cli", "bad spin '" + text + "'");
  }
}

std::string spin_text(HalfInteger J) {
  return J.twice() % 2 == 0 ? std::to_string(J.twice() / 2) : std::to_string(J.twice()) + "/2";
}

std::string env_out_dir() {
  const char* dir = std::getenv(kOutDirEnv);
  return dir ? std::string(dir) : std::string();
}

/// Empty result means stdout.
std::string resolve_out(const Globals& g, const std::string& default_name) {
  const std::string dir = env_out_dir();
  if (g.out.empty()) return dir.empty() ? std::string() : (std::filesystem::path(dir) / default_name).string();
  std::filesystem::path p(g.out);
  if (p.is_relative() && !dir.empty()) p = std::filesystem::path(dir) / p;
  return p.string();
}

void emit(const Globals& g, const std::string& text, const std::string& default_name) {
  const std::string path = resolve_out(g, default_name);
  if (path.empty()) {
    std::cout << text << std::flush;
    return;
  }
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(parent, ec);
  }
  io::write_text(path, text);
}

std::string pick_format(const Globals& g, std::initializer_list<const char*> allowed, const char* command) {
  if (g.format.empty()) return *allowed.begin();
  for (const char* a : allowed)
    if (g.format == a) return g.format;
  throw DomainError("cli", std::string(command) + " cannot write format '" + g.format + "'");
}

/// Where a state comes from: a file, a named state, or (state make only) a
/// random draw.
struct StateSource {
  std::string path;
  std::string named;
  std::string spin;
  std::string dicke_m;
  double squeeze = 0.3;

  void attach(CLI::App* cmd) {
    cmd->add_option("--state", path, "state JSON file");
    cmd->add_option("--named", named, "spin_up|dicke|ghz|squeezed|rnd_J4_fixture");
    cmd->add_option("--J", spin, "spin number for --named, e.g. 5/2");
    cmd->add_option("--m", dicke_m, "Dicke projection (default J-1)");
    cmd->add_option("--squeeze", squeeze, "one-axis twisting angle for squeezed");
  }

  bool given() const { return !path.empty() || !named.empty(); }

  io::State load() const {
    if (!path.empty() && !named.empty()) throw DomainError("cli", "give either --state or --named, not both");
    if (!path.empty()) return io::read_state(path);
    if (named.empty()) throw DomainError("cli", "a state is required (--state FILE or --named NAME --J J)");
    if (spin.empty()) throw DomainError("cli", "--named needs --J");
    const HalfInteger J = parse_spin(spin);
    NamedStateSpec spec;
    spec.kind = parse_named_state(named);
    spec.squeeze_angle = squeeze;
    spec.dicke_m = dicke_m.empty() ? J - HalfInteger::from_int(1) : parse_spin(dicke_m);
    return make_named_state(spec, J);
  }

  DensityMatrix density() const { return io::as_density(load()); }
};

// ---------------------------------------------------------------------------
// grids

io::GridTable sample_table(const SphericalFunction& f, int n) {
  if (n < 2) throw DomainError("cli", "--n must be at least 2");
  io::GridTable t;
  for (int k = 0; k < n; ++k) t.thetas.push_back(kPi * k / (n - 1));
  for (int q = 0; q < n; ++q) t.phis.push_back(2.0 * kPi * q / n);
  t.values = evaluate_grid(f, t.thetas, t.phis);
  return t;
}

void emit_grid(const Globals& g, const io::GridTable& t, bool color, const std::string& stem) {
  const std::string fmt = pick_format(g, {"csv", "pgm", "json"}, "grid output");
  if (fmt == "csv") {
    emit(g, io::grid_to_csv(t), stem + ".csv");
  } else if (fmt == "pgm") {
    if (color)
      emit(g, io::grid_to_ppm(t), stem + ".ppm");
    else
      emit(g, io::grid_to_pgm(t), stem + ".pgm");
  } else {
    json j{{"theta", t.thetas}, {"phi", t.phis}, {"value", t.values}};
    emit(g, j.dump() + "\n", stem + ".json");
  }
}

// ---------------------------------------------------------------------------
// tomography helpers

SphericalFunction simulate_full(const DensityMatrix& rho, double s, int n_p, std::int64_t n_r, const Globals& g) {
  const HalfInteger J = rho.J;
  const GridSpec grid{n_p};
  grid.validate_for(J);
  if (n_r < 0) throw DomainError("cli", "--nr must be >= 0 (0 = exact)");
  const ParityOperator parity = parity_operator(J, s);
  GridSamples samples{grid, std::vector<double>(static_cast<std::size_t>(grid.size()))};
  parallel_for(samples.values.size(), g.threads, [&](std::size_t i) {
    const int k = static_cast<int>(i) / n_p;
    const int q = static_cast<int>(i) % n_p;
    const PhasePoint point(grid.theta(k), grid.phi(q));
    if (n_r == 0) {
      samples.values[i] = pointwise_reconstruct(probabilities(rho, point), parity);
    } else {
      Stream rng = make_stream(g.seed, {3, i});
      samples.values[i] = pointwise_reconstruct(sample_counts(rho, point, n_r, rng), parity);
    }
  });
  return full_tomography(samples, J, s);
}

json comparison_bootstrap(const EnsembleErrorReport& report, std::uint64_t seed) {
  json out = json::array();
  constexpr int kResamples = 2000;
  for (const auto& res : report.results) {
    if (!res.comparison) continue;
    const auto& pw = res.comparison->pointwise;
    // slots: 0 = P, 1 = W, 2 = Q; pointwise[src][dst]
    const double wp = stats::bootstrap_sigma_ratio_quantile(pw[1][0], pw[0][0], kResamples, seed, 0.025);
    const double qw = stats::bootstrap_sigma_ratio_quantile(pw[2][1], pw[1][1], kResamples, seed, 0.025);
    out.push_back({{"N_r", res.n_r},
                   {"sigma_ratio_W->P_over_P->P", stats::stddev(pw[1][0]) / stats::stddev(pw[0][0])},
                   {"sigma_ratio_W->P_over_P->P_q025", wp},
                   {"sigma_ratio_Q->W_over_W->W", stats::stddev(pw[2][1]) / stats::stddev(pw[1][1])},
                   {"sigma_ratio_Q->W_over_W->W_q025", qw}});
  }
  return out;
}

std::string fmt_opt(const std::optional<double>& v) { return v ? io::format_double(*v) : std::string("n/a"); }

// ---------------------------------------------------------------------------
// application

struct Leaf {
  CLI::App* app = nullptr;
  std::string name;  // "ps grid"
  std::function<void()> run;
  std::shared_ptr<std::string> recipe;  // --config for one-shot commands
};

int run_args(std::vector<std::string> args, int depth);

/// Keys whose values are file paths; relative ones resolve against the recipe
/// base directory.
bool is_path_key(const std::string& key) {
  return key == "out" || key == "in" || key == "state" || key == "kernel";
}

/// Runs every entry of a recipe file. The recipe names its entry command;
/// each run may name another one (so a run can read what an earlier run
/// wrote). Run objects map long-flag names to values: lists are
/// comma-joined, true adds a bare flag. Paths resolve against --out, else
/// $SPINPS_OUT_DIR, else the working directory.
void run_recipe(const std::string& name, const std::string& path, const Globals& g, int depth) {
  if (depth > 0) throw DomainError("cli", "recipes cannot nest");
  const json doc = io::parse_json(io::read_text(path));
  const auto command = io::get_field<std::string>(doc, "command");
  if (command != name) throw DomainError("cli", "recipe '" + path + "' starts with '" + command + "', not '" + name + "'");
  if (!doc.contains("runs") || !doc["runs"].is_array()) throw DomainError("cli", "recipe needs a 'runs' array");
  std::filesystem::path base = !g.out.empty() ? std::filesystem::path(g.out) : std::filesystem::path(env_out_dir());
  base = std::filesystem::absolute(base.empty() ? std::filesystem::path(".") : base);
  std::filesystem::create_directories(base);
  for (const auto& entry : doc["runs"]) {
    if (!entry.is_object()) throw DomainError("cli", "recipe runs must be objects");
    std::vector<std::string> args;
    std::istringstream words(entry.contains("command") ? io::get_field<std::string>(entry, "command") : command);
    for (std::string w; words >> w;) args.push_back(w);
    for (const auto& [key, value] : entry.items()) {
      if (key == "command") continue;
      if (key == "config") throw DomainError("cli", "recipe runs cannot set config");
      if (value.is_boolean()) {
        if (value.get<bool>()) args.push_back("--" + key);
        continue;
      }
      std::string text;
      if (value.is_array()) {
        for (const auto& v : value) text += (text.empty() ? "" : ",") + (v.is_string() ? v.get<std::string>() : v.dump());
      } else {
        text = value.is_string() ? value.get<std::string>() : value.dump();
      }
      if (is_path_key(key) && std::filesystem::path(text).is_relative()) text = (base / text).string();
      args.push_back("--" + key);
      args.push_back(text);
    }
    if (g.seed_given && !entry.contains("seed")) {
      args.push_back("--seed");
      args.push_back(std::to_string(g.seed));
    }
    if (!g.format.empty() && !entry.contains("format")) {
      args.push_back("--format");
      args.push_back(g.format);
    }
    if (g.threads != 0 && !entry.contains("threads")) {
      args.push_back("--threads");
      args.push_back(std::to_string(g.threads));
    }
    const int rc = run_args(args, depth + 1);
    if (rc != kExitOk) throw DomainError("cli", "recipe run failed with exit code " + std::to_string(rc));
  }
}

int run_args(std::vector<std::string> args, int depth) {
  CLI::App app{"spinps: s-parametrized phase-space functions of spin-J states", "spinps"};
  app.fallthrough();
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "seed for every random draw")->each([&](const std::string&) { g.seed_given = true; });
  app.add_option("--out", g.out, "output file (stdout when unset, or $SPINPS_OUT_DIR/<default name>)");
  app.add_option("--format", g.format, "json|csv|pgm")->check(CLI::IsMember({"json", "csv", "pgm"}));
  app.add_option("--threads", g.threads, "worker cap (0 = all cores)");

  std::deque<Leaf> leaves;
  auto group = [&](const char* name, const char* help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->require_subcommand(1);
    return sub;
  };
  auto leaf = [&](CLI::App* parent, const char* name, const char* help, bool recipe) -> Leaf& {
    Leaf l;
    l.app = parent->add_subcommand(name, help);
    l.name = parent->get_name() + " " + name;
    if (recipe) {
      l.recipe = std::make_shared<std::string>();
      l.app->add_option("--config", *l.recipe, "recipe JSON with a list of runs");
    }
    leaves.push_back(std::move(l));
    return leaves.back();
  };
  // --- state ---------------------------------------------------------------
  CLI::App* state = group("state", "create and check state files");
  StateSource make_src;
  std::string random_kind;
  {
    Leaf& l = leaf(state, "make", "write a named or random state", true);
    make_src.attach(l.app);
    l.app->add_option("--random", random_kind, "pure|hs random state of spin --J, drawn from --seed");
    l.run = [&] {
      pick_format(g, {"json"}, "state make");
      io::State st;
      if (!random_kind.empty()) {
        if (make_src.given()) throw DomainError("cli", "--random excludes --state/--named");
        if (make_src.spin.empty()) throw DomainError("cli", "--random needs --J");
        const HalfInteger J = parse_spin(make_src.spin);
        if (random_kind == "pure")
          st = random_pure(J, g.seed);
        else if (random_kind == "hs")
          st = random_hs(J, g.seed);
        else
          throw DomainError("cli", "--random must be pure or hs");
      } else {
        st = make_src.load();
      }
      emit(g, io::state_to_json(st).dump(2) + "\n", "state.json");
    };
  }
  std::string validate_path;
  {
    Leaf& l = leaf(state, "validate", "parse and validate a state file", false);
    l.app->add_option("--state", validate_path, "state JSON file")->required();
    l.run = [&] {
      const io::State st = io::read_state(validate_path);
      const bool pure = std::holds_alternative<PureState>(st);
      const HalfInteger J = pure ? std::get<PureState>(st).J : std::get<DensityMatrix>(st).J;
      std::cout << "ok " << (pure ? "pure" : "density") << " J=" << spin_text(J)
                << " purity=" << io::format_double(io::as_density(st).purity()) << "\n";
    };
  }

  // --- parity ----------------------------------------------------------------
  CLI::App* parity = group("parity", "parity operator diagonals");
  std::vector<std::string> parity_spins;
  std::vector<double> parity_s;
  bool parity_radon = false;
  {
    Leaf& l = leaf(parity, "dump", "diagonal of M_s (or the Radon parity) as m,weight", true);
    l.app->add_option("--J", parity_spins, "spin number(s), comma separated")->delimiter(',');
    l.app->add_option("--s", parity_s, "s value(s), comma separated")->delimiter(',');
    l.app->add_flag("--radon", parity_radon, "Radon-transform parity instead of M_s");
    l.run = [&] {
      need(!parity_spins.empty(), "--J");
      need(!parity_s.empty(), "--s");
      const std::string fmt = pick_format(g, {"csv", "json"}, "parity dump");
      const bool single = parity_spins.size() == 1 && parity_s.size() == 1;
      std::string csv = single ? "" : "J,s,m,weight\n";
      json arr = json::array();
      for (const auto& js : parity_spins)
        for (double s : parity_s) {
          const HalfInteger J = parse_spin(js);
          const ParityOperator p = parity_radon ? radon_parity(J, s) : parity_operator(J, s);
          std::vector<double> w(p.diag.data(), p.diag.data() + p.diag.size());
          arr.push_back({{"twice_J", J.twice()}, {"s", s}, {"radon", parity_radon}, {"weights", w}});
          const std::string block = io::parity_to_csv(p);
          if (single) {
            csv = block;
          } else {
            std::istringstream lines(block);
            std::string line;
            std::getline(lines, line);  // header
            while (std::getline(lines, line)) csv += spin_text(J) + "," + io::format_double(s) + "," + line + "\n";
          }
        }
      if (fmt == "csv")
        emit(g, csv, "parity.csv");
      else
        emit(g, arr.dump(2) + "\n", "parity.json");
    };
  }

  // --- ps -------------------------------------------------------------------
  CLI::App* ps = group("ps", "phase-space functions");
  StateSource ps_src;
  std::string ps_in;
  double ps_s = 0.0;
  double ps_theta = 0.0, ps_phi = 0.0;
  std::string ps_route = "direct";
  int ps_n = 64;
  bool ps_color = false;
  auto ps_input = [&](CLI::App* cmd, bool with_s) {
    ps_src.attach(cmd);
    cmd->add_option("--in", ps_in, "coefficient JSON instead of a state");
    if (with_s) cmd->add_option("--s", ps_s, "s in [-1, 1]; 1 = P, 0 = W, -1 = Q");
  };
  auto ps_function = [&]() -> SphericalFunction {
    if (!ps_in.empty()) {
      if (ps_src.given()) throw DomainError("cli", "give either --in or a state");
      return io::read_function(ps_in);
    }
    return to_spherical_coeffs(ps_src.density(), ps_s);
  };
  {
    Leaf& l = leaf(ps, "eval", "F(theta, phi, s) at one point", true);
    ps_input(l.app, true);
    l.app->add_option("--theta", ps_theta, "polar angle");
    l.app->add_option("--phi", ps_phi, "azimuth");
    l.app->add_option("--route", ps_route, "direct|series (files given by --in always use series)")
        ->check(CLI::IsMember({"direct", "series"}));
    l.run = [&, cmd = l.app] {
      need(cmd->count("--theta") > 0, "--theta");
      need(cmd->count("--phi") > 0, "--phi");
      const PhasePoint point(ps_theta, ps_phi);
      double value = 0.0;
      if (ps_in.empty() && ps_route == "direct")
        value = evaluate_direct(ps_src.density(), point, ps_s);
      else
        value = evaluate_series(ps_function(), point);
      emit(g, io::format_double(value) + "\n", "value.txt");
    };
  }
  {
    Leaf& l = leaf(ps, "grid", "F on an n x n (theta, phi) grid, poles included", true);
    ps_input(l.app, true);
    l.app->add_option("--n", ps_n, "points per axis");
    l.app->add_flag("--color", ps_color, "with --format pgm: red/green PPM instead of greyscale PGM");
    l.run = [&] { emit_grid(g, sample_table(ps_function(), ps_n), ps_color, "grid"); };
  }
  {
    Leaf& l = leaf(ps, "coeffs", "spherical-harmonic coefficients c_jm", true);
    ps_input(l.app, true);
    l.run = [&] {
      pick_format(g, {"json"}, "ps coeffs");
      emit(g, io::function_to_json(ps_function()).dump(2) + "\n", "coeffs.json");
    };
  }

  // --- conv -----------------------------------------------------------------
  CLI::App* conv = group("conv", "convolution between representations");
  double conv_s = 0.0;
  std::string conv_in, conv_kernel;
  {
    Leaf& l = leaf(conv, "apply", "F(s) -> F(s - s' - 1) via the spin-up kernel, or convolve with --kernel", true);
    l.app->add_option("--kernel-s", conv_s, "kernel parameter s'");
    l.app->add_option("--kernel", conv_kernel, "axially symmetric kernel coefficients (JSON)");
    l.app->add_option("--in", conv_in, "coefficient JSON");
    l.run = [&] {
      need(!conv_in.empty(), "--in");
      pick_format(g, {"json"}, "conv apply");
      const SphericalFunction f = io::read_function(conv_in);
      const SphericalFunction out =
          conv_kernel.empty() ? transform_s(f, conv_s) : convolve(io::read_function(conv_kernel), f);
      emit(g, io::function_to_json(out).dump(2) + "\n", "convolved.json");
    };
  }

  // --- tomo -----------------------------------------------------------------
  CLI::App* tomo = group("tomo", "simulated Stern-Gerlach tomography");
  std::string tomo_config;
  {
    Leaf& l = leaf(tomo, "simulate", "ensemble error statistics from an experiment config", false);
    l.app->add_option("--config", tomo_config, "experiment config JSON")->required();
    l.run = [&] {
      pick_format(g, {"json"}, "tomo simulate");
      ExperimentConfig cfg = io::read_config(tomo_config);
      if (g.seed_given) cfg.seed = g.seed;
      if (g.threads != 0) cfg.threads = g.threads;
      const EnsembleErrorReport report = run_ensemble_experiment(cfg);
      emit(g, io::report_to_json(report).dump(2) + "\n", "report.json");
      std::cerr << "pointwise_sigma_exponent=" << fmt_opt(report.pointwise_sigma_exponent)
                << " grid_sigma_exponent=" << fmt_opt(report.grid_sigma_exponent)
                << " l2_mean_exponent=" << fmt_opt(report.l2_mean_exponent) << "\n";
    };
  }
  {
    Leaf& l = leaf(tomo, "compare", "direct vs convolved P/W/Q reconstruction (3x3)", false);
    l.app->add_option("--config", tomo_config, "experiment config JSON; mode is forced to compare3x3")->required();
    l.run = [&] {
      pick_format(g, {"json"}, "tomo compare");
      ExperimentConfig cfg = io::read_config(tomo_config);
      cfg.mode = ExperimentMode::kCompare3x3;
      if (g.seed_given) cfg.seed = g.seed;
      if (g.threads != 0) cfg.threads = g.threads;
      const EnsembleErrorReport report = run_ensemble_experiment(cfg);
      json doc = io::report_to_json(report);
      doc["bootstrap"] = comparison_bootstrap(report, cfg.seed);
      emit(g, doc.dump(2) + "\n", "compare.json");
      for (const auto& b : doc["bootstrap"])
        std::cerr << "N_r=" << b["N_r"].get<std::int64_t>()
                  << " W->P/P->P=" << io::format_double(b["sigma_ratio_W->P_over_P->P"].get<double>())
                  << " Q->W/W->W=" << io::format_double(b["sigma_ratio_Q->W_over_W->W"].get<double>()) << "\n";
    };
  }
  StateSource tomo_src;
  double tomo_s = 0.0;
  int tomo_np = 22;
  std::int64_t tomo_nr = 1000;
  {
    Leaf& l = leaf(tomo, "full", "simulate grid measurements and recover all c_jm", true);
    tomo_src.attach(l.app);
    l.app->add_option("--s", tomo_s, "s of the reconstructed function");
    l.app->add_option("--np", tomo_np, "grid points per axis (even, >= 4J+2)");
    l.app->add_option("--nr", tomo_nr, "repetitions per grid point (0 = exact probabilities)");
    l.run = [&] {
      pick_format(g, {"json"}, "tomo full");
      const SphericalFunction f = simulate_full(tomo_src.density(), tomo_s, tomo_np, tomo_nr, g);
      emit(g, io::function_to_json(f).dump(2) + "\n", "tomography.json");
    };
  }
  std::string density_in;
  {
    Leaf& l = leaf(tomo, "density", "recover rho from F(., s) by quadrature", true);
    tomo_src.attach(l.app);
    l.app->add_option("--in", density_in, "coefficient JSON carrying an s tag");
    l.app->add_option("--s", tomo_s, "s used for simulated measurements");
    l.app->add_option("--nr", tomo_nr, "repetitions per node (0 = exact probabilities)");
    l.run = [&] {
      pick_format(g, {"json"}, "tomo density");
      DensityReconstruction rec;
      std::optional<DensityMatrix> truth;
      if (!density_in.empty()) {
        if (tomo_src.given()) throw DomainError("cli", "give either --in or a state");
        rec = reconstruct_density(io::read_function(density_in));
      } else {
        truth = tomo_src.density();
        const DensityQuadrature quad = density_quadrature(truth->J);
        if (tomo_nr < 0) throw DomainError("cli", "--nr must be >= 0 (0 = exact)");
        if (tomo_nr == 0) {
          std::vector<RVector> probs(quad.nodes.size());
          parallel_for(probs.size(), g.threads, [&](std::size_t i) { probs[i] = probabilities(*truth, quad.nodes[i]); });
          rec = reconstruct_density_from_probs(probs, quad, tomo_s);
        } else {
          std::vector<SternGerlachRecord> records(quad.nodes.size());
          parallel_for(records.size(), g.threads, [&](std::size_t i) {
            Stream rng = make_stream(g.seed, {4, i});
            records[i] = sample_counts(*truth, quad.nodes[i], tomo_nr, rng);
          });
          rec = reconstruct_density_from_records(records, quad, tomo_s);
        }
      }
      json rows = json::array();
      for (Eigen::Index r = 0; r < rec.rho.matrix.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < rec.rho.matrix.cols(); ++c) row.push_back(io::complex_pair(rec.rho.matrix(r, c)));
        rows.push_back(row);
      }
      json doc{{"twice_J", rec.rho.J.twice()},
               {"matrix", rows},
               {"trace_before_normalization", rec.trace_before_normalization},
               {"amplification", rec.amplification},
               {"ill_conditioned", rec.ill_conditioned}};
      if (truth) doc["frobenius_error"] = (rec.rho.matrix - truth->matrix).norm();
      if (rec.ill_conditioned)
        std::cerr << "W:tomography:conditioning: dual parity weights reach " << io::format_double(rec.amplification)
                  << "; noise is amplified accordingly\n";
      emit(g, doc.dump(2) + "\n", "density.json");
    };
  }

  // --- radon ----------------------------------------------------------------
  CLI::App* radon = group("radon", "spherical Radon transform");
  std::string radon_in;
  for (const bool forward : {true, false}) {
    Leaf& l = leaf(radon, forward ? "fwd" : "inv", forward ? "great-circle transform" : "inverse (even ranks only)", true);
    l.app->add_option("--in", radon_in, "coefficient JSON");
    l.run = [&g, &radon_in, forward] {
      need(!radon_in.empty(), "--in");
      pick_format(g, {"json"}, forward ? "radon fwd" : "radon inv");
      const SphericalFunction f = io::read_function(radon_in);
      const SphericalFunction out = forward ? radon_forward(f) : radon_inverse(f);
      emit(g, io::function_to_json(out).dump(2) + "\n", forward ? "radon.json" : "radon_inverse.json");
    };
  }

  // --- limits ---------------------------------------------------------------
  CLI::App* limits = group("limits", "large-J planar limits");
  std::vector<std::string> limit_spins{"5", "10", "20", "40"};
  std::vector<double> limit_s{-1.0, 0.0};
  std::string limit_state = "spin_up";
  {
    Leaf& l = leaf(limits, "compare", "max |F_spin - F_planar| in arc-length coordinates", true);
    l.app->add_option("--J", limit_spins, "spin numbers, comma separated")->delimiter(',');
    l.app->add_option("--s", limit_s, "s values (spin_up: -1, 0; dicke: 0)")->delimiter(',');
    l.app->add_option("--family", limit_state, "spin_up|dicke");
    l.run = [&] {
      const std::string fmt = pick_format(g, {"csv", "json"}, "limits compare");
      const LimitState which = parse_limit_state(limit_state);
      std::string csv = "state,s,J,error\n";
      json arr = json::array();
      for (double s : limit_s)
        for (const auto& js : limit_spins) {
          const HalfInteger J = parse_spin(js);
          const double err = planar_limit_error(J, s, which);
          csv += limit_state + "," + io::format_double(s) + "," + spin_text(J) + "," + io::format_double(err) + "\n";
          arr.push_back({{"state", limit_state}, {"s", s}, {"twice_J", J.twice()}, {"error", err}});
        }
      if (fmt == "csv")
        emit(g, csv, "limits.csv");
      else
        emit(g, arr.dump(2) + "\n", "limits.json");
    };
  }

  // Name the offending word instead of CLI11's generic complaint.
  for (auto it = args.begin(); it != args.end(); ++it) {
    if (it->empty() || (*it)[0] == '-') {
      if (*it == "--seed" || *it == "--out" || *it == "--format" || *it == "--threads") ++it;
      if (it == args.end()) break;
      continue;
    }
    const auto subs = app.get_subcommands([&](CLI::App* a) { return a->check_name(*it); });
    if (subs.empty()) {
      std::cerr << "E:cli:usage: unknown command '" << *it << "'\n" << app.help();
      return kExitUsage;
    }
    break;
  }

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "E:cli:usage: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  for (const Leaf& l : leaves) {
    if (!l.app->parsed()) continue;
    if (l.recipe && !l.recipe->empty()) {
      run_recipe(l.name, *l.recipe, g, depth);
      return kExitOk;
    }
    l.run();
    return kExitOk;
  }
  std::cerr << "E:cli:usage: no command\n" << app.help();
  return kExitUsage;
}

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    return run_args(std::move(args), 0);
  } catch (const UsageError& e) {
    std::cerr << "E:cli:usage: " << one_line(e.what()) << "\n";
    return kExitUsage;
  } catch (const spinps::Error& e) {
    std::cerr << "E:" << e.module() << ":" << e.code() << ": " << one_line(e.what()) << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "E:cli:internal: " << one_line(e.what()) << "\n";
    return kExitError;
  }
}
