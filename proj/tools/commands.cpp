// Copyright 2026 The asqlab Authors
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

#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "asqlab/analysis.hpp"
#include "asqlab/csv.hpp"
#include "asqlab/fit.hpp"
#include "asqlab/perturbation.hpp"
#include "asqlab/spectrum.hpp"
#include "asqlab/sweep.hpp"
#include "asqlab/telegraph.hpp"

namespace asqlab::cli {

namespace {

namespace fs = std::filesystem;

// Collects outputs of one run.
class Outputs {
 public:
  explicit Outputs(fs::path dir) : dir_(std::move(dir)) {}

  void csv(const std::string& name, const CsvTable& table) {
    write_csv_file((dir_ / name).string(), table);
    files_.push_back(name);
  }

  // Key-value text, one `key = value` line each.
  void text(const std::string& name, const std::vector<std::pair<std::string, std::string>>& kv,
            std::ostream& log) {
    std::ofstream out(dir_ / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + (dir_ / name).string() + "'");
    for (const auto& [k, v] : kv) {
      out << k << " = " << v << '\n';
      log << k << " = " << v << '\n';
    }
    files_.push_back(name);
  }

  const std::vector<std::string>& files() const { return files_; }

 private:
  fs::path dir_;
  std::vector<std::string> files_;
};

using KeyValues = std::vector<std::pair<std::string, std::string>>;

std::string num(double v) { return format_number(v); }
std::string flag(bool b) { return b ? "true" : "false"; }

std::string require_path(const RunConfig& cfg, const std::string& key) {
  const std::string path = cfg.text(key);
  if (path.empty()) throw std::invalid_argument(key + " is not set");
  return path;
}

// Reads two named columns, falling back to x and y.
std::pair<std::vector<double>, std::vector<double>> columns(const CsvTable& t, const std::string& xn,
                                                            const std::string& yn) {
  if (t.has_column(xn) && t.has_column(yn)) return {t.numbers(xn), t.numbers(yn)};
  if (t.has_column("x") && t.has_column("y")) return {t.numbers("x"), t.numbers("y")};
  throw CsvError(t.source + ": missing columns '" + xn + "', '" + yn + "'");
}

std::vector<std::pair<double, double>> zip(const std::vector<double>& a,
                                           const std::vector<double>& b) {
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 0; i < a.size(); ++i) out.emplace_back(a[i], b[i]);
  return out;
}

Eigen::VectorXd vec(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::map<std::string, double> parse_assignments(const std::string& text, const std::string& key) {
  std::map<std::string, double> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError(key + ": expected name=value, found '" + item + "'");
    auto trim = [](std::string s) {
      s.erase(0, s.find_first_not_of(" \t"));
      s.erase(s.find_last_not_of(" \t") + 1);
      return s;
    };
    try {
      out[trim(item.substr(0, eq))] = parse_number(item.substr(eq + 1));
    } catch (const std::invalid_argument&) {
      throw ConfigError(key + ": not a number in '" + item + "'");
    }
  }
  return out;
}

void apply_bounds(FitModel& model, const std::string& text) {
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ';')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<std::string> parts;
    std::string part;
    std::istringstream ps(item);
    while (std::getline(ps, part, ':')) parts.push_back(part);
    if (parts.size() != 3) throw ConfigError("fit.bounds: expected name:lower:upper, found '" + item + "'");
    std::string name = parts[0];
    name.erase(0, name.find_first_not_of(" \t"));
    name.erase(name.find_last_not_of(" \t") + 1);
    const auto i = static_cast<std::size_t>(model.index_of(name));
    model.bounds[i] = {parse_number(parts[1]), parse_number(parts[2])};
    if (!(model.bounds[i].lower <= model.bounds[i].upper)) {
      throw ConfigError("fit.bounds: empty interval for '" + name + "'");
    }
  }
}

SweepOptions sweep_options(const Invocation& inv) {
  SweepOptions o;
  o.basis = basis_spec(inv.config);
  o.levels = inv.config.integer("solver.k");
  o.jobs = inv.jobs;
  return o;
}

std::vector<double> axis_grid(const RunConfig& cfg) {
  const long long n = cfg.integer("sweep.points");
  if (n < 2) throw ConfigError("sweep.points must be at least 2");
  return linspace(cfg.number("sweep.start"), cfg.number("sweep.stop"), static_cast<std::size_t>(n));
}

CsvTable sweep_table(const SweepResult& r) {
  CsvTable t({"phi_ext", "b_mT", "label", "frequency_GHz", "confidence"});
  for (const SweepPoint& pt : r.points) {
    for (const Transition& tr : pt.transitions.entries) {
      std::string label = to_string(tr.to);
      if (tr.from != LabelKey{0, Spin::Down}) label = to_string(tr.from) + ">" + label;
      t.add_row({num(pt.phi_ext), num(pt.b_mT), label, num(tr.frequency), num(tr.confidence)});
    }
  }
  return t;
}

int cmd_spectrum(const Invocation& inv, Outputs& out, std::ostream& log) {
  const CircuitParams p = circuit_params(inv.config);
  const EigenSolution sol =
      label_states(solve(p, basis_spec(inv.config), inv.config.integer("solver.k")), p);
  CsvTable t({"index", "label", "energy_GHz", "frequency_GHz", "confidence", "alternative"});
  bool ambiguous = false;
  for (Eigen::Index i = 0; i < sol.size(); ++i) {
    const StateLabel& l = sol.labels[static_cast<std::size_t>(i)];
    ambiguous = ambiguous || l.ambiguous();
    t.add_row({std::to_string(i), to_string(l.key), num(sol.energies[i]),
               num(sol.energies[i] - sol.energies[0]), num(l.confidence),
               l.alternative ? to_string(*l.alternative) : ""});
  }
  out.csv("levels.csv", t);
  log << "levels: " << sol.size() << (ambiguous ? " (hybridized labels)" : "") << '\n';
  return ambiguous ? kExitFlagged : kExitOk;
}

int cmd_sweep_flux(const Invocation& inv, Outputs& out, std::ostream& log) {
  const RunConfig& c = inv.config;
  const auto grid = axis_grid(c);
  const SweepResult r = sweep_flux(circuit_params(c), grid, c.number("circuit.b_mT"),
                                   c.number("sweep.g_factor"), c.number("sweep.theta"),
                                   sweep_options(inv));
  out.csv("sweep.csv", sweep_table(r));
  log << "sweep points: " << r.points.size() << '\n';
  return kExitOk;
}

int cmd_sweep_field(const Invocation& inv, Outputs& out, std::ostream& log) {
  const RunConfig& c = inv.config;
  const auto grid = axis_grid(c);
  const SweepResult r = sweep_field(circuit_params(c), grid, c.number("sweep.g_factor"),
                                    c.number("sweep.theta"), c.number("circuit.phi_ext"),
                                    sweep_options(inv));
  out.csv("sweep.csv", sweep_table(r));
  log << "sweep points: " << r.points.size() << '\n';
  return kExitOk;
}

int cmd_coupling(const Invocation& inv, Outputs& out, std::ostream& log) {
  const CircuitParams p = circuit_params(inv.config);
  const CouplingEstimate e = coupling_strengths(p);
  out.text("coupling.txt",
           {{"phi_ext", num(p.phi_ext())},
            {"theta", num(p.zeeman.theta)},
            {"e_so_GHz", num(p.e_so)},
            {"ej_eff_GHz", num(e.ej_eff)},
            {"phi_zpf", num(e.phi_zpf)},
            {"j_transverse_GHz", num(e.j_transverse)},
            {"j_longitudinal_GHz", num(e.j_longitudinal)},
            {"static_spin_orbit_GHz", num(e.static_spin_orbit)}},
           log);
  return kExitOk;
}

int cmd_crossing(const Invocation& inv, Outputs& out, std::ostream& log) {
  const RunConfig& c = inv.config;
  const auto grid = axis_grid(c);
  const CircuitParams p = circuit_params(c);
  const SweepResult r = sweep_flux(p, grid, c.number("circuit.b_mT"), c.number("sweep.g_factor"),
                                   c.number("sweep.theta"), sweep_options(inv));
  const std::string a = c.text("sweep.branch_a");
  const std::string b = c.text("sweep.branch_b");
  const double window = c.number("sweep.window");
  const CrossingReport best = find_avoided_crossing(r, a, b, window);
  KeyValues kv = {{"found", flag(best.found)}, {"branch_a", a}, {"branch_b", b}};
  if (best.found) {
    CircuitParams at = p;
    at.set_phi_ext(best.location);
    at.zeeman = zeeman_from_field(c.number("circuit.b_mT"), c.number("sweep.g_factor"),
                                  c.number("sweep.theta"));
    const CouplingEstimate e = coupling_strengths(at);
    kv.push_back({"location_rad", num(best.location)});
    kv.push_back({"splitting_GHz", num(best.splitting)});
    kv.push_back({"two_j_transverse_GHz", num(2.0 * e.j_transverse)});
  }
  out.text("crossing.txt", kv, log);
  CsvTable all({"location_rad", "splitting_GHz"});
  for (const CrossingReport& cr : find_avoided_crossings(r, a, b, window)) {
    all.add_row(std::vector<double>{cr.location, cr.splitting});
  }
  out.csv("crossings.csv", all);
  return best.found ? kExitOk : kExitFlagged;
}

KeyValues fit_summary(const FitResult& r) {
  KeyValues kv = {{"model", to_string(r.model)},
                  {"converged", flag(r.converged)},
                  {"degenerate", flag(r.degenerate)},
                  {"iterations", std::to_string(r.iterations)},
                  {"rss", num(r.rss)},
                  {"gradient_norm", num(r.gradient_norm)}};
  for (std::size_t i = 0; i < r.names.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    kv.push_back({r.names[i], num(r.values[k])});
    kv.push_back({r.names[i] + "_sigma", num(r.sigmas[k])});
  }
  return kv;
}

int cmd_fit(const Invocation& inv, Outputs& out, std::ostream& log) {
  const RunConfig& c = inv.config;
  const std::string name = inv.argument.empty() ? c.text("fit.model") : inv.argument;
  if (name.empty()) throw std::invalid_argument("fit: no model given");
  FitModel model = make_model(parse_model(name));
  apply_bounds(model, c.text("fit.bounds"));
  const CsvTable t = read_csv_file(require_path(c, "fit.input"));
  const auto [xs, ys] = columns(t, "x", "y");
  std::vector<double> sig;
  if (t.has_column("sigma")) sig = t.numbers("sigma");
  const double lo = c.number("fit.x_min");
  const double hi = c.number("fit.x_max");
  std::vector<double> x, y, w;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] < lo || xs[i] > hi) continue;
    x.push_back(xs[i]);
    y.push_back(ys[i]);
    if (!sig.empty()) w.push_back(1.0 / (sig[i] * sig[i]));
  }
  std::optional<Eigen::VectorXd> weights;
  if (!w.empty()) weights = vec(w);
  const FitResult r = fit(model, vec(x), vec(y), weights);
  out.text("fit.txt", fit_summary(r), log);
  CsvTable table({"parameter", "value", "sigma"});
  for (std::size_t i = 0; i < r.names.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    table.add_row({r.names[i], num(r.values[k]), num(r.sigmas[k])});
  }
  out.csv("fit.csv", table);
  return r.converged && !r.degenerate ? kExitOk : kExitFlagged;
}

int cmd_cp_scaling(const Invocation& inv, Outputs& out, std::ostream& log) {
  const CsvTable t = read_csv_file(require_path(inv.config, "fit.input"));
  const auto [n, t2] = columns(t, "n_pi", "t2");
  const auto pairs = zip(n, t2);
  const CPScaling s = cp_scaling_exponent(pairs);
  out.text("cp_scaling.txt",
           {{"gamma", num(s.gamma)},
            {"gamma_sigma", num(s.sigma_gamma)},
            {"amplitude", num(s.amplitude)},
            {"beta", num(s.beta)},
            {"beta_defined", flag(s.beta_defined)}},
           log);
  return s.beta_defined ? kExitOk : kExitFlagged;
}

int cmd_rabi_noise(const Invocation& inv, Outputs& out, std::ostream& log) {
  const CsvTable t = read_csv_file(require_path(inv.config, "fit.input"));
  const auto [f, tr] = columns(t, "f_rabi_MHz", "t_rabi_ns");
  const auto pairs = zip(f, tr);
  const RabiNoise r = rabi_noise_extract(pairs);
  out.text("rabi_noise.txt",
           {{"sigma_f_MHz", num(r.sigma_f)},
            {"sigma_f_sigma_MHz", num(r.sigma_sigma_f)},
            {"c", num(r.c)},
            {"c_sigma", num(r.sigma_c)},
            {"converged", flag(r.converged)},
            {"degenerate", flag(r.degenerate)}},
           log);
  return r.converged && !r.degenerate ? kExitOk : kExitFlagged;
}

int cmd_boltzmann(const Invocation& inv, Outputs& out, std::ostream& log) {
  const CsvTable t = read_csv_file(require_path(inv.config, "fit.input"));
  const auto [f, ratio] = columns(t, "f_GHz", "ratio");
  const auto points = zip(f, ratio);
  const BoltzmannFit b = boltzmann_temperature(points);
  const char* flags[] = {"ok", "infinite", "inversion"};
  out.text("boltzmann.txt",
           {{"t_eff_mK", num(b.t_eff_mK)},
            {"t_eff_sigma_mK", num(b.sigma_mK)},
            {"flag", flags[static_cast<int>(b.flag)]}},
           log);
  return b.flag == BoltzmannFlag::Ok ? kExitOk : kExitFlagged;
}

int cmd_bound(const Invocation& inv, Outputs& out, std::ostream& log) {
  const RunConfig& c = inv.config;
  const double b = susceptibility_bound(c.number("bound.sigma_f_MHz"), c.number("bound.susceptibility"));
  out.text("bound.txt", {{"bound", num(b)}, {"unit", c.text("bound.unit")}}, log);
  return kExitOk;
}

CsvTable trace_table(const TelegraphTrace& tr) {
  CsvTable t({"time_us", "signal"});
  for (std::size_t i = 0; i < tr.samples.size(); ++i) {
    t.add_row(std::vector<double>{tr.time(i), tr.samples[i]});
  }
  return t;
}

int cmd_telegraph_sim(const Invocation& inv, Outputs& out, std::ostream& log) {
  const TelegraphSpec spec = telegraph_spec(inv.config);
  if (auto w = spec.warning()) log << "warning: " << *w << '\n';
  const TelegraphTrace tr = simulate_telegraph(spec);
  out.csv("trace.csv", trace_table(tr));
  log << "samples: " << tr.samples.size() << " doublet_fraction: " << num(tr.doublet_fraction) << '\n';
  return kExitOk;
}

int cmd_telegraph_analyze(const Invocation& inv, Outputs& out, std::ostream& log) {
  const RunConfig& c = inv.config;
  const CsvTable t = read_csv_file(require_path(c, "telegraph.input"));
  const auto time = t.numbers("time_us");
  TelegraphTrace tr;
  tr.samples = t.numbers("signal");
  if (time.size() < 2) throw std::invalid_argument("telegraph-analyze: trace needs two samples");
  tr.dt = time[1] - time[0];
  const double ls = c.number("telegraph.level_s");
  const double ld = c.number("telegraph.level_d");
  DwellOptions o;
  o.threshold = c.number("telegraph.threshold");
  if (std::isnan(o.threshold)) o.threshold = 0.5 * (ls + ld);
  o.singlet_high = ls > ld;
  const DwellTimes d = dwell_times(tr, o);
  const auto hist = histogram(tr.samples, static_cast<std::size_t>(c.integer("telegraph.bins")));
  CsvTable h({"bin_center", "count"});
  for (const HistogramBin& b : hist) h.add_row(std::vector<double>{b.center, b.count});
  out.csv("histogram.csv", h);
  const DoubleGaussian g = double_gaussian_fit(hist);
  // Population of the level nearer level_s.
  const bool first_is_s = std::abs(g.mean1 - ls) < std::abs(g.mean2 - ls);
  out.text("dwell.txt",
           {{"t_s_us", num(d.t_s)},
            {"t_s_sigma_us", num(d.sigma_s)},
            {"t_d_us", num(d.t_d)},
            {"t_d_sigma_us", num(d.sigma_d)},
            {"transitions", std::to_string(d.transitions)},
            {"low_confidence", flag(d.low_confidence)},
            {"population_s", num(first_is_s ? g.population1 : g.population2)},
            {"population_d", num(first_is_s ? g.population2 : g.population1)},
            {"mean1", num(g.mean1)},
            {"sigma1", num(g.sigma1)},
            {"mean2", num(g.mean2)},
            {"sigma2", num(g.sigma2)},
            {"merged", flag(g.merged)}},
           log);
  return d.low_confidence || g.merged ? kExitFlagged : kExitOk;
}

ShotSet read_shots(const std::string& path) {
  const CsvTable t = read_csv_file(path);
  const auto i = t.numbers("i");
  const std::vector<double> q = t.has_column("q") ? t.numbers("q") : std::vector<double>(i.size(), 0.0);
  ShotSet s;
  for (std::size_t k = 0; k < i.size(); ++k) s.shots.emplace_back(i[k], q[k]);
  return s;
}

int cmd_fidelity(const Invocation& inv, Outputs& out, std::ostream& log) {
  const ShotSet g = read_shots(require_path(inv.config, "fidelity.ground"));
  const ShotSet e = read_shots(require_path(inv.config, "fidelity.excited"));
  const Fidelity f = assignment_fidelity(g, e);
  out.text("fidelity.txt",
           {{"fidelity", num(f.f)},
            {"threshold", num(f.threshold)},
            {"p_down_given_up", num(f.p_down_given_up)},
            {"p_up_given_down", num(f.p_up_given_down)},
            {"identical", flag(f.identical)}},
           log);
  return f.identical ? kExitFlagged : kExitOk;
}

int cmd_synth(const Invocation& inv, Outputs& out, std::ostream& log) {
  const RunConfig& c = inv.config;
  std::mt19937_64 rng(static_cast<std::uint64_t>(c.integer("rng_seed")));
  std::normal_distribution<double> normal(0.0, 1.0);
  const double noise = c.number("synth.noise");
  const long long n = c.integer("synth.points");
  if (n < 1) throw ConfigError("synth.points must be positive");

  if (inv.argument == "shots") {
    const double sep = c.number("synth.separation");
    for (const char* name : {"ground.csv", "excited.csv"}) {
      const double centre = std::string(name) == "ground.csv" ? 0.0 : sep;
      CsvTable t({"i", "q"});
      for (long long k = 0; k < n; ++k) {
        const double i = centre + noise * normal(rng);
        const double q = noise * normal(rng);
        t.add_row(std::vector<double>{i, q});
      }
      out.csv(name, t);
    }
    log << "shots: " << n << " per set\n";
    return kExitOk;
  }

  const FitModel model = make_model(parse_model(inv.argument));
  const auto given = parse_assignments(c.text("synth.params"), "synth.params");
  Eigen::VectorXd p(model.parameter_count());
  for (std::size_t i = 0; i < model.names.size(); ++i) {
    const auto it = given.find(model.names[i]);
    if (it == given.end()) throw ConfigError("synth.params: missing '" + model.names[i] + "'");
    p[static_cast<Eigen::Index>(i)] = it->second;
  }
  for (const auto& [k, v] : given) model.index_of(k);
  const auto xs = linspace(c.number("synth.x_start"), c.number("synth.x_stop"), static_cast<std::size_t>(n));
  const Eigen::VectorXd x = vec(xs);
  const Eigen::VectorXd truth = model(x, p);
  const bool relative = c.integer("synth.relative") != 0;
  const double scale = truth.cwiseAbs().maxCoeff();
  std::vector<std::string> header = {"x", "y"};
  if (noise > 0.0) header.push_back("sigma");
  CsvTable t(header);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double s = noise * (relative ? std::abs(truth[i]) : scale);
    const double y = truth[i] + s * normal(rng);
    std::vector<double> row = {x[i], y};
    if (noise > 0.0) row.push_back(s);
    t.add_row(row);
  }
  out.csv("data.csv", t);
  log << "samples: " << n << '\n';
  return kExitOk;
}

using Command = std::function<int(const Invocation&, Outputs&, std::ostream&)>;

const std::vector<std::pair<std::string, Command>>& commands() {
  static const std::vector<std::pair<std::string, Command>> table = {
      {"spectrum", cmd_spectrum},
      {"sweep-flux", cmd_sweep_flux},
      {"sweep-field", cmd_sweep_field},
      {"coupling", cmd_coupling},
      {"crossing", cmd_crossing},
      {"fit", cmd_fit},
      {"cp-scaling", cmd_cp_scaling},
      {"rabi-noise", cmd_rabi_noise},
      {"boltzmann", cmd_boltzmann},
      {"bound", cmd_bound},
      {"telegraph-sim", cmd_telegraph_sim},
      {"telegraph-analyze", cmd_telegraph_analyze},
      {"fidelity", cmd_fidelity},
      {"synth", cmd_synth},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, fn] : commands()) out.push_back(name);
    return out;
  }();
  return names;
}

int run(const Invocation& inv, std::ostream& log) {
  const Command* cmd = nullptr;
  for (const auto& [name, fn] : commands()) {
    if (name == inv.command) cmd = &fn;
  }
  if (!cmd) throw std::invalid_argument("unknown command '" + inv.command + "'");
  if (inv.command == "synth" && inv.argument.empty()) {
    throw std::invalid_argument("synth: give a model name or 'shots'");
  }
  fs::create_directories(inv.out_dir);
  Outputs out(inv.out_dir);
  const int status = (*cmd)(inv, out, log);

  std::ofstream m(inv.out_dir / "manifest.txt", std::ios::binary);
  if (!m) throw std::runtime_error("cannot write manifest");
  m << "command = " << inv.command << '\n';
  m << "argument = " << inv.argument << '\n';
  m << "jobs = " << inv.jobs << '\n';
  m << inv.config.dump();
  for (const std::string& f : out.files()) m << "output = " << f << '\n';
  m << "status = " << status << '\n';
  return status;
}

}  // namespace asqlab::cli
