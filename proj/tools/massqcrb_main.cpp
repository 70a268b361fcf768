#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "massqcrb/bures_qfi.hpp"
#include "massqcrb/density.hpp"
#include "massqcrb/fisher.hpp"
#include "massqcrb/optimizer.hpp"
#include "massqcrb/physical.hpp"
#include "massqcrb/sensitivity.hpp"
#include "massqcrb/state.hpp"
#include "massqcrb/state_spec.hpp"
#include "massqcrb/wigner.hpp"

namespace {

using nlohmann::json;

// Scientific notation with 12 significant digits, the table output format.
std::string sci(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.11e", v);
  return buf;
}

json finite_or_inf(double v) {
  return std::isinf(v) ? json("inf") : json(v);
}

// Accepts a JSON object as the --config file: top-level keys feed the main
// app, nested objects feed the subcommand of the same name.  Flags given on
// the command line override the file.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App*, bool, bool,
                        std::string) const override {
    return "{}\n";
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    json doc;
    try {
      input >> doc;
    } catch (const json::exception& e) {
      throw CLI::ConfigError(std::string("config is not valid JSON: ") +
                             e.what());
    }
    if (!doc.is_object())
      throw CLI::ConfigError("config must be a JSON object");
    std::vector<CLI::ConfigItem> items;
    walk(doc, {}, items);
    return items;
  }

 private:
  static std::string scalar(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    return v.dump();
  }

  static void walk(const json& node, std::vector<std::string> parents,
                   std::vector<CLI::ConfigItem>& items) {
    for (auto it = node.begin(); it != node.end(); ++it) {
      if (it.value().is_object()) {
        auto deeper = parents;
        deeper.push_back(it.key());
        walk(it.value(), deeper, items);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = it.key();
      if (it.value().is_array())
        for (const auto& entry : it.value()) item.inputs.push_back(scalar(entry));
      else
        item.inputs.push_back(scalar(it.value()));
      items.push_back(std::move(item));
    }
  }
};

// Results go out in one shot: assembled in memory, then either streamed to
// stdout or moved into place through a temp file so readers never see a
// partial document.
void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out)
      throw std::runtime_error("cannot write '" + tmp +
                               "': " + std::strerror(errno));
    out << text;
    out.flush();
    if (!out) throw std::runtime_error("write failed on '" + tmp + "'");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    const std::string why = std::strerror(errno);
    std::remove(tmp.c_str());
    throw std::runtime_error("cannot move '" + tmp + "' to '" + path +
                             "': " + why);
  }
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::string render(const std::string& format) const {
    if (format == "csv") {
      std::ostringstream out;
      for (std::size_t c = 0; c < columns.size(); ++c)
        out << (c ? "," : "") << columns[c];
      out << "\n";
      for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c)
          out << (c ? "," : "") << sci(row[c]);
        out << "\n";
      }
      return out.str();
    }
    json j;
    j["columns"] = columns;
    j["rows"] = rows;
    return j.dump(2) + "\n";
  }
};

struct OutputOptions {
  std::string format = "json";
  std::string path;
};

void add_output_options(CLI::App* cmd, OutputOptions* out) {
  cmd->add_option("--format", out->format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  cmd->add_option("-o,--output", out->path,
                  "Write to this file (atomically) instead of stdout");
}

// ---------------------------------------------------------------------------
// min-mass

struct MinMassArgs {
  std::string state = "fock:3";
  double tau = 0.0;
  std::int64_t n_measurements = 1;
  OutputOptions out;
};

void run_min_mass(const MinMassArgs& a) {
  const massqcrb::StateVector state = massqcrb::parse_state(a.state);
  const double f = massqcrb::fisher_f(state, a.tau);
  const massqcrb::SensitivityResult r =
      massqcrb::min_mass_ratio(f, a.n_measurements, a.tau);

  std::string text;
  if (a.out.format == "csv") {
    std::ostringstream s;
    s << "state,tau,f,delta_m_over_m,n_measurements\n";
    s << a.state << "," << sci(a.tau) << "," << sci(f) << ","
      << (r.infinite ? "inf" : sci(r.delta_m_over_m)) << ","
      << a.n_measurements << "\n";
    text = s.str();
  } else {
    json j;
    j["state"] = a.state;
    j["tau"] = a.tau;
    j["f"] = f;
    j["delta_m_over_m"] =
        r.infinite ? json("inf") : json(r.delta_m_over_m);
    j["n_measurements"] = a.n_measurements;
    text = j.dump(2) + "\n";
  }
  write_output(a.out.path, text);
}

// ---------------------------------------------------------------------------
// sweep-fig1

struct SweepArgs {
  int level = 3;
  double tau_max = 2.0 * M_PI;
  int steps = 200;
  int restarts = 8;
  std::uint64_t seed = 1;
  OutputOptions out;
};

void run_sweep(const SweepArgs& a) {
  if (a.level < 1) throw std::invalid_argument("sweep-fig1: level must be >= 1");
  if (a.steps < 1) throw std::invalid_argument("sweep-fig1: steps must be >= 1");
  if (!(a.tau_max > 0.0) || !std::isfinite(a.tau_max))
    throw std::invalid_argument("sweep-fig1: tau-max must be positive");

  const massqcrb::StateVector on_probe =
      massqcrb::make_on(a.level, 0.0, a.level + 1);
  const double alpha = std::sqrt(a.level / 2.0);

  Table table;
  table.columns = {"tau",      "fock",    "on",
                   "on_asymptote", "optimal", "coherent"};
  table.rows.reserve(a.steps + 1);
  for (int k = 0; k <= a.steps; ++k) {
    const double tau = a.tau_max * k / a.steps;
    const massqcrb::OptimizationReport rep =
        massqcrb::optimize_state(a.level, tau, a.restarts, a.seed);
    table.rows.push_back(
        {tau, std::sqrt(std::abs(massqcrb::f_fock(a.level, tau))),
         std::sqrt(std::abs(massqcrb::fisher_f(on_probe, tau))),
         std::sqrt(std::abs(massqcrb::f_on_asymptotic(a.level, tau))),
         std::sqrt(std::abs(rep.best_f)),
         std::sqrt(std::abs(massqcrb::f_coherent(alpha, tau)))});
  }
  write_output(a.out.path, table.render(a.out.format));
}

// ---------------------------------------------------------------------------
// thermal

struct ThermalArgs {
  std::vector<double> z_list = {0.2, 0.5, 1.0, 2.0, 5.0, 10.0};
  double tau_max = 2.0 * M_PI;
  int steps = 400;
  std::int64_t n_measurements = 1;
  double tail_tol = 1e-5;
  bool inset = false;
  double z_min = 0.2;
  double z_max = 10.0;
  OutputOptions out;
};

massqcrb::ThermalSpec spec_for(double z, double tail_tol) {
  massqcrb::ThermalSpec spec;
  spec.z = z;
  spec.dim = massqcrb::thermal_required_dim(z, tail_tol);
  spec.tail_tol = tail_tol;
  return spec;
}

void run_thermal(const ThermalArgs& a) {
  if (a.steps < 1) throw std::invalid_argument("thermal: steps must be >= 1");
  Table table;
  if (a.inset) {
    if (!(a.z_max > a.z_min) || !(a.z_min > 0.0))
      throw std::invalid_argument("thermal: need 0 < z-min < z-max");
    table.columns = {"z", "m_over_dm"};
    for (int k = 0; k <= a.steps; ++k) {
      const double z = a.z_min + (a.z_max - a.z_min) * k / a.steps;
      const massqcrb::SensitivityResult r = massqcrb::thermal_min_mass(
          spec_for(z, a.tail_tol), M_PI_2, a.n_measurements);
      table.rows.push_back({z, r.infinite ? 0.0 : 1.0 / r.delta_m_over_m});
    }
  } else {
    if (a.z_list.empty())
      throw std::invalid_argument("thermal: need at least one z");
    table.columns = {"tau"};
    for (double z : a.z_list) {
      std::ostringstream name;
      name << "z=" << z;
      table.columns.push_back(name.str());
    }
    std::vector<massqcrb::ThermalSpec> specs;
    for (double z : a.z_list) specs.push_back(spec_for(z, a.tail_tol));
    for (int k = 0; k <= a.steps; ++k) {
      const double tau = a.tau_max * k / a.steps;
      std::vector<double> row{tau};
      for (const auto& spec : specs) {
        const massqcrb::SensitivityResult r =
            massqcrb::thermal_min_mass(spec, tau, a.n_measurements);
        row.push_back(r.infinite ? 0.0 : 1.0 / r.delta_m_over_m);
      }
      table.rows.push_back(std::move(row));
    }
  }
  write_output(a.out.path, table.render(a.out.format));
}

// ---------------------------------------------------------------------------
// optimize

struct OptimizeArgs {
  int level = 3;
  double tau = M_PI_2;
  int restarts = 32;
  std::uint64_t seed = 1;
  std::int64_t n_measurements = 1;
  std::string save_path;
  OutputOptions out;
};

void run_optimize(const OptimizeArgs& a) {
  const massqcrb::OptimizationReport rep =
      massqcrb::optimize_state(a.level, a.tau, a.restarts, a.seed);
  const massqcrb::SensitivityResult r =
      massqcrb::min_mass_ratio(rep.best_f, a.n_measurements, a.tau);
  if (!a.save_path.empty()) massqcrb::save_state(rep.best_state, a.save_path);

  std::string text;
  if (a.out.format == "csv") {
    std::ostringstream s;
    s << "# level: " << a.level << "\n";
    s << "# tau: " << sci(a.tau) << "\n";
    s << "# restarts: " << a.restarts << "\n";
    s << "# seed: " << a.seed << "\n";
    s << "# converged: " << (rep.converged ? "true" : "false") << "\n";
    s << "# spread: " << sci(rep.spread) << "\n";
    s << "# f: " << sci(rep.best_f) << "\n";
    s << "# delta_m_over_m: "
      << (r.infinite ? "inf" : sci(r.delta_m_over_m)) << "\n";
    s << "n,re,im\n";
    for (int n = 0; n < rep.best_state.dim(); ++n)
      s << n << "," << sci(rep.best_state.coeffs(n).real()) << ","
        << sci(rep.best_state.coeffs(n).imag()) << "\n";
    text = s.str();
  } else {
    json coeffs = json::array();
    for (int n = 0; n < rep.best_state.dim(); ++n)
      coeffs.push_back({rep.best_state.coeffs(n).real(),
                        rep.best_state.coeffs(n).imag()});
    json j;
    j["level"] = a.level;
    j["tau"] = a.tau;
    j["restarts"] = a.restarts;
    j["seed"] = a.seed;
    j["converged"] = rep.converged;
    j["spread"] = rep.spread;
    j["f"] = rep.best_f;
    j["delta_m_over_m"] = r.infinite ? json("inf") : json(r.delta_m_over_m);
    j["n_measurements"] = a.n_measurements;
    j["coeffs"] = coeffs;
    text = j.dump(2) + "\n";
  }
  write_output(a.out.path, text);
}

// ---------------------------------------------------------------------------
// wigner

struct WignerArgs {
  std::string state = "fock:0";
  double range = 6.0;
  int resolution = 256;
  std::string path;
};

void run_wigner(const WignerArgs& a) {
  if (!(a.range > 0.0) || !std::isfinite(a.range))
    throw std::invalid_argument("wigner: range must be positive");
  const massqcrb::StateVector state = massqcrb::parse_state(a.state);
  const massqcrb::PhaseSpaceGrid grid = massqcrb::wigner_grid(
      state, {-a.range, a.range}, {-a.range, a.range}, a.resolution);

  std::ostringstream s;
  s << "# x0_units\n";
  s << "x: ";
  for (int j = 0; j < grid.x_values.size(); ++j)
    s << (j ? "," : "") << sci(grid.x_values(j));
  s << "\np: ";
  for (int i = 0; i < grid.p_values.size(); ++i)
    s << (i ? "," : "") << sci(grid.p_values(i));
  s << "\n";
  for (int i = 0; i < grid.values.rows(); ++i) {
    for (int j = 0; j < grid.values.cols(); ++j)
      s << (j ? "," : "") << sci(grid.values(i, j));
    s << "\n";
  }
  if (grid.normalization_warning)
    std::fprintf(stderr,
                 "warning: grid mass %.6f deviates from 1; enlarge --range "
                 "or --resolution\n",
                 grid.mass);
  write_output(a.path, s.str());
}

// ---------------------------------------------------------------------------
// physical

struct PhysicalArgs {
  double mass_g = 0.0;
  double omega = 0.0;
  double time_s = 0.0;
  double quanta = -1.0;
  double amplitude = -1.0;
  bool has_quanta = false;
  bool has_amplitude = false;
  std::int64_t n_measurements = 1;
  OutputOptions out;
};

void run_physical(const PhysicalArgs& a) {
  massqcrb::PhysicalSpec spec;
  spec.mass_g = a.mass_g;
  spec.omega_rad_s = a.omega;
  spec.time_s = a.time_s;
  if (a.has_quanta) spec.quanta = a.quanta;
  if (a.has_amplitude) spec.amplitude_m = a.amplitude;
  spec.n_measurements = a.n_measurements;
  const massqcrb::PhysicalResult r = massqcrb::physical_min_mass(spec);

  std::string text;
  if (a.out.format == "csv") {
    std::ostringstream s;
    s << "tau,alpha,x0_m,f,delta_m_over_m,delta_m_g,"
         "delta_m_electron_masses,n_measurements\n";
    s << sci(r.tau) << "," << sci(r.alpha) << "," << sci(r.x0_m) << ","
      << sci(r.f_value) << ","
      << (r.infinite ? "inf" : sci(r.delta_m_over_m)) << ","
      << (r.infinite ? "inf" : sci(r.delta_m_g)) << ","
      << (r.infinite ? "inf" : sci(r.delta_m_electron_masses)) << ","
      << a.n_measurements << "\n";
    text = s.str();
  } else {
    json j;
    j["tau"] = r.tau;
    j["alpha"] = r.alpha;
    j["x0_m"] = r.x0_m;
    j["f"] = r.f_value;
    j["delta_m_over_m"] = finite_or_inf(r.delta_m_over_m);
    j["delta_m_g"] = finite_or_inf(r.delta_m_g);
    j["delta_m_electron_masses"] = finite_or_inf(r.delta_m_electron_masses);
    j["n_measurements"] = a.n_measurements;
    text = j.dump(2) + "\n";
  }
  write_output(a.out.path, text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Quantum-limited mass sensitivity of a nano-mechanical oscillator"};
  app.require_subcommand(1);
  app.set_config("--config", "",
                 "JSON config file; command-line flags take precedence");
  app.config_formatter(std::make_shared<JsonConfig>());

  MinMassArgs min_mass;
  auto* cmd_min = app.add_subcommand(
      "min-mass", "Relative mass resolution bound for one probe state");
  cmd_min->add_option("--state", min_mass.state,
                      "fock:<n> | on:<L>[:<phi>] | cat1:<n> | cat2:<n> | "
                      "coherent:<alpha> | custom:<path>")
      ->capture_default_str();
  cmd_min->add_option("--tau", min_mass.tau, "Evolution phase omega*t")
      ->required();
  cmd_min->add_option("-N,--measurements", min_mass.n_measurements,
                      "Independent repetitions")
      ->capture_default_str();
  add_output_options(cmd_min, &min_mass.out);
  cmd_min->callback([&] { run_min_mass(min_mass); });

  SweepArgs sweep;
  auto* cmd_sweep = app.add_subcommand(
      "sweep-fig1",
      "Inverse mass bound vs tau for the reference probe families");
  cmd_sweep->add_option("--level", sweep.level, "Highest occupied level L")
      ->capture_default_str();
  cmd_sweep->add_option("--tau-max", sweep.tau_max, "Sweep end")
      ->capture_default_str();
  cmd_sweep->add_option("--steps", sweep.steps, "Number of intervals")
      ->capture_default_str();
  cmd_sweep->add_option("--restarts", sweep.restarts,
                        "Search restarts per grid point")
      ->capture_default_str();
  cmd_sweep->add_option("--seed", sweep.seed, "Search seed")
      ->capture_default_str();
  add_output_options(cmd_sweep, &sweep.out);
  cmd_sweep->callback([&] { run_sweep(sweep); });

  ThermalArgs thermal;
  auto* cmd_thermal = app.add_subcommand(
      "thermal", "Mass bound for thermal initial states");
  cmd_thermal->add_option("--z", thermal.z_list,
                          "Inverse reduced temperatures hbar*omega/(kB T)")
      ->capture_default_str();
  cmd_thermal->add_option("--tau-max", thermal.tau_max, "Sweep end")
      ->capture_default_str();
  cmd_thermal->add_option("--steps", thermal.steps, "Number of intervals")
      ->capture_default_str();
  cmd_thermal->add_option("-N,--measurements", thermal.n_measurements,
                          "Independent repetitions")
      ->capture_default_str();
  cmd_thermal->add_option("--tail-tol", thermal.tail_tol,
                          "Discarded thermal weight allowed by truncation")
      ->capture_default_str();
  cmd_thermal->add_flag("--inset", thermal.inset,
                        "Sweep z at fixed tau = pi/2 instead");
  cmd_thermal->add_option("--z-min", thermal.z_min, "Inset sweep start")
      ->capture_default_str();
  cmd_thermal->add_option("--z-max", thermal.z_max, "Inset sweep end")
      ->capture_default_str();
  add_output_options(cmd_thermal, &thermal.out);
  cmd_thermal->callback([&] { run_thermal(thermal); });

  OptimizeArgs optimize;
  auto* cmd_opt = app.add_subcommand(
      "optimize", "Best probe state below a level cutoff");
  cmd_opt->add_option("--level", optimize.level, "Highest allowed level L")
      ->required();
  cmd_opt->add_option("--tau", optimize.tau, "Evolution phase")->required();
  cmd_opt->add_option("--restarts", optimize.restarts, "Search restarts")
      ->capture_default_str();
  cmd_opt->add_option("--seed", optimize.seed, "Search seed")
      ->capture_default_str();
  cmd_opt->add_option("-N,--measurements", optimize.n_measurements,
                      "Independent repetitions")
      ->capture_default_str();
  cmd_opt->add_option("--save", optimize.save_path,
                      "Also write the state as a custom: JSON file");
  add_output_options(cmd_opt, &optimize.out);
  cmd_opt->callback([&] { run_optimize(optimize); });

  WignerArgs wigner;
  auto* cmd_wig = app.add_subcommand(
      "wigner", "Phase-space distribution of a probe state on a square grid");
  cmd_wig->add_option("--state", wigner.state, "State description")
      ->capture_default_str();
  cmd_wig->add_option("--range", wigner.range,
                      "Half-width of the square grid, in x0 units")
      ->capture_default_str();
  cmd_wig->add_option("--resolution", wigner.resolution,
                      "Grid points per axis")
      ->capture_default_str();
  cmd_wig->add_option("-o,--output", wigner.path, "Output CSV path")
      ->required();
  cmd_wig->callback([&] { run_wigner(wigner); });

  PhysicalArgs physical;
  auto* cmd_phys = app.add_subcommand(
      "physical", "Mass bound in laboratory units for a coherent drive");
  cmd_phys->add_option("--mass-g", physical.mass_g, "Oscillator mass, grams")
      ->required();
  cmd_phys->add_option("--omega", physical.omega,
                       "Angular frequency, rad/s")
      ->required();
  cmd_phys->add_option("--time", physical.time_s, "Evolution time, seconds")
      ->required();
  auto* opt_quanta = cmd_phys->add_option("--quanta", physical.quanta,
                                          "Mean excitation number <n>");
  auto* opt_amp = cmd_phys->add_option(
      "--amplitude", physical.amplitude, "Oscillation amplitude, meters");
  opt_quanta->excludes(opt_amp);
  cmd_phys->add_option("-N,--measurements", physical.n_measurements,
                       "Independent repetitions")
      ->capture_default_str();
  add_output_options(cmd_phys, &physical.out);
  cmd_phys->callback([&] {
    physical.has_quanta = opt_quanta->count() > 0;
    physical.has_amplitude = opt_amp->count() > 0;
    run_physical(physical);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
