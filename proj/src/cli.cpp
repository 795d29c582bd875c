#include "nvforge/cli.hpp"

#include "nvforge/error_budget.hpp"
#include "nvforge/gates.hpp"
#include "nvforge/grape.hpp"
#include "nvforge/serialization.hpp"
#include "nvforge/strain.hpp"
#include "nvforge/tomography.hpp"
#include "nvforge/zeeman.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <set>

namespace nvforge {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Typed access to one JSON object that remembers which keys were read, so
// finish() can reject anything unexpected.
class ConfigReader {
 public:
  ConfigReader(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw ConfigError(where_ + ": expected a JSON object");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key);
  }

  double number(const std::string& key, std::optional<double> fallback = std::nullopt) {
    if (!has(key)) return require(fallback, key);
    const json& v = j_.at(key);
    if (!v.is_number()) throw ConfigError(path(key) + ": expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(path(key) + ": must be finite");
    return x;
  }

  long integer(const std::string& key, std::optional<long> fallback = std::nullopt) {
    if (!has(key)) return require(fallback, key);
    const json& v = j_.at(key);
    if (!v.is_number_integer()) throw ConfigError(path(key) + ": expected an integer");
    return v.get<long>();
  }

  std::string string(const std::string& key, std::optional<std::string> fallback = std::nullopt) {
    if (!has(key)) return require(fallback, key);
    const json& v = j_.at(key);
    if (!v.is_string()) throw ConfigError(path(key) + ": expected a string");
    return v.get<std::string>();
  }

  const json& raw(const std::string& key) {
    if (!has(key)) throw ConfigError(path(key) + ": missing");
    return j_.at(key);
  }

  std::string path(const std::string& key) const { return where_ + "." + key; }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.count(key)) throw ConfigError(path(key) + ": unknown key");
    }
  }

 private:
  template <class T>
  T require(const std::optional<T>& fallback, const std::string& key) const {
    if (!fallback) throw ConfigError(path(key) + ": missing");
    return *fallback;
  }

  const json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

ConfigReader top_level(const json& config) {
  ConfigReader r(config, "config");
  if (r.integer("schema_version") != kSchemaVersion) {
    throw ConfigError("config.schema_version: unsupported (expected " +
                      std::to_string(kSchemaVersion) + ")");
  }
  return r;
}

void positive(double v, const std::string& what) {
  if (!(v > 0)) throw ConfigError(what + ": must be positive");
}

void non_negative(double v, const std::string& what) {
  if (!(v >= 0)) throw ConfigError(what + ": must be non-negative");
}

// Module-level validation failures surface as config errors.
template <class F>
auto checked(F&& f) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  } catch (const std::out_of_range& e) {
    throw ConfigError(e.what());
  }
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  return os;
}

json finish_metadata(const std::string& command, Seed seed, const fs::path& out,
                     std::vector<std::string> files, json results,
                     const std::string& status = "ok") {
  files.push_back("metadata.json");
  std::sort(files.begin(), files.end());
  json meta = {{"command", command},
               {"schema_version", kSchemaVersion},
               {"seed", seed ? json(*seed) : json(nullptr)},
               {"status", status},
               {"files", files},
               {"results", std::move(results)}};
  write_json(out / "metadata.json", meta);
  return meta;
}

ZeemanParameters zeeman_parameters(ConfigReader& r) {
  ZeemanParameters p;
  p.zero_field_splitting_mhz = r.number("zero_field_splitting_mhz", p.zero_field_splitting_mhz);
  p.gyromagnetic_mhz_per_gauss =
      r.number("gyromagnetic_mhz_per_gauss", p.gyromagnetic_mhz_per_gauss);
  checked([&] {
    p.validate();
    return 0;
  });
  return p;
}

}  // namespace

json load_config(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read config " + path.string());
  try {
    return json::parse(is);
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
}

json cmd_zeeman_scan(const json& config, const fs::path& out, Seed seed) {
  ConfigReader r = top_level(config);
  const double b_min = r.number("b_min_gauss", 0.0);
  const double b_max = r.number("b_max_gauss", 1000.0);
  const double step = r.number("step_gauss", 1.0);
  const double phi = r.number("phi_deg", 0.0);
  const double guard = r.number("guard_mhz", 10.0);
  const double window_step = r.number("window_step_gauss", step);
  const double linewidth = r.number("linewidth_mhz", 0.2);
  const ZeemanParameters p = zeeman_parameters(r);
  r.finish();
  non_negative(b_min, "config.b_min_gauss");
  if (!(b_max >= b_min)) throw ConfigError("config.b_max_gauss: range is inverted");
  positive(step, "config.step_gauss");
  positive(guard, "config.guard_mhz");
  positive(window_step, "config.window_step_gauss");
  positive(linewidth, "config.linewidth_mhz");

  const auto samples = checked([&] { return scan_transitions(b_min, b_max, step, phi, p); });
  const auto windows =
      checked([&] { return cross_relaxation_windows(b_min, b_max, window_step, guard, p); });

  fs::create_directories(out);
  {
    auto os = open_out(out / "transitions.csv");
    write_transitions_csv(os, samples);
  }
  json jw = json::array();
  for (const FieldWindow& w : windows) {
    json e = to_json(w);
    e["addressable_count"] = addressable_count(w.span_mhz, linewidth);
    jw.push_back(e);
  }
  write_json(out / "windows.json", {{"guard_mhz", guard},
                                    {"linewidth_mhz", linewidth},
                                    {"operating_transition", to_string(WindowOptions{}.operating_transition)},
                                    {"windows", jw}});
  return finish_metadata("zeeman-scan", seed, out, {"transitions.csv", "windows.json"},
                         {{"n_samples", samples.size()}, {"n_windows", windows.size()}});
}

json cmd_strain_scan(const json& config, const fs::path& out, Seed seed) {
  ConfigReader r = top_level(config);
  const double s_min = r.number("strain_min", 0.0);
  const double s_max = r.number("strain_max", 1e-5);
  long n_points = r.integer("n_points", 101);
  const double poisson = r.number("poisson", 0.11);
  const double linewidth = r.number("linewidth_mhz", 13.0);
  std::optional<json> cantilever;
  if (r.has("cantilever")) cantilever = r.raw("cantilever");
  r.finish();
  non_negative(s_min, "config.strain_min");
  if (!(s_max >= s_min)) throw ConfigError("config.strain_max: range is inverted");
  if (n_points < 1) throw ConfigError("config.n_points: must be at least 1");
  if (s_max == s_min) n_points = 1;
  positive(linewidth, "config.linewidth_mhz");
  if (!(poisson > 0 && poisson < 0.5)) throw ConfigError("config.poisson: must be in (0, 0.5)");

  const StrainCouplings couplings;
  fs::create_directories(out);
  std::vector<std::string> files = {"strain_scan.csv", "strain_summary.json"};
  {
    auto os = open_out(out / "strain_scan.csv");
    CsvWriter w(os, {"strain", "orientation", "branch", "detuning_ghz", "frequency_ghz"});
    for (long k = 0; k < n_points; ++k) {
      const double s = n_points == 1 || k == n_points - 1
                           ? (n_points == 1 ? s_min : s_max)
                           : s_min + (s_max - s_min) * static_cast<double>(k) / (n_points - 1);
      for (Orientation o : kAllOrientations) {
        const OpticalDetunings d = detunings_for_strain(s, o, poisson, couplings);
        for (const auto& [branch, detuning] : {std::pair{"Ex", d.ex_ghz}, std::pair{"Ey", d.ey_ghz}}) {
          w.row({format_number(s), to_string(o), branch, format_number(detuning),
                 format_number(absolute_frequency_ghz(detuning, couplings))});
        }
      }
    }
  }

  json per_orientation = json::array();
  for (Orientation o : kAllOrientations) {
    const OpticalDetunings lo = detunings_for_strain(s_min, o, poisson, couplings);
    const OpticalDetunings hi = detunings_for_strain(s_max, o, poisson, couplings);
    per_orientation.push_back(
        {{"orientation", to_string(o)},
         {"ex_shift_ghz", hi.ex_ghz - lo.ex_ghz},
         {"ey_shift_ghz", hi.ey_ghz - lo.ey_ghz},
         {"addressable_count",
          static_cast<long>(std::floor(std::abs(hi.ex_ghz - lo.ex_ghz) * 1e3 / linewidth *
                                       (1.0 + 1e-12)))}});
  }
  json summary = {{"strain_min", s_min},
                  {"strain_max", s_max},
                  {"linewidth_mhz", linewidth},
                  {"orientations", per_orientation}};

  if (cantilever) {
    ConfigReader c(*cantilever, "config.cantilever");
    CantileverGeometry g;
    g.length_um = c.number("length_um", g.length_um);
    g.width_um = c.number("width_um", g.width_um);
    g.height_um = c.number("height_um", g.height_um);
    g.youngs_modulus_gpa = c.number("youngs_modulus_gpa", g.youngs_modulus_gpa);
    g.poisson = poisson;
    const bool by_force = c.has("force_n");
    const bool by_peak = c.has("peak_strain");
    if (by_force == by_peak) {
      throw ConfigError("config.cantilever: give exactly one of force_n, peak_strain");
    }
    const long n_z = c.integer("n_z", 51);
    const long n_x = c.integer("n_x", 11);
    if (by_force) {
      g.force_n = c.number("force_n");
    } else {
      const double target = c.number("peak_strain");
      g.force_n = checked([&] { return force_for_peak_strain(g, target); });
    }
    c.finish();
    if (n_z < 2 || n_x < 2) throw ConfigError("config.cantilever: n_z and n_x must be >= 2");
    checked([&] {
      g.validate();
      return 0;
    });

    auto os = open_out(out / "cantilever_profile.csv");
    CsvWriter w(os, {"z_um", "x_um", "strain_zz", "ex_detuning_ghz", "ey_detuning_ghz"});
    for (long iz = 0; iz < n_z; ++iz) {
      const double z = iz == n_z - 1 ? g.length_um : g.length_um * iz / (n_z - 1);
      for (long ix = 0; ix < n_x; ++ix) {
        const double x =
            ix == n_x - 1 ? g.height_um / 2 : -g.height_um / 2 + g.height_um * ix / (n_x - 1);
        const StrainTensor e = cantilever_strain(g, z, x);
        const OpticalDetunings d = optical_transitions(
            coupling_shifts(transform_to_nv_frame(e, Orientation::kM1M1M1), couplings), couplings);
        w.row({format_number(z), format_number(x), format_number(e.components(2, 2)),
               format_number(d.ex_ghz), format_number(d.ey_ghz)});
      }
    }
    summary["cantilever"] = {{"force_n", g.force_n}, {"peak_strain", peak_strain(g)}};
    files.push_back("cantilever_profile.csv");
  }
  write_json(out / "strain_summary.json", summary);
  return finish_metadata("strain-scan", seed, out, files,
                         {{"n_points", n_points}, {"n_orientations", kAllOrientations.size()}});
}

namespace {

struct Construction {
  std::string name;
  GateSequence sequence;
  ComplexMatrix ideal;
};

std::vector<Construction> all_constructions() {
  return {
      {"hadamard", hadamard_sequence(0, 1), ideal_hadamard()},
      {"cz", cz_sequence(0, 1), ideal_cz(0, 1)},
      {"cnot_from_cz", cnot_from_cz(0, 1), ideal_cnot(0, 1)},
      {"cnot_from_sqrtswap", cnot_from_sqrtswap(0, 1), ideal_cnot(0, 1)},
      {"toffoli", toffoli_sequence(CnotConstruction::kViaCz), ideal_toffoli()},
      {"toffoli_sqrtswap", toffoli_sequence(CnotConstruction::kViaSqrtSwap), ideal_toffoli()},
  };
}

}  // namespace

json cmd_gates(const json& config, const fs::path& out, Seed seed) {
  ConfigReader r = top_level(config);
  const double nu = r.number("nu_dip_khz", 100.0);
  const double rabi = r.number("rabi_mhz", 10.0);
  std::vector<std::string> wanted;
  if (r.has("constructions")) {
    const json& list = r.raw("constructions");
    if (!list.is_array()) throw ConfigError("config.constructions: expected an array of names");
    for (const json& n : list) {
      if (!n.is_string()) throw ConfigError("config.constructions: expected strings");
      wanted.push_back(n.get<std::string>());
    }
  }
  r.finish();
  positive(nu, "config.nu_dip_khz");
  positive(rabi, "config.rabi_mhz");

  std::vector<Construction> chosen;
  const std::vector<Construction> all = all_constructions();
  if (wanted.empty()) {
    chosen = all;
  } else {
    for (const std::string& w : wanted) {
      auto it = std::find_if(all.begin(), all.end(), [&](const Construction& c) { return c.name == w; });
      if (it == all.end()) throw ConfigError("config.constructions: unknown construction " + w);
      chosen.push_back(*it);
    }
  }

  fs::create_directories(out / "unitaries");
  std::vector<std::string> files = {"gates.json", "sequences.json"};
  json reports = json::array();
  json sequences = json::object();
  double min_fidelity = 1.0;
  for (const Construction& c : chosen) {
    const ComplexMatrix u = compile(c.sequence);
    const Complex overlap = (c.ideal.adjoint() * u).trace();
    const Complex phase = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : Complex(1.0);
    const double f = fidelity(u, c.ideal);
    min_fidelity = std::min(min_fidelity, f);
    reports.push_back({{"name", c.name},
                       {"n_qubits", c.sequence.n_qubits},
                       {"fidelity_vs_ideal", f},
                       {"max_deviation_up_to_phase", max_abs(ComplexMatrix(u / phase - c.ideal))},
                       {"max_deviation", max_abs(ComplexMatrix(u - c.ideal))},
                       {"gate_census", to_json(census(c.sequence))},
                       {"duration_us", total_gate_time(c.sequence, nu, rabi)}});
    sequences[c.name] = to_json(c.sequence);
    auto os = open_out(out / "unitaries" / (c.name + ".csv"));
    write_unitary_csv(os, u);
    files.push_back("unitaries/" + c.name + ".csv");
  }
  write_json(out / "gates.json", {{"nu_dip_khz", nu}, {"rabi_mhz", rabi}, {"gates", reports}});
  write_json(out / "sequences.json", sequences);
  return finish_metadata("gates", seed, out, files,
                         {{"n_constructions", chosen.size()}, {"min_fidelity", min_fidelity}});
}

json cmd_error_budget(const json& config, const fs::path& out, Seed seed) {
  ConfigReader r = top_level(config);
  ErrorParams p = reference_parameters();
  p.t_us = r.number("t_us", p.t_us);
  p.t1_ms = r.number("t1_ms", p.t1_ms);
  p.t2_ms = r.number("t2_ms", p.t2_ms);
  p.delta1_khz = r.number("delta1_khz", p.delta1_khz);
  p.omega_mw_khz = r.number("omega_mw_khz", p.omega_mw_khz);
  p.omega_opt_mhz = r.number("omega_opt_mhz", p.omega_opt_mhz);
  p.delta_mag_mhz = r.number("delta_mag_mhz", p.delta_mag_mhz);
  p.delta_str_mhz = r.number("delta_str_mhz", p.delta_str_mhz);
  p.nu_dip_khz = r.number("nu_dip_khz", p.nu_dip_khz);
  std::optional<json> sweep;
  if (r.has("sweep")) sweep = r.raw("sweep");
  r.finish();

  const ErrorBudget b = checked([&] { return error_probability(p); });
  fs::create_directories(out);
  std::vector<std::string> files = {"budget.json"};
  write_json(out / "budget.json", {{"inputs", to_json(p)}, {"budget", to_json(b)}});

  if (sweep) {
    ConfigReader s(*sweep, "config.sweep");
    const double lo = s.number("omega_min_khz");
    const double hi = s.number("omega_max_khz");
    const long n = s.integer("n_points", 50);
    s.finish();
    if (n < 2 || n > 1000000) throw ConfigError("config.sweep.n_points: must be in [2, 1e6]");
    const auto points = checked([&] { return sweep_omega_mw(p, lo, hi, static_cast<int>(n)); });
    auto os = open_out(out / "omega_sweep.csv");
    CsvWriter w(os, {"omega_mw_khz", "p_t1", "p_t2", "p_mw", "p_mag", "p_str", "p_dip", "total"});
    for (const SweepPoint& pt : points) {
      const ErrorBudget& e = pt.budget;
      w.row({format_number(pt.omega_mw_khz), format_number(e.p_t1), format_number(e.p_t2),
             format_number(e.p_mw), format_number(e.p_mag), format_number(e.p_str),
             format_number(e.p_dip), format_number(e.total)});
    }
    files.push_back("omega_sweep.csv");
  }
  return finish_metadata("error-budget", seed, out, files,
                         {{"total", b.total}, {"n_discrepancies", b.discrepancies.size()}});
}

namespace {

ComplexMatrix named_target(const std::string& name, int n_qubits) {
  const int dim = 1 << n_qubits;
  if (name == "identity") return ComplexMatrix::Identity(dim, dim);
  if (name == "cnot" && n_qubits >= 2) return ideal_cnot(0, 1, n_qubits);
  if (name == "cz" && n_qubits >= 2) return ideal_cz(0, 1, n_qubits);
  if (name == "swap" && n_qubits >= 2) return ideal_swap(0, 1, n_qubits);
  if (name == "toffoli" && n_qubits == 3) return ideal_toffoli();
  throw ConfigError("config.target: unknown target '" + name + "' for " +
                    std::to_string(n_qubits) + " qubits");
}

std::vector<Coupling> parse_couplings(const json& j, int n_qubits) {
  std::vector<Coupling> out;
  if (j.is_number()) {
    const double nu = j.get<double>();
    for (int a = 0; a < n_qubits; ++a) {
      for (int b = a + 1; b < n_qubits; ++b) out.push_back({a, b, nu});
    }
    return out;
  }
  if (!j.is_array()) {
    throw ConfigError("config.couplings_khz: expected a number or an array of couplings");
  }
  for (const json& e : j) {
    ConfigReader c(e, "config.couplings_khz[]");
    const json& q = c.raw("qubits");
    if (!q.is_array() || q.size() != 2 || !q[0].is_number_integer() || !q[1].is_number_integer()) {
      throw ConfigError("config.couplings_khz[].qubits: expected two qubit indices");
    }
    out.push_back({q[0].get<int>(), q[1].get<int>(), c.number("nu_khz")});
    c.finish();
  }
  return out;
}

}  // namespace

json cmd_grape(const json& config, const fs::path& out, Seed seed) {
  ConfigReader r = top_level(config);
  const long n_qubits = r.integer("n_qubits");
  if (n_qubits < 1 || n_qubits > 4) throw ConfigError("config.n_qubits: must be 1 to 4");
  const std::vector<Coupling> couplings =
      r.has("couplings_khz") ? parse_couplings(r.raw("couplings_khz"), static_cast<int>(n_qubits))
                             : std::vector<Coupling>{};
  const long n_slices = r.integer("n_slices");
  const double slice_us = r.number("slice_us");
  const json& target_json = r.raw("target");
  const double bound = r.number("amplitude_bound_mhz", 10.0);
  const std::uint64_t config_seed = static_cast<std::uint64_t>(r.integer("seed", 0));
  OptimizeOptions opts;
  opts.max_iters = static_cast<int>(r.integer("max_iters", opts.max_iters));
  opts.target_fidelity = r.number("target_fidelity", opts.target_fidelity);
  opts.step = r.number("step", opts.step);
  const std::string step_rule = r.string("step_rule", "backtracking");
  const std::string direction = r.string("direction", "lbfgs");
  const std::string convention = r.string("zz_convention", "quarter");
  const std::string init = r.string("init", "random");
  const double init_scale = r.number("init_scale_mhz", 0.1);
  r.finish();

  if (n_slices < 1) throw ConfigError("config.n_slices: must be positive");
  positive(slice_us, "config.slice_us");
  positive(bound, "config.amplitude_bound_mhz");
  if (opts.max_iters < 0) throw ConfigError("config.max_iters: must be non-negative");
  if (!(opts.target_fidelity > 0 && opts.target_fidelity <= 1)) {
    throw ConfigError("config.target_fidelity: must be in (0, 1]");
  }
  positive(opts.step, "config.step");
  non_negative(init_scale, "config.init_scale_mhz");
  if (init_scale > bound) throw ConfigError("config.init_scale_mhz: exceeds the amplitude bound");

  if (step_rule == "backtracking") {
    opts.step_rule = StepRule::kBacktracking;
  } else if (step_rule == "fixed") {
    opts.step_rule = StepRule::kFixed;
  } else {
    throw ConfigError("config.step_rule: expected 'backtracking' or 'fixed'");
  }
  if (direction == "lbfgs") {
    opts.direction = Direction::kLbfgs;
  } else if (direction == "steepest") {
    opts.direction = Direction::kSteepest;
  } else {
    throw ConfigError("config.direction: expected 'lbfgs' or 'steepest'");
  }
  ZZConvention zz;
  if (convention == "quarter") {
    zz = ZZConvention::kQuarter;
  } else if (convention == "full") {
    zz = ZZConvention::kFull;
  } else {
    throw ConfigError("config.zz_convention: expected 'quarter' or 'full'");
  }
  if (init != "random" && init != "zero") {
    throw ConfigError("config.init: expected 'random' or 'zero'");
  }

  const int n = static_cast<int>(n_qubits);
  ComplexMatrix target;
  std::string target_name = "matrix";
  if (target_json.is_string()) {
    target_name = target_json.get<std::string>();
    target = named_target(target_name, n);
  } else {
    ConfigReader t(target_json, "config.target");
    target = checked([&] { return matrix_from_json(t.raw("matrix")); });
    t.finish();
  }

  const std::uint64_t used_seed = seed.value_or(config_seed);
  opts.seed = used_seed;
  const ControlProblem prob = checked([&] {
    return make_problem(n, couplings, static_cast<int>(n_slices), slice_us, target, bound, zz);
  });
  const PulseSequence start =
      init == "zero" ? zero_pulses(prob) : random_pulses(prob, used_seed, init_scale);
  const OptimizeResult res = optimize(prob, start, opts);

  const ComplexMatrix u = propagate(prob, res.pulses);
  const double f = fidelity(u, target);
  const ProcessMatrix chi_opt = chi_matrix(u, n);
  const ProcessMatrix chi_ideal = chi_matrix(target, n);

  fs::create_directories(out);
  {
    auto os = open_out(out / "pulses.csv");
    write_pulses_csv(os, res.pulses, prob.control_names);
  }
  {
    auto os = open_out(out / "fidelity_trace.csv");
    write_fidelity_trace_csv(os, res.fidelity_trace);
  }
  {
    auto os = open_out(out / "unitary_optimized.csv");
    write_unitary_csv(os, u);
  }
  write_json(out / "chi_optimized.json", to_json(chi_opt));
  write_json(out / "chi_ideal.json", to_json(chi_ideal));

  json results = {{"target", target_name},
                  {"n_qubits", n},
                  {"n_slices", n_slices},
                  {"slice_us", slice_us},
                  {"final_fidelity", f},
                  {"target_fidelity", opts.target_fidelity},
                  {"iterations", res.iterations},
                  {"converged", res.converged},
                  {"optimizer_status", res.status},
                  {"chi_max_deviation", max_abs(ComplexMatrix(chi_opt.chi - chi_ideal.chi))},
                  {"chi_deviation_bound", chi_deviation_bound(f, prob.dim())}};
  return finish_metadata(
      "grape", used_seed, out,
      {"pulses.csv", "fidelity_trace.csv", "unitary_optimized.csv", "chi_optimized.json",
       "chi_ideal.json"},
      results, res.converged ? "ok" : "not_converged");
}

json run_command(const std::string& name, const json& config, const fs::path& out, Seed seed) {
  if (name == "zeeman-scan") return cmd_zeeman_scan(config, out, seed);
  if (name == "strain-scan") return cmd_strain_scan(config, out, seed);
  if (name == "gates") return cmd_gates(config, out, seed);
  if (name == "error-budget") return cmd_error_budget(config, out, seed);
  if (name == "grape") return cmd_grape(config, out, seed);
  throw ConfigError("unknown subcommand " + name);
}

int run_cli(int argc, char** argv) {
  CLI::App app{"nvforge: NV-centre addressing, gate compilation and pulse optimisation"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;

  const std::pair<const char*, const char*> commands[] = {
      {"zeeman-scan", "transition frequencies and addressing windows versus field"},
      {"strain-scan", "strain-induced shifts of the optical transitions"},
      {"gates", "compile analytic gate sequences and check them"},
      {"error-budget", "per-gate error contributions"},
      {"grape", "optimise control pulses for a target unitary"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "JSON config file")->required();
    sub->add_option("--out", out_dir, "output directory")->required();
    sub->add_option("--seed", seed, "random seed (overrides the config)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    const json meta = run_command(command, load_config(config_path), out_dir, seed);
    std::cout << "nvforge " << command << ": " << meta.at("status").get<std::string>() << ", wrote "
              << out_dir << "\n";
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "nvforge " << command << ": invalid config: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "nvforge " << command << ": " << e.what() << "\n";
    return 1;
  }
}

}  // namespace nvforge
