// Command-line front end: susceptivities, trajectories, stationary analysis,
// family sweeps, beats, parameter sweeps, and the built-in selftest.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cpt/bath.hpp"
#include "cpt/config.hpp"
#include "cpt/density_matrix.hpp"
#include "cpt/evolution.hpp"
#include "cpt/generator.hpp"
#include "cpt/io.hpp"
#include "cpt/selftest.hpp"
#include "cpt/stationary.hpp"

namespace {

struct CommonOpts {
  std::string config_path;
  std::string output_path;
  std::uint64_t seed = 0;
  bool seed_given = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("-c,--config", opts.config_path, "JSON configuration file");
  cmd->add_option("-o,--output", opts.output_path,
                  "output path (default: stdout)");
  cmd->add_option("--seed", opts.seed, "seed for randomized suites")
      ->each([&opts](const std::string&) { opts.seed_given = true; });
}

cpt::RunConfig acquire_config(const CommonOpts& opts) {
  cpt::RunConfig cfg = opts.config_path.empty()
                           ? cpt::RunConfig{}
                           : cpt::load_config(opts.config_path);
  if (!opts.output_path.empty()) cfg.output.path = opts.output_path;
  if (opts.seed_given) cfg.seed = opts.seed;
  return cfg;
}

/// Stream for the primary artifact: the configured path or stdout.
class OutputTarget {
 public:
  explicit OutputTarget(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw cpt::UsageError("cannot open output path " + path);
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

/// Directory for secondary artifacts with default names; overridable through
/// the environment only.
std::string output_directory() {
  const char* env = std::getenv("CPT_OUTPUT_DIR");
  return env && *env ? std::string(env) : std::string(".");
}

double auto_dt(const cpt::Superoperator& L, double configured) {
  if (configured > 0.0) return configured;
  const double norm = L.norm_inf();
  return norm > 0.0 ? 1e-3 / norm : 1e-2;
}

double auto_horizon(const cpt::Superoperator& L, double configured) {
  if (configured > 0.0) return configured;
  const double gap = cpt::decompose_blocks(L).pop_spectral_gap;
  if (gap > 0.0) return 40.0 / gap;
  const double norm = L.norm_inf();
  return norm > 0.0 ? 10.0 / norm : 1.0;
}

int run_sus(const CommonOpts& opts) {
  const cpt::RunConfig cfg = acquire_config(opts);
  const cpt::SusceptivitySet set = cpt::build_susceptivity_set(cfg.bath);
  OutputTarget out(cfg.output.path);
  out.stream() << cpt::io::susceptivity_document(set).dump(2) << '\n';
  return 0;
}

int run_evolve(const CommonOpts& opts, const std::string& initial_flag,
               double horizon_flag, double dt_flag, int samples_flag) {
  cpt::RunConfig cfg = acquire_config(opts);
  if (!initial_flag.empty()) {
    if (initial_flag == "NC" || initial_flag == "C" ||
        initial_flag == "mixed" || initial_flag == "excited") {
      cfg.initial_state = cpt::InitialState{initial_flag, std::nullopt};
    } else {
      std::ifstream in(initial_flag);
      if (!in)
        throw cpt::SchemaError(initial_flag,
                               "not a preset name and not a readable file");
      cpt::json j;
      try {
        in >> j;
      } catch (const cpt::json::parse_error& e) {
        throw cpt::SchemaError(initial_flag,
                               std::string("invalid JSON: ") + e.what());
      }
      cfg.initial_state = cpt::detail::parse_initial(j, initial_flag);
    }
  }
  if (horizon_flag > 0.0) cfg.numerics.horizon = horizon_flag;
  if (dt_flag > 0.0) cfg.numerics.dt = dt_flag;
  if (samples_flag > 0) cfg.numerics.samples = samples_flag;

  const cpt::SusceptivitySet set = cpt::build_susceptivity_set(cfg.bath);
  const cpt::Superoperator L = cpt::build_generator(set);
  const cpt::DensityMatrix3 rho0 = cpt::resolve_initial_state(cfg.initial_state);
  const cpt::Trajectory traj =
      cpt::evolve_rk(L, rho0, auto_horizon(L, cfg.numerics.horizon),
                     auto_dt(L, cfg.numerics.dt), cfg.numerics.samples);
  OutputTarget out(cfg.output.path);
  cpt::io::write_trajectory_csv(out.stream(), traj);
  if (traj.positivity_warning)
    std::cerr << "warning: positivity dipped below -1e-8 along the "
                 "trajectory (min eigenvalue "
              << cpt::io::fmt(traj.min_eigenvalue_seen) << ")\n";
  return 0;
}

int run_stationary(const CommonOpts& opts) {
  const cpt::RunConfig cfg = acquire_config(opts);
  const cpt::SusceptivitySet set = cpt::build_susceptivity_set(cfg.bath);
  const cpt::Superoperator L = cpt::build_generator(set);
  const cpt::StationaryResult result = cpt::solve_nullspace(L);
  OutputTarget out(cfg.output.path);
  out.stream() << cpt::io::stationary_document(result).dump(2) << '\n';
  return 0;
}

int run_family(const CommonOpts& opts, double ratio_flag, int points) {
  const cpt::RunConfig cfg = acquire_config(opts);
  double R = ratio_flag;
  if (R < 0.0) {
    const cpt::SusceptivitySet set = cpt::build_susceptivity_set(cfg.bath);
    if (!set.ratio_defined())
      throw cpt::RegimeError(
          "emission-absorption ratio undefined for this bath; pass --R");
    R = set.ratio();
  }
  const cpt::Interval window = cpt::admissible_interval(R);

  std::vector<double> grid;
  if (cfg.sweep && cfg.sweep->param == cpt::SweepConfig::Param::s) {
    grid = cfg.sweep->grid;
  } else {
    if (points < 2) throw cpt::DomainError("family sweep needs >= 2 points");
    for (int k = 0; k < points; ++k)
      grid.push_back(window.lo +
                     (window.hi - window.lo) * k / double(points - 1));
  }

  OutputTarget out(cfg.output.path);
  cpt::io::CsvWriter csv(out.stream());
  csv.header({"s", "rho_e", "rho_g", "C", "min_eig", "admissible"});
  for (double s : grid) {
    const cpt::DensityMatrix3 member =
        cpt::detail::family_state_unchecked(R, s);
    csv.row({s, member.m(2, 2).real(), member.m(0, 0).real(),
             cpt::conserved_C(member), member.min_eigenvalue(),
             window.contains(s, 1e-12) ? 1.0 : 0.0});
  }
  return 0;
}

int run_beats(const CommonOpts& opts, const std::string& initial_flag) {
  cpt::RunConfig cfg = acquire_config(opts);
  if (!initial_flag.empty())
    cfg.initial_state = cpt::InitialState{initial_flag, std::nullopt};
  const cpt::SusceptivitySet set = cpt::build_susceptivity_set(cfg.bath);
  const cpt::DensityMatrix3 rho0 = cpt::resolve_initial_state(cfg.initial_state);
  const cpt::BeatsDescriptor desc = cpt::beats(set, rho0);
  if (desc.frequency == 0.0)
    throw cpt::RegimeError(
        "no oscillation: Im(g|g)+ vanishes for this bath (configure an "
        "occupation with off-resonant support)");

  const cpt::Superoperator L = cpt::build_generator(set);
  const double period = 2.0 * std::numbers::pi / std::abs(desc.frequency);
  const cpt::Trajectory traj = cpt::sample_exact(L, rho0, 10.0 * period, 400);
  const std::string traj_path = output_directory() + "/beats_trajectory.csv";
  std::ofstream traj_out(traj_path);
  if (!traj_out) throw cpt::UsageError("cannot open " + traj_path);
  cpt::io::write_trajectory_csv(traj_out, traj);

  cpt::json doc;
  doc["schema_version"] = 1;
  doc["frequency"] = desc.frequency;
  doc["damping"] = desc.damping;
  doc["initial_modulus"] = desc.initial_modulus;
  doc["trajectory_csv"] = traj_path;
  OutputTarget out(cfg.output.path);
  out.stream() << doc.dump(2) << '\n';
  return 0;
}

int run_sweep(const CommonOpts& opts) {
  const cpt::RunConfig cfg = acquire_config(opts);
  if (!cfg.sweep)
    throw cpt::SchemaError("/sweep", "sweep subcommand needs a sweep section");
  const cpt::SweepConfig& sweep = *cfg.sweep;

  if (sweep.param == cpt::SweepConfig::Param::s) {
    return run_family(opts, -1.0, 9);
  }

  OutputTarget out(cfg.output.path);
  cpt::io::CsvWriter csv(out.stream());
  csv.header({"value", "re_plus", "im_plus", "re_minus", "im_minus", "R_omega",
              "s_max", "rho_g_min"});
  for (double value : sweep.grid) {
    cpt::BathConfig bath = cfg.bath;
    switch (sweep.param) {
      case cpt::SweepConfig::Param::nbar:
        bath.occupation = cpt::OccupationSpectrum::flat(value);
        break;
      case cpt::SweepConfig::Param::beta:
        bath.occupation = cpt::OccupationSpectrum::planck(value);
        break;
      case cpt::SweepConfig::Param::omega:
        bath.bohr_frequency = value;
        bath.cutoff = 20.0 * bath.dispersion.resonant_radius(value);
        break;
      case cpt::SweepConfig::Param::s:
        break;
    }
    const cpt::SusceptivitySet set = cpt::build_susceptivity_set(bath);
    const double occupation_at_resonance = bath.occupation.value(
        bath.resonant_radius(), bath.dispersion);
    const double ratio =
        set.ratio_defined() ? set.ratio()
                            : std::numeric_limits<double>::quiet_NaN();
    const double s_max = set.ratio_defined()
                             ? cpt::admissible_interval(ratio).hi
                             : std::numeric_limits<double>::quiet_NaN();
    csv.row({value, set.re(0, 0, cpt::Sign::plus),
             set.im(0, 0, cpt::Sign::plus), set.re(0, 0, cpt::Sign::minus),
             set.im(0, 0, cpt::Sign::minus), ratio, s_max,
             cpt::min_ground_population(occupation_at_resonance)});
  }
  return 0;
}

int run_selftest(const CommonOpts& opts) {
  const cpt::RunConfig cfg = acquire_config(opts);
  const cpt::selftest::Report report = cpt::selftest::run_all(cfg.seed);
  OutputTarget out(cfg.output.path);
  out.stream() << report.to_text();
  return report.failed() == 0 ? 0 : 5;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Reduced dynamics of a three-level atom with a degenerate ground "
      "state: bath susceptivities, master-equation evolution, and the "
      "stationary family"};
  app.require_subcommand(1);

  CommonOpts sus_opts, evolve_opts, stationary_opts, family_opts, beats_opts,
      sweep_opts, selftest_opts;

  CLI::App* sus = app.add_subcommand(
      "sus", "emit the full susceptivity set as JSON");
  add_common(sus, sus_opts);

  CLI::App* evolve = app.add_subcommand(
      "evolve", "integrate the master equation, emit a trajectory CSV");
  add_common(evolve, evolve_opts);
  std::string evolve_initial;
  double evolve_horizon = 0.0, evolve_dt = 0.0;
  int evolve_samples = 0;
  evolve->add_option("--initial", evolve_initial,
                     "preset (NC|C|mixed|excited) or JSON file of 9 coords");
  evolve->add_option("--horizon", evolve_horizon, "integration horizon");
  evolve->add_option("--dt", evolve_dt, "integration step");
  evolve->add_option("--samples", evolve_samples, "samples to record");

  CLI::App* stationary = app.add_subcommand(
      "stationary", "classify the stationary set, emit JSON");
  add_common(stationary, stationary_opts);

  CLI::App* family = app.add_subcommand(
      "family", "sweep the stationary family, emit CSV");
  add_common(family, family_opts);
  double family_ratio = -1.0;
  int family_points = 9;
  family->add_option("--R", family_ratio,
                     "emission-absorption ratio (default: from the bath)");
  family->add_option("--points", family_points, "grid points");

  CLI::App* beats_cmd = app.add_subcommand(
      "beats", "characterize the oscillatory regime, emit JSON + CSV");
  add_common(beats_cmd, beats_opts);
  std::string beats_initial;
  beats_cmd->add_option("--initial", beats_initial,
                        "preset (NC|C|mixed|excited)");

  CLI::App* sweep = app.add_subcommand(
      "sweep", "sweep a bath parameter across a grid, emit CSV");
  add_common(sweep, sweep_opts);

  CLI::App* selftest = app.add_subcommand(
      "selftest", "run the full acceptance suite");
  add_common(selftest, selftest_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (sus->parsed()) return run_sus(sus_opts);
    if (evolve->parsed())
      return run_evolve(evolve_opts, evolve_initial, evolve_horizon, evolve_dt,
                        evolve_samples);
    if (stationary->parsed()) return run_stationary(stationary_opts);
    if (family->parsed())
      return run_family(family_opts, family_ratio, family_points);
    if (beats_cmd->parsed()) return run_beats(beats_opts, beats_initial);
    if (sweep->parsed()) return run_sweep(sweep_opts);
    if (selftest->parsed()) return run_selftest(selftest_opts);
  } catch (const cpt::SchemaError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const cpt::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const cpt::UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const cpt::RegimeError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  } catch (const cpt::NumericalError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 5;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 5;
  }
  return 0;
}
