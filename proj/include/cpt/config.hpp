#pragma once

#include <array>
#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cpt/bath.hpp"
#include "cpt/density_matrix.hpp"
#include "cpt/errors.hpp"

namespace cpt {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

struct NumericsConfig {
  double dt = 0.0;       // 0 = automatic: 1e-3 / ||L||_inf
  double horizon = 0.0;  // 0 = automatic: 40 / spectral gap
  int samples = 200;
  double quad_tol = 1e-9;
};

struct SweepConfig {
  enum class Param { s, nbar, beta, omega };
  Param param = Param::nbar;
  std::vector<double> grid;
};

struct OutputConfig {
  std::string path;  // empty = primary artifact to stdout
  enum class Format { csv, json_doc } format = Format::csv;
};

struct InitialState {
  // Either a named preset or nine explicit coordinates.
  std::string preset = "NC";
  std::optional<Vector9d> coords;
};

struct RunConfig {
  BathConfig bath = BathConfig::defaults();
  InitialState initial_state;
  NumericsConfig numerics;
  std::optional<SweepConfig> sweep;
  std::uint64_t seed = 1;
  OutputConfig output;
};

namespace detail {

inline void expect_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
}

inline void reject_unknown_keys(const json& j, const std::string& path,
                                std::initializer_list<const char*> allowed) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* key : allowed)
      if (it.key() == key) {
        known = true;
        break;
      }
    if (!known) throw SchemaError(path + "/" + it.key(), "unknown key");
  }
}

inline double require_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw SchemaError(path, "expected a number");
  return j.get<double>();
}

inline double number_or(const json& obj, const std::string& path,
                        const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  return require_number(obj.at(key), path + "/" + key);
}

inline RadialProfile parse_profile(const json& j, const std::string& path) {
  expect_object(j, path);
  if (!j.contains("kind")) throw SchemaError(path, "missing 'kind'");
  const std::string kind = j.at("kind").is_string()
                               ? j.at("kind").get<std::string>()
                               : throw SchemaError(path + "/kind",
                                                   "expected a string");
  if (kind == "gaussian") {
    reject_unknown_keys(j, path, {"kind", "amplitude", "center", "width"});
    return RadialProfile::gaussian(number_or(j, path, "amplitude", 1.0),
                                   number_or(j, path, "center", 1.0),
                                   number_or(j, path, "width", 1.0));
  }
  if (kind == "lorentzian") {
    reject_unknown_keys(j, path, {"kind", "amplitude", "center", "halfwidth"});
    return RadialProfile::lorentzian(number_or(j, path, "amplitude", 1.0),
                                     number_or(j, path, "center", 1.0),
                                     number_or(j, path, "halfwidth", 1.0));
  }
  if (kind == "shell_constant") {
    reject_unknown_keys(j, path, {"kind", "amplitude", "inner", "outer"});
    return RadialProfile::shell_constant(number_or(j, path, "amplitude", 1.0),
                                         number_or(j, path, "inner", 0.5),
                                         number_or(j, path, "outer", 1.5));
  }
  throw SchemaError(path + "/kind",
                    "unknown formfactor kind '" + kind +
                        "' (expected gaussian | lorentzian | shell_constant)");
}

inline OccupationSpectrum parse_occupation(const json& j,
                                           const std::string& path) {
  expect_object(j, path);
  if (!j.contains("kind")) throw SchemaError(path, "missing 'kind'");
  if (!j.at("kind").is_string())
    throw SchemaError(path + "/kind", "expected a string");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "fock") {
    reject_unknown_keys(j, path, {"kind"});
    return OccupationSpectrum::fock();
  }
  if (kind == "flat") {
    reject_unknown_keys(j, path, {"kind", "nbar"});
    return OccupationSpectrum::flat(number_or(j, path, "nbar", 1.0));
  }
  if (kind == "planck") {
    reject_unknown_keys(j, path, {"kind", "beta"});
    return OccupationSpectrum::planck(number_or(j, path, "beta", 1.0));
  }
  if (kind == "shifted_window") {
    reject_unknown_keys(j, path, {"kind", "nbar", "inner", "outer"});
    return OccupationSpectrum::shifted_window(
        number_or(j, path, "nbar", 1.0), number_or(j, path, "inner", 1.5),
        number_or(j, path, "outer", 2.5));
  }
  throw SchemaError(path + "/kind",
                    "unknown occupation kind '" + kind +
                        "' (expected fock | flat | planck | shifted_window)");
}

inline BathConfig parse_bath(const json& j, const std::string& path) {
  expect_object(j, path);
  reject_unknown_keys(j, path,
                      {"dispersion", "formfactors", "occupation",
                       "bohr_frequency", "cutoff"});
  BathConfig bath = BathConfig::defaults();
  if (j.contains("dispersion")) {
    const json& d = j.at("dispersion");
    expect_object(d, path + "/dispersion");
    reject_unknown_keys(d, path + "/dispersion", {"p"});
    bath.dispersion.exponent = number_or(d, path + "/dispersion", "p", 1.0);
    if (!(bath.dispersion.exponent > 0.0))
      throw DomainError("dispersion exponent p must be positive");
  }
  if (j.contains("formfactors")) {
    const json& f = j.at("formfactors");
    const std::string fpath = path + "/formfactors";
    if (f.is_object()) {
      // One profile broadcast to every (polarization, transition) slot.
      bath.set_equal_formfactors(parse_profile(f, fpath));
    } else if (f.is_array()) {
      if (f.size() != 2)
        throw SchemaError(fpath, "expected 2 polarization rows");
      for (int i = 0; i < 2; ++i) {
        const json& row = f.at(i);
        const std::string rpath = fpath + "/" + std::to_string(i);
        if (!row.is_array() || row.size() != 2)
          throw SchemaError(rpath, "expected 2 transition entries");
        for (int alpha = 0; alpha < 2; ++alpha)
          bath.set_formfactor(
              i, alpha,
              parse_profile(row.at(alpha),
                            rpath + "/" + std::to_string(alpha)));
      }
    } else {
      throw SchemaError(fpath, "expected an object or a 2x2 array");
    }
  }
  if (j.contains("occupation"))
    bath.occupation = parse_occupation(j.at("occupation"), path + "/occupation");
  bath.bohr_frequency = number_or(j, path, "bohr_frequency", 1.0);
  if (j.contains("cutoff"))
    bath.cutoff = require_number(j.at("cutoff"), path + "/cutoff");
  else
    bath.cutoff = 20.0 * bath.dispersion.resonant_radius(bath.bohr_frequency);
  bath.validate();
  return bath;
}

inline InitialState parse_initial(const json& j, const std::string& path) {
  InitialState init;
  if (j.is_string()) {
    const std::string name = j.get<std::string>();
    if (name != "NC" && name != "C" && name != "mixed" && name != "excited")
      throw SchemaError(path, "unknown preset '" + name +
                                  "' (expected NC | C | mixed | excited)");
    init.preset = name;
    return init;
  }
  if (j.is_array()) {
    if (j.size() != 9) throw SchemaError(path, "expected 9 coordinates");
    Vector9d x;
    for (int k = 0; k < 9; ++k)
      x[k] = require_number(j.at(k), path + "/" + std::to_string(k));
    init.coords = x;
    return init;
  }
  throw SchemaError(path, "expected a preset name or 9 coordinates");
}

}  // namespace detail

inline DensityMatrix3 resolve_initial_state(const InitialState& init) {
  if (init.coords) {
    const DensityMatrix3 rho = DensityMatrix3::from_coords(*init.coords);
    if (std::abs(rho.trace_real() - 1.0) > 1e-9)
      throw DomainError("initial state coordinates must have unit trace");
    if (rho.min_eigenvalue() < -1e-8)
      throw DomainError("initial state is not positive semidefinite");
    return rho;
  }
  if (init.preset == "NC") return presets::non_coupled();
  if (init.preset == "C") return presets::coupled();
  if (init.preset == "mixed") return presets::mixed();
  if (init.preset == "excited") return presets::excited();
  throw DomainError("unknown initial-state preset '" + init.preset + "'");
}

inline RunConfig parse_config(const json& j) {
  detail::expect_object(j, "");
  detail::reject_unknown_keys(j, "",
                              {"schema_version", "bath", "initial_state",
                               "numerics", "sweep", "seed", "output"});
  if (j.contains("schema_version")) {
    const json& v = j.at("schema_version");
    if (!v.is_number_integer() || v.get<int>() != kSchemaVersion)
      throw SchemaError("/schema_version", "unsupported schema version");
  }

  RunConfig cfg;
  if (j.contains("bath")) cfg.bath = detail::parse_bath(j.at("bath"), "/bath");
  if (j.contains("initial_state"))
    cfg.initial_state =
        detail::parse_initial(j.at("initial_state"), "/initial_state");

  if (j.contains("numerics")) {
    const json& n = j.at("numerics");
    detail::expect_object(n, "/numerics");
    detail::reject_unknown_keys(n, "/numerics",
                                {"dt", "horizon", "samples", "quad_tol"});
    cfg.numerics.dt = detail::number_or(n, "/numerics", "dt", 0.0);
    cfg.numerics.horizon = detail::number_or(n, "/numerics", "horizon", 0.0);
    if (n.contains("samples")) {
      if (!n.at("samples").is_number_integer())
        throw SchemaError("/numerics/samples", "expected an integer");
      cfg.numerics.samples = n.at("samples").get<int>();
    }
    cfg.numerics.quad_tol = detail::number_or(n, "/numerics", "quad_tol", 1e-9);
    if (cfg.numerics.dt < 0.0) throw DomainError("dt must be non-negative");
    if (cfg.numerics.horizon < 0.0)
      throw DomainError("horizon must be non-negative");
    if (cfg.numerics.samples < 1) throw DomainError("samples must be >= 1");
    if (!(cfg.numerics.quad_tol > 0.0))
      throw DomainError("quadrature tolerance must be positive");
    cfg.bath.quad_tol = cfg.numerics.quad_tol;
  }

  if (j.contains("sweep")) {
    const json& s = j.at("sweep");
    detail::expect_object(s, "/sweep");
    detail::reject_unknown_keys(s, "/sweep", {"parameter", "grid"});
    if (!s.contains("parameter") || !s.at("parameter").is_string())
      throw SchemaError("/sweep/parameter", "expected a string");
    const std::string p = s.at("parameter").get<std::string>();
    SweepConfig sweep;
    if (p == "s")
      sweep.param = SweepConfig::Param::s;
    else if (p == "nbar")
      sweep.param = SweepConfig::Param::nbar;
    else if (p == "beta")
      sweep.param = SweepConfig::Param::beta;
    else if (p == "omega")
      sweep.param = SweepConfig::Param::omega;
    else
      throw SchemaError("/sweep/parameter",
                        "unknown parameter '" + p +
                            "' (expected s | nbar | beta | omega)");
    if (!s.contains("grid") || !s.at("grid").is_array() ||
        s.at("grid").empty())
      throw SchemaError("/sweep/grid", "expected a non-empty array");
    for (std::size_t k = 0; k < s.at("grid").size(); ++k)
      sweep.grid.push_back(detail::require_number(
          s.at("grid").at(k), "/sweep/grid/" + std::to_string(k)));
    cfg.sweep = sweep;
  }

  if (j.contains("seed")) {
    const json& v = j.at("seed");
    if (!v.is_number_unsigned() && !v.is_number_integer())
      throw SchemaError("/seed", "expected a non-negative integer");
    if (v.is_number_integer() && v.get<std::int64_t>() < 0)
      throw SchemaError("/seed", "expected a non-negative integer");
    cfg.seed = v.get<std::uint64_t>();
  }

  if (j.contains("output")) {
    const json& o = j.at("output");
    detail::expect_object(o, "/output");
    detail::reject_unknown_keys(o, "/output", {"path", "format"});
    if (o.contains("path")) {
      if (!o.at("path").is_string())
        throw SchemaError("/output/path", "expected a string");
      cfg.output.path = o.at("path").get<std::string>();
    }
    if (o.contains("format")) {
      if (!o.at("format").is_string())
        throw SchemaError("/output/format", "expected a string");
      const std::string f = o.at("format").get<std::string>();
      if (f == "csv")
        cfg.output.format = OutputConfig::Format::csv;
      else if (f == "json")
        cfg.output.format = OutputConfig::Format::json_doc;
      else
        throw SchemaError("/output/format", "expected csv | json");
    }
  }
  return cfg;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError(path, "cannot open config file");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw SchemaError(path, std::string("invalid JSON: ") + e.what());
  }
  return parse_config(j);
}

}  // namespace cpt
