#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cpt/bath.hpp"
#include "cpt/density_matrix.hpp"
#include "cpt/evolution.hpp"
#include "cpt/stationary.hpp"

namespace cpt::io {

/// 17 significant digits: enough to round-trip a double bit-for-bit.
inline std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void header(const std::vector<std::string>& columns) {
    write_row(columns);
  }

  void row(const std::vector<double>& values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) cells.push_back(fmt(v));
    write_row(cells);
  }

 private:
  void write_row(const std::vector<std::string>& cells) {
    for (std::size_t k = 0; k < cells.size(); ++k) {
      if (k) out_ << ',';
      out_ << cells[k];
    }
    out_ << '\n';
  }

  std::ostream& out_;
};

inline const char* sign_label(Sign s) { return s == Sign::plus ? "+" : "-"; }

/// Full susceptivity document: the sixteen entries, polarization sums, and
/// the emission-absorption ratio, each with quadrature error estimates.
inline nlohmann::json susceptivity_document(const SusceptivitySet& set) {
  nlohmann::json doc;
  doc["schema_version"] = 1;
  doc["bohr_frequency"] = set.bohr_frequency;
  doc["cutoff"] = set.cutoff;
  nlohmann::json entries = nlohmann::json::array();
  for (int i = 0; i < 2; ++i)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int s = 0; s < 2; ++s) {
          const Sign sign = static_cast<Sign>(s);
          const Complex v = set.value(i, a, b, sign);
          entries.push_back({{"polarization", i + 1},
                             {"alpha", a + 1},
                             {"beta", b + 1},
                             {"sign", sign_label(sign)},
                             {"re", v.real()},
                             {"im", v.imag()},
                             {"resonant", set.resonant[i][a][b][s]},
                             {"principal", set.principal[i][a][b][s]},
                             {"quad_error", set.quad_error[i][a][b][s]}});
        }
  doc["entries"] = entries;
  nlohmann::json sums = nlohmann::json::array();
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int s = 0; s < 2; ++s) {
        const Sign sign = static_cast<Sign>(s);
        const Complex v = set.polarization_sum(a, b, sign);
        sums.push_back({{"alpha", a + 1},
                        {"beta", b + 1},
                        {"sign", sign_label(sign)},
                        {"re", v.real()},
                        {"im", v.imag()},
                        {"quad_error", set.error_sum(a, b, sign)}});
      }
  doc["polarization_sums"] = sums;
  nlohmann::json ratio;
  ratio["defined"] = set.ratio_defined();
  if (set.ratio_defined()) {
    ratio["value"] = set.ratio();
    ratio["quad_error"] = set.ratio_error_estimate();
  }
  doc["einstein_ratio"] = ratio;
  return doc;
}

inline nlohmann::json matrix_document(const DensityMatrix3& rho) {
  const Vector9d x = rho.coords();
  nlohmann::json doc;
  doc["coords"] = std::vector<double>(x.data(), x.data() + 9);
  doc["trace"] = rho.trace_real();
  doc["min_eigenvalue"] = rho.min_eigenvalue();
  return doc;
}

inline nlohmann::json stationary_document(const StationaryResult& result) {
  nlohmann::json doc;
  doc["schema_version"] = 1;
  doc["kind"] = to_string(result.kind);
  doc["kernel_dim"] = result.kernel_dim;
  doc["residual"] = result.residual;
  if (result.state) doc["state"] = matrix_document(*result.state);
  if (result.family)
    doc["family"] = {{"R", result.family->R},
                     {"s_min", result.family->s_min()},
                     {"s_max", result.family->s_max()}};
  if (result.beats)
    doc["beats"] = {{"frequency", result.beats->frequency},
                    {"damping", result.beats->damping}};
  return doc;
}

inline void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  CsvWriter csv(out);
  csv.header({"t", "rho11", "rho22", "rho33", "re_rho12", "im_rho12",
              "re_rho13", "im_rho13", "re_rho23", "im_rho23", "s", "C", "A",
              "min_eig"});
  for (std::size_t j = 0; j < traj.size(); ++j) {
    const Vector9d& x = traj.states[j];
    csv.row({traj.times[j], x[0], x[1], x[2], x[3], x[4], x[5], x[6], x[7],
             x[8], traj.s(j), traj.C(j), traj.observable_A(j),
             traj.state(j).min_eigenvalue()});
  }
}

}  // namespace cpt::io
