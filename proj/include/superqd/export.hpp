#pragma once

#include "superqd/harness.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace superqd {

// File could not be written; the message names the path.
class ExportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ExportFormat { csv };
ExportFormat parse_export_format(std::string_view s);

// One line per sweep point. Parameter columns carry units in their names
// (g_ueV, kappa_over_g, ...); metric columns are suffixed with the mode.
// Missing values are empty cells. No wall times, so identical configs give
// identical bytes.
std::string rows_csv(const ScenarioResult& r);
// point, wall_s
std::string timing_csv(const ScenarioResult& r);
// omega_rel_meV, S_normalized
std::string spectrum_csv(const Spectrum& s);
// Long form: point, time_ps, series, value. Series are pop_G, pop_XH, pop_XV,
// pop_B, photons_H, photons_V.
std::string traces_csv(const ScenarioResult& r);

struct ExportedFiles {
  std::filesystem::path rows;
  std::filesystem::path timing;
  std::filesystem::path config;
  std::vector<std::filesystem::path> spectra;
  std::filesystem::path traces;  // empty when no point kept traces
};

// Writes <dir>/<name>.csv, <name>.timing.csv, <name>.config.yaml and, when
// present, <name>.spectrum.p<k>.<mode>.csv and <name>.traces.csv.
ExportedFiles export_result(const ScenarioResult& r, const std::filesystem::path& dir,
                            ExportFormat format = ExportFormat::csv);

}  // namespace superqd
