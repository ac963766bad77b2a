#pragma once

#include "mop/report.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace mop {

// Reals are written as 30-significant-digit scientific strings and doubles
// with 17, so identical configs give byte-identical files.

// polys.csv, recurrence.csv, second_kind.csv.
void write_compute_artifacts(const Pipeline& p, const std::filesystem::path& dir);
// ratios.csv, limits.json, surface.json, branches.csv, equilibrium.csv, equilibrium.json.
void write_analysis_artifacts(Pipeline& p, const std::filesystem::path& dir);
void write_report(const VerificationReport& rep, const std::filesystem::path& dir);

// Writes one matplotlib script per artifact family present in `dir` into
// dir/plots and returns their file names. Throws std::runtime_error when
// none of the plotted artifacts exist.
std::vector<std::string> emit_plot_scripts(const std::filesystem::path& dir);

}  // namespace mop
