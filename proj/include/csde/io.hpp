#pragma once

#include <string>
#include <vector>

#include "csde/development.hpp"
#include "csde/hitting.hpp"
#include "csde/stats.hpp"

namespace csde::io {

// All floats are printed with 17 significant digits so reruns with the same
// seed are byte-identical.
std::string fmt17(double x);

// Columns: path_id, k, t, ambient coords, driver coords, drift coords.
// Driver/drift belong to the step leaving node k; the final node carries
// zeros.
void write_paths_csv(const std::string& file, const ManifoldModel& model,
                     const std::vector<PathSample>& paths);

// Columns: path_id, ambient coords, attached, drawn_atom.
void write_endpoints_csv(const std::string& file, const ManifoldModel& model,
                         const std::vector<PathSample>& paths);

// Columns: path_id, time, censored.
void write_exits_csv(const std::string& file,
                     const std::vector<hitting::ExitSample>& samples);

// Long format: s, rho, survival, exit_density.
void write_profile_csv(const std::string& file,
                       const hitting::HittingProfile& profile);

void write_reports_jsonl(const std::string& file,
                         const std::vector<stats::TestReport>& reports);

}  // namespace csde::io
