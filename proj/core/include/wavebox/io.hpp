#ifndef WAVEBOX_IO_HPP
#define WAVEBOX_IO_HPP

// Persistence: diff-friendly CSVs for audits and a compact little-endian
// binary snapshot format for trajectories (magic "WDWV1").

#include <string>
#include <vector>

#include "wavebox/functionals.hpp"
#include "wavebox/galerkin.hpp"

namespace wavebox {

// Header: t,E,dissipation_cum,residual  with residual = E(t) - E(0) + D(t).
void write_energy_csv(const std::string& path, const Trajectory& traj);

// Header: t,measured,bound,ratio  (ratio = measured / bound, 0 when bound = 0).
void write_audit_csv(const std::string& path, const AuditReport& report);

// Header: name,max_residual,tolerance,verdict
void write_report_summary(const std::string& path, const std::vector<AuditReport>& reports);

void save_trajectory(const std::string& path, const Trajectory& traj);

struct TrajectoryFile {
    Domain domain;  // reconstructed with the oversample passed to load
    std::vector<PhaseState> snapshots;
};

// Throws ParseError on a bad magic/truncated file.
TrajectoryFile load_trajectory(const std::string& path, int oversample = 4);

// Deterministic shortest-roundtrip double formatting used by all CSV output.
std::string format_double(double x);

}  // namespace wavebox

#endif
