#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "extphase/harness.hpp"

namespace extphase {

/// Shortest-round-trip-safe text for a double (17 significant digits).
[[nodiscard]] std::string format_double(double v);

/// Columns: step,t,defect_norm,energy_rel_err,<invariant>_rel_err...,itr,vf_evals
/// followed by q1..qd,p1..pd when the record holds states.
void write_csv(const TrajectoryRecord& record, std::ostream& out);
/// Throws IoError with the path on failure.
void emit_csv(const TrajectoryRecord& record, const std::filesystem::path& path);

/// Parses a file written by emit_csv back into the row series of a record.
[[nodiscard]] TrajectoryRecord read_csv(const std::filesystem::path& path);

/// Log-scale line charts of defect, energy error and each invariant drift.
/// Zero values are left out of the chart (they stay in the CSV).
void emit_svg(const TrajectoryRecord& record, const std::filesystem::path& path);

/// One panel per quantity (defect, then each invariant), one line per record.
void emit_comparison_svg(const std::vector<TrajectoryRecord>& records,
                         const std::filesystem::path& path, const std::string& title);

/// Columns: method,order,dt,t_end,tol,time_s,itr_avg,vf_avg,converged_steps,total_steps
void emit_benchmark_csv(const std::vector<BenchmarkRow>& rows, const std::filesystem::path& path);
void write_benchmark_csv(const std::vector<BenchmarkRow>& rows, std::ostream& out);

}  // namespace extphase
