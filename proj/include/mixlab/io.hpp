#pragma once

#include <string>

#include "mixlab/bounds.hpp"
#include "mixlab/subsolution.hpp"
#include "mixlab/torus_field.hpp"
#include "mixlab/variational.hpp"

namespace mixlab {

/// Locale-independent decimal formatting with 17 significant digits, so
/// that repeated runs produce byte-identical files.
std::string format_double(double value);

/// Write content to <path>.tmp and rename onto path; no partial files are
/// left behind on failure.
void atomic_write(const std::string& path, const std::string& content);

/// GridFunction as CSV with header "x,value", one row per sample.
std::string grid_to_csv(const GridFunction& f);
GridFunction grid_from_csv_text(const std::string& text);

/// GridFunction as JSON {"L": ..., "n": ..., "values": [...]}.
std::string grid_to_json(const GridFunction& f);
GridFunction grid_from_json_text(const std::string& text);

void write_grid(const std::string& path, const GridFunction& f,
                const std::string& format);
GridFunction read_grid(const std::string& path);

std::string bound_report_to_json(const BoundReport& report);
std::string variational_report_to_json(const VariationalReport& report);

/// OdeTrace as CSV with columns "t,q,alpha", or as JSON arrays.
std::string ode_trace_to_csv(const OdeTrace& trace);
std::string ode_trace_to_json(const OdeTrace& trace);

/// Snapshot as CSV "x,rho,m1,e,w" plus a JSON manifest {t, alpha, lambda, T}.
std::string snapshot_to_csv(const SubsolutionSnapshot& snapshot);
std::string snapshot_manifest_json(const SubsolutionSnapshot& snapshot, double T);

std::string read_text_file(const std::string& path);

}  // namespace mixlab
