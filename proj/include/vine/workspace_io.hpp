#pragma once

#include "vine/config.hpp"
#include "vine/workspace.hpp"

#include <ostream>

namespace vine {

/// Columns x, y, phi_min, phi_max, phi_count; one row per cell in key order.
void write_csv(const WorkspaceGrid& grid, std::ostream& out);

json to_json(const WorkspaceGrid& grid);
json to_json(const CoverageMetrics& metrics);

/// Documentation-grade rendering of reachable cells shaded by approach-angle span.
void write_svg(const WorkspaceGrid& grid, const Environment* env, std::ostream& out,
               const WorkspaceGrid* overlay = nullptr);

}  // namespace vine
