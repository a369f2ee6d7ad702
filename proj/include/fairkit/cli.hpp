#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fairkit/core.hpp"

namespace fairkit::cli {

struct IngestOptions {
    bool matrix = false;         // points file is an n x n distance matrix
    bool inline_groups = false;  // last points column holds "g1;g2;..."
    bool check_triangle = true;
    std::size_t num_groups = 0;  // 0: infer
};

/// Reads a points CSV (or "-" for stdin) plus an optional groups file. The
/// groups file is either one "g1;g2" line per point or "point_id,group_id"
/// membership rows. Without groups every point is in group 0.
Dataset ingest(const std::string& points_path, const std::string& groups_path,
               const IngestOptions& opts = {});
Dataset ingest_streams(std::istream& points, std::istream* groups, const IngestOptions& opts = {});

/// Coordinates (or the distance matrix) as CSV with 17 significant digits.
void write_points_csv(std::ostream& out, const Dataset& ds);
/// One "g1;g2" line per point.
void write_groups(std::ostream& out, const Dataset& ds);

/// Entry point of the command-line tool; returns the process exit code
/// (0 ok, 1 input error, 2 infeasible, 3 budget exceeded).
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);

}  // namespace fairkit::cli
