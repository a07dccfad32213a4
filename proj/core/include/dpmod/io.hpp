#pragma once

#include <filesystem>
#include <iosfwd>

#include "dpmod/metric.hpp"

namespace dpmod {

/// Text mesh format:
///   dpmesh v1 <n>
///   v x1 ... xn        one per vertex
///   c i0 ... in        one per cell
///   ident a b          optional raw-vertex identifications
/// Blank lines and lines starting with '#' are ignored. Malformed input throws
/// Error{ParseError} naming the offending line.
MeshPtr read_mesh(std::istream& in);
MeshPtr read_mesh(const std::filesystem::path& path);
void write_mesh(std::ostream& out, const Mesh& mesh);
void write_mesh(const std::filesystem::path& path, const Mesh& mesh);

/// Text metric format:
///   dpmetric v1 <n> <num_cells>
///   one line per cell: the n(n+1)/2 upper-triangle entries, row-major.
MetricField read_metric(std::istream& in, MeshPtr mesh);
MetricField read_metric(const std::filesystem::path& path, MeshPtr mesh);
void write_metric(std::ostream& out, const MetricField& g);
void write_metric(const std::filesystem::path& path, const MetricField& g);

}  // namespace dpmod
