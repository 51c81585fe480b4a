#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "averkit/core.hpp"

namespace averkit {

// Text format: one "src<TAB>dst<TAB>weight" per line, '#' starts a comment
// line, and an optional "n=<count>" line fixes the node count (otherwise
// 1 + max id). Malformed input raises ErrorKind::ParseError with the line.

WeightedDigraph read_edge_list(std::istream& in);
WeightedDigraph read_edge_list_file(const std::filesystem::path& path);

/// Writes an "n=" header followed by every arc; weights use the shortest
/// representation that parses back to the same double.
void write_edge_list(std::ostream& out, const WeightedDigraph& g);
void write_edge_list_file(const std::filesystem::path& path, const WeightedDigraph& g);

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

}  // namespace averkit
