#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "vex/grid.hpp"

namespace vex {

using Json = nlohmann::json;

// 17-significant-digit rendering; the one float format used everywhere so
// reruns are byte-identical.
std::string format_double(double v);

// Deterministic serialization: object keys in map order, floats through
// format_double, non-finite values as quoted strings.
std::string dump_json(const Json& v, int indent = 2);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

uint64_t fnv1a64(std::string_view bytes);
std::string fnv1a64_hex(std::string_view bytes);
std::string file_hash_hex(const std::string& path);

// Nodal tables in node order (x fastest): header "x[,y],<name>...", one row
// per node, every number in the 17-digit format.
void write_nodal_csv(const std::string& path, const Grid& g,
                     const std::vector<std::pair<std::string, const Vec*>>& columns);

// Reads one named column, validating the coordinate columns against the
// grid (within 1e-9 of a spacing).
Vec read_csv_column(const std::string& path, const Grid& g,
                    const std::string& column);

void write_grid_function_csv(const std::string& path, const GridFunction& u,
                             const std::string& name = "value");
GridFunction read_grid_function_csv(const std::string& path, const Grid& g,
                                    bool dirichlet_zero = false,
                                    const std::string& name = "value");

}  // namespace vex
