#include "vex/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace vex {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

void dump_number(const Json& v, std::string& out) {
  if (v.is_number_float()) {
    double d = v.get<double>();
    if (std::isfinite(d)) {
      out += format_double(d);
    } else {
      out += '"';
      out += d > 0 ? "inf" : (d < 0 ? "-inf" : "nan");
      out += '"';
    }
  } else if (v.is_number_unsigned()) {
    out += std::to_string(v.get<uint64_t>());
  } else {
    out += std::to_string(v.get<int64_t>());
  }
}

void dump_value(const Json& v, std::string& out, int indent, int depth) {
  std::string pad(size_t(indent) * size_t(depth + 1), ' ');
  std::string close_pad(size_t(indent) * size_t(depth), ' ');
  switch (v.type()) {
    case Json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        out += Json(it.key()).dump();
        out += ": ";
        dump_value(it.value(), out, indent, depth + 1);
      }
      out += "\n" + close_pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (const auto& e : v) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        dump_value(e, out, indent, depth + 1);
      }
      out += "\n" + close_pad + "]";
      return;
    }
    case Json::value_t::string:
      out += v.dump();
      return;
    case Json::value_t::boolean:
      out += v.get<bool>() ? "true" : "false";
      return;
    case Json::value_t::null:
      out += "null";
      return;
    default:
      dump_number(v, out);
      return;
  }
}

}  // namespace

std::string dump_json(const Json& v, int indent) {
  std::string out;
  dump_value(v, out, indent, 0);
  out += '\n';
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw config_error("cannot write " + path);
  out << content;
  if (!out) throw config_error("short write to " + path);
}

uint64_t fnv1a64(std::string_view bytes) {
  uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string fnv1a64_hex(std::string_view bytes) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(bytes)));
  return buf;
}

std::string file_hash_hex(const std::string& path) {
  return fnv1a64_hex(read_text_file(path));
}

void write_nodal_csv(const std::string& path, const Grid& g,
                     const std::vector<std::pair<std::string, const Vec*>>& columns) {
  for (const auto& [name, vec] : columns) {
    if (!vec || vec->size() != g.size())
      throw config_error("csv column '" + name + "' does not match the grid");
  }
  std::string out = "x";
  if (g.dim() == 2) out += ",y";
  for (const auto& [name, vec] : columns) {
    out += ',';
    out += name;
  }
  out += '\n';
  for (Eigen::Index k = 0; k < g.size(); ++k) {
    out += format_double(g.coord(k, 0));
    if (g.dim() == 2) {
      out += ',';
      out += format_double(g.coord(k, 1));
    }
    for (const auto& [name, vec] : columns) {
      out += ',';
      out += format_double((*vec)[k]);
    }
    out += '\n';
  }
  write_text_file(path, out);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

Vec read_csv_column(const std::string& path, const Grid& g,
                    const std::string& column) {
  std::istringstream in(read_text_file(path));
  std::string line;
  if (!std::getline(in, line)) throw config_error(path + ": empty csv");
  auto header = split_csv_line(line);

  size_t coord_cols = size_t(g.dim());
  if (header.size() < coord_cols + 1 || header[0] != "x" ||
      (g.dim() == 2 && header[1] != "y"))
    throw config_error(path + ": expected header x" +
                       std::string(g.dim() == 2 ? ",y" : "") + ",<columns>");
  size_t col = header.size();
  for (size_t i = coord_cols; i < header.size(); ++i)
    if (header[i] == column) col = i;
  if (col == header.size())
    throw config_error(path + ": no column named '" + column + "'");

  Vec out(g.size());
  double tol0 = 1e-9 * g.spacing(0);
  double tol1 = g.dim() == 2 ? 1e-9 * g.spacing(1) : 0.0;
  Eigen::Index k = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (k >= g.size()) throw config_error(path + ": more rows than grid nodes");
    auto cells = split_csv_line(line);
    if (cells.size() != header.size())
      throw config_error(path + ": ragged row " + std::to_string(k + 2));
    double x = std::stod(cells[0]);
    if (std::abs(x - g.coord(k, 0)) > tol0)
      throw config_error(path + ": x coordinate mismatch at row " +
                         std::to_string(k + 2));
    if (g.dim() == 2) {
      double y = std::stod(cells[1]);
      if (std::abs(y - g.coord(k, 1)) > tol1)
        throw config_error(path + ": y coordinate mismatch at row " +
                           std::to_string(k + 2));
    }
    out[k] = std::stod(cells[col]);
    ++k;
  }
  if (k != g.size()) throw config_error(path + ": fewer rows than grid nodes");
  return out;
}

void write_grid_function_csv(const std::string& path, const GridFunction& u,
                             const std::string& name) {
  write_nodal_csv(path, u.grid(), {{name, &u.values()}});
}

GridFunction read_grid_function_csv(const std::string& path, const Grid& g,
                                    bool dirichlet_zero,
                                    const std::string& name) {
  return GridFunction(g, read_csv_column(path, g, name), dirichlet_zero);
}

}  // namespace vex
