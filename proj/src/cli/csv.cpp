#include "cli/csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "hgf/error.hpp"

namespace hgf::cli {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_field_header(std::ostream& os) { os << "t,x,u,v,w\n"; }

void write_field_rows(std::ostream& os, const FieldState& state, std::array<bool, 3> defined) {
  const std::string t = format_double(state.t);
  for (std::size_t i = 0; i < state.grid.n; ++i) {
    os << t << ',' << format_double(state.grid.x(i));
    for (std::size_t k = 0; k < 3; ++k) {
      os << ',';
      if (defined[k]) os << format_double(state.component(k)[i]);
    }
    os << '\n';
  }
}

namespace {

double parse_cell(const std::string& cell, std::size_t line) {
  if (cell.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(cell, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != cell.size()) throw ConstraintError("csv line " + std::to_string(line) + ": bad number '" + cell + "'");
  return v;
}

FieldState finish(double t, const std::vector<double>& xs, std::array<std::vector<double>, 3>& cols) {
  if (xs.empty()) throw ConstraintError("csv: empty snapshot");
  SpaceGrid g{xs.front(), xs.back(), xs.size()};
  const double tol = 1e-9 * std::max({1.0, std::abs(g.x_min), std::abs(g.x_max)});
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (std::abs(g.x(i) - xs[i]) > tol)
      throw ConstraintError("csv: snapshot at t = " + format_double(t) + " is not on a uniform grid");
  return FieldState{g, t, std::move(cols[0]), std::move(cols[1]), std::move(cols[2])};
}

}  // namespace

std::vector<FieldState> read_field_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ConstraintError("csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "t,x,u,v,w") throw ConstraintError("csv: expected header t,x,u,v,w");
  std::vector<FieldState> out;
  std::vector<double> xs;
  std::array<std::vector<double>, 3> cols;
  double current_t = 0.0;
  bool open = false;
  std::size_t number = 1;
  while (std::getline(is, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    if (cells.size() != 5) throw ConstraintError("csv line " + std::to_string(number) + ": expected 5 cells");
    const double t = parse_cell(cells[0], number), x = parse_cell(cells[1], number);
    if (!std::isfinite(t) || !std::isfinite(x))
      throw ConstraintError("csv line " + std::to_string(number) + ": t and x must be present");
    if (open && t != current_t) {
      out.push_back(finish(current_t, xs, cols));
      xs.clear();
      cols = {};
    }
    current_t = t;
    open = true;
    xs.push_back(x);
    for (std::size_t k = 0; k < 3; ++k) cols[k].push_back(parse_cell(cells[k + 2], number));
  }
  if (open) out.push_back(finish(current_t, xs, cols));
  return out;
}

void write_table(std::ostream& os, const std::vector<std::string>& header,
                 const std::vector<std::vector<double>>& rows) {
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << '\n';
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << format_double(r[i]);
    os << '\n';
  }
}

}  // namespace hgf::cli
