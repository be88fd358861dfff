#pragma once

#include <array>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "hgf/calculus.hpp"

namespace hgf::cli {

/// 17 significant digits, shortest form ("0", "0.25").
std::string format_double(double v);

/// Header `t,x,u,v,w`.
void write_field_header(std::ostream& os);
/// One row per grid point; components with defined[k] == false are empty.
void write_field_rows(std::ostream& os, const FieldState& state, std::array<bool, 3> defined = {true, true, true});

/// Reads a snapshot CSV back into one FieldState per distinct t (in file
/// order). Empty cells become NaN. Throws ConstraintError on malformed
/// input or a non-uniform grid.
std::vector<FieldState> read_field_csv(std::istream& is);

/// Header plus rows of a trajectory table.
void write_table(std::ostream& os, const std::vector<std::string>& header,
                 const std::vector<std::vector<double>>& rows);

}  // namespace hgf::cli
