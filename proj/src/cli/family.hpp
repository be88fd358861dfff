#pragma once

#include <map>
#include <string>
#include <vector>

#include "hgf/solutions.hpp"

namespace hgf::cli {

/// A family key with its named parameters, from flags and/or a config file.
struct FamilyChoice {
  std::string key;
  std::map<std::string, double> values;
  bool enforce_nonnegativity = true;  ///< fam40 only
};

/// Parameter names a family accepts. Throws ConstraintError for unknown keys.
const std::vector<std::string>& family_parameter_names(const std::string& key);
/// One-line constraint summary for the catalog.
std::string family_constraints(const std::string& key);

/// Rejects parameters the family does not take.
void check_family_parameters(const FamilyChoice& choice);

/// Builds the instance. Semi-exact families solve their profile equation on
/// [omega_lo, omega_hi], forward from the left end.
FamilyInstance build_family(const FamilyChoice& choice, double omega_lo, double omega_hi);

/// omega range needed to evaluate at times t_lo..t_hi on [x_lo, x_hi], with
/// a margin for stencil neighbours. Uses the family's speed when it has one.
std::pair<double, double> omega_range(const FamilyChoice& choice, double x_lo, double x_hi, double t_lo,
                                      double t_hi);

}  // namespace hgf::cli
