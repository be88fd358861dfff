#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cli/family.hpp"
#include "hgf/calculus.hpp"
#include "hgf/model.hpp"
#include "json.hpp"

namespace hgf::cli {

using Json = nlohmann::ordered_json;

struct TimeConfig {
  std::optional<double> t0;
  std::optional<double> t_end;
  std::optional<double> cfl_safety;
  std::optional<std::size_t> snapshot_every;
};

struct BcConfig {
  std::string kind;  ///< "dirichlet", "neumann-zero", "pinned-to-exact"
  std::optional<Densities> left;
  std::optional<Densities> right;
};

/// Parsed run configuration file. Every section is optional; unknown keys
/// at any level are rejected.
struct RunConfigFile {
  std::optional<Params> params;
  std::optional<FamilyChoice> family;
  std::optional<SpaceGrid> grid;
  TimeConfig time;
  std::optional<BcConfig> bc;
  std::optional<std::uint64_t> seed;
  std::optional<std::array<std::vector<double>, 3>> initial;
};

RunConfigFile parse_config(const Json& doc);
Json read_json_file(const std::string& path);
RunConfigFile load_config(const std::string& path);

/// All eight coefficients required: a1..a5, d1..d3.
Params params_from_json(const Json& j);
Json params_to_json(const Params& p);
/// {"x_min", "x_max", and exactly one of "n" or "h"}.
SpaceGrid grid_from_json(const Json& j);
Json grid_to_json(const SpaceGrid& g);

}  // namespace hgf::cli
