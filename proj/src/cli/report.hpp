#pragma once

#include <array>
#include <ostream>
#include <string>
#include <vector>

#include "cli/config.hpp"
#include "hgf/calculus.hpp"
#include "hgf/simulator.hpp"

namespace hgf::cli {

/// The structured output of every subcommand except eval. Sections a
/// command does not produce are null.
struct Report {
  std::string command;
  Json inputs = Json::object();
  Json results = Json::object();
  Json residual = nullptr;
  Json speed = nullptr;
  std::vector<std::string> warnings;

  Json to_json() const;
  /// Pretty-printed with a trailing newline.
  void write(std::ostream& os) const;
};

/// Non-finite values become the strings "inf", "-inf", "nan".
Json num(double v);
Json nums(const std::array<double, 3>& a);
Json nums(const std::vector<double>& a);

Json residual_json(const ResidualReport& r, const Window& window);
Json speed_json(const SpeedEstimate& e);
Json densities_json(const Densities& d);

}  // namespace hgf::cli
