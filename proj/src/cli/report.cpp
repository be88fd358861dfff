#include "cli/report.hpp"

#include <cmath>

namespace hgf::cli {

Json num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

Json nums(const std::array<double, 3>& a) { return Json::array({num(a[0]), num(a[1]), num(a[2])}); }

Json nums(const std::vector<double>& a) {
  Json out = Json::array();
  for (double v : a) out.push_back(num(v));
  return out;
}

Json densities_json(const Densities& d) { return nums(std::array<double, 3>{d.u, d.v, d.w}); }

Json residual_json(const ResidualReport& r, const Window& window) {
  Json j;
  j["linf"] = nums(r.linf);
  j["l2"] = nums(r.l2);
  j["order"] = r.order ? nums(*r.order) : Json(nullptr);
  j["h"] = num(r.h);
  j["dt"] = num(r.dt);
  j["window"] = Json{{"x_min", window.x_min}, {"x_max", window.x_max}, {"t", window.t}};
  Json levels = Json::array();
  for (const auto& l : r.levels)
    levels.push_back(Json{{"h", num(l.h)}, {"dt", num(l.dt)}, {"linf", nums(l.linf)}, {"l2", nums(l.l2)}});
  j["levels"] = levels;
  return j;
}

Json speed_json(const SpeedEstimate& e) {
  static const char* names[] = {"u", "v", "w"};
  Json trace = Json::array();
  for (const auto& [t, x] : e.trace) trace.push_back(Json::array({num(t), num(x)}));
  return Json{{"component", names[static_cast<std::size_t>(e.component)]},
              {"level", num(e.level)},
              {"speed", num(e.speed)},
              {"intercept", num(e.intercept)},
              {"fit_window", Json::array({num(e.fit_window.first), num(e.fit_window.second)})},
              {"r_squared", num(e.r_squared)},
              {"reliable", e.reliable},
              {"reliability_threshold", 0.999},
              {"trace", trace}};
}

Json Report::to_json() const {
  Json j;
  j["command"] = command;
  j["inputs"] = inputs;
  j["results"] = results;
  j["residual"] = residual;
  j["speed"] = speed;
  j["warnings"] = warnings;
  return j;
}

void Report::write(std::ostream& os) const { os << to_json().dump(2) << '\n'; }

}  // namespace hgf::cli
