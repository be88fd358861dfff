#include "hgf/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>
#include <string>

#include "hgf/error.hpp"

namespace hgf {

namespace {

const double kSqrt6 = std::sqrt(6.0);

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

double fisher_phi(double k, double omega) {
  const double m = one_minus_tanh(k * omega / (2.0 * kSqrt6));
  return 0.25 * m * m;
}

Params q1_params(double a1, double a3, double a4, double d) {
  return Params{a1, 1.0, a3, a4, a1 * a4, 1.0, 1.0, d};
}

struct NameEntry {
  SystemId id;
  std::string_view name;
};

constexpr NameEntry kSystems[] = {
    {SystemId::R35, "R35"}, {SystemId::R38, "R38"}, {SystemId::R47, "R47"}, {SystemId::R58, "R58"},
    {SystemId::T2a, "T2a"}, {SystemId::T2b, "T2b"}, {SystemId::T2c, "T2c"}, {SystemId::T2d, "T2d"},
    {SystemId::L36, "L36"}, {SystemId::L52, "L52"},
};

struct AnsatzEntry {
  AnsatzId id;
  std::string_view name;
};

constexpr AnsatzEntry kAnsatze[] = {
    {AnsatzId::A34, "A34"}, {AnsatzId::A37, "A37"}, {AnsatzId::A44, "A44"},   {AnsatzId::T2a, "T2a_ansatz"},
    {AnsatzId::T2b, "T2b_ansatz"}, {AnsatzId::T2c, "T2c_ansatz"}, {AnsatzId::T2d, "T2d_ansatz"},
    {AnsatzId::PlaneWave, "PlaneWave"},
};

}  // namespace

std::string_view system_name(SystemId id) {
  for (const auto& e : kSystems)
    if (e.id == id) return e.name;
  return "unknown";
}

std::optional<SystemId> parse_system_name(std::string_view name) {
  for (const auto& e : kSystems)
    if (e.name == name) return e.id;
  return std::nullopt;
}

std::string_view ansatz_name(AnsatzId id) {
  for (const auto& e : kAnsatze)
    if (e.id == id) return e.name;
  return "unknown";
}

std::optional<AnsatzId> parse_ansatz_name(std::string_view name) {
  for (const auto& e : kAnsatze)
    if (e.name == name) return e.id;
  return std::nullopt;
}

std::size_t ReducedSystem::profiles() const { return (id == SystemId::L36 || id == SystemId::L52) ? 1 : 3; }

int ReducedSystem::order() const {
  return (id == SystemId::R38 || id == SystemId::T2c || id == SystemId::T2d) ? 1 : 2;
}

namespace {

// Second derivatives (or first derivatives for first-order systems) solved
// from the reduced equations, given the profiles p and first derivatives dp.
void accelerations(const ReducedSystem& s, double z, const double* p, const double* dp, double* out) {
  const Params& q = s.params;
  const double a1 = q.a1;
  switch (s.id) {
    case SystemId::R35: {
      const double U = p[0], V = p[1], W = p[2];
      out[0] = -s.alpha * dp[0] - U * (1.0 + a1 * s.beta - a1 * V);
      out[1] = -s.alpha * dp[1] - V * (1.0 - a1 * V + a1 * W);
      out[2] = (-s.alpha * dp[2] - q.a3 * W * (1.0 - W) + a1 * q.a4 * V * W) / q.d3;
      return;
    }
    case SystemId::R38: {
      const double U = p[0], V = p[1], W = p[2];
      out[0] = -U * (a1 * V - 1.0 - s.beta * s.beta * a1 * a1);
      out[1] = -V * (a1 * V - a1 * W - 1.0);
      out[2] = -W * (q.a3 * W + a1 * q.a4 * V - q.a3);
      return;
    }
    case SystemId::R47: {
      const double U = p[0], V = p[1], W = p[2];
      out[0] = -s.alpha * dp[0] - U * (1.0 - U);
      out[1] = -s.alpha * dp[1] - V * (1.0 - U) - U * (W - s.beta);
      out[2] = (-s.alpha * dp[2] - q.a3 * W * (1.0 - W) + q.a4 * U * W) / q.d3;
      return;
    }
    case SystemId::R58: {
      const double U = p[0], V = p[1], W = p[2];
      const double l = 1.0 - U - a1 * V;
      out[0] = (-s.alpha * dp[0] - U * l) / q.d1;
      out[1] = (-s.alpha * dp[1] - q.a2 * V * l - U * W - a1 * V * W) / q.d2;
      out[2] = (-s.alpha * dp[2] - q.a3 * W * (1.0 - W) + q.a4 * U * W + q.a5 * V * W) / q.d3;
      return;
    }
    case SystemId::T2a:
    case SystemId::T2b: {
      const double U = p[0], V = p[1], W = p[2];
      if (s.id == SystemId::T2a) {
        out[0] = -s.alpha * dp[0] - U * (1.0 + a1 * s.beta - a1 * V);
      } else {
        out[0] = -s.alpha * dp[0] + a1 * U * V + s.gamma * ((q.a4 - 1.0) * V + W + (1.0 - q.a4) / a1);
      }
      out[1] = -s.alpha * dp[1] - V * (1.0 - a1 * V + a1 * W);
      out[2] = -s.alpha * dp[2] + a1 * q.a4 * V * W;
      return;
    }
    case SystemId::T2c:
    case SystemId::T2d: {
      const double U = p[0], V = p[1], W = p[2];
      const double b2 = s.id == SystemId::T2c ? a1 * a1 * s.beta * s.beta : 0.0;
      out[0] = -U * (a1 * V - 1.0 - b2);
      out[1] = -V * (a1 * V - a1 * W - 1.0);
      out[2] = -a1 * q.a4 * V * W;
      return;
    }
    case SystemId::L36: {
      const double m = one_minus_tanh(s.kappa2 * z / (2.0 * kSqrt6));
      out[0] = -s.alpha * dp[0] - p[0] * (1.0 + a1 * s.beta - s.kappa1 * m * m);
      return;
    }
    case SystemId::L52: {
      const double U = fisher_phi(1.0, z);
      const double W = s.l52_case == SemiCase::s51 ? 1.0 - U : (1.0 - q.a4) * U;
      out[0] = -s.alpha * dp[0] - p[0] * (1.0 - U) - U * (W - s.beta);
      return;
    }
  }
}

// Leading coefficient of the second derivative.
double leading(const ReducedSystem& s, std::size_t k) {
  if (s.id == SystemId::R35 || s.id == SystemId::R47) return k == 2 ? s.params.d3 : 1.0;
  if (s.id == SystemId::R58) return s.params.diffusivities()[k];
  return 1.0;
}

}  // namespace

std::vector<double> ReducedSystem::rhs(double z, const std::vector<double>& y) const {
  if (y.size() != dimension())
    throw ConstraintError("reduced system " + std::string(system_name(id)) + ": state dimension " +
                          std::to_string(y.size()) + " does not match " + std::to_string(dimension()));
  const std::size_t m = profiles();
  std::vector<double> out(dimension());
  if (order() == 1) {
    accelerations(*this, z, y.data(), nullptr, out.data());
    return out;
  }
  for (std::size_t k = 0; k < m; ++k) out[k] = y[m + k];
  accelerations(*this, z, y.data(), y.data() + m, out.data() + m);
  return out;
}

ProfileEquation ReducedSystem::profile_equation() const {
  ProfileEquation eq;
  eq.components = profiles();
  eq.order = order();
  const ReducedSystem self = *this;
  eq.residual = [self](double z, const std::vector<double>& p, const std::vector<double>& dp,
                       const std::vector<double>& d2p) {
    const std::size_t m = self.profiles();
    std::vector<double> acc(m);
    accelerations(self, z, p.data(), dp.data(), acc.data());
    std::vector<double> r(m);
    for (std::size_t k = 0; k < m; ++k) {
      r[k] = self.order() == 1 ? dp[k] - acc[k] : leading(self, k) * (d2p[k] - acc[k]);
    }
    return r;
  };
  return eq;
}

ReducedSystem make_r35(double alpha, double a1, double beta, double a3, double a4, double d) {
  if (a1 == 0.0) throw ConstraintError("R35: a1 must be nonzero");
  if (!(d > 0)) throw ConstraintError("R35: d must be positive");
  ReducedSystem s;
  s.id = SystemId::R35;
  s.alpha = alpha;
  s.beta = beta;
  s.params = q1_params(a1, a3, a4, d);
  return s;
}

ReducedSystem make_r38(double beta, double a1, double a3, double a4) {
  if (a1 == 0.0) throw ConstraintError("R38: a1 must be nonzero");
  ReducedSystem s;
  s.id = SystemId::R38;
  s.beta = beta;
  s.params = q1_params(a1, a3, a4, 1.0);
  return s;
}

ReducedSystem make_r47(double alpha, double beta, double a3, double a4, double d) {
  if (!(d > 0)) throw ConstraintError("R47: d must be positive");
  ReducedSystem s;
  s.id = SystemId::R47;
  s.alpha = alpha;
  s.beta = beta;
  s.params = Params{0.0, 1.0, a3, a4, 0.0, 1.0, 1.0, d};
  return s;
}

ReducedSystem make_r58(double alpha, const Params& p) {
  p.validate();
  ReducedSystem s;
  s.id = SystemId::R58;
  s.alpha = alpha;
  s.params = p;
  return s;
}

ReducedSystem make_t2(SystemId row, double alpha, double beta, double gamma, double a1, double a4) {
  if (row != SystemId::T2a && row != SystemId::T2b && row != SystemId::T2c && row != SystemId::T2d)
    throw ConstraintError("make_t2: not a case 9 reduction row");
  if (a1 == 0.0) throw ConstraintError("case 9 reduction systems require a1 != 0");
  ReducedSystem s;
  s.id = row;
  s.alpha = alpha;
  s.gamma = gamma;
  s.beta = beta;
  if (row == SystemId::T2a && 1.0 + beta * a1 == 0.0)
    throw ConstraintError("T2a requires 1 + beta a1 != 0 (use T2b)");
  if (row == SystemId::T2b) s.beta = -1.0 / a1;
  if (row == SystemId::T2c && beta == 0.0) throw ConstraintError("T2c requires beta != 0 (use T2d)");
  if (row == SystemId::T2d) s.beta = 0.0;
  if (row == SystemId::T2c || row == SystemId::T2d) s.alpha = 0.0;
  s.params = Params{a1, 1.0, 0.0, a4, a1 * a4, 1.0, 1.0, 1.0};
  return s;
}

ReducedSystem make_l36(double alpha, double a1, double beta, double kappa1, double kappa2) {
  ReducedSystem s;
  s.id = SystemId::L36;
  s.alpha = alpha;
  s.beta = beta;
  s.kappa1 = kappa1;
  s.kappa2 = kappa2;
  s.params.a1 = a1;
  return s;
}

ReducedSystem make_l52(double beta, SemiCase c, double a4) {
  if (c != SemiCase::s50 && c != SemiCase::s51) throw ConstraintError("L52 belongs to the semi50/semi51 cases");
  ReducedSystem s;
  s.id = SystemId::L52;
  s.alpha = 5.0 / kSqrt6;
  s.beta = beta;
  s.l52_case = c;
  // semi51 ties a4 = 1 + a3.
  s.params = Params{0.0, 1.0, c == SemiCase::s50 ? 1.0 : a4 - 1.0, a4, 0.0, 1.0, 1.0, 1.0};
  return s;
}

std::vector<double> dp45_step(const ReducedSystem& sys, double z, const std::vector<double>& y,
                              const std::vector<double>& f0, double h, std::vector<double>* err) {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                          b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;
  const std::size_t n = y.size();
  std::vector<double> tmp(n), y1(n);
  const auto& k1 = f0;
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * a21 * k1[i];
  const auto k2 = sys.rhs(z + c2 * h, tmp);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
  const auto k3 = sys.rhs(z + c3 * h, tmp);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
  const auto k4 = sys.rhs(z + c4 * h, tmp);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
  const auto k5 = sys.rhs(z + c5 * h, tmp);
  for (std::size_t i = 0; i < n; ++i)
    tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
  const auto k6 = sys.rhs(z + h, tmp);
  for (std::size_t i = 0; i < n; ++i)
    y1[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
  if (err) {
    const auto k7 = sys.rhs(z + h, y1);
    err->resize(n);
    for (std::size_t i = 0; i < n; ++i)
      (*err)[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
  }
  return y1;
}

namespace {

struct Branch {
  std::vector<double> z;
  std::vector<std::vector<double>> y;
};

Branch integrate_branch(const ReducedSystem& sys, const std::vector<double>& y0, double z0, double z1,
                        const IntegrateOptions& o) {
  Branch b;
  b.z.push_back(z0);
  b.y.push_back(y0);
  if (z1 == z0) return b;
  const double dir = z1 > z0 ? 1.0 : -1.0;
  const double span = std::abs(z1 - z0);
  double h = o.initial_step > 0 ? o.initial_step : std::min(span / 100.0, 1e-2);
  h = std::min(h, o.max_step);
  double z = z0;
  std::vector<double> y = y0, err;
  std::vector<double> f = sys.rhs(z, y);
  double err_prev = 1e-4;
  std::size_t steps = 0;
  while (dir * (z1 - z) > 0) {
    if (++steps > o.max_steps) throw NumericalError("integrate: step limit reached at " + fmt(z));
    bool last = false;
    if (h >= std::abs(z1 - z)) {
      h = std::abs(z1 - z);
      last = true;
    }
    const double hmin = 1e-14 * std::max(1.0, std::abs(z));
    if (h < hmin)
      throw NumericalError("integrate: step size underflow at " + std::string(sys.variable()) + " = " + fmt(z));
    const std::vector<double> y1 = dp45_step(sys, z, y, f, dir * h, &err);
    double en = 0.0;
    bool finite = true;
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (!std::isfinite(y1[i])) finite = false;
      const double sc = o.abs_tol + o.rel_tol * std::max(std::abs(y[i]), std::abs(y1[i]));
      en += (err[i] / sc) * (err[i] / sc);
    }
    en = std::sqrt(en / static_cast<double>(y.size()));
    if (!finite || !std::isfinite(en)) {
      h *= 0.25;
      continue;
    }
    if (en <= 1.0) {
      z = last ? z1 : z + dir * h;
      y = y1;
      f = sys.rhs(z, y);
      b.z.push_back(z);
      b.y.push_back(y);
      const double e = std::max(en, 1e-10);
      double fac = 0.9 * std::pow(e, -0.7 / 5.0) * std::pow(err_prev, 0.4 / 5.0);
      fac = std::clamp(fac, 0.2, 5.0);
      err_prev = e;
      h = std::min(h * fac, o.max_step);
    } else {
      h *= std::max(0.2, 0.9 * std::pow(en, -1.0 / 5.0));
    }
  }
  return b;
}

void check_options(const IntegrateOptions& o) {
  if (!(o.rel_tol > 0 && o.rel_tol <= 1e-2) || !(o.abs_tol > 0 && o.abs_tol <= 1e-2))
    throw ConstraintError("integrate: tolerances must lie in (0, 1e-2]");
  if (!(o.max_step > 0)) throw ConstraintError("integrate: max_step must be positive");
}

void check_initial(const ReducedSystem& sys, const std::vector<double>& y0) {
  if (y0.size() != sys.dimension())
    throw ConstraintError("integrate: initial state has dimension " + std::to_string(y0.size()) + ", expected " +
                          std::to_string(sys.dimension()));
  for (double v : y0)
    if (!std::isfinite(v)) throw ConstraintError("integrate: initial state must be finite");
}

}  // namespace

ProfileTrajectory::ProfileTrajectory(ReducedSystem sys, double origin, std::vector<double> z,
                                     std::vector<std::vector<double>> y)
    : sys_(std::move(sys)), origin_(origin), z_(std::move(z)), y_(std::move(y)) {
  f_.reserve(z_.size());
  for (std::size_t i = 0; i < z_.size(); ++i) f_.push_back(sys_.rhs(z_[i], y_[i]));
  for (std::size_t k = 0; k + 1 < z_.size(); ++k) {
    const double mid = 0.5 * (z_[k] + z_[k + 1]);
    const auto a = at(mid), b = hermite(mid);
    for (std::size_t i = 0; i < a.size(); ++i) interp_error_ = std::max(interp_error_, std::abs(a[i] - b[i]));
  }
}

std::size_t ProfileTrajectory::segment(double z) const {
  if (!covers(z))
    throw ConstraintError("profile: " + std::string(sys_.variable()) + " = " + fmt(z) + " outside the covered [" +
                          fmt(z_.empty() ? 0.0 : lo()) + ", " + fmt(z_.empty() ? 0.0 : hi()) + "]");
  auto it = std::upper_bound(z_.begin(), z_.end(), z);
  std::size_t k = static_cast<std::size_t>(it - z_.begin());
  k = k == 0 ? 0 : k - 1;
  return std::min(k, z_.size() >= 2 ? z_.size() - 2 : 0);
}

std::vector<double> ProfileTrajectory::at(double z) const {
  const std::size_t k = segment(z);
  if (z_.size() == 1) return y_[0];
  if (z == z_[k]) return y_[k];
  if (z == z_[k + 1]) return y_[k + 1];
  // Step from the node nearer the integration origin.
  const std::size_t from = z_[k + 1] <= origin_ ? k + 1 : k;
  return dp45_step(sys_, z_[from], y_[from], f_[from], z - z_[from]);
}

std::vector<double> ProfileTrajectory::hermite(double z) const {
  const std::size_t k = segment(z);
  if (z_.size() == 1) return y_[0];
  const double h = z_[k + 1] - z_[k];
  const double s = (z - z_[k]) / h;
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
  std::vector<double> out(y_[k].size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = h00 * y_[k][i] + h10 * h * f_[k][i] + h01 * y_[k + 1][i] + h11 * h * f_[k + 1][i];
  return out;
}

ProfileTrajectory integrate(const ReducedSystem& sys, const std::vector<double>& y0, double z0, double z1,
                            const IntegrateOptions& opts) {
  check_options(opts);
  check_initial(sys, y0);
  Branch b = integrate_branch(sys, y0, z0, z1, opts);
  if (z1 < z0) {
    std::reverse(b.z.begin(), b.z.end());
    std::reverse(b.y.begin(), b.y.end());
  }
  return ProfileTrajectory(sys, z0, std::move(b.z), std::move(b.y));
}

ProfileTrajectory integrate_two_sided(const ReducedSystem& sys, const std::vector<double>& y0, double z0, double lo,
                                      double hi, const IntegrateOptions& opts) {
  check_options(opts);
  check_initial(sys, y0);
  if (!(lo <= z0 && z0 <= hi)) throw ConstraintError("integrate: origin must lie inside [lo, hi]");
  Branch left = integrate_branch(sys, y0, z0, lo, opts);
  Branch right = integrate_branch(sys, y0, z0, hi, opts);
  std::vector<double> z(left.z.rbegin(), left.z.rend());
  std::vector<std::vector<double>> y(left.y.rbegin(), left.y.rend());
  z.insert(z.end(), right.z.begin() + 1, right.z.end());
  y.insert(y.end(), right.y.begin() + 1, right.y.end());
  return ProfileTrajectory(sys, z0, std::move(z), std::move(y));
}

Densities closed_form_r38(const Fam40Spec& spec, double t) { return fam40_profiles(spec, t); }

bool Ansatz::traveling() const {
  return id == AnsatzId::A34 || id == AnsatzId::A44 || id == AnsatzId::T2a || id == AnsatzId::T2b ||
         id == AnsatzId::PlaneWave;
}

Densities Ansatz::reconstruct(const Densities& P, double t, double x) const {
  const double U = P.u, V = P.v, W = P.w;
  const auto q = [&] { return (a4 - 1.0) * V + W + (1.0 - a4) / a1; };
  double u = 0.0;
  switch (id) {
    case AnsatzId::PlaneWave: return P;
    case AnsatzId::A34: u = std::exp(-beta * a1 * t) * U; break;
    case AnsatzId::A37: u = U * std::exp(-beta * a1 * x); break;
    case AnsatzId::A44: {
      const double g = gamma * std::exp(t);
      return {U, V + (beta * t + g) * U - g, W};
    }
    case AnsatzId::T2a: u = std::exp(-beta * a1 * t) * U + gamma * std::exp(t) / (1.0 + beta * a1) * q(); break;
    case AnsatzId::T2b: u = std::exp(t) * (U + gamma * q() * t); break;
    case AnsatzId::T2c: u = std::exp(-beta * a1 * x) * U + gamma * std::exp(t) / (beta * a1) * q(); break;
    case AnsatzId::T2d: u = U + gamma * std::exp(t) * q() * x; break;
  }
  return {u, V - u / a1, W};
}

Ansatz ansatz_for(const ReducedSystem& s) {
  Ansatz a;
  a.alpha = s.alpha;
  a.beta = s.beta;
  a.gamma = s.gamma;
  a.a1 = s.params.a1;
  a.a4 = s.params.a4;
  switch (s.id) {
    case SystemId::R35: a.id = AnsatzId::A34; break;
    case SystemId::R38: a.id = AnsatzId::A37; break;
    case SystemId::R47: a.id = AnsatzId::A44; break;
    case SystemId::R58: a.id = AnsatzId::PlaneWave; break;
    case SystemId::T2a: a.id = AnsatzId::T2a; break;
    case SystemId::T2b: a.id = AnsatzId::T2b; break;
    case SystemId::T2c: a.id = AnsatzId::T2c; break;
    case SystemId::T2d: a.id = AnsatzId::T2d; break;
    case SystemId::L36: a.id = AnsatzId::A34; break;
    case SystemId::L52:
      a.id = AnsatzId::A44;
      if (s.semi) a.gamma = s.semi->gamma;
      break;
  }
  return a;
}

Solution reconstruct_solution(const Ansatz& ansatz, TripleProfile profiles) {
  return [ansatz, profiles = std::move(profiles)](double t, double x) {
    return ansatz.reconstruct(profiles(ansatz.variable(t, x)), t, x);
  };
}

TripleProfile trajectory_profiles(const ProfileTrajectory& traj) {
  const ReducedSystem& s = traj.system();
  const auto shared = std::make_shared<const ProfileTrajectory>(traj);
  if (s.profiles() == 3) {
    return [shared](double z) {
      const auto y = shared->at(z);
      return Densities{y[0], y[1], y[2]};
    };
  }
  if (!s.semi) throw ConstraintError("profile: linear profile equation has no semi-exact case attached");
  const SemiExactSpec spec = *s.semi;
  const bool q1_case = s.id == SystemId::L36;
  return [shared, spec, q1_case](double z) {
    const double P = shared->at(z)[0];
    Densities c = semi_exact_closed_part(spec, z);
    if (q1_case) {
      c.u = P;
    } else {
      c.v = P;
    }
    return c;
  };
}

ResidualReport verify_reduction(const ReducedSystem& sys, const Ansatz& ansatz, const Params& params,
                                TripleProfile profiles, const Window& window, const std::vector<double>& h_sequence) {
  if (ansatz.id != ansatz_for(sys).id)
    throw ConstraintError("verify_reduction: ansatz " + std::string(ansatz_name(ansatz.id)) +
                          " does not belong to system " + std::string(system_name(sys.id)));
  return refinement_study(params, reconstruct_solution(ansatz, std::move(profiles)), window, h_sequence);
}

ReducedSystem semi_profile_system(const SemiExactSpec& spec) {
  // Validates the case restrictions.
  (void)semi_exact_profile_ode(spec);
  ReducedSystem s;
  const Semi35Coefficients c = semi35_coefficients(spec);
  if (spec.c == SemiCase::s50 || spec.c == SemiCase::s51) {
    s = make_l52(spec.beta, spec.c, spec.c == SemiCase::s51 ? 1.0 + spec.a3 : spec.a4);
    s.gamma = spec.gamma;
  } else {
    s = make_l36(c.alpha, spec.a1, spec.beta, c.kappa1, c.kappa2);
    const double a4 = spec.c == SemiCase::s35_iii ? 1.0 + spec.a1 + spec.a3 : spec.a4;
    const double a3 = spec.c == SemiCase::s35_i ? 1.0 : (spec.c == SemiCase::s35_ii ? 0.0 : spec.a3);
    s.params = q1_params(spec.a1, a3, a4, 1.0);
  }
  SemiExactSpec stored = spec;
  if (spec.c == SemiCase::s35_iii) stored.a4 = 1.0 + spec.a1 + spec.a3;
  if (spec.c == SemiCase::s51) stored.a4 = 1.0 + spec.a3;
  s.semi = stored;
  return s;
}

ProfileTrajectory solve_semi_profile(const SemiExactSpec& spec, double lo, double hi,
                                     std::pair<double, double> initial, IntegrateOptions opts,
                                     std::optional<double> start) {
  const ReducedSystem s = semi_profile_system(spec);
  const double z0 = std::clamp(start.value_or(0.0), lo, hi);
  return integrate_two_sided(s, {initial.first, initial.second}, z0, lo, hi, opts);
}

ScalarProfile scalar_profile(const ProfileTrajectory& traj) {
  ScalarProfile p;
  p.lo = traj.lo();
  p.hi = traj.hi();
  const auto shared = std::make_shared<const ProfileTrajectory>(traj);
  p.value = [shared](double z) { return shared->at(z)[0]; };
  return p;
}

}  // namespace hgf
