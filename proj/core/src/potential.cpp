#include "flocksim/potential.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "flocksim/errors.hpp"

namespace flocksim {

namespace {

// Adaptive Simpson quadrature; integrands here are smooth within a branch.
double simpson(const std::function<double(double)>& f, double a, double fa,
               double b, double fb, double fm, double whole, double tol,
               int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return simpson(f, a, fa, m, fm, flm, left, 0.5 * tol, depth - 1) +
         simpson(f, m, fm, b, fb, frm, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-12) {
  if (a == b) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson(f, a, fa, b, fb, fm, whole, tol, 48);
}

}  // namespace

void PotentialParams::validate() const {
  if (!(dbar > 0.0) || !(R > dbar))
    throw ConfigError("potential: requires 0 < dbar < R");
  if (smooth_scale <= 0.0 || barrier_scale <= 0.0)
    throw ConfigError("potential: scale constants must be > 0");
  if (cosine_wavenumber <= 0.0)
    throw ConfigError("potential: cosine wavenumber must be > 0");
}

PotentialField::PotentialField(const PotentialParams& params)
    : params_(params) {
  params_.validate();
  // Shift each regime so the reconstructed value is nonnegative.  The
  // minimum is located by a coarse scan plus golden-section refinement.
  for (const PairRegime regime : {PairRegime::Free, PairRegime::Barrier}) {
    const double lo = params_.dbar * 1e-2;
    const double hi = regime == PairRegime::Free
                          ? params_.R
                          : params_.R * (1.0 - 1e-9);
    constexpr int kGrid = 512;
    double best_d = params_.dbar;
    double best_v = unshifted_value(best_d, regime);
    for (int k = 0; k <= kGrid; ++k) {
      const double d = lo + (hi - lo) * k / kGrid;
      const double v = unshifted_value(d, regime);
      if (v < best_v) {
        best_v = v;
        best_d = d;
      }
    }
    double a = std::max(lo, best_d - (hi - lo) / kGrid);
    double b = std::min(hi, best_d + (hi - lo) / kGrid);
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = unshifted_value(x1, regime), f2 = unshifted_value(x2, regime);
    for (int it = 0; it < 80 && (b - a) > 1e-12; ++it) {
      if (f1 < f2) {
        b = x2; x2 = x1; f2 = f1;
        x1 = b - phi * (b - a);
        f1 = unshifted_value(x1, regime);
      } else {
        a = x1; x1 = x2; f1 = f2;
        x2 = a + phi * (b - a);
        f2 = unshifted_value(x2, regime);
      }
    }
    const double vmin = std::min(best_v, std::min(f1, f2));
    const double shift = vmin < 0.0 ? -vmin : 0.0;
    (regime == PairRegime::Free ? shift_free_ : shift_barrier_) = shift;
  }
}

double PotentialField::radial_derivative(double d, PairRegime regime) const {
  if (d <= 0.0)
    throw BarrierViolation("potential: collision singularity (separation 0)");
  if (regime == PairRegime::Barrier && d >= params_.R)
    throw BarrierViolation(
        "potential: initially connected pair reached the sensing radius");
  if (d <= params_.dbar)
    return (d - params_.dbar) / (params_.smooth_scale * d);
  if (regime == PairRegime::Free) {
    if (d >= params_.R) return 0.0;
    return std::cos(params_.cosine_wavenumber * (d - params_.dbar)) /
           params_.smooth_scale;
  }
  const double w = d - params_.R;
  return (d - params_.dbar) / (params_.barrier_scale * w * w);
}

Vec PotentialField::gradient(const Vec& qi, const Vec& qj,
                             PairRegime regime) const {
  if (qi.size() != qj.size())
    throw ContractViolation("potential gradient: dimension mismatch");
  const Vec diff = qi - qj;
  const double d = diff.norm();
  if (d == 0.0)
    throw BarrierViolation("potential: collision singularity (separation 0)");
  return (radial_derivative(d, regime) / d) * diff;
}

double PotentialField::unshifted_value(double d, PairRegime regime) const {
  if (d <= 0.0)
    throw BarrierViolation("potential: collision singularity (separation 0)");
  if (regime == PairRegime::Barrier && d >= params_.R)
    throw BarrierViolation(
        "potential: initially connected pair reached the sensing radius");
  // The Free-regime derivative vanishes beyond R, so clamp the upper limit.
  const double upper =
      regime == PairRegime::Free ? std::min(d, params_.R) : d;
  return integrate(
      [&](double s) { return radial_derivative(s, regime); }, params_.dbar,
      upper);
}

double PotentialField::value(double d, PairRegime regime) const {
  const double shift =
      regime == PairRegime::Free ? shift_free_ : shift_barrier_;
  return unshifted_value(d, regime) + shift;
}

PotentialSpec::PotentialSpec(const PotentialParams& params,
                             const Vec& q0_initial,
                             const std::vector<Vec>& q_initial)
    : field_(params), n_agents_(static_cast<int>(q_initial.size()) + 1) {
  connected_.assign(static_cast<std::size_t>(n_agents_) * n_agents_, 0);
  auto set = [&](int a, int b, bool c) {
    connected_[static_cast<std::size_t>(a) * n_agents_ + b] = c;
    connected_[static_cast<std::size_t>(b) * n_agents_ + a] = c;
  };
  auto pos = [&](int a) -> const Vec& {
    return a == 0 ? q0_initial : q_initial[a - 1];
  };
  for (int a = 0; a < n_agents_; ++a) {
    for (int b = a + 1; b < n_agents_; ++b) {
      if (pos(a).size() != pos(b).size())
        throw ConfigError("potential spec: position dimension mismatch");
      set(a, b, (pos(a) - pos(b)).norm() < params.R);
    }
  }
}

bool PotentialSpec::initially_connected(int a, int b) const {
  if (a < 0 || b < 0 || a >= n_agents_ || b >= n_agents_ || a == b)
    throw ContractViolation("potential spec: invalid agent pair");
  return connected_[static_cast<std::size_t>(a) * n_agents_ + b] != 0;
}

PairRegime PotentialSpec::regime(int a, int b) const {
  return initially_connected(a, b) ? PairRegime::Barrier : PairRegime::Free;
}

Vec PotentialSpec::gradient(int a, int b, const Vec& qa, const Vec& qb) const {
  return field_.gradient(qa, qb, regime(a, b));
}

double PotentialSpec::value(int a, int b, double d) const {
  return field_.value(d, regime(a, b));
}

}  // namespace flocksim
