#pragma once

#include <memory>

#include "flocksim/types.hpp"

namespace flocksim {

/// Euler-Lagrange plant  M(q) qdd + C(q, qd) qd + g(q) = u  with
///   (P1)  k_m I <= M(q) <= k_M I
///   (P2)  Mdot - 2C skew symmetric
///   (P3)  M x + C y + g = Y(q, qd, x, y) theta  for the true parameters.
/// theta_true is simulation ground truth; controllers never read it.
class PlantModel {
 public:
  virtual ~PlantModel() = default;

  virtual int config_dim() const = 0;  // p
  virtual int param_dim() const = 0;   // p_theta
  virtual Vec theta_true() const = 0;

  /// Declared P1 bounds (k_m, k_M) on the inertia eigenvalues.
  virtual std::pair<double, double> inertia_bounds() const = 0;

  virtual Mat mass_matrix(const Vec& q) const = 0;
  virtual Mat coriolis(const Vec& q, const Vec& qd) const = 0;
  virtual Vec gravity(const Vec& q) const = 0;

  /// Regression matrix Y with  M x + C y + g = Y theta_true  exactly.
  virtual Mat regressor(const Vec& q, const Vec& qd, const Vec& x,
                        const Vec& y) const = 0;

  /// qdd = M(q)^{-1} (u - C qd - g).
  Vec accel(const Vec& q, const Vec& qd, const Vec& u) const;
};

/// Spacecraft relative motion about a circular reference orbit of radius r0,
/// expressed in the rotating LVLH frame of the reference point.
struct SpacecraftParams {
  double mass = 1.0;                 // kg
  double r0 = 7.0e6;                 // chief orbit radius, m
  double mu_earth = 3.986004418e14;  // m^3/s^2

  double mean_motion() const;  // n0 = sqrt(mu_earth / r0^3), rad/s
  void validate() const;       // throws ConfigError on nonpositive values
};

/// Concrete plant instance: M = m I3, C the 2*n0 rotating-frame coupling,
/// g the differential-gravity vector; the single unknown parameter is the
/// mass, so Y is a 3x1 column with Y * m = M x + C y + g.
class SpacecraftPlant final : public PlantModel {
 public:
  explicit SpacecraftPlant(const SpacecraftParams& params);

  int config_dim() const override { return 3; }
  int param_dim() const override { return 1; }
  Vec theta_true() const override;
  std::pair<double, double> inertia_bounds() const override;

  Mat mass_matrix(const Vec& q) const override;
  Mat coriolis(const Vec& q, const Vec& qd) const override;
  Vec gravity(const Vec& q) const override;
  Mat regressor(const Vec& q, const Vec& qd, const Vec& x,
                const Vec& y) const override;

  const SpacecraftParams& params() const { return params_; }

 private:
  // mass-normalized pieces; the full terms are the mass times these
  Mat coriolis_unit() const;
  Vec gravity_unit(const Vec& q) const;

  SpacecraftParams params_;
  double n0_;
};

}  // namespace flocksim
