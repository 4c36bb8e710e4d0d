#include "flocksim/plant.hpp"

#include <cmath>

#include "flocksim/errors.hpp"

namespace flocksim {

Vec PlantModel::accel(const Vec& q, const Vec& qd, const Vec& u) const {
  return mass_matrix(q).ldlt().solve(u - coriolis(q, qd) * qd - gravity(q));
}

double SpacecraftParams::mean_motion() const {
  return std::sqrt(mu_earth / (r0 * r0 * r0));
}

void SpacecraftParams::validate() const {
  if (mass <= 0.0) throw ConfigError("spacecraft mass must be > 0");
  if (r0 <= 0.0) throw ConfigError("reference orbit radius must be > 0");
  if (mu_earth <= 0.0) throw ConfigError("gravitational constant must be > 0");
}

SpacecraftPlant::SpacecraftPlant(const SpacecraftParams& params)
    : params_(params) {
  params_.validate();
  n0_ = params_.mean_motion();
}

Vec SpacecraftPlant::theta_true() const {
  Vec theta(1);
  theta(0) = params_.mass;
  return theta;
}

std::pair<double, double> SpacecraftPlant::inertia_bounds() const {
  return {params_.mass, params_.mass};
}

Mat SpacecraftPlant::mass_matrix(const Vec&) const {
  return params_.mass * Mat::Identity(3, 3);
}

Mat SpacecraftPlant::coriolis_unit() const {
  Mat c = Mat::Zero(3, 3);
  c(0, 1) = -2.0 * n0_;
  c(1, 0) = 2.0 * n0_;
  return c;
}

Vec SpacecraftPlant::gravity_unit(const Vec& q) const {
  const double x = q(0), y = q(1), z = q(2);
  const double r0 = params_.r0, mu = params_.mu_earth;
  const double ri = std::sqrt((r0 + x) * (r0 + x) + y * y + z * z);
  if (ri <= 0.0)
    throw ContractViolation("spacecraft gravity: singular radius");
  const double ri3 = ri * ri * ri;
  const double n0sq = n0_ * n0_;
  Vec g(3);
  g(0) = -n0sq * x + mu * (r0 + x) / ri3 - mu / (r0 * r0);
  g(1) = -n0sq * y + mu * y / ri3;
  g(2) = mu * z / ri3;
  return g;
}

Mat SpacecraftPlant::coriolis(const Vec&, const Vec&) const {
  return params_.mass * coriolis_unit();
}

Vec SpacecraftPlant::gravity(const Vec& q) const {
  return params_.mass * gravity_unit(q);
}

Mat SpacecraftPlant::regressor(const Vec& q, const Vec&, const Vec& x,
                               const Vec& y) const {
  // M x + C y + g = m (x + C_unit y + g_unit), so Y is the parenthesized column.
  return x + coriolis_unit() * y + gravity_unit(q);
}

}  // namespace flocksim
