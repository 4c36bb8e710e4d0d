#include "flocksim/control.hpp"

#include <cmath>

#include "flocksim/errors.hpp"

namespace flocksim {

namespace {

void check_common(const std::vector<NeighborMeasurement>& neighbors,
                  const std::vector<Vec>& gradients,
                  const ControllerParams& params) {
  if (neighbors.size() != gradients.size())
    throw ContractViolation(
        "controller: one potential gradient per neighbor is required");
  if (params.Gamma.rows() != params.Gamma.cols() || params.Gamma.rows() == 0)
    throw ContractViolation("controller: Gamma must be square and nonempty");
  if ((params.Gamma - params.Gamma.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw ContractViolation("controller: Gamma must be symmetric");
  Eigen::SelfAdjointEigenSolver<Mat> es(params.Gamma, Eigen::EigenvaluesOnly);
  if (es.eigenvalues()(0) <= 0.0)
    throw ContractViolation("controller: Gamma must be positive definite");
  if (params.sgn_mode == SgnMode::Tanh && params.tanh_k <= 0.0)
    throw ContractViolation("controller: tanh smoothing slope must be > 0");
}

Vec gradient_sum(const std::vector<Vec>& gradients, int p) {
  Vec sum = Vec::Zero(p);
  for (const auto& g : gradients) sum += g;
  return sum;
}

// Finishes an output: u = u_hat + Y theta_hat, theta_hat_dot = -Gamma Y^T s.
// Y is evaluated at (x, y) = (v_dot, v); v_dot never depends on theta_hat,
// so it is computed by the caller first.
void close_with_regressor(const OwnMeasurement& own,
                          const ControllerState& state,
                          const ControllerParams& params,
                          const PlantModel& plant, ControlOutput& out) {
  const Mat y = plant.regressor(own.q, own.qd, out.v_dot, state.v);
  const Vec s = sliding_var(own.qd, state.v);
  out.u = out.u_hat + y * state.theta_hat;
  out.theta_hat_dot = -params.Gamma * (y.transpose() * s);
}

}  // namespace

ControllerState ControllerState::zero(int p, int p_theta, int n_agents) {
  ControllerState st;
  st.v = Vec::Zero(p);
  st.theta_hat = Vec::Zero(p_theta);
  st.alpha = Vec::Zero(n_agents);
  st.beta = 0.0;
  return st;
}

Vec sliding_var(const Vec& qd, const Vec& v) { return qd - v; }

LeaderRelative leader_relative(const Vec& q, const Vec& v, const Vec& q0,
                               const Vec& qd0) {
  return {q - q0, v - qd0};
}

Vec sgn_smooth(const Vec& x, SgnMode mode, double k) {
  Vec out(x.size());
  if (mode == SgnMode::Exact) {
    for (Eigen::Index i = 0; i < x.size(); ++i)
      out(i) = x(i) > 0.0 ? 1.0 : (x(i) < 0.0 ? -1.0 : 0.0);
  } else {
    for (Eigen::Index i = 0; i < x.size(); ++i) out(i) = std::tanh(k * x(i));
  }
  return out;
}

ControlOutput control_const_vel(const OwnMeasurement& own,
                                const ControllerState& state,
                                const std::vector<NeighborMeasurement>& neighbors,
                                const std::vector<Vec>& potential_gradients,
                                const ControllerParams& params,
                                const PlantModel& plant) {
  check_common(neighbors, potential_gradients, params);
  if (params.gamma <= 0.0)
    throw ContractViolation("control_const_vel: gamma must be > 0");
  const int p = static_cast<int>(own.q.size());

  Vec u_hat = -gradient_sum(potential_gradients, p);
  for (const auto& nbr : neighbors) u_hat -= params.gamma * nbr.rel_vel;

  ControlOutput out;
  out.u_hat = u_hat;
  out.v_dot = u_hat;  // same right-hand side by definition
  out.alpha_dot = Vec::Zero(state.alpha.size());
  out.beta_dot = 0.0;
  close_with_regressor(own, state, params, plant, out);
  return out;
}

ControlOutput control_varying(const OwnMeasurement& own,
                              const ControllerState& state,
                              const std::vector<NeighborMeasurement>& neighbors,
                              const std::vector<Vec>& potential_gradients,
                              const ControllerParams& params,
                              const PlantModel& plant) {
  check_common(neighbors, potential_gradients, params);
  if (params.alpha <= 0.0)
    throw ContractViolation("control_varying: alpha must be > 0");
  const int p = static_cast<int>(own.q.size());

  Vec v_dot = -gradient_sum(potential_gradients, p);
  for (const auto& nbr : neighbors)
    v_dot -= params.alpha * sgn_smooth(nbr.rel_vel, params.sgn_mode, params.tanh_k);

  const Vec s = sliding_var(own.qd, state.v);
  ControlOutput out;
  out.v_dot = v_dot;
  out.u_hat = v_dot - params.alpha * sgn_smooth(s, params.sgn_mode, params.tanh_k);
  out.alpha_dot = Vec::Zero(state.alpha.size());
  out.beta_dot = 0.0;
  close_with_regressor(own, state, params, plant, out);
  return out;
}

ControlOutput control_adaptive(const OwnMeasurement& own,
                               const ControllerState& state,
                               const std::vector<NeighborMeasurement>& neighbors,
                               const std::vector<Vec>& potential_gradients,
                               const ControllerParams& params,
                               const PlantModel& plant,
                               const std::optional<Vec>& leader_rel_vel) {
  check_common(neighbors, potential_gradients, params);
  if (params.gamma1 <= 0.0 || params.gamma2 <= 0.0)
    throw ContractViolation("control_adaptive: gamma1 and gamma2 must be > 0");
  if (params.gain_law == GainLaw::Printed && !leader_rel_vel)
    throw ContractViolation(
        "control_adaptive: printed gain law needs the leader-relative velocity");
  const int p = static_cast<int>(own.q.size());

  Vec v_dot = -gradient_sum(potential_gradients, p);
  Vec alpha_dot = Vec::Zero(state.alpha.size());
  for (const auto& nbr : neighbors) {
    if (nbr.index >= state.alpha.size())
      throw ContractViolation("control_adaptive: gain table too small");
    v_dot -= state.alpha(nbr.index) *
             sgn_smooth(nbr.rel_vel, params.sgn_mode, params.tanh_k);
    const Vec& drive = params.gain_law == GainLaw::PerEdge
                           ? nbr.rel_vel
                           : *leader_rel_vel;
    alpha_dot(nbr.index) = params.gamma1 * drive.lpNorm<1>();
  }

  const Vec s = sliding_var(own.qd, state.v);
  ControlOutput out;
  out.v_dot = v_dot;
  out.u_hat = v_dot - state.beta * sgn_smooth(s, params.sgn_mode, params.tanh_k);
  out.alpha_dot = alpha_dot;
  out.beta_dot = params.gamma2 * s.lpNorm<1>();
  close_with_regressor(own, state, params, plant, out);
  return out;
}

ControlOutput control_step(const OwnMeasurement& own,
                           const ControllerState& state,
                           const std::vector<NeighborMeasurement>& neighbors,
                           const std::vector<Vec>& potential_gradients,
                           const ControllerParams& params,
                           const PlantModel& plant,
                           const std::optional<Vec>& leader_rel_vel) {
  switch (params.kind) {
    case ControllerKind::ConstVel:
      return control_const_vel(own, state, neighbors, potential_gradients,
                               params, plant);
    case ControllerKind::Varying:
      return control_varying(own, state, neighbors, potential_gradients,
                             params, plant);
    case ControllerKind::Adaptive:
      return control_adaptive(own, state, neighbors, potential_gradients,
                              params, plant, leader_rel_vel);
  }
  throw ContractViolation("control_step: unknown controller kind");
}

}  // namespace flocksim
