#pragma once

#include <optional>
#include <vector>

#include "flocksim/plant.hpp"
#include "flocksim/types.hpp"

namespace flocksim {

enum class ControllerKind { ConstVel, Varying, Adaptive };
enum class SgnMode { Exact, Tanh };

/// Which relative velocity drives the edge-gain adaptation of the fully
/// distributed law.  PerEdge uses the measured neighbor-relative velocity
/// (one-hop information only).  Printed uses the leader-relative velocity
/// for every edge and therefore needs the leader's velocity globally; it is
/// kept for fidelity experiments.
enum class GainLaw { PerEdge, Printed };

struct ControllerParams {
  ControllerKind kind = ControllerKind::ConstVel;
  double gamma = 0.04;   // velocity-consensus gain (ConstVel)
  double alpha = 0.04;   // switching gain (Varying)
  Mat Gamma;             // p_theta x p_theta SPD parameter-adaptation gain
  double gamma1 = 0.003;  // edge-gain adaptation rate (Adaptive)
  double gamma2 = 0.003;  // sliding-gain adaptation rate (Adaptive)
  SgnMode sgn_mode = SgnMode::Tanh;
  double tanh_k = 1000.0;
  GainLaw gain_law = GainLaw::PerEdge;
};

/// One-hop measurement of neighbor j taken by follower i.  Instances exist
/// only for agents inside i's proximity set, so a controller has no access
/// path to non-neighbor state.
struct NeighborMeasurement {
  int index = 0;   // agent index, 0 is the leader
  Vec rel_pos;     // q_i - q_j
  Vec rel_vel;     // qd_i - qd_j
  bool is_leader = false;
};

/// Follower-side controller memory.
struct ControllerState {
  Vec v;          // estimate of the leader velocity
  Vec theta_hat;  // parameter estimate
  Vec alpha;      // adaptive edge gains indexed by agent index (entry self unused)
  double beta = 0.0;  // adaptive sliding gain

  static ControllerState zero(int p, int p_theta, int n_agents);
};

struct ControlOutput {
  Vec u;              // control force
  Vec u_hat;          // force before the regressor feedforward
  Vec v_dot;          // estimator rate
  Vec theta_hat_dot;  // parameter-estimate rate
  Vec alpha_dot;      // edge-gain rates (zero-size or zero for fixed-gain laws)
  double beta_dot = 0.0;
};

/// Own absolute measurements of follower i.
struct OwnMeasurement {
  Vec q;
  Vec qd;
};

/// s_i = qd_i - v_i.
Vec sliding_var(const Vec& qd, const Vec& v);

/// Leader-relative diagnostics: q_tilde = q - q0, v_tilde = v - qd0.
struct LeaderRelative {
  Vec q_tilde;
  Vec v_tilde;
};
LeaderRelative leader_relative(const Vec& q, const Vec& v, const Vec& q0,
                               const Vec& qd0);

/// Componentwise signum, or tanh(k x) when mode is Tanh.
Vec sgn_smooth(const Vec& x, SgnMode mode, double k);

/// Continuous adaptive law for a constant-velocity leader:
///   u_hat = -sum grad V - gamma * sum (qd_i - qd_j)
///   v_dot = u_hat
///   u = u_hat + Y(q, qd, v_dot, v) theta_hat
///   theta_hat_dot = -Gamma Y^T s
/// potential_gradients[k] is dV/dq_i against neighbors[k] (already capped by
/// the caller when a cap is configured).
ControlOutput control_const_vel(const OwnMeasurement& own,
                                const ControllerState& state,
                                const std::vector<NeighborMeasurement>& neighbors,
                                const std::vector<Vec>& potential_gradients,
                                const ControllerParams& params,
                                const PlantModel& plant);

/// Discontinuous law for a varying-velocity leader (signum optionally
/// smoothed):
///   v_dot = -sum grad V - alpha * sum sgn(qd_i - qd_j)
///   u_hat = v_dot - alpha * sgn(s)
ControlOutput control_varying(const OwnMeasurement& own,
                              const ControllerState& state,
                              const std::vector<NeighborMeasurement>& neighbors,
                              const std::vector<Vec>& potential_gradients,
                              const ControllerParams& params,
                              const PlantModel& plant);

/// Fully distributed law with gain adaptation:
///   v_dot = -sum grad V - sum alpha_ij sgn(qd_i - qd_j)
///   u_hat = v_dot - beta * sgn(s)
///   alpha_ij_dot = gamma1 * |relative velocity|_1 per present edge
///   beta_dot = gamma2 * |s|_1
/// leader_rel_vel (qd_i - qd_0) must be supplied iff gain_law is Printed.
ControlOutput control_adaptive(const OwnMeasurement& own,
                               const ControllerState& state,
                               const std::vector<NeighborMeasurement>& neighbors,
                               const std::vector<Vec>& potential_gradients,
                               const ControllerParams& params,
                               const PlantModel& plant,
                               const std::optional<Vec>& leader_rel_vel = {});

/// Dispatch on params.kind.
ControlOutput control_step(const OwnMeasurement& own,
                           const ControllerState& state,
                           const std::vector<NeighborMeasurement>& neighbors,
                           const std::vector<Vec>& potential_gradients,
                           const ControllerParams& params,
                           const PlantModel& plant,
                           const std::optional<Vec>& leader_rel_vel = {});

}  // namespace flocksim
