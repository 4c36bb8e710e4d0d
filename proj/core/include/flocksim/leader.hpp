#pragma once

#include <limits>
#include <vector>

#include "flocksim/types.hpp"

namespace flocksim {

struct LeaderState {
  Vec q;
  Vec qd;
  Vec qdd;
};

/// Reference trajectory for the leader.  All kinds have analytically bounded
/// velocity and acceleration over any finite horizon, and sigma_l is computed
/// from the trajectory parameters, never estimated from samples.
struct LeaderTrajectory {
  enum class Kind { ConstantVelocity, Sinusoidal, CustomTable };

  Kind kind = Kind::ConstantVelocity;
  Vec q_initial;   // position at t = 0
  Vec v_initial;   // constant velocity, or initial velocity for CustomTable

  // Sinusoidal: qd(t) = [A sin(2 pi t / T), A cos(2 pi t / T), vz]
  double amplitude = 0.1;      // A, m/s
  double period = 60.0;        // T, s
  double vertical_rate = 0.2;  // vz, m/s

  // CustomTable: piecewise-constant acceleration segments, sorted by start
  // time with the first at t = 0; each holds until the next one starts.
  struct AccelSegment {
    double t_start = 0.0;
    Vec accel;
  };
  std::vector<AccelSegment> segments;

  void validate() const;

  /// Analytic upper bound on || 1_n (x) qdd_0 || = sqrt(n) * sup ||qdd_0||.
  double sigma_l(int n_followers) const;
};

/// Exact analytic state of the trajectory at time t.  Throws
/// ContractViolation when t < 0 or t > t_horizon.
LeaderState leader_state(const LeaderTrajectory& traj, double t,
                         double t_horizon = std::numeric_limits<double>::infinity());

}  // namespace flocksim
