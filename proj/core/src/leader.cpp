#include "flocksim/leader.hpp"

#include <cmath>

#include "flocksim/errors.hpp"

namespace flocksim {

namespace {
constexpr double kTwoPi = 2.0 * 3.14159265358979323846;
}

void LeaderTrajectory::validate() const {
  if (q_initial.size() == 0)
    throw ConfigError("leader: initial position is required");
  switch (kind) {
    case Kind::ConstantVelocity:
      if (v_initial.size() != q_initial.size())
        throw ConfigError("leader: velocity dimension mismatch");
      break;
    case Kind::Sinusoidal:
      if (q_initial.size() != 3)
        throw ConfigError("leader: sinusoidal trajectory is 3-dimensional");
      if (period <= 0.0) throw ConfigError("leader: period must be > 0");
      break;
    case Kind::CustomTable: {
      if (v_initial.size() != q_initial.size())
        throw ConfigError("leader: velocity dimension mismatch");
      if (segments.empty())
        throw ConfigError("leader: custom table needs at least one segment");
      if (segments.front().t_start != 0.0)
        throw ConfigError("leader: first custom segment must start at t = 0");
      for (std::size_t k = 0; k < segments.size(); ++k) {
        if (segments[k].accel.size() != q_initial.size())
          throw ConfigError("leader: segment acceleration dimension mismatch");
        if (k > 0 && segments[k].t_start <= segments[k - 1].t_start)
          throw ConfigError("leader: custom segments must be time-ordered");
      }
      break;
    }
  }
}

double LeaderTrajectory::sigma_l(int n_followers) const {
  const double root_n = std::sqrt(static_cast<double>(n_followers));
  switch (kind) {
    case Kind::ConstantVelocity:
      return 0.0;
    case Kind::Sinusoidal:
      return root_n * std::abs(amplitude) * kTwoPi / period;
    case Kind::CustomTable: {
      double worst = 0.0;
      for (const auto& seg : segments)
        worst = std::max(worst, seg.accel.norm());
      return root_n * worst;
    }
  }
  return 0.0;
}

LeaderState leader_state(const LeaderTrajectory& traj, double t,
                         double t_horizon) {
  if (t < 0.0 || t > t_horizon)
    throw ContractViolation("leader_state: time outside the horizon");
  LeaderState out;
  switch (traj.kind) {
    case LeaderTrajectory::Kind::ConstantVelocity:
      out.q = traj.q_initial + t * traj.v_initial;
      out.qd = traj.v_initial;
      out.qdd = Vec::Zero(traj.q_initial.size());
      break;
    case LeaderTrajectory::Kind::Sinusoidal: {
      const double w = kTwoPi / traj.period;
      const double a = traj.amplitude;
      out.q = traj.q_initial;
      out.q(0) += a / w * (1.0 - std::cos(w * t));
      out.q(1) += a / w * std::sin(w * t);
      out.q(2) += traj.vertical_rate * t;
      out.qd = Vec(3);
      out.qd << a * std::sin(w * t), a * std::cos(w * t), traj.vertical_rate;
      out.qdd = Vec(3);
      out.qdd << a * w * std::cos(w * t), -a * w * std::sin(w * t), 0.0;
      break;
    }
    case LeaderTrajectory::Kind::CustomTable: {
      Vec q = traj.q_initial;
      Vec v = traj.v_initial;
      for (std::size_t k = 0; k < traj.segments.size(); ++k) {
        const auto& seg = traj.segments[k];
        const bool last = k + 1 == traj.segments.size();
        const double seg_end =
            last ? std::numeric_limits<double>::infinity()
                 : traj.segments[k + 1].t_start;
        const double h = std::min(t, seg_end) - seg.t_start;
        q += h * v + 0.5 * h * h * seg.accel;
        v += h * seg.accel;
        if (t <= seg_end) {
          out.q = q;
          out.qd = v;
          out.qdd = seg.accel;
          return out;
        }
      }
      break;
    }
  }
  return out;
}

}  // namespace flocksim
