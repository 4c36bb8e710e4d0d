#pragma once

#include <vector>

#include "flocksim/types.hpp"

namespace flocksim {

/// Pair regime, frozen at t = 0 from the initial separation.
///   Free:    initial separation >= R; the gradient vanishes for d >= R.
///   Barrier: initial separation < R; the potential blows up at d -> R so
///            the pair can never separate past the sensing radius.
enum class PairRegime { Free, Barrier };

/// Shape parameters of the pairwise potential family.  The gradient is
/// radial with a unique zero at d = dbar; below dbar both regimes share an
/// inverse-square collision branch.
struct PotentialParams {
  double R = 200.0;            // sensing radius, m
  double dbar = 80.0;          // unique-minimum separation, m
  double smooth_scale = 250.0; // divisor of the cosine and collision branches
  double barrier_scale = 25.0; // divisor of the barrier branch
  double cosine_wavenumber = 0.1 * 3.14159265358979323846;  // rad/m

  void validate() const;  // throws ConfigError unless 0 < dbar < R
};

/// Pairwise potential field with per-regime evaluation.  Values are
/// reconstructed from the radial derivative by adaptive quadrature and
/// shifted so the minimum over the valid domain is zero; they exist for
/// Lyapunov diagnostics only and never enter the control laws.
class PotentialField {
 public:
  explicit PotentialField(const PotentialParams& params);

  const PotentialParams& params() const { return params_; }

  /// dV/dd at separation d.  Throws BarrierViolation at d = 0 (collision)
  /// and, in the Barrier regime, for d >= R.
  double radial_derivative(double d, PairRegime regime) const;

  /// dV/dq_i; antisymmetric in (q_i, q_j) by construction.
  Vec gradient(const Vec& qi, const Vec& qj, PairRegime regime) const;

  /// V(d) >= 0 by quadrature of the radial derivative from dbar to d.
  double value(double d, PairRegime regime) const;

 private:
  double unshifted_value(double d, PairRegime regime) const;

  PotentialParams params_;
  double shift_free_ = 0.0;
  double shift_barrier_ = 0.0;
};

/// Potential specification for a whole team: shared field parameters plus
/// the per-pair regime table frozen from the initial positions.  Agents are
/// indexed 0..n with 0 the leader.
class PotentialSpec {
 public:
  PotentialSpec(const PotentialParams& params, const Vec& q0_initial,
                const std::vector<Vec>& q_initial);

  const PotentialField& field() const { return field_; }
  int agent_count() const { return n_agents_; }

  bool initially_connected(int a, int b) const;
  PairRegime regime(int a, int b) const;

  Vec gradient(int a, int b, const Vec& qa, const Vec& qb) const;
  double value(int a, int b, double d) const;

 private:
  PotentialField field_;
  int n_agents_;
  std::vector<std::uint8_t> connected_;  // symmetric n_agents x n_agents
};

}  // namespace flocksim
