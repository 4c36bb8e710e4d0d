#pragma once

#include <memory>
#include <string>
#include <vector>

#include "flocksim/control.hpp"
#include "flocksim/leader.hpp"
#include "flocksim/plant.hpp"
#include "flocksim/potential.hpp"
#include "flocksim/topology.hpp"
#include "flocksim/types.hpp"

namespace flocksim {

/// Complete description of one closed-loop run.
struct Scenario {
  std::string name = "scenario";
  std::vector<std::shared_ptr<const PlantModel>> plants;  // one per follower
  PotentialParams potential;
  ControllerParams controller;
  LeaderTrajectory leader;
  std::vector<Vec> q_initial;   // follower positions at t = 0
  std::vector<Vec> qd_initial;  // follower velocities at t = 0
  double dt = 0.01;             // s
  double t_end = 300.0;         // s
  double gradient_cap = 1000.0; // per-pair gradient norm cap
  int decimation = 10;          // log every this many ticks
  // Surrogates for the gain-adaptation Lyapunov term; <= 0 derives them
  // from sigma_l and lambda_min(H(0)) at run time.
  double alpha_bar = 0.0;
  double beta_bar = 0.0;

  int followers() const { return static_cast<int>(plants.size()); }
  void validate() const;
};

/// Edge appearing or disappearing at a tick boundary.  Agent indices are
/// 0..n with 0 the leader.
struct EdgeEvent {
  double t = 0.0;
  int a = 0;
  int b = 0;
  bool added = true;
};

/// Post-processed series derived from a log.
struct Diagnostics {
  std::vector<double> v1, v2, v3, v_total;       // Lyapunov candidates
  std::vector<std::vector<double>> vel_err;      // [sample][follower]
  std::vector<double> min_dist;                  // all-pairs, per sample
  std::vector<double> lambda_min_h;              // per sample
  double lambda_min_h0 = 0.0;
  double sigma_l = 0.0;
  double gain_threshold = 0.0;  // max(sigma_l, sigma_l / sqrt(lambda_min_h0))
  bool gain_condition_applicable = false;  // fixed-gain varying-velocity law
  bool gain_condition_holds = false;
  int edges_added = 0;    // distinct pairs ever present beyond the t=0 graph
  int edges_lost = 0;     // distinct t=0 pairs ever removed
  int add_events = 0;
  int remove_events = 0;
  double min_distance_floor = 0.0;  // all pairs, every tick
  double connected_min = 0.0;       // extrema of initially-connected pair
  double connected_max = 0.0;       //   separations over every tick
  long cap_engagements = 0;
};

/// Full record of one run at the configured decimation, plus every-tick
/// edge bookkeeping.
struct SimLog {
  int n = 0;
  bool adaptive_gains = false;
  std::vector<double> t;
  std::vector<LeaderState> leader;
  std::vector<std::vector<AgentState>> agents;       // [sample][follower]
  std::vector<std::vector<ControllerState>> ctrl;    // [sample][follower]
  std::vector<EdgeEvent> events;
  std::vector<std::uint64_t> edge_hashes;            // one per tick
  std::vector<Edge> initial_edges;
  std::vector<std::uint8_t> initial_leader_adj;
  std::vector<std::string> warnings;
  double min_distance_floor = 0.0;
  double connected_min = 0.0;
  double connected_max = 0.0;
  long cap_engagements = 0;
  Diagnostics diag;
};

/// Integrator state between ticks.  The proximity graph and the pair
/// regimes are owned here: the graph is rebuilt at every tick start and
/// frozen across the RK4 stages; the regimes are frozen at t = 0.
struct SimState {
  double t = 0.0;
  long tick = 0;
  std::vector<AgentState> agents;
  std::vector<ControllerState> ctrl;
  ProximityGraph graph;
  std::shared_ptr<const PotentialSpec> pair_regimes;
  long cap_engagements = 0;
};

/// Initial state at t = 0 (validates the scenario, freezes pair regimes,
/// builds the initial graph, and runs the safety checks).
SimState init_state(const Scenario& scenario);

/// Advances one tick with classical fixed-step RK4; the graph used for the
/// stage evaluations is the one stored in the input state, and the returned
/// state carries the freshly rebuilt graph.  Throws BarrierViolation or
/// NumericalDivergence as the run becomes invalid.
SimState step(const SimState& state, const Scenario& scenario);

/// Full deterministic run: identical scenarios give identical logs.
SimLog run(const Scenario& scenario);

/// Control outputs each follower would issue at the state's tick; exposes
/// the per-tick measurement construction for tests and inspection.
std::vector<ControlOutput> tick_controls(const SimState& state,
                                         const Scenario& scenario);

/// Lyapunov candidates and flocking metrics for a completed log.
Diagnostics diagnostics(const SimLog& log, const Scenario& scenario,
                        const std::vector<Vec>& theta_true);

}  // namespace flocksim
