#pragma once

#include <utility>
#include <vector>

#include "flocksim/types.hpp"

namespace flocksim {

/// Undirected follower edge {i, j} with i < j (0-based follower indices).
using Edge = std::pair<int, int>;

/// Interaction topology of one leader and n followers, derived from agent
/// positions and the sensing radius R.  Followers i and j are neighbors iff
/// ||q_i - q_j|| < R (strict); the leader is a neighbor of follower i iff
/// ||q_i - q_0|| < R.
struct ProximityGraph {
  int n = 0;                       // follower count
  std::vector<Edge> follower_edges;  // sorted lexicographically, i < j
  std::vector<std::uint8_t> leader_adj;  // a_{i0} per follower
  double R = 0.0;                  // sensing radius, m

  bool has_edge(int i, int j) const;
};

/// Integer matrix objects associated with a ProximityGraph.
///   L_F = D_F D_F^T  (follower Laplacian, exact in integer arithmetic)
///   Lambda = diag(a_{10}, ..., a_{n0})
///   H = L_F + Lambda (leader-follower topology matrix)
/// Incidence orientation: the lower-index node of an edge is its positive end.
struct TopologyMatrices {
  IntMat laplacian;   // L_F, n x n
  IntMat incidence;   // D_F, n x N
  IntMat leader_diag; // Lambda, n x n
  IntMat topology;    // H, n x n

  Mat laplacian_d() const { return laplacian.cast<double>(); }
  Mat topology_d() const { return topology.cast<double>(); }
};

/// Builds the proximity graph from the leader position q0 and follower
/// positions q at sensing radius R.  Throws ConfigError on dimension
/// mismatch or R <= 0.
ProximityGraph build_graph(const Vec& q0, const std::vector<Vec>& q, double R);

/// Computes L_F, D_F, Lambda and H for a graph.
TopologyMatrices matrices(const ProximityGraph& g);

/// True iff every follower is reachable from the leader through a leader
/// edge followed by follower edges.
bool leader_reaches_all(const ProximityGraph& g);

/// Smallest eigenvalue of a symmetric matrix.  M must be symmetric within
/// 1e-12 entrywise; throws ContractViolation otherwise.
double min_eig_sym(const Mat& m);

/// True iff a's follower edges and leader adjacency are contained in b's.
/// Throws ConfigError when the follower counts differ.
bool is_subgraph(const ProximityGraph& a, const ProximityGraph& b);

}  // namespace flocksim
