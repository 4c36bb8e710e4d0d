#include "flocksim/topology.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "flocksim/errors.hpp"

namespace flocksim {

bool ProximityGraph::has_edge(int i, int j) const {
  if (i > j) std::swap(i, j);
  return std::binary_search(follower_edges.begin(), follower_edges.end(),
                            Edge{i, j});
}

ProximityGraph build_graph(const Vec& q0, const std::vector<Vec>& q, double R) {
  if (R <= 0.0) throw ConfigError("build_graph: sensing radius must be > 0");
  const auto p = q0.size();
  for (const auto& qi : q) {
    if (qi.size() != p)
      throw ConfigError("build_graph: position dimension mismatch");
  }
  ProximityGraph g;
  g.n = static_cast<int>(q.size());
  g.R = R;
  g.leader_adj.resize(g.n, 0);
  for (int i = 0; i < g.n; ++i) {
    g.leader_adj[i] = (q[i] - q0).norm() < R ? 1 : 0;
    for (int j = i + 1; j < g.n; ++j) {
      if ((q[i] - q[j]).norm() < R) g.follower_edges.emplace_back(i, j);
    }
  }
  // construction order is already sorted (i outer, j inner)
  return g;
}

TopologyMatrices matrices(const ProximityGraph& g) {
  const int n = g.n;
  const int ne = static_cast<int>(g.follower_edges.size());
  TopologyMatrices m;
  m.incidence = IntMat::Zero(n, ne);
  for (int k = 0; k < ne; ++k) {
    const auto [i, j] = g.follower_edges[k];
    m.incidence(i, k) = 1;   // lower index is the positive end
    m.incidence(j, k) = -1;
  }
  m.laplacian = m.incidence * m.incidence.transpose();
  m.leader_diag = IntMat::Zero(n, n);
  for (int i = 0; i < n; ++i) m.leader_diag(i, i) = g.leader_adj[i];
  m.topology = m.laplacian + m.leader_diag;
  return m;
}

bool leader_reaches_all(const ProximityGraph& g) {
  std::vector<std::vector<int>> adj(g.n);
  for (const auto& [i, j] : g.follower_edges) {
    adj[i].push_back(j);
    adj[j].push_back(i);
  }
  std::vector<char> seen(g.n, 0);
  std::queue<int> frontier;
  for (int i = 0; i < g.n; ++i) {
    if (g.leader_adj[i]) {
      seen[i] = 1;
      frontier.push(i);
    }
  }
  int reached = static_cast<int>(frontier.size());
  while (!frontier.empty()) {
    const int i = frontier.front();
    frontier.pop();
    for (int j : adj[i]) {
      if (!seen[j]) {
        seen[j] = 1;
        ++reached;
        frontier.push(j);
      }
    }
  }
  return reached == g.n;
}

double min_eig_sym(const Mat& m) {
  if (m.rows() != m.cols())
    throw ContractViolation("min_eig_sym: matrix is not square");
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12)
    throw ContractViolation("min_eig_sym: matrix is not symmetric");
  if (m.rows() == 0) throw ContractViolation("min_eig_sym: empty matrix");
  Eigen::SelfAdjointEigenSolver<Mat> solver(0.5 * (m + m.transpose()),
                                            Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

bool is_subgraph(const ProximityGraph& a, const ProximityGraph& b) {
  if (a.n != b.n)
    throw ConfigError("is_subgraph: graphs have different follower counts");
  for (int i = 0; i < a.n; ++i) {
    if (a.leader_adj[i] > b.leader_adj[i]) return false;
  }
  return std::includes(b.follower_edges.begin(), b.follower_edges.end(),
                       a.follower_edges.begin(), a.follower_edges.end());
}

}  // namespace flocksim
