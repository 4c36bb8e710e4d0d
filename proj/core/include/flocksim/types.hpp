#pragma once

#include <Eigen/Dense>
#include <vector>

namespace flocksim {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using IntMat = Eigen::MatrixXi;
using IntVec = Eigen::VectorXi;

/// Generalized position and velocity of a single agent.
struct AgentState {
  Vec q;   // position, m
  Vec qd;  // velocity, m/s
};

}  // namespace flocksim
