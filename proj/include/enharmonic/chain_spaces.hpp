#pragma once

#include <Eigen/Dense>

#include "enharmonic/network.hpp"

namespace enharmonic {

/// Incidence operator and orthonormal bases for the coboundary and cycle
/// subspaces of edge space. The 1-form convention is df(e) = f(head) - f(tail).
struct ChainSpaces {
    std::vector<int> interior;  // vertex indices, one per column of d
    Eigen::MatrixXd d;          // |E| x |interior|, column v = d 1_v
    Eigen::MatrixXd cob;        // orthonormal basis of im(d), |E| x (|V|-|B|)
    Eigen::MatrixXd cyc;        // orthonormal basis of ker(d^T), |E| x (|E|-|V|+|B|)

    Eigen::MatrixXd projector_cob() const { return cob * cob.transpose(); }
    Eigen::MatrixXd projector_cyc() const { return cyc * cyc.transpose(); }
};

ChainSpaces chain_spaces(const NetworkWithBoundary& net);

}  // namespace enharmonic
