#include "enharmonic/chain_spaces.hpp"

namespace enharmonic {

ChainSpaces chain_spaces(const NetworkWithBoundary& net) {
    const int m = net.edge_count();
    ChainSpaces cs;
    for (int v = 0; v < net.vertex_count(); ++v)
        if (!net.is_boundary(v)) cs.interior.push_back(v);
    const int k = static_cast<int>(cs.interior.size());

    cs.d = Eigen::MatrixXd::Zero(m, k);
    for (int c = 0; c < k; ++c) {
        int v = cs.interior[c];
        for (const auto& inc : net.incident(v)) cs.d(inc.edge, c) += inc.at_tail ? -1.0 : 1.0;
    }

    if (k == 0) {
        cs.cob = Eigen::MatrixXd::Zero(m, 0);
        cs.cyc = Eigen::MatrixXd::Identity(m, m);
        return cs;
    }

    // d has full column rank on a connected network, so the first k columns
    // of the full Q span im(d) and the rest span its orthogonal complement.
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(cs.d);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(m, m);
    cs.cob = q.leftCols(k);
    cs.cyc = q.rightCols(m - k);
    return cs;
}

}  // namespace enharmonic
