#pragma once

#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace lieobs {

// Classical linear observability on R^n for dx/dt = A x, y = C x: the pair
// is observable iff the stacked matrix (C; CA; ...; CA^{n-1}) has rank n.
// Baseline the group-level verdicts are compared against in the reports.
struct EuclideanSystem {
    Eigen::MatrixXd a;  // n x n
    Eigen::MatrixXd c;  // m x n
};

struct EuclideanReport {
    int rank = 0;
    int n = 0;
    bool observable = false;
};

inline EuclideanReport euclidean_observability(const EuclideanSystem& sys) {
    const auto n = sys.a.rows();
    if (sys.a.cols() != n) throw std::invalid_argument("euclidean_observability: A must be square");
    if (sys.c.cols() != n)
        throw std::invalid_argument("euclidean_observability: C column count must match A");

    Eigen::MatrixXd stacked(sys.c.rows() * n, n);
    Eigen::MatrixXd block = sys.c;
    for (Eigen::Index k = 0; k < n; ++k) {
        stacked.middleRows(k * sys.c.rows(), sys.c.rows()) = block;
        block = block * sys.a;
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(stacked);
    qr.setThreshold(1e-10);
    EuclideanReport rep;
    rep.n = (int)n;
    rep.rank = (int)qr.rank();
    rep.observable = rep.rank == rep.n;
    return rep;
}

}  // namespace lieobs
