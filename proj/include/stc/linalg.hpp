#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>

#include "stc/rng.hpp"

namespace stc {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline void require_finite(const CMatrix& a) {
    if (!a.allFinite()) throw std::invalid_argument("matrix has non-finite entries");
}

// Singular values in decreasing order.
inline RVector singular_values(const CMatrix& a) {
    require_finite(a);
    return Eigen::JacobiSVD<CMatrix>(a).singularValues();
}

inline RVector singular_values_ascending(const CMatrix& a) {
    return singular_values(a).reverse();
}

inline std::complex<double> determinant(const CMatrix& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("determinant of non-square matrix");
    require_finite(a);
    return a.determinant();
}

inline double frobenius_norm_sq(const CMatrix& a) { return a.squaredNorm(); }

inline CMatrix conj_transpose(const CMatrix& a) { return a.adjoint(); }

inline int matrix_rank(const CMatrix& a, double rel_tol = 1e-10) {
    const RVector sv = singular_values(a);
    if (sv.size() == 0) return 0;
    const double cutoff = sv(0) * rel_tol;
    int r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff) ++r;
    return r;
}

// Entries i.i.d. CN(0, 1).
inline CMatrix random_ginibre(int rows, int cols, CounterRng& rng) {
    CMatrix g(rows, cols);
    const double s = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            g(i, j) = std::complex<double>(rng.next_gaussian() * s, rng.next_gaussian() * s);
    return g;
}

// Haar-distributed unitary: QR of a Ginibre matrix with the R-diagonal phase
// ambiguity fixed.
inline CMatrix random_unitary(int n, CounterRng& rng) {
    const CMatrix g = random_ginibre(n, n, rng);
    Eigen::HouseholderQR<CMatrix> qr(g);
    CMatrix q = qr.householderQ();
    const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < n; ++i) {
        const std::complex<double> d = r(i, i);
        const double mag = std::abs(d);
        q.col(i) *= (mag > 0) ? d / mag : std::complex<double>(1.0, 0.0);
    }
    return q;
}

}  // namespace stc
