#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

namespace ktheta {

inline double spectral_norm(const Eigen::MatrixXcd& m) {
    if (m.size() == 0) return 0.0;
    return Eigen::JacobiSVD<Eigen::MatrixXcd>(m).singularValues()(0);
}

// Orthonormal basis of the column span (columns assumed independent).
inline Eigen::MatrixXcd orthonormal_columns(const Eigen::MatrixXcd& m) {
    const Eigen::HouseholderQR<Eigen::MatrixXcd> qr(m);
    Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(m.rows(), m.cols());
    return q;
}

// Relative distance of v from the span of the orthonormal columns q.
inline double membership_residual(const Eigen::MatrixXcd& q, const Eigen::VectorXcd& v) {
    const double norm = v.norm();
    if (norm == 0.0) return 0.0;
    return (v - q * (q.adjoint() * v)).norm() / norm;
}

// sin of the largest principal angle of span(q2) measured against span(q1);
// both arguments must have orthonormal columns. Zero iff span(q2) is
// contained in span(q1).
inline double containment_angle_sin(const Eigen::MatrixXcd& q1, const Eigen::MatrixXcd& q2) {
    return spectral_norm(q2 - q1 * (q1.adjoint() * q2));
}

// Largest principal angle (as a sin) between two equal-dimension subspaces.
inline double subspace_gap(const Eigen::MatrixXcd& q1, const Eigen::MatrixXcd& q2) {
    return std::max(containment_angle_sin(q1, q2), containment_angle_sin(q2, q1));
}

}  // namespace ktheta
