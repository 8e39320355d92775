#pragma once

#include <Eigen/Dense>

#include "ktheta/blaschke.hpp"

namespace ktheta {

using SpaceVector = Eigen::VectorXcd;
using OperatorMatrix = Eigen::MatrixXcd;

// Orthonormal coordinates for the model space attached to a finite Blaschke
// product: the Takenaka-Malmquist basis
//
//   e_j(z) = sqrt(1 - |a_j|^2)/(1 - conj(a_j) z) * prod_{i<j} b_i(z),
//
// together with the uniform trapezoid quadrature on the circle used for the
// compressions. Basis values are cached at the nodes; everything downstream
// is either exact jet arithmetic at a point or a node-wise inner product.
class ModelBasis {
public:
    // quadrature_size = 0 picks max(256, 16 N). Explicit sizes below that
    // floor are rejected.
    explicit ModelBasis(BlaschkeProduct theta, int quadrature_size = 0);

    const BlaschkeProduct& theta() const noexcept { return theta_; }
    int dim() const noexcept { return theta_.degree(); }
    int quadrature_size() const noexcept { return static_cast<int>(nodes_.size()); }

    const Eigen::VectorXcd& nodes() const noexcept { return nodes_; }
    const Eigen::MatrixXcd& basis_values() const noexcept { return values_; }
    const Eigen::VectorXcd& theta_values() const noexcept { return theta_values_; }
    double gram_residual() const noexcept { return gram_residual_; }

    // Node-wise trapezoid approximation of the circle inner product <f, g>.
    Complex inner(const Eigen::VectorXcd& f_values, const Eigen::VectorXcd& g_values) const;

    // Values and derivatives of every basis function at z: entry (j, k) is
    // e_j^(k)(z), k = 0..n.
    Eigen::MatrixXcd basis_jets(Complex z, int n) const;

    // Same for the conjugated basis functions C e_j, via the closed form
    // C e_j = c * sqrt(1-|a_j|^2)/(1 - conj(a_j) z) * prod_{i>j} b_i(z).
    Eigen::MatrixXcd conj_basis_jets(Complex z, int n) const;

private:
    BlaschkeProduct theta_;
    Eigen::VectorXcd nodes_;
    Eigen::MatrixXcd values_;
    Eigen::VectorXcd theta_values_;
    double gram_residual_ = 0.0;
};

inline ModelBasis tm_basis(const BlaschkeProduct& theta, int quadrature_size = 0) {
    return ModelBasis(theta, quadrature_size);
}

// The conjugation x -> conj(z) theta conj(x) as a (matrix, conjugate) pair:
// the antilinear action is v -> matrix * conj(v).
struct Conjugation {
    Eigen::MatrixXcd matrix;

    SpaceVector apply(const SpaceVector& v) const { return matrix * v.conjugate(); }
};

// n-th derivative of the function with the given coordinates at z.
Complex eval_vector(const ModelBasis& basis, const SpaceVector& v, Complex z, int n);

// Coordinates of the n-th conjugate-differentiated reproducing kernel at
// lambda (the vector representing f -> f^(n)(lambda)). Interior and boundary
// lambda are both admissible.
SpaceVector kernel(const ModelBasis& basis, Complex lambda, int n);

// Coordinates of the n-th derivative of the conjugate kernel at lambda;
// equals the conjugation applied to kernel(basis, lambda, n).
SpaceVector conj_kernel(const ModelBasis& basis, Complex lambda, int n);

Conjugation conjugation_matrix(const ModelBasis& basis);

// Matrix of f -> P(z f) in basis coordinates.
OperatorMatrix compressed_shift(const ModelBasis& basis);

// Matrix of the multiplier unitary intertwining the space of theta with the
// space of its Frostman shift; shifted_basis must be built from
// theta.frostman_shift().
OperatorMatrix frostman_unitary(const ModelBasis& basis, const ModelBasis& shifted_basis);

}  // namespace ktheta
