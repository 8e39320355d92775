#pragma once

#include "ktheta/basis.hpp"

namespace ktheta {

// Atomic spectral data of the rank-one unitary perturbation of the
// compressed shift attached to a unimodular alpha: atoms are the boundary
// solutions of theta(xi) = alpha, masses the point weights 1/|theta'(xi)|.
struct ClarkMeasure {
    Complex alpha{1.0, 0.0};
    Eigen::VectorXcd atoms;
    Eigen::VectorXd masses;

    int size() const noexcept { return static_cast<int>(atoms.size()); }
};

// The perturbed shift S + c_alpha k_0 (x) conj-kernel_0 as a matrix.
OperatorMatrix clark_unitary(const ModelBasis& basis, Complex alpha);

ClarkMeasure clark_measure(const ModelBasis& basis, Complex alpha);

// Boundary values at the atoms (the unitary embedding into the weighted
// coordinate space of the measure).
Eigen::VectorXcd embed(const ModelBasis& basis, const ClarkMeasure& cm, const SpaceVector& v);

// Inverse of embed: values -> sum_j values_j mass_j kernel(atom_j).
SpaceVector unembed(const ModelBasis& basis, const ClarkMeasure& cm,
                    const Eigen::VectorXcd& values);

// Evaluates the represented function at an interior point directly from its
// atom values via the Cauchy-type reconstruction.
Complex cauchy_reconstruct(const ModelBasis& basis, const ClarkMeasure& cm,
                           const Eigen::VectorXcd& values, Complex z);

}  // namespace ktheta
