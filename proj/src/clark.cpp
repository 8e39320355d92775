#include "ktheta/clark.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ktheta {

namespace {

Complex normalized_alpha(Complex alpha) {
    const double mod = std::abs(alpha);
    if (std::abs(mod - 1.0) > 1e-12)
        throw DomainError("Clark parameter must be unimodular");
    return alpha / mod;
}

}  // namespace

OperatorMatrix clark_unitary(const ModelBasis& basis, Complex alpha) {
    alpha = normalized_alpha(alpha);
    const Complex t0 = basis.theta().eval(Complex(0.0, 0.0));
    // The coefficient is pinned by requiring the boundary kernels at the
    // solutions of theta(xi) = alpha to be eigenvectors: with the shift
    // relation S k_xi = (k_xi - k_0) conj(xi)^-1 this forces
    // c = alpha / (1 - conj(theta(0)) alpha), finite since |theta(0)| < 1.
    const Complex c_alpha = alpha / (1.0 - std::conj(t0) * alpha);
    const SpaceVector k0 = kernel(basis, Complex(0.0, 0.0), 0);
    const SpaceVector kc0 = conj_kernel(basis, Complex(0.0, 0.0), 0);
    return compressed_shift(basis) + c_alpha * (k0 * kc0.adjoint());
}

ClarkMeasure clark_measure(const ModelBasis& basis, Complex alpha) {
    alpha = normalized_alpha(alpha);
    const int n = basis.dim();
    const OperatorMatrix u = clark_unitary(basis, alpha);

    const double unitary_residual =
        (u.adjoint() * u - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
    if (unitary_residual > 1e-10)
        throw ConditioningError("Clark perturbation is not unitary to tolerance");

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(u, false);
    if (es.info() != Eigen::Success)
        throw EigensolverError("eigendecomposition of the Clark unitary failed");

    std::vector<Complex> atoms(es.eigenvalues().data(), es.eigenvalues().data() + n);
    for (Complex& xi : atoms) xi /= std::abs(xi);
    std::sort(atoms.begin(), atoms.end(),
              [](Complex x, Complex y) { return std::arg(x) < std::arg(y); });

    for (int i = 0; i + 1 < n; ++i) {
        if (std::abs(atoms[i + 1] - atoms[i]) <= 1e-10)
            throw AtomCollisionError("two Clark atoms coincide; pick another alpha");
    }

    ClarkMeasure cm;
    cm.alpha = alpha;
    cm.atoms.resize(n);
    cm.masses.resize(n);
    for (int i = 0; i < n; ++i) {
        const Complex xi = atoms[i];
        if (std::abs(basis.theta().eval(xi) - alpha) > 1e-8)
            throw EigensolverError("Clark atom does not solve theta(xi) = alpha");
        const double mass_kernel = 1.0 / kernel(basis, xi, 0).squaredNorm();
        const double mass_deriv = 1.0 / std::abs(basis.theta().deriv(xi, 1));
        if (std::abs(mass_kernel - mass_deriv) > 1e-8 * mass_kernel)
            throw ConditioningError("Clark mass cross-check failed");
        cm.atoms(i) = xi;
        cm.masses(i) = mass_kernel;
    }
    return cm;
}

Eigen::VectorXcd embed(const ModelBasis& basis, const ClarkMeasure& cm, const SpaceVector& v) {
    Eigen::VectorXcd values(cm.size());
    for (int i = 0; i < cm.size(); ++i) values(i) = eval_vector(basis, v, cm.atoms(i), 0);
    return values;
}

SpaceVector unembed(const ModelBasis& basis, const ClarkMeasure& cm,
                    const Eigen::VectorXcd& values) {
    if (values.size() != cm.size()) throw MismatchError("value vector length mismatch");
    SpaceVector out = SpaceVector::Zero(basis.dim());
    for (int i = 0; i < cm.size(); ++i)
        out += values(i) * cm.masses(i) * kernel(basis, cm.atoms(i), 0);
    return out;
}

Complex cauchy_reconstruct(const ModelBasis& basis, const ClarkMeasure& cm,
                           const Eigen::VectorXcd& values, Complex z) {
    if (values.size() != cm.size()) throw MismatchError("value vector length mismatch");
    if (std::abs(z) >= 1.0) throw DomainError("reconstruction point must be interior");
    const Complex numerator = 1.0 - std::conj(cm.alpha) * basis.theta().eval(z);
    Complex sum(0.0, 0.0);
    for (int i = 0; i < cm.size(); ++i)
        sum += values(i) * cm.masses(i) * numerator / (1.0 - std::conj(cm.atoms(i)) * z);
    return sum;
}

}  // namespace ktheta
