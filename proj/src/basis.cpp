#include "ktheta/basis.hpp"

#include <cmath>

namespace ktheta {

namespace {
constexpr double kBoundarySlack = 1e-12;

void check_lambda_admissible(Complex lambda) {
    if (std::abs(lambda) > 1.0 + kBoundarySlack)
        throw DomainError("kernel point outside the closed unit disk");
}
}  // namespace

ModelBasis::ModelBasis(BlaschkeProduct theta, int quadrature_size) : theta_(std::move(theta)) {
    const int n = theta_.degree();
    if (n == 0) throw DomainError("model space of a constant inner function is trivial");
    const int floor_size = std::max(256, 16 * n);
    int m = quadrature_size;
    if (m == 0) m = floor_size;
    if (m < floor_size) throw DomainError("quadrature size below max(256, 16 N)");

    nodes_.resize(m);
    for (int i = 0; i < m; ++i) nodes_(i) = std::polar(1.0, 2.0 * M_PI * i / m);

    values_.resize(m, n);
    theta_values_.resize(m);
    for (int i = 0; i < m; ++i) {
        const Complex z = nodes_(i);
        Jet prefix(1, Complex(1.0, 0.0));
        Complex theta_val = theta_.constant();
        for (int j = 0; j < n; ++j) {
            const Complex a = theta_.zeros()[j];
            const Jet cauchy = detail::cauchy_factor_jet(a, z, 0);
            values_(i, j) = prefix[0] * cauchy[0];
            const Jet factor = detail::blaschke_factor_jet(a, z, 0);
            prefix[0] *= factor[0];
            theta_val *= factor[0];
        }
        theta_values_(i) = theta_val;
    }

    const Eigen::MatrixXcd gram = (values_.adjoint() * values_) / double(m);
    gram_residual_ = (gram - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
    if (gram_residual_ > 1e-8)
        throw ConditioningError("Takenaka-Malmquist Gram residual exceeds 1e-8; "
                                "zeros too close to the boundary for this quadrature size");
}

Complex ModelBasis::inner(const Eigen::VectorXcd& f_values, const Eigen::VectorXcd& g_values) const {
    return (g_values.adjoint() * f_values)(0) / double(quadrature_size());
}

Eigen::MatrixXcd ModelBasis::basis_jets(Complex z, int n) const {
    const int dim_n = dim();
    Eigen::MatrixXcd jets(dim_n, n + 1);
    Jet prefix(n + 1, Complex(0.0, 0.0));
    prefix[0] = 1.0;
    for (int j = 0; j < dim_n; ++j) {
        const Complex a = theta_.zeros()[j];
        const Jet ej = jet_product(prefix, detail::cauchy_factor_jet(a, z, n));
        for (int k = 0; k <= n; ++k) jets(j, k) = ej[k];
        prefix = jet_product(prefix, detail::blaschke_factor_jet(a, z, n));
    }
    return jets;
}

Eigen::MatrixXcd ModelBasis::conj_basis_jets(Complex z, int n) const {
    const int dim_n = dim();
    Eigen::MatrixXcd jets(dim_n, n + 1);
    Jet suffix(n + 1, Complex(0.0, 0.0));
    suffix[0] = theta_.constant();
    for (int j = dim_n - 1; j >= 0; --j) {
        const Complex a = theta_.zeros()[j];
        const Jet cj = jet_product(suffix, detail::cauchy_factor_jet(a, z, n));
        for (int k = 0; k <= n; ++k) jets(j, k) = cj[k];
        suffix = jet_product(suffix, detail::blaschke_factor_jet(a, z, n));
    }
    return jets;
}

Complex eval_vector(const ModelBasis& basis, const SpaceVector& v, Complex z, int n) {
    if (v.size() != basis.dim()) throw MismatchError("coordinate vector has wrong length");
    if (n < 0 || n > basis.dim() + 2) throw OrderError("evaluation order exceeds dim + 2");
    const Eigen::MatrixXcd jets = basis.basis_jets(z, n);
    return (jets.col(n).transpose() * v)(0);
}

SpaceVector kernel(const ModelBasis& basis, Complex lambda, int n) {
    check_lambda_admissible(lambda);
    return basis.basis_jets(lambda, n).col(n).conjugate();
}

SpaceVector conj_kernel(const ModelBasis& basis, Complex lambda, int n) {
    check_lambda_admissible(lambda);
    return basis.conj_basis_jets(lambda, n).col(n);
}

Conjugation conjugation_matrix(const ModelBasis& basis) {
    const int n = basis.dim();
    const int m = basis.quadrature_size();
    // Values of C e_j on the nodes: conj(z) theta(z) conj(e_j(z)).
    const Eigen::VectorXcd weight = basis.nodes().conjugate().cwiseProduct(basis.theta_values());
    const Eigen::MatrixXcd conj_values = weight.asDiagonal() * basis.basis_values().conjugate();
    Conjugation c{(basis.basis_values().adjoint() * conj_values) / double(m)};
    const double involution_residual =
        (c.matrix * c.matrix.conjugate() - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
    if (involution_residual > 1e-8)
        throw ConditioningError("conjugation matrix fails the involution check");
    return c;
}

OperatorMatrix compressed_shift(const ModelBasis& basis) {
    return (basis.basis_values().adjoint() *
            (basis.nodes().asDiagonal() * basis.basis_values())) /
           double(basis.quadrature_size());
}

OperatorMatrix frostman_unitary(const ModelBasis& basis, const ModelBasis& shifted_basis) {
    if (basis.dim() != shifted_basis.dim())
        throw MismatchError("Frostman unitary requires equal dimensions");
    if (basis.quadrature_size() != shifted_basis.quadrature_size())
        throw MismatchError("Frostman unitary requires matching quadrature grids");
    const Complex t0 = basis.theta().eval(Complex(0.0, 0.0));
    const double scale = std::sqrt(1.0 - std::norm(t0));
    const Eigen::VectorXcd multiplier =
        scale * (1.0 - std::conj(t0) * basis.theta_values().array()).inverse().matrix();
    const OperatorMatrix j = (shifted_basis.basis_values().adjoint() *
                              (multiplier.asDiagonal() * basis.basis_values())) /
                             double(basis.quadrature_size());
    const double unit_residual =
        (j.adjoint() * j - Eigen::MatrixXcd::Identity(basis.dim(), basis.dim())).norm();
    if (unit_residual > 1e-9)
        throw ConditioningError("Frostman intertwiner is not unitary to tolerance");
    return j;
}

}  // namespace ktheta
