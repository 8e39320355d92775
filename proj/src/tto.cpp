#include "ktheta/tto.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <map>

namespace ktheta {

namespace {

double spectral_norm(const Eigen::MatrixXcd& m) {
    if (m.size() == 0) return 0.0;
    return Eigen::JacobiSVD<Eigen::MatrixXcd>(m).singularValues()(0);
}

void validate(const SymbolSpec& symbol) {
    for (const SymbolTerm& t : symbol.terms) {
        if (t.m < 0) throw DomainError("symbol power must be nonnegative");
        const bool pole = t.kind == SymbolTerm::Kind::theta_pole ||
                          t.kind == SymbolTerm::Kind::theta_pole_conj;
        if (pole && t.m < 1) throw DomainError("pole order must be at least 1");
        if (pole && std::abs(t.lambda) >= 1.0 - 1e-9)
            throw DomainError("symbol pole must lie strictly inside the disk");
    }
}

}  // namespace

SymbolSpec conjugate(const SymbolSpec& symbol) {
    SymbolSpec out;
    out.terms.reserve(symbol.terms.size());
    for (SymbolTerm t : symbol.terms) {
        switch (t.kind) {
            case SymbolTerm::Kind::poly_analytic: t.kind = SymbolTerm::Kind::poly_conj; break;
            case SymbolTerm::Kind::poly_conj: t.kind = SymbolTerm::Kind::poly_analytic; break;
            case SymbolTerm::Kind::theta_pole: t.kind = SymbolTerm::Kind::theta_pole_conj; break;
            case SymbolTerm::Kind::theta_pole_conj: t.kind = SymbolTerm::Kind::theta_pole; break;
        }
        t.coeff = std::conj(t.coeff);
        out.terms.push_back(t);
    }
    return out;
}

Eigen::VectorXcd symbol_values(const ModelBasis& basis, const SymbolSpec& symbol) {
    validate(symbol);
    const int m = basis.quadrature_size();
    Eigen::VectorXcd values = Eigen::VectorXcd::Zero(m);
    for (const SymbolTerm& t : symbol.terms) {
        for (int i = 0; i < m; ++i) {
            const Complex z = basis.nodes()(i);
            Complex v;
            switch (t.kind) {
                case SymbolTerm::Kind::poly_analytic:
                    v = std::pow(z, t.m);
                    break;
                case SymbolTerm::Kind::poly_conj:
                    v = std::pow(std::conj(z), t.m);
                    break;
                case SymbolTerm::Kind::theta_pole:
                    v = basis.theta_values()(i) / std::pow(z - t.lambda, t.m);
                    break;
                case SymbolTerm::Kind::theta_pole_conj:
                    v = std::conj(basis.theta_values()(i)) /
                        std::pow(std::conj(z) - std::conj(t.lambda), t.m);
                    break;
            }
            values(i) += t.coeff * v;
        }
    }
    return values;
}

OperatorMatrix compress(const ModelBasis& basis, const SymbolSpec& symbol) {
    const Eigen::VectorXcd phi = symbol_values(basis, symbol);
    return (basis.basis_values().adjoint() * (phi.asDiagonal() * basis.basis_values())) /
           double(basis.quadrature_size());
}

OperatorMatrix rank_one(const ModelBasis& basis, Complex lambda, TensorOrientation orientation) {
    const SpaceVector k = kernel(basis, lambda, 0);
    const SpaceVector kc = conj_kernel(basis, lambda, 0);
    if (orientation == TensorOrientation::k_outer_conj) return k * kc.adjoint();
    return kc * k.adjoint();
}

OperatorMatrix derived_op(const ModelBasis& basis, Complex lambda, int n, Orientation orientation) {
    if (n < 0 || n + 1 > basis.dim())
        throw OrderError("derived operator order needs n + 1 <= dim");
    if (orientation == Orientation::boundary_both)
        throw DomainError("derived_op expects a concrete orientation");
    const int dim = basis.dim();
    OperatorMatrix out = OperatorMatrix::Zero(dim, dim);
    for (int k = 0; k <= n; ++k) {
        const double c = binomial(n, k);
        if (orientation == Orientation::d)
            out += c * (conj_kernel(basis, lambda, k) * kernel(basis, lambda, n - k).adjoint());
        else
            out += c * (kernel(basis, lambda, k) * conj_kernel(basis, lambda, n - k).adjoint());
    }
    return out;
}

SarasonResult sarason_test(const ModelBasis& basis, const OperatorMatrix& a, double tol) {
    const int n = basis.dim();
    if (a.rows() != n || a.cols() != n)
        throw MismatchError("operator dimension does not match the basis");
    const OperatorMatrix s = compressed_shift(basis);
    const OperatorMatrix defect = a - s * a * s.adjoint();

    const SpaceVector k0 = kernel(basis, Complex(0.0, 0.0), 0);
    const double k0_norm2 = k0.squaredNorm();
    const Eigen::MatrixXcd q =
        Eigen::MatrixXcd::Identity(n, n) - (k0 * k0.adjoint()) / k0_norm2;

    SarasonResult result;
    const double a_norm = spectral_norm(a);
    const double projected = spectral_norm(q * defect * q);
    result.residual = a_norm > 0.0 ? projected / a_norm : 0.0;
    result.is_tto = result.residual <= tol;
    result.psi = defect * k0 / k0_norm2;
    result.chi = q * (defect.adjoint() * k0) / k0_norm2;
    return result;
}

double complex_symmetry_residual(const ModelBasis& basis, const OperatorMatrix& a) {
    const Conjugation c = conjugation_matrix(basis);
    return spectral_norm(c.matrix * a.conjugate() - a.adjoint() * c.matrix);
}

Complex duality_pair(const OperatorMatrix& a,
                     const std::vector<std::pair<SpaceVector, SpaceVector>>& terms) {
    Complex sum(0.0, 0.0);
    for (const auto& [x, y] : terms) sum += (y.adjoint() * (a * x))(0);
    return sum;
}

SymbolSpec symbol_from_model_pair(const ModelBasis& basis, const SpaceVector& psi,
                                  const SpaceVector& chi) {
    const int n = basis.dim();
    if (psi.size() != n || chi.size() != n)
        throw MismatchError("Sarason pair dimensions do not match the basis");

    // Distinct zeros with multiplicities, in order of first appearance.
    std::vector<std::pair<Complex, int>> groups;
    for (const Complex& a : basis.theta().zeros()) {
        bool found = false;
        for (auto& g : groups) {
            if (std::abs(g.first - a) <= 1e-12) {
                ++g.second;
                found = true;
                break;
            }
        }
        if (!found) groups.emplace_back(a, 1);
    }

    // Column (a, j) holds theta/(z - a)^(j+1), i.e. the j-th conjugate-kernel
    // derivative at the zero divided by j!.
    Eigen::MatrixXcd dictionary(n, n);
    std::vector<std::pair<Complex, int>> labels;
    double factorial = 1.0;
    int col = 0;
    for (const auto& [a, mult] : groups) {
        factorial = 1.0;
        for (int j = 0; j < mult; ++j) {
            if (j > 0) factorial *= j;
            dictionary.col(col) = conj_kernel(basis, a, j) / factorial;
            labels.emplace_back(a, j + 1);
            ++col;
        }
    }

    const auto solver = dictionary.completeOrthogonalDecomposition();
    const Eigen::VectorXcd c_psi = solver.solve(psi);
    const Eigen::VectorXcd c_chi = solver.solve(chi);
    const double res = std::max((dictionary * c_psi - psi).norm(),
                                (dictionary * c_chi - chi).norm());
    if (res > 1e-6 * std::max(1.0, std::max(psi.norm(), chi.norm())))
        throw ConditioningError("kernel-chain expansion of the Sarason pair failed");

    SymbolSpec symbol;
    for (int i = 0; i < n; ++i) {
        if (std::abs(c_psi(i)) > 0.0)
            symbol.terms.push_back({SymbolTerm::Kind::theta_pole, labels[i].second,
                                    labels[i].first, c_psi(i)});
        if (std::abs(c_chi(i)) > 0.0)
            symbol.terms.push_back({SymbolTerm::Kind::theta_pole_conj, labels[i].second,
                                    labels[i].first, std::conj(c_chi(i))});
    }
    return symbol;
}

}  // namespace ktheta
