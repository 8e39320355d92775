#pragma once

#include <vector>

#include "ktheta/basis.hpp"

namespace ktheta {

// Bounded rational symbols: sums of coeff z^m, coeff conj(z)^m,
// coeff theta/(z - lambda)^m and its conjugate, with |lambda| < 1.
struct SymbolTerm {
    enum class Kind { poly_analytic, poly_conj, theta_pole, theta_pole_conj };
    Kind kind = Kind::poly_analytic;
    int m = 0;
    Complex lambda{0.0, 0.0};  // used by the pole kinds only
    Complex coeff{1.0, 0.0};
};

struct SymbolSpec {
    std::vector<SymbolTerm> terms;
};

// Termwise complex conjugate of the symbol (as a boundary function).
SymbolSpec conjugate(const SymbolSpec& symbol);

// Boundary values of the symbol on the quadrature nodes of the basis.
Eigen::VectorXcd symbol_values(const ModelBasis& basis, const SymbolSpec& symbol);

// Compression of multiplication by the symbol to the model space.
OperatorMatrix compress(const ModelBasis& basis, const SymbolSpec& symbol);

enum class TensorOrientation { k_outer_conj, conj_outer_k };

// Rank-one kernel tensor at lambda (x tensor y : h -> (h, y) x).
OperatorMatrix rank_one(const ModelBasis& basis, Complex lambda, TensorOrientation orientation);

enum class Orientation { dbar, d, boundary_both };

// n-th derivative of the rank-one kernel tensors:
//   d:    sum_k C(n,k) (d^k conj-kernel) tensor (dbar^(n-k) kernel)
//   dbar: sum_k C(n,k) (dbar^k kernel) tensor (d^(n-k) conj-kernel)
// Admissible for interior and boundary lambda; rank is n + 1.
OperatorMatrix derived_op(const ModelBasis& basis, Complex lambda, int n, Orientation orientation);

struct SarasonResult {
    bool is_tto = false;
    double residual = 0.0;  // spectral norm of the projected defect, relative to |A|
    SpaceVector psi;
    SpaceVector chi;  // normalized orthogonal to the kernel at the origin
};

// Defect criterion: A - S A S* must map the orthocomplement of k_0 into the
// span of k_0 (and likewise for the adjoint). Equivalently the two-sided
// projection of the defect away from k_0 vanishes.
SarasonResult sarason_test(const ModelBasis& basis, const OperatorMatrix& a, double tol = 1e-8);

// Operator-level residual of C A = A* C (spectral norm).
double complex_symmetry_residual(const ModelBasis& basis, const OperatorMatrix& a);

// <A, sum x_k y_k> = sum (A x_k, y_k).
Complex duality_pair(const OperatorMatrix& a,
                     const std::vector<std::pair<SpaceVector, SpaceVector>>& terms);

// Expands psi + conj(chi) (both in model-space coordinates) in the symbol
// grammar, using the conjugate-kernel chains at the zeros of theta. Feeding
// the result back through compress reconstructs any operator whose Sarason
// pair is (psi, chi).
SymbolSpec symbol_from_model_pair(const ModelBasis& basis, const SpaceVector& psi,
                                  const SpaceVector& chi);

}  // namespace ktheta
