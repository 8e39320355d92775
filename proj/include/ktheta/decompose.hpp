#pragma once

#include <cstdint>
#include <vector>

#include "ktheta/clark.hpp"
#include "ktheta/tto.hpp"

namespace ktheta {

struct RangeComponent {
    Complex point{0.0, 0.0};
    int order = 0;
    Orientation orientation = Orientation::d;
};

// Range of a finite-rank operator as a direct sum of kernel-derivative
// chains; zero_chain_order is the length of the kernel chain at the origin
// contained in the range (the Dbar component at 0, when present).
struct RangeStructure {
    std::vector<RangeComponent> components;
    int zero_chain_order = 0;
};

struct DecompositionComponent {
    Complex point{0.0, 0.0};
    int order = 0;
    Orientation orientation = Orientation::d;
    std::vector<Complex> coefficients;  // order + 1 entries, degree ascending
};

struct Decomposition {
    std::vector<DecompositionComponent> components;
    double residual = 0.0;
};

// Left singular vectors above tol * sigma_max.
std::vector<SpaceVector> range_basis(const OperatorMatrix& a, double tol);

// Identifies the chain structure of the range of a finite-rank truncated
// Toeplitz operator by passing to a Clark coordinate system: eigenvalue
// clusters of the compressed multiplication operator locate the points, the
// monomial chain locates the component at the origin. Requires
// 1 <= rank < dim.
RangeStructure find_range_structure(const ModelBasis& basis, const OperatorMatrix& a,
                                    double tol, std::uint64_t seed);

// Least-squares fit of the operator against the derived-operator dictionary
// of the structure. Throws FitError when the residual exceeds tol.
Decomposition fit_coefficients(const ModelBasis& basis, const OperatorMatrix& a,
                               const RangeStructure& structure, double tol);

struct ElementaryTable {
    Eigen::MatrixXcd a;        // coefficients on the kernel-derivative tensors
    double binomial_residual;  // deviation from a(t, s-t) = a(0, s) C(s, t)
    double order_residual;     // largest |a(p, q)| with p + q > n
};

// Coefficient table of a single-point operator on the tensor dictionary
// (d^p conj-kernel) tensor (dbar^q kernel) at mu, solved with the
// biorthogonal duals of the two chains.
ElementaryTable elementary_coefficients(const ModelBasis& basis, const OperatorMatrix& a,
                                        Complex mu, int n);

OperatorMatrix synthesize(const ModelBasis& basis, const Decomposition& d);

// Full pipeline: Sarason test, structure identification, coefficient fit.
Decomposition decompose(const ModelBasis& basis, const OperatorMatrix& a, double tol = 1e-8,
                        std::uint64_t seed = 0);

}  // namespace ktheta
