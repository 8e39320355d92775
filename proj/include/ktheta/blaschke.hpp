#pragma once

#include <complex>
#include <vector>

#include "ktheta/errors.hpp"

namespace ktheta {

using Complex = std::complex<double>;

// Derivative table ("jet") of a function at a point: jet[k] = f^(k)(z),
// plain derivatives, not divided by k!.
using Jet = std::vector<Complex>;

double binomial(int n, int k);

// Leibniz product of two jets of equal length.
Jet jet_product(const Jet& a, const Jet& b);

// Finite Blaschke product c * prod_k (z - a_k) / (1 - conj(a_k) z) with
// |a_k| < 1 and |c| = 1. Immutable after construction.
class BlaschkeProduct {
public:
    BlaschkeProduct(std::vector<Complex> zeros, Complex unimodular_constant);

    int degree() const noexcept { return static_cast<int>(zeros_.size()); }
    const std::vector<Complex>& zeros() const noexcept { return zeros_; }
    Complex constant() const noexcept { return constant_; }

    Complex eval(Complex z) const;

    // Value and derivatives up to order n at z: {f, f', ..., f^(n)}.
    Jet jet(Complex z, int n) const;

    // n-th derivative; n = 0 reduces to eval. Capped at 2*degree + 4.
    Complex deriv(Complex z, int n) const;

    // Zeros of theta(z) = theta(0) inside the disk, normalized so the
    // shifted product vanishes at the origin.
    BlaschkeProduct frostman_shift() const;

    // sum_k (1 - |a_k|^2) / |1 - lambda conj(a_k)|^(2n+2) for |lambda| = 1.
    double ahern_clark_sum(Complex lambda, int n) const;

private:
    std::vector<Complex> zeros_;
    Complex constant_;
};

namespace detail {

// Jet of a single Blaschke factor (z - a)/(1 - conj(a) z) at z.
Jet blaschke_factor_jet(Complex a, Complex z, int n);

// Jet of the Cauchy-type factor sqrt(1 - |a|^2) / (1 - conj(a) z) at z.
Jet cauchy_factor_jet(Complex a, Complex z, int n);

void check_not_pole(Complex a, Complex z);

}  // namespace detail

}  // namespace ktheta
