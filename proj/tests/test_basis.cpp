#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ktheta/subspace.hpp"
#include "testutil.hpp"

using namespace ktheta;
using testutil::cauchy_eval;
using testutil::random_theta;
using testutil::random_vector;

namespace {

const Complex kOne(1.0, 0.0);
const Complex kZero(0.0, 0.0);

BlaschkeProduct monomial(int n) {
    return BlaschkeProduct(std::vector<Complex>(n, kZero), kOne);
}

}  // namespace

TEST_CASE("monomial basis") {
    const ModelBasis basis(monomial(3));
    CHECK(basis.dim() == 3);
    const Eigen::MatrixXcd jets = basis.basis_jets(Complex(0.7, 0.0), 0);
    CHECK(std::abs(jets(0, 0) - Complex(1.0, 0.0)) < 1e-15);
    CHECK(std::abs(jets(1, 0) - Complex(0.7, 0.0)) < 1e-15);
    CHECK(std::abs(jets(2, 0) - Complex(0.49, 0.0)) < 1e-15);

    const ModelBasis tiny(monomial(1));
    CHECK(tiny.dim() == 1);
}

TEST_CASE("Gram identity and membership in the model space") {
    const ModelBasis basis(tm_basis(BlaschkeProduct({Complex(0.5, 0.0), Complex(-0.5, 0.0)},
                                                    kOne)));
    CHECK(basis.gram_residual() <= 1e-10);

    // <e_i, theta z^m> = 0 under quadrature.
    const int m = basis.quadrature_size();
    for (int i = 0; i < basis.dim(); ++i) {
        for (int p = 0; p < basis.dim(); ++p) {
            Eigen::VectorXcd tzp(m);
            for (int q = 0; q < m; ++q)
                tzp(q) = basis.theta_values()(q) * std::pow(basis.nodes()(q), p);
            CHECK(std::abs(basis.inner(basis.basis_values().col(i), tzp)) <= 1e-9);
        }
    }

    CHECK_THROWS_AS(ModelBasis(monomial(2), 100), DomainError);
}

TEST_CASE("eval_vector basics and finite differences") {
    const ModelBasis basis(monomial(2));
    SpaceVector v(2);
    v << 1.0, 0.0;
    CHECK(std::abs(eval_vector(basis, v, Complex(0.7, 0.0), 0) - kOne) < 1e-15);
    v << 0.0, 1.0;
    CHECK(std::abs(eval_vector(basis, v, Complex(0.7, 0.0), 1) - kOne) < 1e-15);
    CHECK_THROWS_AS(eval_vector(basis, v, kZero, 10), OrderError);

    CounterRng rng(3);
    const ModelBasis rich(random_theta(rng, 4));
    const SpaceVector f = random_vector(rng, 4);
    const Complex z = rng.next_disk(0.5);
    const Complex fd = testutil::fd_deriv(
        [&](Complex w) { return eval_vector(rich, f, w, 0); }, z, 1);
    CHECK(std::abs(eval_vector(rich, f, z, 1) - fd) <= 1e-6 * (1.0 + std::abs(fd)));
}

TEST_CASE("kernel coordinates for the square monomial") {
    const ModelBasis basis(monomial(2));
    const SpaceVector k0 = kernel(basis, kZero, 0);
    CHECK(std::abs(k0(0) - kOne) < 1e-15);
    CHECK(std::abs(k0(1)) < 1e-15);

    const SpaceVector dk0 = kernel(basis, kZero, 1);
    CHECK(std::abs(dk0(0)) < 1e-15);
    CHECK(std::abs(dk0(1) - kOne) < 1e-15);

    // Oracle: finite differences of the kernel coordinates along a real step
    // differentiate with respect to conj(lambda).
    const double h = 1e-5;
    const SpaceVector fd =
        (kernel(basis, Complex(h, 0.0), 0) - kernel(basis, Complex(-h, 0.0), 0)) / (2.0 * h);
    CHECK((fd - dk0).norm() < 1e-9);

    CHECK_THROWS_AS(kernel(basis, Complex(1.5, 0.0), 0), DomainError);
}

TEST_CASE("reproducing property via the Cauchy oracle") {
    CounterRng rng(17);
    for (int c = 0; c < 4; ++c) {
        const ModelBasis basis(random_theta(rng, 3 + c));
        for (int probe = 0; probe < 10; ++probe) {
            const SpaceVector f = random_vector(rng, basis.dim());
            const Complex lambda = rng.next_disk(0.75);
            const SpaceVector k = kernel(basis, lambda, 0);
            const Complex lhs = k.dot(f);  // <f, k>
            CHECK(std::abs(lhs - cauchy_eval(basis, f, lambda, 0)) <=
                  1e-9 * f.norm() * k.norm());
        }
    }
}

TEST_CASE("derivative reproducing property") {
    CounterRng rng(19);
    const ModelBasis basis(random_theta(rng, 6));
    for (int n = 1; n <= 3; ++n) {
        const SpaceVector f = random_vector(rng, basis.dim());
        const Complex lambda = rng.next_disk(0.7);
        const SpaceVector k = kernel(basis, lambda, n);
        CHECK(std::abs(k.dot(f) - cauchy_eval(basis, f, lambda, n)) <=
              1e-7 * f.norm() * k.norm());
    }
}

TEST_CASE("conjugate kernels") {
    const ModelBasis basis(monomial(2));
    const SpaceVector kc0 = conj_kernel(basis, kZero, 0);
    CHECK(std::abs(kc0(0)) < 1e-15);
    CHECK(std::abs(kc0(1) - kOne) < 1e-15);

    const Conjugation c = conjugation_matrix(basis);
    const SpaceVector dkc0 = conj_kernel(basis, kZero, 1);
    CHECK((dkc0 - c.apply(kernel(basis, kZero, 1))).norm() <= 1e-9);

    CounterRng rng(29);
    const ModelBasis rich(random_theta(rng, 5));
    const Conjugation cr = conjugation_matrix(rich);
    for (int probe = 0; probe < 4; ++probe) {
        const Complex lambda = rng.next_disk(0.8);
        for (int n = 0; n <= 2; ++n)
            CHECK((conj_kernel(rich, lambda, n) - cr.apply(kernel(rich, lambda, n))).norm() <=
                  1e-9);
    }

    // Boundary coincidence up to the unimodular factor.
    const Complex xi = rng.next_unit_circle();
    const Complex scale = std::conj(xi) * rich.theta().eval(xi);
    CHECK((conj_kernel(rich, xi, 0) - scale * kernel(rich, xi, 0)).norm() <=
          1e-8 * kernel(rich, xi, 0).norm());
}

TEST_CASE("conjugation matrix structure") {
    const ModelBasis basis(monomial(2));
    const Conjugation c = conjugation_matrix(basis);
    Eigen::MatrixXcd flip(2, 2);
    flip << 0, 1, 1, 0;
    CHECK((c.matrix - flip).cwiseAbs().maxCoeff() < 1e-12);

    const ModelBasis single(monomial(1));
    CHECK((conjugation_matrix(single).matrix - Eigen::MatrixXcd::Identity(1, 1))
              .cwiseAbs()
              .maxCoeff() < 1e-12);

    CounterRng rng(31);
    const ModelBasis rich(random_theta(rng, 6));
    const Conjugation cr = conjugation_matrix(rich);
    CHECK((cr.matrix * cr.matrix.conjugate() - Eigen::MatrixXcd::Identity(6, 6))
              .cwiseAbs()
              .maxCoeff() <= 1e-10);
    const SpaceVector v = random_vector(rng, 6);
    CHECK(std::abs(cr.apply(v).norm() - v.norm()) <= 1e-10);
    for (int probe = 0; probe < 10; ++probe) {
        const Complex lambda = rng.next_disk(0.8);
        CHECK((cr.apply(kernel(rich, lambda, 0)) - conj_kernel(rich, lambda, 0)).norm() <=
              1e-9);
    }
}

TEST_CASE("compressed shift matrix") {
    const ModelBasis basis(monomial(3));
    const OperatorMatrix s = compressed_shift(basis);
    Eigen::MatrixXcd jordan = Eigen::MatrixXcd::Zero(3, 3);
    jordan(1, 0) = jordan(2, 1) = 1.0;
    CHECK((s - jordan).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("shift relations on kernels") {
    CounterRng rng(37);
    const ModelBasis basis(random_theta(rng, 6));
    const BlaschkeProduct& theta = basis.theta();
    const OperatorMatrix s = compressed_shift(basis);
    const SpaceVector k0 = kernel(basis, kZero, 0);
    const SpaceVector kc0 = conj_kernel(basis, kZero, 0);

    Complex lambda = rng.next_disk(0.7);
    if (std::abs(lambda) < 0.1) lambda += Complex(0.3, 0.0);
    const SpaceVector kl = kernel(basis, lambda, 0);
    const SpaceVector kcl = conj_kernel(basis, lambda, 0);

    CHECK((s * kl - (kl - k0) / std::conj(lambda)).norm() <= 1e-9 * (1.0 + kl.norm()));
    CHECK((s * kcl - (lambda * kcl - theta.eval(lambda) * k0)).norm() <=
          1e-9 * (1.0 + kcl.norm()));
    CHECK((s * k0 - kernel(basis, kZero, 1)).norm() <= 1e-9);
    CHECK((s * kc0 + theta.eval(kZero) * k0).norm() <= 1e-9);

    SpaceVector chain = k0;
    double factorial = 1.0;
    for (int n = 1; n <= 3; ++n) {
        chain = s * chain;
        factorial *= n;
        CHECK((chain - kernel(basis, kZero, n) / factorial).norm() <= 1e-9);
        CHECK((s * conj_kernel(basis, kZero, n) -
               (double(n) * conj_kernel(basis, kZero, n - 1) - theta.deriv(kZero, n) * k0))
                  .norm() <= 1e-8);
    }
}

TEST_CASE("shift maps kernel chains into extended chains") {
    CounterRng rng(41);
    const ModelBasis basis(random_theta(rng, 6));
    const OperatorMatrix s = compressed_shift(basis);

    Complex lambda = rng.next_disk(0.7);
    if (std::abs(lambda) < 0.1) lambda += Complex(0.25, 0.1);
    for (int n = 0; n <= 2; ++n) {
        Eigen::MatrixXcd span(basis.dim(), n + 2);
        for (int j = 0; j <= n; ++j) span.col(j) = kernel(basis, lambda, j);
        span.col(n + 1) = kernel(basis, kZero, 0);
        const Eigen::MatrixXcd q = orthonormal_columns(span);
        for (int j = 0; j <= n; ++j) {
            const SpaceVector image = s * kernel(basis, lambda, j);
            CHECK(membership_residual(q, image) <= 1e-8);
        }
    }

    // At the origin the extra direction is the next chain vector.
    for (int n = 0; n <= 2; ++n) {
        Eigen::MatrixXcd span(basis.dim(), n + 2);
        for (int j = 0; j <= n + 1; ++j) span.col(j) = kernel(basis, kZero, j);
        const Eigen::MatrixXcd q = orthonormal_columns(span);
        for (int j = 0; j <= n; ++j)
            CHECK(membership_residual(q, s * kernel(basis, kZero, j)) <= 1e-8);
    }
}

TEST_CASE("kernel chains are linearly independent") {
    CounterRng rng(43);
    const ModelBasis basis(random_theta(rng, 6));
    Eigen::MatrixXcd family(6, 6);
    int col = 0;
    for (int point = 0; point < 3; ++point) {
        const Complex lambda = rng.next_disk(0.6);
        for (int j = 0; j < 2; ++j)
            family.col(col++) = point < 2 ? kernel(basis, lambda, j)
                                          : conj_kernel(basis, lambda, j);
    }
    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(family);
    CHECK(svd.singularValues().minCoeff() > 1e-12);
}

TEST_CASE("Frostman unitary") {
    // theta(0) = 0 keeps the multiplier trivial.
    const ModelBasis basis(monomial(3));
    const ModelBasis shifted(basis.theta().frostman_shift());
    const OperatorMatrix j0 = frostman_unitary(basis, shifted);
    CHECK((j0 - Eigen::MatrixXcd::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-10);

    CounterRng rng(47);
    const BlaschkeProduct theta = random_theta(rng, 4, 0.6);
    const ModelBasis b(theta);
    const ModelBasis bs(theta.frostman_shift());
    const OperatorMatrix j = frostman_unitary(b, bs);
    CHECK((j.adjoint() * j - Eigen::MatrixXcd::Identity(4, 4)).norm() <= 1e-9);

    for (int probe = 0; probe < 5; ++probe) {
        const Complex lambda = rng.next_disk(0.7);
        const SpaceVector lhs = j * kernel(b, lambda, 0);
        const SpaceVector ref = kernel(bs, lambda, 0);
        // Collinearity: residual after projecting onto the target kernel.
        const SpaceVector proj = ref * (ref.dot(lhs) / ref.squaredNorm());
        CHECK((lhs - proj).norm() <= 1e-8 * lhs.norm());
    }

    CHECK_THROWS_AS(frostman_unitary(basis, ModelBasis(monomial(2))), MismatchError);
}
