#include "ktheta/blaschke.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cmath>

namespace ktheta {

namespace {
constexpr double kZeroModulusBound = 1.0 - 1e-12;
constexpr double kPoleTolerance = 1e-14;
}  // namespace

double binomial(int n, int k) {
    static constexpr int kMax = 72;
    static const auto table = [] {
        std::array<std::array<double, kMax>, kMax> t{};
        for (int i = 0; i < kMax; ++i) {
            t[i][0] = 1.0;
            for (int j = 1; j <= i; ++j)
                t[i][j] = t[i - 1][j - 1] + (j < i ? t[i - 1][j] : 0.0);
        }
        return t;
    }();
    if (k < 0 || k > n) return 0.0;
    return table[n][k];
}

Jet jet_product(const Jet& a, const Jet& b) {
    const int n = static_cast<int>(a.size()) - 1;
    Jet out(n + 1, Complex(0.0, 0.0));
    for (int k = 0; k <= n; ++k) {
        Complex acc(0.0, 0.0);
        for (int i = 0; i <= k; ++i) acc += binomial(k, i) * a[i] * b[k - i];
        out[k] = acc;
    }
    return out;
}

namespace detail {

void check_not_pole(Complex a, Complex z) {
    if (std::abs(1.0 - std::conj(a) * z) < kPoleTolerance)
        throw PoleError("evaluation point hits the pole of a Blaschke factor");
}

Jet blaschke_factor_jet(Complex a, Complex z, int n) {
    check_not_pole(a, z);
    const Complex w = 1.0 - std::conj(a) * z;
    Jet out(n + 1, Complex(0.0, 0.0));
    out[0] = (z - a) / w;
    // (z-a)/(1-conj(a)z) has k-th derivative (1-|a|^2) k! conj(a)^(k-1) / w^(k+1).
    const double s = 1.0 - std::norm(a);
    Complex apow(1.0, 0.0);       // conj(a)^(k-1)
    Complex wpow = w * w;         // w^(k+1)
    double factorial = 1.0;
    for (int k = 1; k <= n; ++k) {
        factorial *= k;
        out[k] = s * factorial * apow / wpow;
        apow *= std::conj(a);
        wpow *= w;
    }
    return out;
}

Jet cauchy_factor_jet(Complex a, Complex z, int n) {
    check_not_pole(a, z);
    const Complex w = 1.0 - std::conj(a) * z;
    const double s = std::sqrt(1.0 - std::norm(a));
    Jet out(n + 1, Complex(0.0, 0.0));
    Complex apow(1.0, 0.0);
    Complex wpow = w;
    double factorial = 1.0;
    for (int k = 0; k <= n; ++k) {
        if (k > 0) {
            factorial *= k;
            apow *= std::conj(a);
        }
        out[k] = s * factorial * apow / wpow;
        wpow *= w;
    }
    return out;
}

}  // namespace detail

BlaschkeProduct::BlaschkeProduct(std::vector<Complex> zeros, Complex unimodular_constant)
    : zeros_(std::move(zeros)), constant_(unimodular_constant) {
    for (const Complex& a : zeros_) {
        if (!(std::abs(a) < kZeroModulusBound))
            throw DomainError("Blaschke zero too close to the unit circle");
    }
    const double c_mod = std::abs(constant_);
    if (std::abs(c_mod - 1.0) > 1e-12)
        throw DomainError("constant of a Blaschke product must be unimodular");
    constant_ /= c_mod;
}

Complex BlaschkeProduct::eval(Complex z) const {
    Complex value = constant_;
    for (const Complex& a : zeros_) {
        detail::check_not_pole(a, z);
        value *= (z - a) / (1.0 - std::conj(a) * z);
    }
    return value;
}

Jet BlaschkeProduct::jet(Complex z, int n) const {
    Jet acc(n + 1, Complex(0.0, 0.0));
    acc[0] = constant_;
    for (const Complex& a : zeros_) acc = jet_product(acc, detail::blaschke_factor_jet(a, z, n));
    return acc;
}

Complex BlaschkeProduct::deriv(Complex z, int n) const {
    if (n < 0 || n > 2 * degree() + 4)
        throw OrderError("derivative order exceeds 2*degree + 4");
    if (n == 0) return eval(z);
    return jet(z, n)[n];
}

BlaschkeProduct BlaschkeProduct::frostman_shift() const {
    const int n = degree();
    const Complex t0 = eval(Complex(0.0, 0.0));
    if (std::abs(t0) == 0.0) return *this;

    // Numerator of theta(z) - theta(0) over the common denominator:
    // c prod (z - a_k) - theta(0) prod (1 - conj(a_k) z).
    Eigen::VectorXcd p = Eigen::VectorXcd::Zero(n + 1);
    Eigen::VectorXcd q = Eigen::VectorXcd::Zero(n + 1);
    p(0) = constant_;
    q(0) = 1.0;
    int pdeg = 0;
    for (const Complex& a : zeros_) {
        for (int k = pdeg + 1; k >= 1; --k) {
            p(k) = p(k - 1) - a * p(k);
            q(k) = q(k - 1) * (-std::conj(a)) + q(k);
        }
        p(0) *= -a;
        ++pdeg;
    }
    Eigen::VectorXcd poly = p - t0 * q;  // ascending coefficients, degree n

    if (std::abs(poly(n)) < 1e-14 * poly.cwiseAbs().maxCoeff())
        throw RootFindingError("degenerate leading coefficient in Frostman polynomial");

    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) companion(i, n - 1) = -poly(i) / poly(n);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(companion, false);
    if (es.info() != Eigen::Success)
        throw RootFindingError("companion eigensolver failed to converge");

    std::vector<Complex> roots(es.eigenvalues().data(), es.eigenvalues().data() + n);
    // One Newton step per root to tighten simple roots; skipped near-critical ones.
    auto poly_eval = [&](Complex z) {
        Complex v(0.0, 0.0);
        for (int k = n; k >= 0; --k) v = v * z + poly(k);
        Complex d(0.0, 0.0);
        for (int k = n; k >= 1; --k) d = d * z + double(k) * poly(k);
        return std::pair<Complex, Complex>(v, d);
    };
    for (Complex& r : roots) {
        for (int it = 0; it < 2; ++it) {
            auto [v, d] = poly_eval(r);
            if (std::abs(d) < 1e-8) break;
            const Complex step = v / d;
            if (std::abs(step) > 1e-2) break;
            r -= step;
        }
        if (!(std::abs(r) < kZeroModulusBound))
            throw RootFindingError("Frostman zero escaped the open unit disk");
    }
    std::sort(roots.begin(), roots.end(), [](Complex x, Complex y) {
        if (x.real() != y.real()) return x.real() < y.real();
        return x.imag() < y.imag();
    });

    // Unimodular constant: match q(z) = (theta - theta(0))/(1 - conj(theta(0)) theta)
    // against the zero product at one circle point.
    const Complex z0 = std::polar(1.0, 0.7318530717958647);
    Complex prod(1.0, 0.0);
    for (const Complex& r : roots) prod *= (z0 - r) / (1.0 - std::conj(r) * z0);
    const Complex tz0 = eval(z0);
    const Complex target = (tz0 - t0) / (1.0 - std::conj(t0) * tz0);
    Complex cshift = target / prod;
    cshift /= std::abs(cshift);

    BlaschkeProduct shifted(roots, cshift);
    // Pointwise validation on the circle.
    for (int m = 0; m < 64; ++m) {
        const Complex z = std::polar(1.0, 2.0 * M_PI * (m + 0.25) / 64.0);
        const Complex tv = eval(z);
        const Complex want = (tv - t0) / (1.0 - std::conj(t0) * tv);
        if (std::abs(shifted.eval(z) - want) > 1e-9)
            throw RootFindingError("Frostman shift failed pointwise validation");
    }
    return shifted;
}

double BlaschkeProduct::ahern_clark_sum(Complex lambda, int n) const {
    if (std::abs(std::abs(lambda) - 1.0) > 1e-12)
        throw DomainError("Ahern-Clark sum requires a boundary point");
    double sum = 0.0;
    for (const Complex& a : zeros_) {
        const double d = std::norm(1.0 - lambda * std::conj(a));
        sum += (1.0 - std::norm(a)) / std::pow(d, n + 1);
    }
    return sum;
}

}  // namespace ktheta
