#include "ktheta/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ktheta/commands.hpp"
#include "ktheta/decompose.hpp"
#include "ktheta/rng.hpp"
#include "ktheta/subspace.hpp"

namespace ktheta {

namespace {

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << x;
    return os.str();
}

struct Tracker {
    double worst = 0.0;
    bool ok = true;

    void check(double value, double bound) {
        worst = std::max(worst, value);
        if (!(value <= bound)) ok = false;
    }
    void require(bool condition) {
        if (!condition) ok = false;
    }
    std::string detail(double bound) const {
        return "worst " + fmt(worst) + " (bound " + fmt(bound) + ")";
    }
};

BlaschkeProduct random_theta(CounterRng& rng, int degree, double max_mod = 0.7,
                             double min_sep = 0.12) {
    std::vector<Complex> zeros;
    while (static_cast<int>(zeros.size()) < degree) {
        Complex a = rng.next_disk(max_mod);
        bool clear = true;
        for (const Complex& b : zeros)
            if (std::abs(a - b) < min_sep) { clear = false; break; }
        if (clear) zeros.push_back(a);
    }
    return BlaschkeProduct(zeros, rng.next_unit_circle());
}

SpaceVector random_vector(CounterRng& rng, int n) {
    SpaceVector v(n);
    for (int i = 0; i < n; ++i) v(i) = rng.next_gaussian();
    return v / v.norm();
}

SymbolSpec random_symbol(CounterRng& rng) {
    SymbolSpec s;
    const int n_terms = 2 + static_cast<int>(rng.next_uniform() * 3);
    for (int t = 0; t < n_terms; ++t) {
        SymbolTerm term;
        const double pick = rng.next_uniform();
        term.coeff = rng.next_gaussian();
        if (pick < 0.3) {
            term.kind = SymbolTerm::Kind::poly_analytic;
            term.m = static_cast<int>(rng.next_uniform() * 4);
        } else if (pick < 0.6) {
            term.kind = SymbolTerm::Kind::poly_conj;
            term.m = static_cast<int>(rng.next_uniform() * 4);
        } else if (pick < 0.8) {
            term.kind = SymbolTerm::Kind::theta_pole;
            term.m = 1 + static_cast<int>(rng.next_uniform() * 2);
            term.lambda = rng.next_disk(0.7);
        } else {
            term.kind = SymbolTerm::Kind::theta_pole_conj;
            term.m = 1 + static_cast<int>(rng.next_uniform() * 2);
            term.lambda = rng.next_disk(0.7);
        }
        s.terms.push_back(term);
    }
    return s;
}

Eigen::MatrixXcd random_matrix(CounterRng& rng, int n) {
    Eigen::MatrixXcd a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = rng.next_gaussian();
    return a / spectral_norm(a);
}

// Values of the represented function at the quadrature nodes.
Eigen::VectorXcd node_values(const ModelBasis& basis, const SpaceVector& v) {
    return basis.basis_values() * v;
}

// Independent point evaluation through the Cauchy integral on the nodes;
// shares no code with the jet evaluation the kernels are built from.
Complex cauchy_eval(const ModelBasis& basis, const Eigen::VectorXcd& values, Complex lambda,
                    int n) {
    const int m = basis.quadrature_size();
    double factorial = 1.0;
    for (int k = 2; k <= n; ++k) factorial *= k;
    Complex sum(0.0, 0.0);
    for (int i = 0; i < m; ++i) {
        const Complex zbar = std::conj(basis.nodes()(i));
        Complex zbar_n(1.0, 0.0);
        for (int k = 0; k < n; ++k) zbar_n *= zbar;
        sum += values(i) * factorial * zbar_n / std::pow(1.0 - lambda * zbar, n + 1);
    }
    return sum / double(m);
}

Complex inner_product(const SpaceVector& f, const SpaceVector& g) { return g.dot(f); }

// ---- synthesized ground truth for the round-trip criteria ----------------

Decomposition random_truth(CounterRng& rng, int dim) {
    const int budget = dim - 2;
    Decomposition d;
    const int want = 1 + static_cast<int>(rng.next_uniform() * 4);
    int used = 0;
    std::vector<Complex> points;
    for (int c = 0; c < want; ++c) {
        const int room = budget - used;
        if (room <= 0) break;
        DecompositionComponent comp;
        const int max_order = std::min(room - 1, 2);
        comp.order = static_cast<int>(rng.next_uniform() * (max_order + 1));

        const double regime = rng.next_uniform();
        for (int attempt = 0;; ++attempt) {
            if (attempt > 200) return random_truth(rng, dim);  // repack
            Complex p;
            if (regime < 0.4) {
                comp.orientation = Orientation::d;
                p = rng.next_disk(0.65);
            } else if (regime < 0.8) {
                comp.orientation = Orientation::dbar;
                p = rng.next_disk(0.65);
            } else {
                comp.orientation = Orientation::boundary_both;
                p = rng.next_unit_circle();
            }
            bool clear = true;
            for (const Complex& q : points)
                if (std::abs(p - q) < 0.1) { clear = false; break; }
            if (clear) { comp.point = p; break; }
        }
        points.push_back(comp.point);
        for (int s = 0; s <= comp.order; ++s) {
            const double mod = 0.5 + 1.5 * rng.next_uniform();
            comp.coefficients.push_back(std::polar(mod, 2.0 * M_PI * rng.next_uniform()));
        }
        used += comp.order + 1;
        d.components.push_back(std::move(comp));
    }
    return d;
}

bool orientation_compatible(Orientation truth, Orientation got) {
    if (truth == Orientation::boundary_both || got == Orientation::boundary_both)
        return truth == Orientation::boundary_both;
    return truth == got;
}

// ---- criteria -------------------------------------------------------------

CriterionResult criterion_reproducing(std::uint64_t seed) {
    Tracker t;
    CounterRng rng(seed);
    for (int c = 0; c < 20; ++c) {
        const int deg = 2 + static_cast<int>(rng.next_uniform() * 7);
        const ModelBasis basis(random_theta(rng, deg));
        const SpaceVector f = random_vector(rng, deg);
        const Complex lambda = rng.next_disk(0.75);
        const Eigen::VectorXcd values = node_values(basis, f);

        const SpaceVector k0 = kernel(basis, lambda, 0);
        t.check(std::abs(inner_product(f, k0) - cauchy_eval(basis, values, lambda, 0)),
                1e-9 * f.norm() * k0.norm());
        for (int n = 1; n <= std::min(3, deg - 1); ++n) {
            const SpaceVector kn = kernel(basis, lambda, n);
            t.check(std::abs(inner_product(f, kn) - cauchy_eval(basis, values, lambda, n)),
                    1e-7 * f.norm() * kn.norm());
        }
    }
    return {1, "reproducing identities", t.ok, t.detail(0)};
}

CriterionResult criterion_shift_relations(std::uint64_t seed) {
    Tracker t;
    CounterRng rng(seed);
    const double tol = 1e-9;
    for (int c = 0; c < 8; ++c) {
        const int deg = 4 + static_cast<int>(rng.next_uniform() * 5);
        const ModelBasis basis(random_theta(rng, deg));
        const BlaschkeProduct& theta = basis.theta();
        const OperatorMatrix s = compressed_shift(basis);
        const SpaceVector k0 = kernel(basis, Complex(0, 0), 0);
        const SpaceVector kc0 = conj_kernel(basis, Complex(0, 0), 0);

        Complex lambda = rng.next_disk(0.7);
        if (std::abs(lambda) < 0.1) lambda += Complex(0.3, 0.0);
        const SpaceVector kl = kernel(basis, lambda, 0);
        const SpaceVector kcl = conj_kernel(basis, lambda, 0);

        auto residual = [&](const SpaceVector& lhs, const SpaceVector& rhs) {
            t.check((lhs - rhs).norm(), tol * (1.0 + rhs.norm()));
        };
        residual(s * kl, (kl - k0) / std::conj(lambda));
        residual(s * kcl, lambda * kcl - theta.eval(lambda) * k0);
        residual(s * k0, kernel(basis, Complex(0, 0), 1));
        residual(s * kc0, -theta.eval(Complex(0, 0)) * k0);

        SpaceVector power = k0;
        double factorial = 1.0;
        for (int n = 1; n <= 3; ++n) {
            power = s * power;
            factorial *= n;
            residual(power, kernel(basis, Complex(0, 0), n) / factorial);
            residual(s * conj_kernel(basis, Complex(0, 0), n),
                     double(n) * conj_kernel(basis, Complex(0, 0), n - 1) -
                         theta.deriv(Complex(0, 0), n) * k0);
        }
    }
    return {2, "shift relations", t.ok, t.detail(tol)};
}

CriterionResult criterion_conjugation(std::uint64_t seed) {
    Tracker t;
    CounterRng rng(seed);
    for (int c = 0; c < 20; ++c) {
        const int deg = 3 + static_cast<int>(rng.next_uniform() * 5);
        const ModelBasis basis(random_theta(rng, deg));
        const Conjugation conj_op = conjugation_matrix(basis);
        t.check((conj_op.matrix * conj_op.matrix.conjugate() -
                 Eigen::MatrixXcd::Identity(deg, deg)).cwiseAbs().maxCoeff(),
                1e-10);
        OperatorMatrix a = compress(basis, random_symbol(rng));
        a /= spectral_norm(a);
        t.check(complex_symmetry_residual(basis, a), 1e-8);
    }
    for (int c = 0; c < 10; ++c) {
        const int deg = 3 + static_cast<int>(rng.next_uniform() * 5);
        const ModelBasis basis(random_theta(rng, deg));
        const double res = complex_symmetry_residual(basis, random_matrix(rng, deg));
        t.require(res >= 0.1);
    }
    return {3, "conjugation and complex symmetry", t.ok, t.detail(1e-8)};
}

CriterionResult criterion_sarason(std::uint64_t seed) {
    Tracker t;
    CounterRng rng(seed);
    const double tol = 1e-8;
    for (int c = 0; c < 20; ++c) {
        const int deg = 3 + static_cast<int>(rng.next_uniform() * 6);
        const ModelBasis basis(random_theta(rng, deg));
        const OperatorMatrix a = compress(basis, random_symbol(rng));
        const SarasonResult r = sarason_test(basis, a, tol);
        t.require(r.is_tto);
        t.check(r.residual, tol);

        const SymbolSpec recovered = symbol_from_model_pair(basis, r.psi, r.chi);
        const OperatorMatrix rebuilt = compress(basis, recovered);
        t.check(spectral_norm(rebuilt - a), 1e-7 * std::max(1.0, spectral_norm(a)));
    }
    for (int c = 0; c < 20; ++c) {
        const int deg = 3 + static_cast<int>(rng.next_uniform() * 6);
        const ModelBasis basis(random_theta(rng, deg));
        const SarasonResult r = sarason_test(basis, random_matrix(rng, deg), tol);
        t.require(!r.is_tto);
        t.require(r.residual >= 1e3 * tol);
    }
    return {4, "Sarason criterion and symbol recovery", t.ok, t.detail(tol)};
}

CriterionResult criterion_clark(std::uint64_t seed) {
    Tracker t;
    CounterRng rng(seed);
    for (int c = 0; c < 6; ++c) {
        const int deg = 3 + static_cast<int>(rng.next_uniform() * 6);
        const ModelBasis basis(random_theta(rng, deg));
        const Complex alpha = rng.next_unit_circle();
        const OperatorMatrix u = clark_unitary(basis, alpha);
        t.check((u.adjoint() * u - Eigen::MatrixXcd::Identity(deg, deg)).cwiseAbs().maxCoeff(),
                1e-10);
        const ClarkMeasure cm = clark_measure(basis, alpha);
        for (int i = 0; i < cm.size(); ++i)
            t.check(std::abs(basis.theta().eval(cm.atoms(i)) - alpha), 1e-8);

        for (int probe = 0; probe < 10; ++probe) {
            const SpaceVector f = random_vector(rng, deg);
            const SpaceVector g = random_vector(rng, deg);
            const Eigen::VectorXcd fv = embed(basis, cm, f);
            const Eigen::VectorXcd gv = embed(basis, cm, g);
            Complex weighted(0.0, 0.0);
            for (int i = 0; i < cm.size(); ++i)
                weighted += cm.masses(i) * fv(i) * std::conj(gv(i));
            t.check(std::abs(weighted - inner_product(f, g)), 1e-9);
        }
        const SpaceVector f = random_vector(rng, deg);
        const Complex z = rng.next_disk(0.8);
        const Complex direct = eval_vector(basis, f, z, 0);
        t.check(std::abs(cauchy_reconstruct(basis, cm, embed(basis, cm, f), z) - direct),
                1e-8 * (1.0 + std::abs(direct)));
    }
    for (int deg : {4, 7}) {
        const ModelBasis basis(BlaschkeProduct(std::vector<Complex>(deg, Complex(0, 0)),
                                               Complex(1, 0)));
        const ClarkMeasure cm = clark_measure(basis, Complex(1, 0));
        for (int i = 0; i < deg; ++i) {
            const Complex root = std::polar(1.0, 2.0 * M_PI * i / deg);
            double best = 1e300;
            for (int k = 0; k < deg; ++k) best = std::min(best, std::abs(cm.atoms(k) - root));
            t.check(best, 1e-10);
            t.check(std::abs(cm.masses(i) - 1.0 / deg), 1e-10);
        }
    }
    return {5, "Clark measures", t.ok, t.detail(1e-8)};
}

CriterionResult criterion_rank_law(std::uint64_t seed) {
    Tracker t;
    CounterRng rng(seed);
    for (int c = 0; c < 20; ++c) {
        const int deg = 4 + static_cast<int>(rng.next_uniform() * 7);
        const ModelBasis basis(random_theta(rng, deg));
        const int n = static_cast<int>(rng.next_uniform() * std::min(4, deg - 1));
        const Complex lambda =
            (c % 2 == 0) ? rng.next_disk(0.7) : rng.next_unit_circle();
        const Orientation orient = (c % 4 < 2) ? Orientation::d : Orientation::dbar;
        const OperatorMatrix op = derived_op(basis, lambda, n, orient);
        const Eigen::VectorXd sigma = Eigen::JacobiSVD<Eigen::MatrixXcd>(op).singularValues();
        int rank = 0;
        for (int i = 0; i < sigma.size(); ++i)
            if (sigma(i) > 1e-10 * sigma(0)) ++rank;
        t.require(rank == n + 1);
    }
    return {6, "derived-operator rank law", t.ok,
            t.ok ? "rank n + 1 in all 20 cases" : "rank mismatch"};
}

CriterionResult criterion_symbol_equivalence(std::uint64_t seed) {
    Tracker t;
    CounterRng rng(seed);
    for (int c = 0; c < 10; ++c) {
        const int deg = 4 + static_cast<int>(rng.next_uniform() * 5);
        const ModelBasis basis(random_theta(rng, deg));
        const Complex lambda = rng.next_disk(0.7);
        const int n = c % 3;
        double factorial = 1.0;
        for (int k = 2; k <= n; ++k) factorial *= k;
        SymbolSpec phi;
        phi.terms.push_back({SymbolTerm::Kind::theta_pole, n + 1, lambda,
                             Complex(factorial, 0.0)});
        const OperatorMatrix via_symbol = compress(basis, phi);
        const OperatorMatrix via_tensors = derived_op(basis, lambda, n, Orientation::d);
        t.check(spectral_norm(via_symbol - via_tensors),
                1e-7 * std::max(1.0, spectral_norm(via_tensors)));
    }
    return {7, "interior symbol equivalence", t.ok, t.detail(1e-7)};
}

CriterionResult criterion_round_trip(std::uint64_t seed) {
    Tracker t;
    CounterRng rng(seed);
    std::string failure;
    const std::array<int, 3> dims = {6, 10, 16};
    for (int c = 0; c < 30 && t.ok; ++c) {
        const int deg = dims[c % 3];
        const ModelBasis basis(random_theta(rng, deg, 0.6, 0.1));
        const Decomposition truth = random_truth(rng, deg);
        const OperatorMatrix a = synthesize(basis, truth);

        Decomposition got;
        try {
            got = decompose(basis, a, 1e-8, seed + c);
        } catch (const Error& e) {
            t.require(false);
            failure = "case " + std::to_string(c) + ": " + e.what();
            break;
        }
        t.check(got.residual, 1e-6);
        t.check(spectral_norm(synthesize(basis, got) - a) / spectral_norm(a), 1e-6);

        if (got.components.size() != truth.components.size()) {
            t.require(false);
            failure = "case " + std::to_string(c) + ": component count mismatch";
            break;
        }
        std::vector<bool> used(truth.components.size(), false);
        for (const auto& comp : got.components) {
            bool matched = false;
            for (std::size_t i = 0; i < truth.components.size(); ++i) {
                const auto& ref = truth.components[i];
                if (used[i] || ref.order != comp.order) continue;
                if (!orientation_compatible(ref.orientation, comp.orientation)) continue;
                if (std::abs(ref.point - comp.point) > 1e-6) continue;
                used[i] = true;
                matched = true;
                t.check(std::abs(ref.point - comp.point), 1e-6);
                break;
            }
            if (!matched) {
                t.require(false);
                failure = "case " + std::to_string(c) + ": unmatched component";
            }
        }
    }
    return {8, "decomposition round trip", t.ok,
            t.ok ? "30 synthesized operators recovered, " + t.detail(1e-6) : failure};
}

CriterionResult criterion_coefficient_table(std::uint64_t seed) {
    Tracker t;
    CounterRng rng(seed);
    for (int c = 0; c < 8; ++c) {
        const int deg = 5 + static_cast<int>(rng.next_uniform() * 4);
        const ModelBasis basis(random_theta(rng, deg));
        const Complex mu = (c % 2 == 0) ? Complex(0.0, 0.0) : rng.next_disk(0.6);
        const int n = c % 4;
        const OperatorMatrix a = derived_op(basis, mu, n, Orientation::d);
        const ElementaryTable table = elementary_coefficients(basis, a, mu, n);
        const double scale = table.a.cwiseAbs().maxCoeff();
        t.check(table.binomial_residual, 1e-8 * scale);
        t.check(table.order_residual, 1e-8 * scale);
    }
    return {9, "elementary coefficient tables", t.ok, t.detail(1e-8)};
}

CriterionResult criterion_range_inclusion(std::uint64_t seed) {
    Tracker t;
    CounterRng rng(seed);
    for (int c = 0; c < 20; ++c) {
        const int deg = 5 + static_cast<int>(rng.next_uniform() * 4);
        const ModelBasis basis(random_theta(rng, deg, 0.6, 0.1));
        const OperatorMatrix a = synthesize(basis, random_truth(rng, deg));
        const OperatorMatrix s = compressed_shift(basis);

        const std::vector<SpaceVector> range = range_basis(a, 1e-8);
        const int r = static_cast<int>(range.size());
        Eigen::MatrixXcd u(deg, r);
        for (int i = 0; i < r; ++i) u.col(i) = range[i];

        int chain = 0;
        while (chain < r) {
            const SpaceVector k = kernel(basis, Complex(0, 0), chain);
            if (membership_residual(u, k) > 1e-6) break;
            ++chain;
        }
        Eigen::MatrixXcd extended(deg, r + 1);
        extended.leftCols(r) = u;
        extended.col(r) = kernel(basis, Complex(0, 0), chain);
        const Eigen::MatrixXcd w = orthonormal_columns(extended);
        for (int i = 0; i < r; ++i) {
            const SpaceVector image = s * u.col(i);
            t.check((image - w * (w.adjoint() * image)).norm(),
                    1e-7 * std::max(1.0, image.norm()));
        }
    }
    return {10, "shift range inclusion", t.ok, t.detail(1e-7)};
}

CriterionResult criterion_duality(std::uint64_t seed) {
    Tracker t;
    CounterRng rng(seed);
    for (int c = 0; c < 10; ++c) {
        const int deg = 4 + static_cast<int>(rng.next_uniform() * 5);
        const ModelBasis basis(random_theta(rng, deg));
        const Conjugation conj_op = conjugation_matrix(basis);
        const Complex lambda = rng.next_disk(0.7);
        const int s = c % 3;
        const OperatorMatrix a = derived_op(basis, lambda, s, Orientation::d);

        std::vector<std::pair<SpaceVector, SpaceVector>> terms;
        for (int k = 0; k < 3; ++k)
            terms.emplace_back(random_vector(rng, deg), random_vector(rng, deg));

        // s-th derivative of sum_k x_k (C y_k) at lambda, by the product rule.
        Complex expected(0.0, 0.0);
        for (const auto& [x, y] : terms) {
            const SpaceVector cy = conj_op.apply(y);
            for (int i = 0; i <= s; ++i)
                expected += binomial(s, i) * eval_vector(basis, x, lambda, s - i) *
                            eval_vector(basis, cy, lambda, i);
        }
        t.check(std::abs(duality_pair(a, terms) - expected),
                1e-7 * (1.0 + std::abs(expected)));
    }
    return {11, "duality pairing", t.ok, t.detail(1e-7)};
}

CriterionResult criterion_determinism(std::uint64_t seed) {
    CounterRng rng(seed);
    const int deg = 6;
    const BlaschkeProduct theta = random_theta(rng, deg);
    const ModelBasis basis(theta);
    const OperatorMatrix a = synthesize(basis, random_truth(rng, deg));

    const Json config{{"theta", blaschke_to_json(theta)},
                      {"matrix", matrix_to_json(a)},
                      {"tol", 1e-8},
                      {"seed", 7}};
    const std::string text = config.dump();
    const TextResult first = run_command_text("decompose", text);
    const TextResult second = run_command_text("decompose", text);
    const bool pass =
        first.exit_code == 0 && second.exit_code == 0 && first.output == second.output;
    return {12, "deterministic output", pass,
            pass ? "byte-identical repeated runs" : "outputs differ between runs"};
}

}  // namespace

std::vector<CriterionResult> run_acceptance(std::uint64_t seed) {
    std::vector<CriterionResult> results;
    results.push_back(criterion_reproducing(seed + 101));
    results.push_back(criterion_shift_relations(seed + 202));
    results.push_back(criterion_conjugation(seed + 303));
    results.push_back(criterion_sarason(seed + 404));
    results.push_back(criterion_clark(seed + 505));
    results.push_back(criterion_rank_law(seed + 606));
    results.push_back(criterion_symbol_equivalence(seed + 707));
    results.push_back(criterion_round_trip(seed + 808));
    results.push_back(criterion_coefficient_table(seed + 909));
    results.push_back(criterion_range_inclusion(seed + 1010));
    results.push_back(criterion_duality(seed + 1111));
    results.push_back(criterion_determinism(seed + 1212));
    return results;
}

}  // namespace ktheta
