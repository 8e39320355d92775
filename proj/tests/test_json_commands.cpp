#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ktheta/commands.hpp"
#include "ktheta/subspace.hpp"
#include "testutil.hpp"

using namespace ktheta;
using testutil::random_theta;

namespace {

const Complex kOne(1.0, 0.0);
const Complex kZero(0.0, 0.0);

Json theta_json(std::initializer_list<Complex> zeros) {
    Json z = Json::array();
    for (const Complex& a : zeros) z.push_back(complex_to_json(a));
    return Json{{"zeros", z}, {"constant", complex_to_json(kOne)}};
}

}  // namespace

TEST_CASE("round trips for the wire formats") {
    CounterRng rng(91);
    const BlaschkeProduct theta = random_theta(rng, 4);
    const BlaschkeProduct back = blaschke_from_json(blaschke_to_json(theta));
    CHECK(back.degree() == theta.degree());
    CHECK(std::abs(back.eval(Complex(0.3, 0.2)) - theta.eval(Complex(0.3, 0.2))) < 1e-15);

    const SpaceVector v = testutil::random_vector(rng, 5);
    CHECK((vector_from_json(vector_to_json(v)) - v).norm() == 0.0);

    const Eigen::MatrixXcd m = testutil::random_matrix(rng, 4);
    CHECK((matrix_from_json(matrix_to_json(m)) - m).norm() == 0.0);

    SymbolSpec s;
    s.terms.push_back({SymbolTerm::Kind::theta_pole, 2, Complex(0.3, -0.1), Complex(1.5, 2.0)});
    s.terms.push_back({SymbolTerm::Kind::poly_conj, 3, kZero, Complex(0.0, -1.0)});
    const SymbolSpec s2 = symbol_from_json(symbol_to_json(s));
    CHECK(s2.terms.size() == 2);
    CHECK(s2.terms[0].kind == SymbolTerm::Kind::theta_pole);
    CHECK(s2.terms[0].m == 2);
    CHECK(s2.terms[0].lambda == Complex(0.3, -0.1));

    const ModelBasis basis(theta);
    const ClarkMeasure cm = clark_measure(basis, kOne);
    const ClarkMeasure cm2 = clark_from_json(clark_to_json(cm));
    CHECK((cm2.atoms - cm.atoms).norm() == 0.0);
    CHECK((cm2.masses - cm.masses).norm() == 0.0);

    Decomposition d;
    d.components.push_back({Complex(0.4, 0.1), 1, Orientation::dbar,
                            {Complex(1.0, 0.0), Complex(0.0, 2.0)}});
    d.residual = 1e-9;
    const Decomposition d2 = decomposition_from_json(decomposition_to_json(d));
    CHECK(d2.components.size() == 1);
    CHECK(d2.components[0].orientation == Orientation::dbar);
    CHECK(d2.components[0].coefficients[1] == Complex(0.0, 2.0));
}

TEST_CASE("strict field validation") {
    Json bad = theta_json({kZero});
    bad["extra"] = 1;
    CHECK_THROWS_AS(blaschke_from_json(bad), ParseError);
    CHECK_THROWS_AS(vector_from_json(Json{{"coords", 3}}), ParseError);
    CHECK_THROWS_AS(matrix_from_json(Json{{"rows", 2}, {"cols", 2}, {"data", Json::array()}}),
                    ParseError);
    CHECK_THROWS_AS(complex_from_json(Json::array({1.0}), "x"), ParseError);
}

TEST_CASE("floats serialize to shortest round-trip decimals") {
    CHECK(Json(0.1).dump() == "0.1");
    CHECK(Json(1.0 / 3.0).dump() == "0.3333333333333333");
}

TEST_CASE("kernel command") {
    Json config{{"theta", theta_json({kZero, kZero})},
                {"lambda", complex_to_json(kZero)},
                {"n", 0}};
    CommandResult r = run_command("kernel", config);
    CHECK(r.exit_code == 0);
    CHECK(r.output["vector"]["coords"] == Json::parse("[[1.0,0.0],[0.0,0.0]]"));

    config["n"] = 1;
    r = run_command("kernel", config);
    CHECK(r.output["vector"]["coords"] == Json::parse("[[0.0,0.0],[1.0,0.0]]"));

    config["lambda"] = complex_to_json(Complex(2.0, 0.0));
    const TextResult err = run_command_text("kernel", config.dump());
    CHECK(err.exit_code == 2);
    CHECK(Json::parse(err.output)["error"]["kind"] == "DomainError");
}

TEST_CASE("build command") {
    const Json theta = theta_json({kZero, Complex(0.4, 0.0), Complex(-0.3, 0.1)});
    Json config{{"theta", theta},
                {"symbol", Json{{"terms", Json::array({Json{{"kind", "poly_analytic"},
                                                            {"m", 0},
                                                            {"coeff", Json::array({1.0, 0.0})}}})}}}};
    CommandResult r = run_command("build", config);
    const OperatorMatrix identity = matrix_from_json(r.output);
    CHECK((identity - Eigen::MatrixXcd::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-10);

    config["symbol"] = Json{{"terms", Json::array({Json{{"kind", "poly_analytic"},
                                                        {"m", 1},
                                                        {"coeff", Json::array({1.0, 0.0})}}})}};
    const OperatorMatrix shift = matrix_from_json(run_command("build", config).output);
    const ModelBasis basis(blaschke_from_json(theta));
    CHECK((shift - compressed_shift(basis)).cwiseAbs().maxCoeff() <= 1e-10);

    config["symbol"] = Json{{"terms", Json::array({Json{{"kind", "theta_pole"},
                                                        {"m", 1},
                                                        {"lambda", Json::array({0.3, 0.0})},
                                                        {"coeff", Json::array({1.0, 0.0})}}})}};
    const OperatorMatrix pole = matrix_from_json(run_command("build", config).output);
    CHECK(spectral_norm(pole - rank_one(basis, Complex(0.3, 0.0),
                                        TensorOrientation::conj_outer_k)) <= 1e-8);
}

TEST_CASE("check and decompose commands") {
    CounterRng rng(93);
    const BlaschkeProduct theta = random_theta(rng, 4);
    const ModelBasis basis(theta);

    Json config{{"theta", blaschke_to_json(theta)},
                {"matrix", matrix_to_json(Eigen::MatrixXcd::Identity(4, 4))}};
    CommandResult r = run_command("check", config);
    CHECK(r.output["is_tto"] == true);

    config["matrix"] = matrix_to_json(testutil::random_matrix(rng, 4));
    r = run_command("check", config);
    CHECK(r.output["is_tto"] == false);

    const OperatorMatrix member =
        derived_op(basis, Complex(0.2, 0.3), 1, Orientation::d);
    config["matrix"] = matrix_to_json(member);
    r = run_command("decompose", config);
    CHECK(r.exit_code == 0);
    CHECK(r.output["components"].size() == 1);
    CHECK(r.output["components"][0]["order"] == 1);
    CHECK(r.output["components"][0]["orientation"] == "D");

    config["matrix"] = matrix_to_json(testutil::random_matrix(rng, 4));
    const TextResult err = run_command_text("decompose", config.dump());
    CHECK(err.exit_code == 3);
    CHECK(Json::parse(err.output)["error"]["kind"] == "NotTTOError");
}

TEST_CASE("clark command") {
    Json config{{"theta", theta_json({kZero, kZero, kZero})},
                {"alpha", complex_to_json(kOne)}};
    CommandResult r = run_command("clark", config);
    CHECK(r.output["atoms"].size() == 3);
    for (const auto& mass : r.output["masses"])
        CHECK(mass.get<double>() == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

    config["theta"] = theta_json({kZero});
    r = run_command("clark", config);
    CHECK(r.output["atoms"].size() == 1);
}

TEST_CASE("unknown fields and commands are rejected") {
    Json config{{"theta", theta_json({kZero})},
                {"alpha", complex_to_json(kOne)},
                {"surprise", 1}};
    const TextResult r = run_command_text("clark", config.dump());
    CHECK(r.exit_code == 4);
    CHECK(Json::parse(r.output)["error"]["kind"] == "ParseError");

    CHECK(run_command_text("unknown", "{}").exit_code == 4);
    CHECK(run_command_text("clark", "not json").exit_code == 4);
}

TEST_CASE("decompose output is byte-deterministic") {
    CounterRng rng(95);
    const BlaschkeProduct theta = random_theta(rng, 5);
    const ModelBasis basis(theta);
    const OperatorMatrix a =
        derived_op(basis, Complex(0.4, 0.0), 1, Orientation::d) +
        2.0 * derived_op(basis, Complex(-0.3, 0.2), 0, Orientation::dbar);

    const Json config{{"theta", blaschke_to_json(theta)},
                      {"matrix", matrix_to_json(a)},
                      {"seed", 11}};
    const std::string text = config.dump();
    const TextResult r1 = run_command_text("decompose", text);
    const TextResult r2 = run_command_text("decompose", text);
    CHECK(r1.exit_code == 0);
    CHECK(r1.output == r2.output);
}
