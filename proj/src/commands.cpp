#include "ktheta/commands.hpp"

#include <cmath>

#include "ktheta/selftest.hpp"

namespace ktheta {

namespace {

struct JobConfig {
    Json theta;
    double tol = 1e-8;
    std::uint64_t seed = 0;
    int quadrature_size = 0;
};

JobConfig common_config(const Json& config) {
    JobConfig job;
    if (config.contains("tol")) {
        if (!config["tol"].is_number() || !(config["tol"].get<double>() > 0.0))
            throw ParseError("config: 'tol' must be a positive number");
        job.tol = config["tol"].get<double>();
    }
    if (config.contains("seed")) {
        if (!config["seed"].is_number_integer())
            throw ParseError("config: 'seed' must be an integer");
        job.seed = config["seed"].get<std::uint64_t>();
    }
    if (config.contains("quadrature_size")) {
        if (!config["quadrature_size"].is_number_integer())
            throw ParseError("config: 'quadrature_size' must be an integer");
        job.quadrature_size = config["quadrature_size"].get<int>();
        if (job.quadrature_size < 0) throw ParseError("config: negative quadrature size");
    }
    return job;
}

ModelBasis basis_from_config(const Json& config, const JobConfig& job) {
    if (!config.contains("theta")) throw ParseError("config: missing 'theta'");
    return ModelBasis(blaschke_from_json(config["theta"]), job.quadrature_size);
}

CommandResult cmd_kernel(const Json& config) {
    expect_fields(config, {"theta", "lambda", "n", "tol", "seed", "quadrature_size"},
                  "kernel config");
    const JobConfig job = common_config(config);
    const ModelBasis basis = basis_from_config(config, job);
    if (!config.contains("lambda")) throw ParseError("config: missing 'lambda'");
    const Complex lambda = complex_from_json(config["lambda"], "config.lambda");
    int n = 0;
    if (config.contains("n")) {
        if (!config["n"].is_number_integer() || config["n"].get<int>() < 0)
            throw ParseError("config: 'n' must be a nonnegative integer");
        n = config["n"].get<int>();
    }
    const SpaceVector v = kernel(basis, lambda, n);
    return {Json{{"vector", vector_to_json(v)}, {"norm", v.norm()}}, 0};
}

CommandResult cmd_build(const Json& config) {
    expect_fields(config, {"theta", "symbol", "tol", "seed", "quadrature_size"},
                  "build config");
    const JobConfig job = common_config(config);
    const ModelBasis basis = basis_from_config(config, job);
    if (!config.contains("symbol")) throw ParseError("config: missing 'symbol'");
    const SymbolSpec symbol = symbol_from_json(config["symbol"]);
    return {matrix_to_json(compress(basis, symbol)), 0};
}

CommandResult cmd_check(const Json& config) {
    expect_fields(config, {"theta", "matrix", "tol", "seed", "quadrature_size"},
                  "check config");
    const JobConfig job = common_config(config);
    const ModelBasis basis = basis_from_config(config, job);
    if (!config.contains("matrix")) throw ParseError("config: missing 'matrix'");
    const OperatorMatrix a = matrix_from_json(config["matrix"]);
    const SarasonResult r = sarason_test(basis, a, job.tol);
    return {Json{{"is_tto", r.is_tto},
                 {"residual", r.residual},
                 {"psi", vector_to_json(r.psi)},
                 {"chi", vector_to_json(r.chi)}},
            0};
}

CommandResult cmd_decompose(const Json& config) {
    expect_fields(config, {"theta", "matrix", "tol", "seed", "quadrature_size"},
                  "decompose config");
    const JobConfig job = common_config(config);
    const ModelBasis basis = basis_from_config(config, job);
    if (!config.contains("matrix")) throw ParseError("config: missing 'matrix'");
    const OperatorMatrix a = matrix_from_json(config["matrix"]);
    return {decomposition_to_json(decompose(basis, a, job.tol, job.seed)), 0};
}

CommandResult cmd_clark(const Json& config) {
    expect_fields(config, {"theta", "alpha", "tol", "seed", "quadrature_size"},
                  "clark config");
    const JobConfig job = common_config(config);
    const ModelBasis basis = basis_from_config(config, job);
    if (!config.contains("alpha")) throw ParseError("config: missing 'alpha'");
    const Complex alpha = complex_from_json(config["alpha"], "config.alpha");
    return {clark_to_json(clark_measure(basis, alpha)), 0};
}

CommandResult cmd_selftest(const Json& config) {
    expect_fields(config, {"seed", "tol"}, "selftest config");
    const JobConfig job = common_config(config);
    const std::vector<CriterionResult> results = run_acceptance(job.seed);
    Json criteria = Json::array();
    int passed = 0, failed = 0;
    for (const CriterionResult& r : results) {
        criteria.push_back(Json{{"id", r.id}, {"name", r.name}, {"pass", r.pass},
                                {"detail", r.detail}});
        (r.pass ? passed : failed) += 1;
    }
    return {Json{{"criteria", criteria}, {"passed", passed}, {"failed", failed}},
            failed == 0 ? 0 : 3};
}

}  // namespace

CommandResult run_command(const std::string& name, const Json& config) {
    if (!config.is_object()) throw ParseError("config must be a JSON object");
    if (name == "kernel") return cmd_kernel(config);
    if (name == "build") return cmd_build(config);
    if (name == "check") return cmd_check(config);
    if (name == "decompose") return cmd_decompose(config);
    if (name == "clark") return cmd_clark(config);
    if (name == "selftest") return cmd_selftest(config);
    throw ParseError("unknown command '" + name + "'");
}

TextResult run_command_text(const std::string& name, const std::string& config_text) {
    try {
        Json config;
        try {
            config = Json::parse(config_text);
        } catch (const Json::parse_error& e) {
            throw ParseError(std::string("invalid JSON: ") + e.what());
        }
        const CommandResult result = run_command(name, config);
        return {result.output.dump() + "\n", result.exit_code};
    } catch (const Error& e) {
        const Json envelope{{"error", Json{{"kind", e.kind()}, {"message", e.what()}}}};
        return {envelope.dump() + "\n", static_cast<int>(e.category())};
    }
}

}  // namespace ktheta
