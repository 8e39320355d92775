#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "ktheta/commands.hpp"

namespace {

struct Overrides {
    double tol = 0.0;
    long long seed = 0;
    int quadrature = 0;
    std::string in_path;
    std::string out_path;
    bool has_tol = false;
    bool has_seed = false;
    bool has_quadrature = false;
};

std::string read_input(const Overrides& o, bool optional_input) {
    if (!o.in_path.empty()) {
        std::ifstream in(o.in_path, std::ios::binary);
        if (!in) return "";
        std::ostringstream buf;
        buf << in.rdbuf();
        return buf.str();
    }
    if (optional_input) return "{}";
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    return buf.str();
}

int run(const std::string& name, const Overrides& o) {
    const bool optional_input = name == "selftest";
    std::string text = read_input(o, optional_input);
    if (text.empty() && optional_input) text = "{}";

    // Flag overrides are applied on the parsed config; a malformed config
    // still reports through the error envelope below.
    ktheta::TextResult result;
    try {
        ktheta::Json config = ktheta::Json::parse(text);
        if (o.has_tol) config["tol"] = o.tol;
        if (o.has_seed) config["seed"] = o.seed;
        if (o.has_quadrature) config["quadrature_size"] = o.quadrature;
        result = ktheta::run_command_text(name, config.dump());
    } catch (const ktheta::Json::parse_error&) {
        result = ktheta::run_command_text(name, text);  // produces the parse envelope
    }

    if (!o.out_path.empty()) {
        std::ofstream out(o.out_path, std::ios::binary);
        if (!out) {
            std::cerr << "cannot open output file " << o.out_path << "\n";
            return 4;
        }
        out << result.output;
    } else {
        std::cout << result.output;
    }
    return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical toolkit for model spaces of finite Blaschke products"};
    app.require_subcommand(1);

    const std::pair<const char*, const char*> commands[] = {
        {"kernel", "Coordinates of a (derived) reproducing kernel"},
        {"build", "Compress a rational symbol to an operator matrix"},
        {"check", "Sarason test: is the matrix a truncated Toeplitz operator"},
        {"decompose", "Decompose a finite-rank operator over the derived-kernel dictionary"},
        {"clark", "Atoms and masses of a Clark measure"},
        {"selftest", "Run the acceptance suite"},
    };

    Overrides o;
    std::vector<CLI::App*> subs;
    for (const auto& [name, description] : commands) {
        CLI::App* sub = app.add_subcommand(name, description);
        sub->add_option("--tol", o.tol, "Relative tolerance (default 1e-8)");
        sub->add_option("--seed", o.seed, "Seed for randomized steps (default 0)");
        sub->add_option("--quadrature", o.quadrature, "Quadrature size (default auto)");
        sub->add_option("--in", o.in_path, "Read the JSON config from a file instead of stdin");
        sub->add_option("--out", o.out_path, "Write the JSON result to a file instead of stdout");
        subs.push_back(sub);
    }

    CLI11_PARSE(app, argc, argv);

    for (std::size_t i = 0; i < subs.size(); ++i) {
        if (subs[i]->parsed()) {
            o.has_tol = subs[i]->count("--tol") > 0;
            o.has_seed = subs[i]->count("--seed") > 0;
            o.has_quadrature = subs[i]->count("--quadrature") > 0;
            return run(commands[i].first, o);
        }
    }
    return 4;
}
