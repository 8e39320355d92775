#include "ktheta/json_io.hpp"

#include <cmath>

namespace ktheta {

namespace {

double number_from_json(const Json& j, const char* context) {
    if (!j.is_number()) throw ParseError(std::string(context) + ": expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ParseError(std::string(context) + ": non-finite number");
    return v;
}

const Json& required_field(const Json& j, const char* name, const char* context) {
    if (!j.is_object()) throw ParseError(std::string(context) + ": expected an object");
    const auto it = j.find(name);
    if (it == j.end())
        throw ParseError(std::string(context) + ": missing field '" + name + "'");
    return *it;
}

int int_from_json(const Json& j, const char* context) {
    if (!j.is_number_integer())
        throw ParseError(std::string(context) + ": expected an integer");
    return j.get<int>();
}

}  // namespace

void expect_fields(const Json& j, std::initializer_list<const char*> allowed,
                   const char* context) {
    if (!j.is_object()) throw ParseError(std::string(context) + ": expected an object");
    for (const auto& [key, value] : j.items()) {
        bool found = false;
        for (const char* name : allowed)
            if (key == name) { found = true; break; }
        if (!found)
            throw ParseError(std::string(context) + ": unknown field '" + key + "'");
    }
}

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j, const char* context) {
    if (!j.is_array() || j.size() != 2)
        throw ParseError(std::string(context) + ": complex numbers are [re, im] pairs");
    return {number_from_json(j[0], context), number_from_json(j[1], context)};
}

Json blaschke_to_json(const BlaschkeProduct& b) {
    Json zeros = Json::array();
    for (const Complex& a : b.zeros()) zeros.push_back(complex_to_json(a));
    return Json{{"zeros", zeros}, {"constant", complex_to_json(b.constant())}};
}

BlaschkeProduct blaschke_from_json(const Json& j) {
    expect_fields(j, {"zeros", "constant"}, "theta");
    const Json& zeros_json = required_field(j, "zeros", "theta");
    if (!zeros_json.is_array()) throw ParseError("theta: 'zeros' must be an array");
    std::vector<Complex> zeros;
    zeros.reserve(zeros_json.size());
    for (const Json& z : zeros_json) zeros.push_back(complex_from_json(z, "theta.zeros"));
    const Complex constant = complex_from_json(required_field(j, "constant", "theta"),
                                               "theta.constant");
    try {
        return BlaschkeProduct(std::move(zeros), constant);
    } catch (const DomainError& e) {
        throw ParseError(std::string("theta: ") + e.what());
    }
}

Json vector_to_json(const SpaceVector& v) {
    Json coords = Json::array();
    for (int i = 0; i < v.size(); ++i) coords.push_back(complex_to_json(v(i)));
    return Json{{"coords", coords}};
}

SpaceVector vector_from_json(const Json& j) {
    expect_fields(j, {"coords"}, "vector");
    const Json& coords = required_field(j, "coords", "vector");
    if (!coords.is_array()) throw ParseError("vector: 'coords' must be an array");
    SpaceVector v(coords.size());
    for (std::size_t i = 0; i < coords.size(); ++i)
        v(static_cast<int>(i)) = complex_from_json(coords[i], "vector.coords");
    return v;
}

Json matrix_to_json(const OperatorMatrix& m) {
    Json data = Json::array();
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) data.push_back(complex_to_json(m(i, j)));
    return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

OperatorMatrix matrix_from_json(const Json& j) {
    expect_fields(j, {"rows", "cols", "data"}, "matrix");
    const int rows = int_from_json(required_field(j, "rows", "matrix"), "matrix.rows");
    const int cols = int_from_json(required_field(j, "cols", "matrix"), "matrix.cols");
    if (rows < 0 || cols < 0) throw ParseError("matrix: negative dimensions");
    const Json& data = required_field(j, "data", "matrix");
    if (!data.is_array() || data.size() != static_cast<std::size_t>(rows) * cols)
        throw ParseError("matrix: 'data' must hold rows*cols complex entries");
    OperatorMatrix m(rows, cols);
    std::size_t idx = 0;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) m(r, c) = complex_from_json(data[idx++], "matrix.data");
    return m;
}

namespace {

const char* kind_name(SymbolTerm::Kind kind) {
    switch (kind) {
        case SymbolTerm::Kind::poly_analytic: return "poly_analytic";
        case SymbolTerm::Kind::poly_conj: return "poly_conj";
        case SymbolTerm::Kind::theta_pole: return "theta_pole";
        case SymbolTerm::Kind::theta_pole_conj: return "theta_pole_conj";
    }
    return "poly_analytic";
}

SymbolTerm::Kind kind_from_name(const std::string& name) {
    if (name == "poly_analytic") return SymbolTerm::Kind::poly_analytic;
    if (name == "poly_conj") return SymbolTerm::Kind::poly_conj;
    if (name == "theta_pole") return SymbolTerm::Kind::theta_pole;
    if (name == "theta_pole_conj") return SymbolTerm::Kind::theta_pole_conj;
    throw ParseError("symbol: unknown term kind '" + name + "'");
}

}  // namespace

Json symbol_to_json(const SymbolSpec& s) {
    Json terms = Json::array();
    for (const SymbolTerm& t : s.terms) {
        Json term{{"kind", kind_name(t.kind)},
                  {"m", t.m},
                  {"coeff", complex_to_json(t.coeff)}};
        if (t.kind == SymbolTerm::Kind::theta_pole ||
            t.kind == SymbolTerm::Kind::theta_pole_conj)
            term["lambda"] = complex_to_json(t.lambda);
        terms.push_back(std::move(term));
    }
    return Json{{"terms", terms}};
}

SymbolSpec symbol_from_json(const Json& j) {
    expect_fields(j, {"terms"}, "symbol");
    const Json& terms = required_field(j, "terms", "symbol");
    if (!terms.is_array()) throw ParseError("symbol: 'terms' must be an array");
    SymbolSpec s;
    for (const Json& tj : terms) {
        expect_fields(tj, {"kind", "m", "coeff", "lambda"}, "symbol.term");
        SymbolTerm t;
        if (!required_field(tj, "kind", "symbol.term").is_string())
            throw ParseError("symbol.term: 'kind' must be a string");
        t.kind = kind_from_name(tj["kind"].get<std::string>());
        t.m = int_from_json(required_field(tj, "m", "symbol.term"), "symbol.term.m");
        t.coeff = complex_from_json(required_field(tj, "coeff", "symbol.term"),
                                    "symbol.term.coeff");
        const bool pole = t.kind == SymbolTerm::Kind::theta_pole ||
                          t.kind == SymbolTerm::Kind::theta_pole_conj;
        if (pole)
            t.lambda = complex_from_json(required_field(tj, "lambda", "symbol.term"),
                                         "symbol.term.lambda");
        else if (tj.contains("lambda"))
            throw ParseError("symbol.term: 'lambda' only applies to pole terms");
        s.terms.push_back(t);
    }
    return s;
}

Json clark_to_json(const ClarkMeasure& cm) {
    Json atoms = Json::array();
    Json masses = Json::array();
    for (int i = 0; i < cm.size(); ++i) {
        atoms.push_back(complex_to_json(cm.atoms(i)));
        masses.push_back(cm.masses(i));
    }
    return Json{{"alpha", complex_to_json(cm.alpha)}, {"atoms", atoms}, {"masses", masses}};
}

ClarkMeasure clark_from_json(const Json& j) {
    expect_fields(j, {"alpha", "atoms", "masses"}, "clark");
    ClarkMeasure cm;
    cm.alpha = complex_from_json(required_field(j, "alpha", "clark"), "clark.alpha");
    const Json& atoms = required_field(j, "atoms", "clark");
    const Json& masses = required_field(j, "masses", "clark");
    if (!atoms.is_array() || !masses.is_array() || atoms.size() != masses.size())
        throw ParseError("clark: 'atoms' and 'masses' must be arrays of equal length");
    cm.atoms.resize(atoms.size());
    cm.masses.resize(masses.size());
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        cm.atoms(static_cast<int>(i)) = complex_from_json(atoms[i], "clark.atoms");
        cm.masses(static_cast<int>(i)) = number_from_json(masses[i], "clark.masses");
        if (cm.masses(static_cast<int>(i)) <= 0.0)
            throw ParseError("clark: masses must be positive");
    }
    return cm;
}

std::string orientation_name(Orientation o) {
    switch (o) {
        case Orientation::d: return "D";
        case Orientation::dbar: return "Dbar";
        case Orientation::boundary_both: return "boundary_both";
    }
    return "D";
}

Orientation orientation_from_name(const std::string& name) {
    if (name == "D") return Orientation::d;
    if (name == "Dbar") return Orientation::dbar;
    if (name == "boundary_both") return Orientation::boundary_both;
    throw ParseError("decomposition: unknown orientation '" + name + "'");
}

Json decomposition_to_json(const Decomposition& d) {
    Json components = Json::array();
    for (const DecompositionComponent& comp : d.components) {
        Json coeffs = Json::array();
        for (const Complex& c : comp.coefficients) coeffs.push_back(complex_to_json(c));
        components.push_back(Json{{"point", complex_to_json(comp.point)},
                                  {"order", comp.order},
                                  {"orientation", orientation_name(comp.orientation)},
                                  {"coefficients", coeffs}});
    }
    return Json{{"components", components}, {"residual", d.residual}};
}

Decomposition decomposition_from_json(const Json& j) {
    expect_fields(j, {"components", "residual"}, "decomposition");
    Decomposition d;
    d.residual = number_from_json(required_field(j, "residual", "decomposition"),
                                  "decomposition.residual");
    const Json& components = required_field(j, "components", "decomposition");
    if (!components.is_array()) throw ParseError("decomposition: 'components' must be an array");
    for (const Json& cj : components) {
        expect_fields(cj, {"point", "order", "orientation", "coefficients"},
                      "decomposition.component");
        DecompositionComponent comp;
        comp.point = complex_from_json(required_field(cj, "point", "component"),
                                       "component.point");
        comp.order = int_from_json(required_field(cj, "order", "component"),
                                   "component.order");
        if (comp.order < 0) throw ParseError("component: negative order");
        if (!required_field(cj, "orientation", "component").is_string())
            throw ParseError("component: 'orientation' must be a string");
        comp.orientation = orientation_from_name(cj["orientation"].get<std::string>());
        const Json& coeffs = required_field(cj, "coefficients", "component");
        if (!coeffs.is_array() || coeffs.size() != static_cast<std::size_t>(comp.order) + 1)
            throw ParseError("component: need order + 1 coefficients");
        for (const Json& c : coeffs)
            comp.coefficients.push_back(complex_from_json(c, "component.coefficients"));
        d.components.push_back(std::move(comp));
    }
    return d;
}

}  // namespace ktheta
