#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ktheta/commands.hpp"
#include "ktheta/decompose.hpp"
#include "ktheta/selftest.hpp"

namespace py = pybind11;
using namespace ktheta;

PYBIND11_MODULE(_ktheta, m) {
    m.doc() = "Model spaces of finite Blaschke products: kernels, truncated "
              "Toeplitz operators, Clark measures, finite-rank decompositions";

    py::register_exception<Error>(m, "KthetaError");

    py::class_<BlaschkeProduct>(m, "BlaschkeProduct")
        .def(py::init<std::vector<Complex>, Complex>(), py::arg("zeros"),
             py::arg("constant") = Complex(1.0, 0.0))
        .def_property_readonly("degree", &BlaschkeProduct::degree)
        .def_property_readonly("zeros", &BlaschkeProduct::zeros)
        .def_property_readonly("constant", &BlaschkeProduct::constant)
        .def("eval", &BlaschkeProduct::eval, py::arg("z"))
        .def("deriv", &BlaschkeProduct::deriv, py::arg("z"), py::arg("n"))
        .def("frostman_shift", &BlaschkeProduct::frostman_shift)
        .def("ahern_clark_sum", &BlaschkeProduct::ahern_clark_sum, py::arg("lambda_"),
             py::arg("n"));

    py::class_<ModelBasis>(m, "ModelBasis")
        .def(py::init<BlaschkeProduct, int>(), py::arg("theta"),
             py::arg("quadrature_size") = 0)
        .def_property_readonly("theta", &ModelBasis::theta)
        .def_property_readonly("dim", &ModelBasis::dim)
        .def_property_readonly("quadrature_size", &ModelBasis::quadrature_size)
        .def_property_readonly("gram_residual", &ModelBasis::gram_residual);

    py::class_<Conjugation>(m, "Conjugation")
        .def_readonly("matrix", &Conjugation::matrix)
        .def("apply", &Conjugation::apply, py::arg("v"));

    m.def("eval_vector", &eval_vector, py::arg("basis"), py::arg("v"), py::arg("z"),
          py::arg("n") = 0);
    m.def("kernel", &kernel, py::arg("basis"), py::arg("lambda_"), py::arg("n") = 0);
    m.def("conj_kernel", &conj_kernel, py::arg("basis"), py::arg("lambda_"),
          py::arg("n") = 0);
    m.def("conjugation_matrix", &conjugation_matrix, py::arg("basis"));
    m.def("compressed_shift", &compressed_shift, py::arg("basis"));
    m.def("frostman_unitary", &frostman_unitary, py::arg("basis"), py::arg("shifted_basis"));

    py::enum_<SymbolTerm::Kind>(m, "SymbolKind")
        .value("poly_analytic", SymbolTerm::Kind::poly_analytic)
        .value("poly_conj", SymbolTerm::Kind::poly_conj)
        .value("theta_pole", SymbolTerm::Kind::theta_pole)
        .value("theta_pole_conj", SymbolTerm::Kind::theta_pole_conj);

    py::class_<SymbolTerm>(m, "SymbolTerm")
        .def(py::init([](SymbolTerm::Kind kind, int mm, Complex coeff, Complex lambda) {
                 return SymbolTerm{kind, mm, lambda, coeff};
             }),
             py::arg("kind"), py::arg("m") = 0, py::arg("coeff") = Complex(1.0, 0.0),
             py::arg("lambda_") = Complex(0.0, 0.0))
        .def_readwrite("kind", &SymbolTerm::kind)
        .def_readwrite("m", &SymbolTerm::m)
        .def_readwrite("coeff", &SymbolTerm::coeff)
        .def_readwrite("lambda_", &SymbolTerm::lambda);

    py::class_<SymbolSpec>(m, "SymbolSpec")
        .def(py::init<>())
        .def(py::init([](std::vector<SymbolTerm> terms) { return SymbolSpec{std::move(terms)}; }),
             py::arg("terms"))
        .def_readwrite("terms", &SymbolSpec::terms);

    py::enum_<TensorOrientation>(m, "TensorOrientation")
        .value("k_outer_conj", TensorOrientation::k_outer_conj)
        .value("conj_outer_k", TensorOrientation::conj_outer_k);

    py::enum_<Orientation>(m, "Orientation")
        .value("d", Orientation::d)
        .value("dbar", Orientation::dbar)
        .value("boundary_both", Orientation::boundary_both);

    m.def("compress", &compress, py::arg("basis"), py::arg("symbol"));
    m.def("rank_one", &rank_one, py::arg("basis"), py::arg("lambda_"), py::arg("orientation"));
    m.def("derived_op", &derived_op, py::arg("basis"), py::arg("lambda_"), py::arg("n"),
          py::arg("orientation"));

    py::class_<SarasonResult>(m, "SarasonResult")
        .def_readonly("is_tto", &SarasonResult::is_tto)
        .def_readonly("residual", &SarasonResult::residual)
        .def_readonly("psi", &SarasonResult::psi)
        .def_readonly("chi", &SarasonResult::chi);

    m.def("sarason_test", &sarason_test, py::arg("basis"), py::arg("a"),
          py::arg("tol") = 1e-8);
    m.def("complex_symmetry_residual", &complex_symmetry_residual, py::arg("basis"),
          py::arg("a"));
    m.def("duality_pair", &duality_pair, py::arg("a"), py::arg("terms"));
    m.def("symbol_from_model_pair", &symbol_from_model_pair, py::arg("basis"),
          py::arg("psi"), py::arg("chi"));

    py::class_<ClarkMeasure>(m, "ClarkMeasure")
        .def_readonly("alpha", &ClarkMeasure::alpha)
        .def_readonly("atoms", &ClarkMeasure::atoms)
        .def_readonly("masses", &ClarkMeasure::masses)
        .def_property_readonly("size", &ClarkMeasure::size);

    m.def("clark_unitary", &clark_unitary, py::arg("basis"), py::arg("alpha"));
    m.def("clark_measure", &clark_measure, py::arg("basis"), py::arg("alpha"));
    m.def("embed", &embed, py::arg("basis"), py::arg("cm"), py::arg("v"));
    m.def("unembed", &unembed, py::arg("basis"), py::arg("cm"), py::arg("values"));
    m.def("cauchy_reconstruct", &cauchy_reconstruct, py::arg("basis"), py::arg("cm"),
          py::arg("values"), py::arg("z"));

    py::class_<RangeComponent>(m, "RangeComponent")
        .def(py::init([](Complex point, int order, Orientation orientation) {
                 return RangeComponent{point, order, orientation};
             }),
             py::arg("point"), py::arg("order"), py::arg("orientation"))
        .def_readwrite("point", &RangeComponent::point)
        .def_readwrite("order", &RangeComponent::order)
        .def_readwrite("orientation", &RangeComponent::orientation);

    py::class_<RangeStructure>(m, "RangeStructure")
        .def(py::init<>())
        .def_readwrite("components", &RangeStructure::components)
        .def_readwrite("zero_chain_order", &RangeStructure::zero_chain_order);

    py::class_<DecompositionComponent>(m, "DecompositionComponent")
        .def_readwrite("point", &DecompositionComponent::point)
        .def_readwrite("order", &DecompositionComponent::order)
        .def_readwrite("orientation", &DecompositionComponent::orientation)
        .def_readwrite("coefficients", &DecompositionComponent::coefficients);

    py::class_<Decomposition>(m, "Decomposition")
        .def(py::init<>())
        .def_readwrite("components", &Decomposition::components)
        .def_readwrite("residual", &Decomposition::residual);

    py::class_<ElementaryTable>(m, "ElementaryTable")
        .def_readonly("a", &ElementaryTable::a)
        .def_readonly("binomial_residual", &ElementaryTable::binomial_residual)
        .def_readonly("order_residual", &ElementaryTable::order_residual);

    m.def("range_basis", &range_basis, py::arg("a"), py::arg("tol") = 1e-8);
    m.def("find_range_structure", &find_range_structure, py::arg("basis"), py::arg("a"),
          py::arg("tol") = 1e-8, py::arg("seed") = 0);
    m.def("fit_coefficients", &fit_coefficients, py::arg("basis"), py::arg("a"),
          py::arg("structure"), py::arg("tol") = 1e-8);
    m.def("elementary_coefficients", &elementary_coefficients, py::arg("basis"),
          py::arg("a"), py::arg("mu"), py::arg("n"));
    m.def("synthesize", &synthesize, py::arg("basis"), py::arg("d"));
    m.def("decompose", &decompose, py::arg("basis"), py::arg("a"), py::arg("tol") = 1e-8,
          py::arg("seed") = 0);

    m.def(
        "run_job",
        [](const std::string& name, const std::string& config_text) {
            const TextResult r = run_command_text(name, config_text);
            return py::make_tuple(r.output, r.exit_code);
        },
        py::arg("name"), py::arg("config_text"),
        "JSON-in/JSON-out job runner matching the command line interface");

    m.def(
        "run_acceptance",
        [](std::uint64_t seed) {
            py::list out;
            for (const CriterionResult& r : run_acceptance(seed)) {
                py::dict d;
                d["id"] = r.id;
                d["name"] = r.name;
                d["pass"] = r.pass;
                d["detail"] = r.detail;
                out.append(d);
            }
            return out;
        },
        py::arg("seed") = 0);
}
