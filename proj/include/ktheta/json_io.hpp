#pragma once

#include <json.hpp>

#include "ktheta/clark.hpp"
#include "ktheta/decompose.hpp"
#include "ktheta/tto.hpp"

namespace ktheta {

using Json = nlohmann::json;

// Wire format: complex numbers are [re, im] pairs of doubles throughout.
Json complex_to_json(Complex z);
Complex complex_from_json(const Json& j, const char* context);

Json blaschke_to_json(const BlaschkeProduct& b);
BlaschkeProduct blaschke_from_json(const Json& j);

Json vector_to_json(const SpaceVector& v);
SpaceVector vector_from_json(const Json& j);

Json matrix_to_json(const OperatorMatrix& m);
OperatorMatrix matrix_from_json(const Json& j);

Json symbol_to_json(const SymbolSpec& s);
SymbolSpec symbol_from_json(const Json& j);

Json clark_to_json(const ClarkMeasure& cm);
ClarkMeasure clark_from_json(const Json& j);

Json decomposition_to_json(const Decomposition& d);
Decomposition decomposition_from_json(const Json& j);

std::string orientation_name(Orientation o);
Orientation orientation_from_name(const std::string& name);

// Rejects objects with fields outside the allowed set.
void expect_fields(const Json& j, std::initializer_list<const char*> allowed,
                   const char* context);

}  // namespace ktheta
