#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ktheta {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
};

// Runs the acceptance suite: property checks at desk scale (dim <= 16)
// covering kernels, shift relations, conjugation, the Sarason criterion,
// Clark measures, derived-operator ranks, symbol equivalence, the
// decomposition round trip, coefficient tables, range inclusions, the
// duality pairing, and output determinism.
std::vector<CriterionResult> run_acceptance(std::uint64_t seed = 0);

}  // namespace ktheta
