#pragma once

#include "rebac/model.hpp"
#include "rebac/rule.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace rebac {

/// Parameters for the seeded instance generator. Subject classes get N
/// instances each, resource classes 5*N, auxiliary classes a fixed 3.
struct GenConfig {
    std::uint64_t seed = 1;
    std::size_t sizeParam = 2;  // N
    std::size_t numRules = 2;   // M
    std::size_t numSubjectClasses = 1;
    std::size_t numResourceClasses = 1;
    std::size_t maxPathLen = 2;
};

struct GeneratedInstance {
    ClassModel classModel;
    ObjectModel objectModel;
    std::vector<std::string> actions;
    std::vector<Rule> rules;
    AuthorizationSet au; // exactly the rules' meaning
};

/// Deterministic per config; every generated rule has a non-empty meaning.
GeneratedInstance generate(const GenConfig& cfg);

/// Writes classmodel.json, objectmodel.json, acl.json, and
/// reference_policy.json into `dir` (created if missing).
void emitInstance(const GeneratedInstance& inst, const std::string& dir);

} // namespace rebac
