#pragma once

#include "rebac/bitvec.hpp"
#include "rebac/eval.hpp"
#include "rebac/model.hpp"
#include "rebac/rule.hpp"

#include <compare>
#include <string>
#include <vector>

namespace rebac {

/// Path-length and value-set caps on the candidate feature catalog.
/// The extra-dereference allowances are added onto the corresponding
/// path-length caps and default to zero.
struct FeatureLimits {
    std::size_t maxSubjectPathLen = 2;       // MSPL
    std::size_t maxResourcePathLen = 2;      // MRPL
    std::size_t maxConstraintTotalPathLen = 4; // MTPL
    std::size_t maxConditionSetElems = 5;    // MCSE
    std::size_t subjectPathExtraDerefs = 0;  // SPED
    std::size_t resourcePathExtraDerefs = 0; // RPED

    std::size_t effectiveSubjectPathLen() const { return maxSubjectPathLen + subjectPathExtraDerefs; }
    std::size_t effectiveResourcePathLen() const { return maxResourcePathLen + resourcePathExtraDerefs; }
};

// Catalog tie order: constraints sort first. A collapsed-away condition can
// be re-derived from complement values or re-introduced by negation
// elimination; a collapsed-away constraint cannot.
enum class FeatureKind { Constraint, SubjectCondition, ResourceCondition };

/// One candidate split test: a non-negated atomic condition on the subject or
/// resource, or an atomic constraint between them.
struct Feature {
    FeatureKind kind = FeatureKind::Constraint;
    AtomicCondition condition;   // engaged for the two condition kinds
    AtomicConstraint constraint; // engaged for Constraint
    std::size_t wsc = 0;

    auto operator<=>(const Feature&) const = default;
};

std::string describe(const Feature& f);

struct TripleKey {
    std::string subjectType;
    std::string resourceType;
    std::string action;

    auto operator<=>(const TripleKey&) const = default;
};

/// Labeled feature vectors for one (subjectType, resourceType, action)
/// triple, covering the full subject x resource cross product. Bits are
/// stored column-major: one BitVec per feature.
struct LabeledDataset {
    TripleKey triple;
    std::vector<Feature> features;
    std::vector<std::string> subjects;  // sorted ids of triple.subjectType
    std::vector<std::string> resources; // sorted ids of triple.resourceType
    std::vector<BitVec> featureBits;    // featureBits[f].get(v)
    BitVec labels;

    std::size_t numVectors() const { return subjects.size() * resources.size(); }
    const std::string& subjectOf(std::size_t v) const { return subjects[v / resources.size()]; }
    const std::string& resourceOf(std::size_t v) const { return resources[v % resources.size()]; }
    bool bit(std::size_t f, std::size_t v) const { return featureBits[f].get(v); }
};

/// Distinct (type(s), type(r), a) triples occurring in AU, in lexicographic order.
std::vector<TripleKey> enumerateTriples(const AuthorizationSet& au, const ObjectModel& om);

/// All well-typed atomic conditions on Cs and Cr (singleton constant sets
/// drawn from values reachable in the object model) and all well-typed atomic
/// constraints between them, within the limits. Paths ending at the implicit
/// `id` field are not enumerated; identity conditions arise only in phase 2.
/// Deterministically ordered by (WSC, kind, body).
std::vector<Feature> generateFeatures(const ClassModel& cm, const ObjectModel& om,
                                      const std::string& subjectType,
                                      const std::string& resourceType,
                                      const FeatureLimits& limits);

LabeledDataset buildDataset(EvalContext& ctx, const AuthorizationSet& au,
                            const TripleKey& triple, std::vector<Feature> features);

/// Removes features whose bit is identical across all vectors.
LabeledDataset dropConstantFeatures(LabeledDataset ds);

/// Partitions features by their bit pattern restricted to positively labeled
/// vectors and keeps, per class, the feature with lowest WSC (catalog order
/// breaks ties). Features false on every positive vector are exempt: they
/// only ever enter rules negated and are not interchangeable. No positive
/// vectors: returned unchanged.
LabeledDataset collapseEquivalentFeatures(LabeledDataset ds);

} // namespace rebac
