#pragma once

#include "rebac/eval.hpp"
#include "rebac/improve.hpp"
#include "rebac/rule.hpp"

#include <string>
#include <vector>

namespace rebac {

/// |A n B| / |A u B| on sorted ranges; J(empty, empty) = 1.
template <typename T>
double jaccard(const std::vector<T>& a, const std::vector<T>& b) {
    std::size_t inter = 0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j])
            ++i;
        else if (b[j] < a[i])
            ++j;
        else {
            ++inter;
            ++i;
            ++j;
        }
    }
    const std::size_t uni = a.size() + b.size() - inter;
    if (uni == 0) return 1.0;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

/// Single-value extension: 1 if equal, else 0.
template <typename T>
double jaccardValue(const T& a, const T& b) {
    return a == b ? 1.0 : 0.0;
}

/// Jaccard similarity of the two policies' meanings.
double semanticSimilarity(const ClassModel& cm, const ObjectModel& om,
                          const std::vector<Rule>& a, const std::vector<Rule>& b);

/// Jaccard similarity of a policy's meaning against an authorization set.
double semanticSimilarityToAu(const ClassModel& cm, const ObjectModel& om,
                              const std::vector<Rule>& rules, const AuthorizationSet& au);

/// 0 when paths differ; otherwise the mean of sign, path, and value Jaccard
/// components (the path component is 1 by construction; operators are never
/// compared because the path's multiplicity fixes them).
double atomicConditionSimilarity(const AtomicCondition& a, const AtomicCondition& b);

/// Sum of pairwise atomic similarities over S1 x S2, divided by
/// |paths(S1) u paths(S2)|; clamped to [0,1]. Two empty sets score 1.
double conditionSimilarity(const std::vector<AtomicCondition>& s1,
                           const std::vector<AtomicCondition>& s2);

/// Mean of six components: subject/resource type matches, the two condition
/// similarities, exact-match Jaccard of constraint sets, and action Jaccard.
double ruleSimilarity(const Rule& a, const Rule& b);

/// Mean over rules of `mined` of the best ruleSimilarity against `reference`
/// (directional). Both empty -> 1; exactly one empty -> 0.
double policySyntacticSimilarity(const std::vector<Rule>& mined,
                                 const std::vector<Rule>& reference);

/// The merge/simplify fixpoint applied to reference rules; the comparison
/// target for mined policies.
std::vector<Rule> simplifyReference(const ClassModel& cm, const ObjectModel& om,
                                    const std::vector<Rule>& reference,
                                    const AuthorizationSet& au);

struct RuleMatch {
    std::size_t minedIndex = 0;
    std::size_t referenceIndex = 0;
    double score = 0.0;
};

struct SimilarityReport {
    double semantic = 0.0;
    double syntactic = 0.0;
    std::vector<RuleMatch> perRuleBestMatch;
    std::size_t wscMined = 0;
    std::size_t wscReference = 0;
};

SimilarityReport comparePolicies(const ClassModel& cm, const ObjectModel& om,
                                 const std::vector<Rule>& mined,
                                 const std::vector<Rule>& reference);

} // namespace rebac
