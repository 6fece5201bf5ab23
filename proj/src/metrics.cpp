#include "rebac/metrics.hpp"

#include "rebac/logging.hpp"

#include <algorithm>

namespace rebac {

double semanticSimilarity(const ClassModel& cm, const ObjectModel& om,
                          const std::vector<Rule>& a, const std::vector<Rule>& b) {
    return jaccard(policyMeaning(cm, om, a), policyMeaning(cm, om, b));
}

double semanticSimilarityToAu(const ClassModel& cm, const ObjectModel& om,
                              const std::vector<Rule>& rules, const AuthorizationSet& au) {
    return jaccard(policyMeaning(cm, om, rules), au.tuples());
}

double atomicConditionSimilarity(const AtomicCondition& a, const AtomicCondition& b) {
    if (a.path != b.path) return 0.0;
    const double signSim = a.negated == b.negated ? 1.0 : 0.0;
    const double pathSim = 1.0; // paths match here by definition
    const double valSim = jaccard(a.vals, b.vals);
    return (signSim + pathSim + valSim) / 3.0;
}

double conditionSimilarity(const std::vector<AtomicCondition>& s1,
                           const std::vector<AtomicCondition>& s2) {
    std::vector<std::vector<std::string>> paths;
    for (const auto& c : s1) paths.push_back(c.path);
    for (const auto& c : s2) paths.push_back(c.path);
    std::sort(paths.begin(), paths.end());
    paths.erase(std::unique(paths.begin(), paths.end()), paths.end());
    if (paths.empty()) return 1.0; // two empty conditions are identical

    double sum = 0.0;
    for (const auto& c1 : s1)
        for (const auto& c2 : s2) sum += atomicConditionSimilarity(c1, c2);
    double result = sum / static_cast<double>(paths.size());
    if (result > 1.0) {
        logWarn("condition similarity exceeded 1 (" + std::to_string(result) +
                "); clamping");
        result = 1.0;
    }
    return result < 0.0 ? 0.0 : result;
}

double ruleSimilarity(const Rule& a, const Rule& b) {
    const double parts[6] = {
        jaccardValue(a.subjectType, b.subjectType),
        conditionSimilarity(a.subjectCondition, b.subjectCondition),
        jaccardValue(a.resourceType, b.resourceType),
        conditionSimilarity(a.resourceCondition, b.resourceCondition),
        jaccard(a.constraint, b.constraint),
        jaccard(a.actions, b.actions),
    };
    double sum = 0.0;
    for (double p : parts) sum += p;
    return sum / 6.0;
}

double policySyntacticSimilarity(const std::vector<Rule>& mined,
                                 const std::vector<Rule>& reference) {
    if (mined.empty() && reference.empty()) return 1.0;
    if (mined.empty() || reference.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& m : mined) {
        double best = 0.0;
        for (const auto& r : reference) best = std::max(best, ruleSimilarity(m, r));
        sum += best;
    }
    return sum / static_cast<double>(mined.size());
}

std::vector<Rule> simplifyReference(const ClassModel& cm, const ObjectModel& om,
                                    const std::vector<Rule>& reference,
                                    const AuthorizationSet& au) {
    EvalContext ctx(cm, om);
    CandidatePolicy policy(ctx, au, reference);
    SimplifyOptions options;
    options.mode = MiningMode::DtrmMinus;
    mergeAndSimplify(policy, options);
    std::vector<Rule> out = policy.rules();
    std::sort(out.begin(), out.end());
    return out;
}

SimilarityReport comparePolicies(const ClassModel& cm, const ObjectModel& om,
                                 const std::vector<Rule>& mined,
                                 const std::vector<Rule>& reference) {
    SimilarityReport report;
    report.semantic = semanticSimilarity(cm, om, mined, reference);
    report.syntactic = policySyntacticSimilarity(mined, reference);
    report.wscMined = wscPolicy(mined);
    report.wscReference = wscPolicy(reference);
    for (std::size_t i = 0; i < mined.size(); ++i) {
        RuleMatch match;
        match.minedIndex = i;
        for (std::size_t j = 0; j < reference.size(); ++j) {
            const double s = ruleSimilarity(mined[i], reference[j]);
            if (j == 0 || s > match.score) {
                match.referenceIndex = j;
                match.score = s;
            }
        }
        if (!reference.empty()) report.perRuleBestMatch.push_back(match);
    }
    return report;
}

} // namespace rebac
