#pragma once

#include "rebac/eval.hpp"
#include "rebac/features.hpp"
#include "rebac/tree.hpp"

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace rebac {

enum class MiningMode { Dtrm, DtrmMinus };

std::string miningModeToString(MiningMode m);
std::optional<MiningMode> miningModeFromString(const std::string& s);

/// Pipeline stage names reported to observers and in timing breakdowns.
namespace stage {
inline constexpr const char* kExtract = "extract";
inline constexpr const char* kNegationElimination = "negation_elimination";
inline constexpr const char* kMerge = "merge";
inline constexpr const char* kSimplifyPrefix = "simplify_pass"; // + pass number 1..7
} // namespace stage

/// Called after each phase-2 stage with the current rule list; hooks for
/// consistency/WSC instrumentation.
using PipelineObserver = std::function<void(const std::string& stageName,
                                            const std::vector<Rule>& rules)>;

struct MiningReport {
    std::size_t triples = 0;
    std::size_t featuresGenerated = 0;
    std::size_t featuresAfterReduction = 0;
    std::size_t featureVectors = 0;
    std::size_t extractedRules = 0;
    std::size_t rulesAfterNegationElimination = 0;
    std::size_t rulesFinal = 0;
    std::size_t wscExtracted = 0;
    std::size_t wscFinal = 0;
    std::size_t negativesEliminatedBySubstep[5] = {0, 0, 0, 0, 0};
    std::size_t mergedPairs = 0;
    // seconds per stage; excluded from byte-determinism comparisons
    std::map<std::string, double> timings;

    double phase1Seconds() const;
    double phase2Seconds() const;
};

/// Candidate rule list with memoized per-rule meanings and a coverage count
/// per SRA tuple; maintains union-of-meanings >= AU across phase 2.
///
/// Satisfaction of every atomic is cached as a bitset over the rule's
/// subject x resource space, so validity and meaning checks are word-parallel
/// scans instead of per-pair re-evaluation.
class CandidatePolicy {
public:
    CandidatePolicy(EvalContext& ctx, const AuthorizationSet& au, std::vector<Rule> rules);

    const std::vector<Rule>& rules() const { return rules_; }
    const AuthorizationSet& au() const { return au_; }
    EvalContext& ctx() { return ctx_; }

    /// Covered tuples of one rule (its meaning), sorted. Materialized lazily;
    /// internal bookkeeping runs on pair bitsets instead.
    const std::vector<SraTuple>& meaning(std::size_t ruleIndex);

    /// true iff every tuple the rule covers is authorized.
    bool ruleValid(const Rule& rule);

    /// true iff replacing rules_[ruleIndex] with `candidate` keeps every AU
    /// tuple covered by some rule.
    bool coversAllIfReplaced(std::size_t ruleIndex, const Rule& candidate);

    void replaceRule(std::size_t ruleIndex, Rule replacement);
    void removeRule(std::size_t ruleIndex);
    /// Replaces rules i and j (i < j) by one merged rule, inserted at i.
    void replaceTwo(std::size_t i, std::size_t j, Rule merged);

    bool coversAu() const;
    std::size_t coverageCount(const SraTuple& t) const;

    /// Distinct subject (or resource) ids appearing in the rule's coverage.
    std::vector<std::string> coveredSideIds(std::size_t ruleIndex, bool subjectSide);

    /// true iff every tuple the rule grants for `action` is granted by at
    /// least one other rule as well.
    bool actionFullyDoubleCovered(std::size_t ruleIndex, const std::string& action);

private:
    /// Per (subjectType, resourceType): object lists, lazily built atomic
    /// satisfaction bitsets, authorized pairs, and coverage counts per action.
    struct TypePairSpace {
        std::vector<std::string> subjects;
        std::vector<std::string> resources;
        std::map<AtomicCondition, BitVec> subjectConditionBits; // over subjects
        std::map<AtomicCondition, BitVec> resourceConditionBits; // over resources
        std::map<AtomicConstraint, BitVec> constraintBits;       // over pairs
        std::map<std::string, BitVec> authorizedPairs;           // per action
        std::map<std::string, std::vector<std::uint32_t>> coverageCounts; // per action
    };

    struct RuleState {
        TypePairSpace* space = nullptr;
        BitVec pairBits;
    };

    TypePairSpace& space(const std::string& subjectType, const std::string& resourceType);
    const BitVec& conditionBits(TypePairSpace& sp, bool subjectSide,
                                const AtomicCondition& ac);
    const BitVec& constraintBits(TypePairSpace& sp, const AtomicConstraint& acn);
    /// Pairs satisfying all of the rule's conditions and constraints.
    BitVec rulePairBits(const Rule& rule);

    void addCoverage(std::size_t ruleIndex, long long delta);

    EvalContext& ctx_;
    const AuthorizationSet& au_;
    std::vector<Rule> rules_;
    std::vector<RuleState> states_;               // parallel to rules_
    std::vector<std::vector<SraTuple>> meanings_; // lazy tuple materialization
    std::vector<bool> meaningValid_;
    std::map<std::pair<std::string, std::string>, TypePairSpace> spaces_;
};

/// ruleMeaning(rule) subset of AU.
bool isValid(EvalContext& ctx, const Rule& rule, const AuthorizationSet& au);

/// DTRM only: removes every negated atomic via substeps 1-5 (remove; replace
/// with one catalog feature; complement a multiplicity-one condition; fall
/// back to subject.id/resource.id membership; replace with a feature pair).
/// `catalogs` maps (subjectType, resourceType) to the feature catalog used by
/// substeps 2 and 5. Fills `substepHistogram[5]` when given.
void eliminateNegativeFeatures(CandidatePolicy& policy,
                               const std::map<std::pair<std::string, std::string>,
                                              std::vector<Feature>>& catalogs,
                               std::size_t* substepHistogram = nullptr);

/// Least upper bound: same-path in-atomics union their value sets, contains-
/// atomics survive only when present in both, everything else (including all
/// negated atomics) is dropped.
std::vector<AtomicCondition> lubConditions(const std::vector<AtomicCondition>& c1,
                                           const std::vector<AtomicCondition>& c2);

/// Merges valid LUB combinations of rule pairs sharing subject type, resource
/// type, and constraint; runs to fixpoint. Returns number of merges applied.
std::size_t mergeRules(CandidatePolicy& policy);

struct SimplifyOptions {
    MiningMode mode = MiningMode::DtrmMinus;
    /// Passes 1-2 enumerate subsets of individually-removable atoms up to
    /// this count; beyond it they fall back to greedy removal.
    std::size_t maxRemovalSubsetAtoms = 16;
    PipelineObserver observer;
};

/// One round of simplification passes 1-7 in order. Returns true if anything changed.
bool simplifyRules(CandidatePolicy& policy, const SimplifyOptions& options);

/// Merge + simplify to fixpoint (the phase-2 tail, shared with reference
/// simplification).
void mergeAndSimplify(CandidatePolicy& policy, const SimplifyOptions& options,
                      std::size_t* mergedPairs = nullptr);

struct MineOptions {
    FeatureLimits limits;
    Criterion criterion = Criterion::Gini;
    MiningMode mode = MiningMode::Dtrm;
    std::size_t threads = 1;
    PipelineObserver observer;
    /// When set, per-triple tree dumps (text + DOT) are written here.
    std::string dumpTreesDir;
};

/// The full two-phase pipeline: per-triple datasets and trees, rule
/// extraction, optional negation elimination, then merge/simplify to
/// fixpoint. The result grants exactly AU.
std::vector<Rule> minePolicy(const ClassModel& cm, const ObjectModel& om,
                             const AuthorizationSet& au, const MineOptions& options,
                             MiningReport* report = nullptr);

} // namespace rebac
