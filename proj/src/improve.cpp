#include "rebac/improve.hpp"

#include "rebac/error.hpp"
#include "rebac/logging.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace rebac {

std::string miningModeToString(MiningMode m) {
    return m == MiningMode::Dtrm ? "dtrm" : "dtrm-minus";
}

std::optional<MiningMode> miningModeFromString(const std::string& s) {
    if (s == "dtrm") return MiningMode::Dtrm;
    if (s == "dtrm-minus" || s == "dtrm_minus") return MiningMode::DtrmMinus;
    return std::nullopt;
}

double MiningReport::phase1Seconds() const {
    auto it = timings.find("phase1_wall");
    return it == timings.end() ? 0.0 : it->second;
}

double MiningReport::phase2Seconds() const {
    auto it = timings.find("phase2_wall");
    return it == timings.end() ? 0.0 : it->second;
}

namespace {

using Clock = std::chrono::steady_clock;

double secondsSince(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

template <typename T>
bool sortedSubset(const std::vector<T>& sub, const std::vector<T>& super) {
    return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

} // namespace

bool isValid(EvalContext& ctx, const Rule& rule, const AuthorizationSet& au) {
    const ObjectModel& om = ctx.objectModel();
    std::vector<const std::string*> subjects;
    for (const auto& s : om.objectsOfType(rule.subjectType)) {
        bool ok = true;
        for (const auto& c : rule.subjectCondition)
            if (!ctx.satisfiesCondition(s, c)) { ok = false; break; }
        if (ok) subjects.push_back(&s);
    }
    std::vector<const std::string*> resources;
    for (const auto& r : om.objectsOfType(rule.resourceType)) {
        bool ok = true;
        for (const auto& c : rule.resourceCondition)
            if (!ctx.satisfiesCondition(r, c)) { ok = false; break; }
        if (ok) resources.push_back(&r);
    }
    for (const auto* s : subjects) {
        for (const auto* r : resources) {
            bool ok = true;
            for (const auto& c : rule.constraint)
                if (!ctx.satisfiesConstraint(*s, *r, c)) { ok = false; break; }
            if (!ok) continue;
            for (const auto& a : rule.actions)
                if (!au.contains({*s, *r, a})) return false;
        }
    }
    return true;
}

CandidatePolicy::CandidatePolicy(EvalContext& ctx, const AuthorizationSet& au,
                                 std::vector<Rule> rules)
    : ctx_(ctx), au_(au), rules_(std::move(rules)) {
    for (auto& r : rules_) r.canonicalize();
    std::sort(rules_.begin(), rules_.end());
    rules_.erase(std::unique(rules_.begin(), rules_.end()), rules_.end());
    states_.resize(rules_.size());
    meanings_.resize(rules_.size());
    meaningValid_.assign(rules_.size(), false);
    for (std::size_t i = 0; i < rules_.size(); ++i) {
        states_[i].space = &space(rules_[i].subjectType, rules_[i].resourceType);
        states_[i].pairBits = rulePairBits(rules_[i]);
        addCoverage(i, +1);
    }
}

CandidatePolicy::TypePairSpace& CandidatePolicy::space(const std::string& subjectType,
                                                       const std::string& resourceType) {
    auto key = std::make_pair(subjectType, resourceType);
    auto it = spaces_.find(key);
    if (it != spaces_.end()) return it->second;
    TypePairSpace sp;
    sp.subjects = ctx_.objectModel().objectsOfType(subjectType);
    sp.resources = ctx_.objectModel().objectsOfType(resourceType);
    const std::size_t numR = sp.resources.size();
    for (const auto& t : au_.tuples()) {
        const auto si = std::lower_bound(sp.subjects.begin(), sp.subjects.end(), t.subject);
        if (si == sp.subjects.end() || *si != t.subject) continue;
        const auto ri =
            std::lower_bound(sp.resources.begin(), sp.resources.end(), t.resource);
        if (ri == sp.resources.end() || *ri != t.resource) continue;
        auto [bit, inserted] = sp.authorizedPairs.try_emplace(
            t.action, BitVec(sp.subjects.size() * numR));
        bit->second.set(static_cast<std::size_t>(si - sp.subjects.begin()) * numR +
                            static_cast<std::size_t>(ri - sp.resources.begin()),
                        true);
    }
    return spaces_.emplace(std::move(key), std::move(sp)).first->second;
}

const BitVec& CandidatePolicy::conditionBits(TypePairSpace& sp, bool subjectSide,
                                             const AtomicCondition& ac) {
    auto& cache = subjectSide ? sp.subjectConditionBits : sp.resourceConditionBits;
    auto it = cache.find(ac);
    if (it != cache.end()) return it->second;
    const auto& objects = subjectSide ? sp.subjects : sp.resources;
    BitVec bits(objects.size());
    for (std::size_t i = 0; i < objects.size(); ++i)
        if (conditionRelationHolds(ctx_.navCached(objects[i], ac.path), ac))
            bits.set(i, true);
    return cache.emplace(ac, std::move(bits)).first->second;
}

const BitVec& CandidatePolicy::constraintBits(TypePairSpace& sp,
                                              const AtomicConstraint& acn) {
    auto it = sp.constraintBits.find(acn);
    if (it != sp.constraintBits.end()) return it->second;
    const std::size_t numS = sp.subjects.size();
    const std::size_t numR = sp.resources.size();
    std::vector<const Value*> sv(numS);
    std::vector<const Value*> rv(numR);
    for (std::size_t i = 0; i < numS; ++i)
        sv[i] = &ctx_.navCached(sp.subjects[i], acn.subjectPath);
    for (std::size_t i = 0; i < numR; ++i)
        rv[i] = &ctx_.navCached(sp.resources[i], acn.resourcePath);
    BitVec bits(numS * numR);
    for (std::size_t si = 0; si < numS; ++si)
        for (std::size_t ri = 0; ri < numR; ++ri)
            if (constraintRelationHolds(*sv[si], *rv[ri], acn))
                bits.set(si * numR + ri, true);
    return sp.constraintBits.emplace(acn, std::move(bits)).first->second;
}

BitVec CandidatePolicy::rulePairBits(const Rule& rule) {
    TypePairSpace& sp = space(rule.subjectType, rule.resourceType);
    const std::size_t numS = sp.subjects.size();
    const std::size_t numR = sp.resources.size();

    BitVec subjectMask(numS, true);
    for (const auto& c : rule.subjectCondition)
        subjectMask = subjectMask & conditionBits(sp, true, c);
    BitVec resourceMask(numR, true);
    for (const auto& c : rule.resourceCondition)
        resourceMask = resourceMask & conditionBits(sp, false, c);

    BitVec pairs(numS * numR);
    for (std::size_t si = 0; si < numS; ++si) {
        if (!subjectMask.get(si)) continue;
        for (std::size_t ri = 0; ri < numR; ++ri)
            if (resourceMask.get(ri)) pairs.set(si * numR + ri, true);
    }
    for (const auto& c : rule.constraint) pairs = pairs & constraintBits(sp, c);
    return pairs;
}

const std::vector<SraTuple>& CandidatePolicy::meaning(std::size_t ruleIndex) {
    if (!meaningValid_[ruleIndex]) {
        const TypePairSpace& sp = *states_[ruleIndex].space;
        const BitVec& pairs = states_[ruleIndex].pairBits;
        const std::size_t numR = sp.resources.size();
        std::vector<SraTuple> out;
        for (std::size_t p = 0; p < pairs.size(); ++p) {
            if (!pairs.get(p)) continue;
            for (const auto& a : rules_[ruleIndex].actions)
                out.push_back({sp.subjects[p / numR], sp.resources[p % numR], a});
        }
        std::sort(out.begin(), out.end());
        meanings_[ruleIndex] = std::move(out);
        meaningValid_[ruleIndex] = true;
    }
    return meanings_[ruleIndex];
}

bool CandidatePolicy::ruleValid(const Rule& rule) {
    TypePairSpace& sp = space(rule.subjectType, rule.resourceType);
    const BitVec pairs = rulePairBits(rule);
    for (const auto& a : rule.actions) {
        auto it = sp.authorizedPairs.find(a);
        if (it == sp.authorizedPairs.end()) {
            if (pairs.any()) return false; // action never authorized for this pair type
        } else if (pairs.anyAndNot(it->second)) {
            return false;
        }
    }
    return true;
}

bool CandidatePolicy::coversAllIfReplaced(std::size_t ruleIndex, const Rule& candidate) {
    // every pair/action only the old rule grants must survive in the candidate
    const Rule& old = rules_[ruleIndex];
    TypePairSpace& oldSpace = *states_[ruleIndex].space;
    TypePairSpace& candSpace = space(candidate.subjectType, candidate.resourceType);
    const BitVec candBits = rulePairBits(candidate);
    const bool sameSpace = &oldSpace == &candSpace;
    const BitVec& oldBits = states_[ruleIndex].pairBits;
    const std::size_t numR = oldSpace.resources.size();
    for (const auto& a : old.actions) {
        const auto counts = oldSpace.coverageCounts.find(a);
        for (std::size_t p = 0; p < oldBits.size(); ++p) {
            if (!oldBits.get(p)) continue;
            if (counts != oldSpace.coverageCounts.end() && counts->second[p] > 1)
                continue; // another rule grants it too
            if (!std::binary_search(candidate.actions.begin(), candidate.actions.end(), a))
                return false;
            if (sameSpace) {
                if (!candBits.get(p)) return false;
                continue;
            }
            const std::string& subj = oldSpace.subjects[p / numR];
            const std::string& res = oldSpace.resources[p % numR];
            const auto si = std::lower_bound(candSpace.subjects.begin(),
                                             candSpace.subjects.end(), subj);
            const auto ri = std::lower_bound(candSpace.resources.begin(),
                                             candSpace.resources.end(), res);
            if (si == candSpace.subjects.end() || *si != subj ||
                ri == candSpace.resources.end() || *ri != res)
                return false;
            const std::size_t cp =
                static_cast<std::size_t>(si - candSpace.subjects.begin()) *
                    candSpace.resources.size() +
                static_cast<std::size_t>(ri - candSpace.resources.begin());
            if (!candBits.get(cp)) return false;
        }
    }
    return true;
}

void CandidatePolicy::addCoverage(std::size_t ruleIndex, long long delta) {
    TypePairSpace& sp = *states_[ruleIndex].space;
    const BitVec& bits = states_[ruleIndex].pairBits;
    const std::size_t n = sp.subjects.size() * sp.resources.size();
    for (const auto& a : rules_[ruleIndex].actions) {
        auto& counts = sp.coverageCounts[a];
        if (counts.size() != n) counts.resize(n, 0);
        for (std::size_t p = 0; p < n; ++p)
            if (bits.get(p))
                counts[p] = static_cast<std::uint32_t>(
                    static_cast<long long>(counts[p]) + delta);
    }
}

void CandidatePolicy::replaceRule(std::size_t ruleIndex, Rule replacement) {
    replacement.canonicalize();
    addCoverage(ruleIndex, -1);
    rules_[ruleIndex] = std::move(replacement);
    states_[ruleIndex].space =
        &space(rules_[ruleIndex].subjectType, rules_[ruleIndex].resourceType);
    states_[ruleIndex].pairBits = rulePairBits(rules_[ruleIndex]);
    meaningValid_[ruleIndex] = false;
    addCoverage(ruleIndex, +1);
}

void CandidatePolicy::removeRule(std::size_t ruleIndex) {
    addCoverage(ruleIndex, -1);
    rules_.erase(rules_.begin() + static_cast<std::ptrdiff_t>(ruleIndex));
    states_.erase(states_.begin() + static_cast<std::ptrdiff_t>(ruleIndex));
    meanings_.erase(meanings_.begin() + static_cast<std::ptrdiff_t>(ruleIndex));
    meaningValid_.erase(meaningValid_.begin() + static_cast<std::ptrdiff_t>(ruleIndex));
}

void CandidatePolicy::replaceTwo(std::size_t i, std::size_t j, Rule merged) {
    assert(i < j);
    removeRule(j);
    replaceRule(i, std::move(merged));
}

bool CandidatePolicy::coversAu() const {
    for (const auto& t : au_.tuples())
        if (coverageCount(t) == 0) return false;
    return true;
}

std::size_t CandidatePolicy::coverageCount(const SraTuple& t) const {
    const Object* s = ctx_.objectModel().findObject(t.subject);
    const Object* r = ctx_.objectModel().findObject(t.resource);
    if (!s || !r) return 0;
    auto it = spaces_.find(std::make_pair(s->type, r->type));
    if (it == spaces_.end()) return 0;
    const TypePairSpace& sp = it->second;
    auto counts = sp.coverageCounts.find(t.action);
    if (counts == sp.coverageCounts.end() || counts->second.empty()) return 0;
    const auto si = std::lower_bound(sp.subjects.begin(), sp.subjects.end(), t.subject);
    const auto ri = std::lower_bound(sp.resources.begin(), sp.resources.end(), t.resource);
    if (si == sp.subjects.end() || *si != t.subject || ri == sp.resources.end() ||
        *ri != t.resource)
        return 0;
    return counts->second[static_cast<std::size_t>(si - sp.subjects.begin()) *
                              sp.resources.size() +
                          static_cast<std::size_t>(ri - sp.resources.begin())];
}

std::vector<std::string> CandidatePolicy::coveredSideIds(std::size_t ruleIndex,
                                                         bool subjectSide) {
    const TypePairSpace& sp = *states_[ruleIndex].space;
    const BitVec& bits = states_[ruleIndex].pairBits;
    const std::size_t numR = sp.resources.size();
    std::vector<std::string> out;
    for (std::size_t p = 0; p < bits.size(); ++p) {
        if (!bits.get(p)) continue;
        out.push_back(subjectSide ? sp.subjects[p / numR] : sp.resources[p % numR]);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool CandidatePolicy::actionFullyDoubleCovered(std::size_t ruleIndex,
                                               const std::string& action) {
    const TypePairSpace& sp = *states_[ruleIndex].space;
    const BitVec& bits = states_[ruleIndex].pairBits;
    auto counts = sp.coverageCounts.find(action);
    for (std::size_t p = 0; p < bits.size(); ++p) {
        if (!bits.get(p)) continue;
        if (counts == sp.coverageCounts.end() || counts->second[p] < 2) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Negative-feature elimination (DTRM)

namespace {

enum class Component { SubjectCond, ResourceCond, Constraint };

struct NegativeRef {
    Component component = Component::SubjectCond;
    std::size_t index = 0;
};

bool findFirstNegative(const Rule& r, NegativeRef& out) {
    for (std::size_t i = 0; i < r.subjectCondition.size(); ++i)
        if (r.subjectCondition[i].negated) {
            out = {Component::SubjectCond, i};
            return true;
        }
    for (std::size_t i = 0; i < r.resourceCondition.size(); ++i)
        if (r.resourceCondition[i].negated) {
            out = {Component::ResourceCond, i};
            return true;
        }
    for (std::size_t i = 0; i < r.constraint.size(); ++i)
        if (r.constraint[i].negated) {
            out = {Component::Constraint, i};
            return true;
        }
    return false;
}

Rule withoutAtomic(const Rule& r, const NegativeRef& ref) {
    Rule out = r;
    switch (ref.component) {
        case Component::SubjectCond:
            out.subjectCondition.erase(out.subjectCondition.begin() +
                                       static_cast<std::ptrdiff_t>(ref.index));
            break;
        case Component::ResourceCond:
            out.resourceCondition.erase(out.resourceCondition.begin() +
                                        static_cast<std::ptrdiff_t>(ref.index));
            break;
        case Component::Constraint:
            out.constraint.erase(out.constraint.begin() +
                                 static_cast<std::ptrdiff_t>(ref.index));
            break;
    }
    return out;
}

/// Present in the rule in positive or negated form.
bool featureUsedInRule(const Rule& r, const Feature& f) {
    auto sameCondition = [&](const AtomicCondition& c) {
        return c.path == f.condition.path && c.op == f.condition.op &&
               c.vals == f.condition.vals;
    };
    switch (f.kind) {
        case FeatureKind::SubjectCondition:
            return std::any_of(r.subjectCondition.begin(), r.subjectCondition.end(),
                               sameCondition);
        case FeatureKind::ResourceCondition:
            return std::any_of(r.resourceCondition.begin(), r.resourceCondition.end(),
                               sameCondition);
        case FeatureKind::Constraint:
            return std::any_of(r.constraint.begin(), r.constraint.end(),
                               [&](const AtomicConstraint& c) {
                                   return c.subjectPath == f.constraint.subjectPath &&
                                          c.op == f.constraint.op &&
                                          c.resourcePath == f.constraint.resourcePath;
                               });
    }
    return false;
}

Rule withFeatureAdded(const Rule& r, const Feature& f) {
    Rule out = r;
    switch (f.kind) {
        case FeatureKind::SubjectCondition:
            out.subjectCondition.push_back(f.condition);
            break;
        case FeatureKind::ResourceCondition:
            out.resourceCondition.push_back(f.condition);
            break;
        case FeatureKind::Constraint:
            out.constraint.push_back(f.constraint);
            break;
    }
    out.canonicalize();
    return out;
}

/// Distinct values reachable via `path` over all objects of `cls`.
std::vector<Atomic> reachableConstants(EvalContext& ctx, const std::string& cls,
                                       const std::vector<std::string>& path) {
    std::vector<Atomic> pool;
    for (const auto& id : ctx.objectModel().objectsOfType(cls)) {
        const Value& v = ctx.navCached(id, path);
        if (v.isSingle())
            pool.push_back(v.atom());
        else if (v.isSet())
            pool.insert(pool.end(), v.atoms().begin(), v.atoms().end());
    }
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
    return pool;
}

} // namespace

void eliminateNegativeFeatures(CandidatePolicy& policy,
                               const std::map<std::pair<std::string, std::string>,
                                              std::vector<Feature>>& catalogs,
                               std::size_t* substepHistogram) {
    auto bump = [&](std::size_t substep) {
        if (substepHistogram) ++substepHistogram[substep];
    };

    std::size_t i = 0;
    while (i < policy.rules().size()) {
        bool ruleRemoved = false;
        NegativeRef ref;
        while (!ruleRemoved && findFirstNegative(policy.rules()[i], ref)) {
            const Rule rule = policy.rules()[i]; // snapshot for this elimination
            const bool isCondition = ref.component != Component::Constraint;
            const AtomicCondition* negCond = nullptr;
            if (ref.component == Component::SubjectCond)
                negCond = &rule.subjectCondition[ref.index];
            else if (ref.component == Component::ResourceCond)
                negCond = &rule.resourceCondition[ref.index];

            // (1) drop it
            {
                Rule candidate = withoutAtomic(rule, ref);
                candidate.canonicalize();
                if (policy.ruleValid(candidate)) {
                    policy.replaceRule(i, std::move(candidate));
                    bump(0);
                    continue;
                }
            }

            // (2) swap in one catalog feature, cheapest first
            auto catIt = catalogs.find({rule.subjectType, rule.resourceType});
            const std::vector<Feature>* catalog =
                catIt == catalogs.end() ? nullptr : &catIt->second;
            bool done = false;
            if (catalog) {
                const Rule stripped = withoutAtomic(rule, ref);
                for (const auto& f : *catalog) {
                    if (featureUsedInRule(rule, f)) continue;
                    Rule candidate = withFeatureAdded(stripped, f);
                    if (policy.ruleValid(candidate) &&
                        policy.coversAllIfReplaced(i, candidate)) {
                        policy.replaceRule(i, std::move(candidate));
                        bump(1);
                        done = true;
                        break;
                    }
                }
            }
            if (done) continue;

            // (3) complement a multiplicity-one negative condition
            if (isCondition) {
                const std::string& cls = ref.component == Component::SubjectCond
                                             ? rule.subjectType
                                             : rule.resourceType;
                const PathInfo info =
                    pathInfo(policy.ctx().classModel(), cls, negCond->path);
                if (info.multiplicity == Multiplicity::One) {
                    std::vector<Atomic> negUnion;
                    Rule candidate = rule;
                    auto& conds = ref.component == Component::SubjectCond
                                      ? candidate.subjectCondition
                                      : candidate.resourceCondition;
                    for (auto it = conds.begin(); it != conds.end();) {
                        if (it->negated && it->path == negCond->path) {
                            negUnion.insert(negUnion.end(), it->vals.begin(),
                                            it->vals.end());
                            it = conds.erase(it);
                        } else {
                            ++it;
                        }
                    }
                    std::sort(negUnion.begin(), negUnion.end());
                    negUnion.erase(std::unique(negUnion.begin(), negUnion.end()),
                                   negUnion.end());
                    const std::vector<Atomic> universe =
                        reachableConstants(policy.ctx(), cls, negCond->path);
                    std::vector<Atomic> complement;
                    std::set_difference(universe.begin(), universe.end(),
                                        negUnion.begin(), negUnion.end(),
                                        std::back_inserter(complement));
                    bump(2);
                    if (complement.empty()) {
                        // the negated conditions excluded every reachable value
                        policy.removeRule(i);
                        ruleRemoved = true;
                        continue;
                    }
                    AtomicCondition pos;
                    pos.path = negCond->path;
                    pos.op = negCond->op;
                    pos.vals = std::move(complement);
                    pos.negated = false;
                    conds.push_back(std::move(pos));
                    candidate.canonicalize();
                    policy.replaceRule(i, std::move(candidate));
                    continue;
                }
            }

            // (4) fall back to an id condition over the rule's coverage
            if (isCondition) {
                const bool subjectSide = ref.component == Component::SubjectCond;
                std::vector<Atomic> ids;
                for (auto& id : policy.coveredSideIds(i, subjectSide))
                    ids.emplace_back(std::move(id));
                bump(3);
                if (ids.empty()) {
                    policy.removeRule(i);
                    ruleRemoved = true;
                    continue;
                }
                Rule candidate = rule;
                auto& conds =
                    subjectSide ? candidate.subjectCondition : candidate.resourceCondition;
                conds.clear();
                AtomicCondition idCond;
                idCond.path = {kIdField};
                idCond.op = CondOp::In;
                idCond.vals = std::move(ids);
                idCond.negated = false;
                conds.push_back(std::move(idCond));
                candidate.canonicalize();
                policy.replaceRule(i, std::move(candidate));
                continue;
            }

            // (5) swap in a pair of catalog features (constraints only);
            // larger sets are not searched
            if (catalog) {
                std::vector<std::size_t> usable;
                for (std::size_t k = 0; k < catalog->size(); ++k)
                    if (!featureUsedInRule(rule, (*catalog)[k])) usable.push_back(k);
                std::vector<std::pair<std::size_t, std::pair<std::size_t, std::size_t>>>
                    pairs;
                for (std::size_t a = 0; a < usable.size(); ++a)
                    for (std::size_t b = a + 1; b < usable.size(); ++b)
                        pairs.push_back({(*catalog)[usable[a]].wsc +
                                             (*catalog)[usable[b]].wsc,
                                         {usable[a], usable[b]}});
                std::sort(pairs.begin(), pairs.end());
                const Rule stripped = withoutAtomic(rule, ref);
                for (const auto& [wsc, ab] : pairs) {
                    Rule candidate =
                        withFeatureAdded(withFeatureAdded(stripped, (*catalog)[ab.first]),
                                         (*catalog)[ab.second]);
                    if (policy.ruleValid(candidate) &&
                        policy.coversAllIfReplaced(i, candidate)) {
                        policy.replaceRule(i, std::move(candidate));
                        bump(4);
                        done = true;
                        break;
                    }
                }
            }
            if (done) continue;

            throw NegationEliminationExhausted(
                "cannot eliminate negative feature from rule " +
                describe(policy.rules()[i]));
        }
        if (!ruleRemoved) ++i;
    }
}

// ---------------------------------------------------------------------------
// Merge

std::vector<AtomicCondition> lubConditions(const std::vector<AtomicCondition>& c1,
                                           const std::vector<AtomicCondition>& c2) {
    std::vector<AtomicCondition> out;
    for (const auto& a1 : c1) {
        if (a1.negated) continue;
        if (a1.op == CondOp::In) {
            for (const auto& a2 : c2) {
                if (a2.negated || a2.op != CondOp::In || a2.path != a1.path) continue;
                AtomicCondition merged;
                merged.path = a1.path;
                merged.op = CondOp::In;
                merged.vals = a1.vals;
                merged.vals.insert(merged.vals.end(), a2.vals.begin(), a2.vals.end());
                std::sort(merged.vals.begin(), merged.vals.end());
                merged.vals.erase(std::unique(merged.vals.begin(), merged.vals.end()),
                                  merged.vals.end());
                merged.negated = false;
                out.push_back(std::move(merged));
            }
        } else {
            for (const auto& a2 : c2) {
                if (!a2.negated && a2.op == CondOp::Contains && a2.path == a1.path &&
                    a2.vals == a1.vals) {
                    out.push_back(a1);
                    break;
                }
            }
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::size_t mergeRules(CandidatePolicy& policy) {
    std::size_t merges = 0;
    bool progressed = true;
    while (progressed) {
        progressed = false;
        const auto& rules = policy.rules();
        for (std::size_t i = 0; i < rules.size() && !progressed; ++i) {
            for (std::size_t j = i + 1; j < rules.size() && !progressed; ++j) {
                const Rule& a = rules[i];
                const Rule& b = rules[j];
                if (a.subjectType != b.subjectType || a.resourceType != b.resourceType ||
                    a.constraint != b.constraint)
                    continue;
                Rule merged;
                merged.subjectType = a.subjectType;
                merged.resourceType = a.resourceType;
                merged.constraint = a.constraint;
                merged.subjectCondition = lubConditions(a.subjectCondition, b.subjectCondition);
                merged.resourceCondition =
                    lubConditions(a.resourceCondition, b.resourceCondition);
                merged.actions = a.actions;
                merged.actions.insert(merged.actions.end(), b.actions.begin(),
                                      b.actions.end());
                merged.canonicalize();
                if (policy.ruleValid(merged)) {
                    policy.replaceTwo(i, j, std::move(merged));
                    ++merges;
                    progressed = true;
                }
            }
        }
    }
    return merges;
}

// ---------------------------------------------------------------------------
// Simplification passes

namespace {

struct AtomRef {
    Component component;
    std::size_t index;
};

Rule ruleWithoutAtoms(const Rule& r, const std::vector<AtomRef>& refs,
                      std::uint32_t mask) {
    Rule out = r;
    // erase from the back so indices stay valid
    for (std::size_t k = refs.size(); k-- > 0;) {
        if (!(mask & (1u << k))) continue;
        const AtomRef& ref = refs[k];
        switch (ref.component) {
            case Component::SubjectCond:
                out.subjectCondition.erase(out.subjectCondition.begin() +
                                           static_cast<std::ptrdiff_t>(ref.index));
                break;
            case Component::ResourceCond:
                out.resourceCondition.erase(out.resourceCondition.begin() +
                                            static_cast<std::ptrdiff_t>(ref.index));
                break;
            case Component::Constraint:
                out.constraint.erase(out.constraint.begin() +
                                     static_cast<std::ptrdiff_t>(ref.index));
                break;
        }
    }
    return out;
}

/// Best valid removal subset: maximizes removed WSC, then smallest surviving
/// rule in canonical order. Returns 0 when nothing is removable.
std::uint32_t bestRemovalMask(CandidatePolicy& policy, const Rule& rule,
                              const std::vector<AtomRef>& removable) {
    const std::size_t k = removable.size();
    std::vector<char> valid(std::size_t{1} << k, 0);
    valid[0] = 1;
    std::uint32_t best = 0;
    std::size_t bestWsc = wscRule(rule);
    Rule bestRule = rule;
    for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << k); ++mask) {
        bool mayBeValid = true;
        for (std::size_t b = 0; b < k; ++b) {
            if (!(mask & (1u << b))) continue;
            if (!valid[mask & ~(1u << b)]) {
                mayBeValid = false;
                break;
            }
        }
        if (!mayBeValid) continue;
        Rule candidate = ruleWithoutAtoms(rule, removable, mask);
        candidate.canonicalize();
        if (!policy.ruleValid(candidate)) continue;
        valid[mask] = 1;
        const std::size_t w = wscRule(candidate);
        if (w < bestWsc || (w == bestWsc && candidate < bestRule)) {
            bestWsc = w;
            bestRule = candidate;
            best = mask;
        }
    }
    return best;
}

/// Passes 1 and 2: drop removable atoms of the listed components.
bool eliminateRemovableAtoms(CandidatePolicy& policy, bool conditions,
                             std::size_t maxSubsetAtoms) {
    bool changed = false;
    for (std::size_t i = 0; i < policy.rules().size(); ++i) {
        const Rule rule = policy.rules()[i];
        std::vector<AtomRef> atoms;
        if (conditions) {
            for (std::size_t k = 0; k < rule.subjectCondition.size(); ++k)
                atoms.push_back({Component::SubjectCond, k});
            for (std::size_t k = 0; k < rule.resourceCondition.size(); ++k)
                atoms.push_back({Component::ResourceCond, k});
        } else {
            for (std::size_t k = 0; k < rule.constraint.size(); ++k)
                atoms.push_back({Component::Constraint, k});
        }
        if (atoms.empty()) continue;

        // a set removal is valid only if each single removal is
        std::vector<AtomRef> removable;
        for (std::size_t k = 0; k < atoms.size(); ++k) {
            Rule candidate = ruleWithoutAtoms(rule, atoms, 1u << k);
            candidate.canonicalize();
            if (policy.ruleValid(candidate)) removable.push_back(atoms[k]);
        }
        if (removable.empty()) continue;

        if (removable.size() > maxSubsetAtoms) {
            logWarn("simplify: " + std::to_string(removable.size()) +
                    " removable atoms exceed the exact-search cap; removing greedily");
            Rule current = rule;
            bool localChange = true;
            while (localChange) {
                localChange = false;
                std::vector<AtomRef> refs;
                if (conditions) {
                    for (std::size_t k = 0; k < current.subjectCondition.size(); ++k)
                        refs.push_back({Component::SubjectCond, k});
                    for (std::size_t k = 0; k < current.resourceCondition.size(); ++k)
                        refs.push_back({Component::ResourceCond, k});
                } else {
                    for (std::size_t k = 0; k < current.constraint.size(); ++k)
                        refs.push_back({Component::Constraint, k});
                }
                for (std::size_t k = 0; k < refs.size(); ++k) {
                    Rule candidate = ruleWithoutAtoms(current, refs, 1u << k);
                    candidate.canonicalize();
                    if (policy.ruleValid(candidate)) {
                        current = candidate;
                        localChange = true;
                        break;
                    }
                }
            }
            if (current != rule) {
                policy.replaceRule(i, current);
                changed = true;
            }
            continue;
        }

        const std::uint32_t mask = bestRemovalMask(policy, rule, removable);
        if (mask != 0) {
            Rule candidate = ruleWithoutAtoms(rule, removable, mask);
            candidate.canonicalize();
            policy.replaceRule(i, candidate);
            changed = true;
        }
    }
    return changed;
}

/// Pass 3: drop an action when a syntactically weaker rule already grants it.
bool eliminateShadowedActions(CandidatePolicy& policy) {
    bool changed = false;
    std::size_t i = 0;
    while (i < policy.rules().size()) {
        const Rule rule = policy.rules()[i];
        std::vector<std::string> keep;
        for (const auto& a : rule.actions) {
            bool shadowed = false;
            for (std::size_t j = 0; j < policy.rules().size() && !shadowed; ++j) {
                if (j == i) continue;
                const Rule& other = policy.rules()[j];
                shadowed = other.subjectType == rule.subjectType &&
                           other.resourceType == rule.resourceType &&
                           std::binary_search(other.actions.begin(), other.actions.end(), a) &&
                           sortedSubset(other.subjectCondition, rule.subjectCondition) &&
                           sortedSubset(other.resourceCondition, rule.resourceCondition) &&
                           sortedSubset(other.constraint, rule.constraint);
            }
            if (!shadowed) keep.push_back(a);
        }
        if (keep.size() == rule.actions.size()) {
            ++i;
            continue;
        }
        changed = true;
        if (keep.empty()) {
            policy.removeRule(i);
        } else {
            Rule candidate = rule;
            candidate.actions = keep;
            policy.replaceRule(i, candidate);
            ++i;
        }
    }
    return changed;
}

/// Pass 4: drop an action when every tuple it grants is granted elsewhere.
bool eliminateRedundantActions(CandidatePolicy& policy) {
    bool changed = false;
    std::size_t i = 0;
    while (i < policy.rules().size()) {
        bool removedRule = false;
        std::size_t actionIdx = 0;
        // one action at a time against the current coverage counts, so two
        // rules can never drop the same last grant simultaneously
        while (actionIdx < policy.rules()[i].actions.size()) {
            const std::string a = policy.rules()[i].actions[actionIdx];
            // vacuously redundant when the rule grants nothing for a
            const bool redundant = policy.actionFullyDoubleCovered(i, a);
            if (!redundant) {
                ++actionIdx;
                continue;
            }
            changed = true;
            Rule candidate = policy.rules()[i];
            candidate.actions.erase(
                std::remove(candidate.actions.begin(), candidate.actions.end(), a),
                candidate.actions.end());
            if (candidate.actions.empty()) {
                policy.removeRule(i);
                removedRule = true;
                break;
            }
            policy.replaceRule(i, candidate); // actionIdx now points at the next action
        }
        if (!removedRule) ++i;
    }
    return changed;
}

const std::vector<std::string> kIdPath{kIdField};

const std::vector<std::string>& conditionPathFor(const std::vector<std::string>& path) {
    // a condition cannot have an empty path; the object itself is its id
    return path.empty() ? kIdPath : path;
}

/// Pass 5: constant propagation between a pinned condition and an equality
/// constraint.
bool propagateConstants(CandidatePolicy& policy, MiningMode mode) {
    bool changed = false;
    for (std::size_t i = 0; i < policy.rules().size(); ++i) {
        Rule rule = policy.rules()[i];
        bool ruleChanged = true;
        bool anyChange = false;
        while (ruleChanged) {
            ruleChanged = false;
            for (std::size_t c = 0; c < rule.constraint.size() && !ruleChanged; ++c) {
                const AtomicConstraint con = rule.constraint[c];
                if (con.op != ConsOp::Equal) continue;
                if (con.negated && mode != MiningMode::DtrmMinus) continue;
                // subject condition pins the subject path -> resource condition
                for (const auto& sc : rule.subjectCondition) {
                    if (sc.negated || sc.op != CondOp::In || sc.vals.size() != 1) continue;
                    if (sc.path != con.subjectPath) continue;
                    AtomicCondition nc;
                    nc.path = conditionPathFor(con.resourcePath);
                    nc.op = CondOp::In;
                    nc.vals = sc.vals;
                    nc.negated = con.negated;
                    if (wscAtomic(nc) > wscAtomic(con)) continue;
                    rule.constraint.erase(rule.constraint.begin() +
                                          static_cast<std::ptrdiff_t>(c));
                    rule.resourceCondition.push_back(std::move(nc));
                    rule.canonicalize();
                    ruleChanged = true;
                    anyChange = true;
                    break;
                }
                if (ruleChanged) break;
                // resource condition pins the resource path -> subject condition
                for (const auto& rc : rule.resourceCondition) {
                    if (rc.negated || rc.op != CondOp::In || rc.vals.size() != 1) continue;
                    if (rc.path != con.resourcePath) continue;
                    AtomicCondition nc;
                    nc.path = conditionPathFor(con.subjectPath);
                    nc.op = CondOp::In;
                    nc.vals = rc.vals;
                    nc.negated = con.negated;
                    if (wscAtomic(nc) > wscAtomic(con)) continue;
                    rule.constraint.erase(rule.constraint.begin() +
                                          static_cast<std::ptrdiff_t>(c));
                    rule.subjectCondition.push_back(std::move(nc));
                    rule.canonicalize();
                    ruleChanged = true;
                    anyChange = true;
                    break;
                }
            }
        }
        if (anyChange) {
            policy.replaceRule(i, rule);
            changed = true;
        }
    }
    return changed;
}

std::vector<std::string> typeSequence(const ClassModel& cm, const std::string& startClass,
                                      const std::vector<std::string>& path) {
    std::vector<std::string> types{startClass};
    std::string current = startClass;
    for (const auto& f : path) {
        current = cm.field(current, f).type;
        types.push_back(current);
    }
    return types;
}

enum class MultBucket { Single, Many };

MultBucket bucketOf(const ClassModel& cm, const std::string& cls,
                    const std::vector<std::string>& path) {
    return pathInfo(cm, cls, path).multiplicity == Multiplicity::Many ? MultBucket::Many
                                                                      : MultBucket::Single;
}

/// Splices out the first cycle (same class visited twice) whose removal keeps
/// the path's multiplicity bucket, the rule valid, and AU covered. `path`
/// must reference into `rule`.
bool tryRemovePathCycle(CandidatePolicy& policy, std::size_t ruleIndex, Rule& rule,
                        std::vector<std::string>& path, const std::string& startClass,
                        bool allowEmpty) {
    const ClassModel& cm = policy.ctx().classModel();
    const std::vector<std::string> original = path;
    const auto types = typeSequence(cm, startClass, original);
    for (std::size_t a = 0; a < types.size(); ++a) {
        for (std::size_t b = types.size(); b-- > a + 1;) {
            if (types[a] != types[b]) continue;
            std::vector<std::string> shortened(original.begin(),
                                               original.begin() +
                                                   static_cast<std::ptrdiff_t>(a));
            shortened.insert(shortened.end(),
                             original.begin() + static_cast<std::ptrdiff_t>(b),
                             original.end());
            if (shortened.empty() && !allowEmpty) continue;
            if (bucketOf(cm, startClass, shortened) != bucketOf(cm, startClass, original))
                continue;
            path = shortened;
            Rule candidate = rule;
            candidate.canonicalize();
            if (policy.ruleValid(candidate) &&
                policy.coversAllIfReplaced(ruleIndex, candidate)) {
                policy.replaceRule(ruleIndex, candidate);
                return true;
            }
            path = original;
        }
    }
    return false;
}

/// Pass 6: remove navigation cycles.
bool removePathCycles(CandidatePolicy& policy) {
    bool changed = false;
    for (std::size_t i = 0; i < policy.rules().size(); ++i) {
        bool ruleChanged = true;
        while (ruleChanged) {
            ruleChanged = false;
            Rule rule = policy.rules()[i];
            for (std::size_t k = 0; k < rule.subjectCondition.size() && !ruleChanged; ++k)
                ruleChanged = tryRemovePathCycle(policy, i, rule,
                                                 rule.subjectCondition[k].path,
                                                 rule.subjectType, /*allowEmpty=*/false);
            for (std::size_t k = 0; k < rule.resourceCondition.size() && !ruleChanged; ++k)
                ruleChanged = tryRemovePathCycle(policy, i, rule,
                                                 rule.resourceCondition[k].path,
                                                 rule.resourceType, /*allowEmpty=*/false);
            for (std::size_t k = 0; k < rule.constraint.size() && !ruleChanged; ++k) {
                ruleChanged = tryRemovePathCycle(policy, i, rule,
                                                 rule.constraint[k].subjectPath,
                                                 rule.subjectType, /*allowEmpty=*/true);
                if (!ruleChanged)
                    ruleChanged = tryRemovePathCycle(policy, i, rule,
                                                     rule.constraint[k].resourcePath,
                                                     rule.resourceType, /*allowEmpty=*/true);
            }
            if (ruleChanged) changed = true;
        }
    }
    return changed;
}

/// Pass 7: replace a constraint whose one side is constant over the rule's
/// coverage with the corresponding condition on the other side.
bool replaceConstantConstraints(CandidatePolicy& policy, MiningMode mode) {
    bool changed = false;
    for (std::size_t i = 0; i < policy.rules().size(); ++i) {
        bool ruleChanged = true;
        while (ruleChanged) {
            ruleChanged = false;
            const Rule rule = policy.rules()[i];
            if (rule.constraint.empty()) continue;
            const std::vector<std::string> coveredSubjects = policy.coveredSideIds(i, true);
            const std::vector<std::string> coveredResources =
                policy.coveredSideIds(i, false);
            if (coveredSubjects.empty()) continue; // dead rule; pass 4 cleans it up

            for (std::size_t c = 0; c < rule.constraint.size() && !ruleChanged; ++c) {
                const AtomicConstraint& con = rule.constraint[c];
                if (con.negated && mode != MiningMode::DtrmMinus) continue;

                auto constantOver = [&](const std::vector<std::string>& objs,
                                        const std::vector<std::string>& path,
                                        const Value*& out) {
                    out = nullptr;
                    for (const auto& id : objs) {
                        const Value& v = policy.ctx().navCached(id, path);
                        if (!out)
                            out = &v;
                        else if (!(*out == v))
                            return false;
                    }
                    return out != nullptr;
                };

                auto tryReplace = [&](bool subjectSideConstant, const Value& v) {
                    AtomicCondition nc;
                    nc.negated = con.negated;
                    if (subjectSideConstant) {
                        nc.path = conditionPathFor(con.resourcePath);
                        if (v.isSingle()) {
                            if (con.op == ConsOp::Equal) {
                                nc.op = CondOp::In;
                                nc.vals = {v.atom()};
                            } else if (con.op == ConsOp::In) {
                                nc.op = CondOp::Contains;
                                nc.vals = {v.atom()};
                            } else {
                                return false;
                            }
                        } else if (v.isSet() && con.op == ConsOp::Contains &&
                                   !v.atoms().empty()) {
                            nc.op = CondOp::In;
                            nc.vals = v.atoms();
                        } else {
                            return false;
                        }
                    } else {
                        nc.path = conditionPathFor(con.subjectPath);
                        if (v.isSingle()) {
                            if (con.op == ConsOp::Equal) {
                                nc.op = CondOp::In;
                                nc.vals = {v.atom()};
                            } else if (con.op == ConsOp::Contains) {
                                nc.op = CondOp::Contains;
                                nc.vals = {v.atom()};
                            } else {
                                return false;
                            }
                        } else if (v.isSet() && con.op == ConsOp::In && !v.atoms().empty()) {
                            nc.op = CondOp::In;
                            nc.vals = v.atoms();
                        } else {
                            return false;
                        }
                    }
                    if (wscAtomic(nc) > wscAtomic(con)) return false;
                    Rule candidate = rule;
                    candidate.constraint.erase(candidate.constraint.begin() +
                                               static_cast<std::ptrdiff_t>(c));
                    if (subjectSideConstant)
                        candidate.resourceCondition.push_back(nc);
                    else
                        candidate.subjectCondition.push_back(nc);
                    candidate.canonicalize();
                    if (!policy.ruleValid(candidate)) return false;
                    policy.replaceRule(i, candidate);
                    return true;
                };

                const Value* v = nullptr;
                if (constantOver(coveredSubjects, con.subjectPath, v) &&
                    tryReplace(true, *v)) {
                    ruleChanged = true;
                    changed = true;
                    break;
                }
                if (constantOver(coveredResources, con.resourcePath, v) &&
                    tryReplace(false, *v)) {
                    ruleChanged = true;
                    changed = true;
                    break;
                }
            }
        }
    }
    return changed;
}

} // namespace

bool simplifyRules(CandidatePolicy& policy, const SimplifyOptions& options) {
    bool changed = false;
    auto notify = [&](int pass) {
        if (options.observer)
            options.observer(std::string(stage::kSimplifyPrefix) + std::to_string(pass),
                             policy.rules());
    };
    changed |= eliminateRemovableAtoms(policy, /*conditions=*/true,
                                       options.maxRemovalSubsetAtoms);
    notify(1);
    changed |= eliminateRemovableAtoms(policy, /*conditions=*/false,
                                       options.maxRemovalSubsetAtoms);
    notify(2);
    changed |= eliminateShadowedActions(policy);
    notify(3);
    changed |= eliminateRedundantActions(policy);
    notify(4);
    changed |= propagateConstants(policy, options.mode);
    notify(5);
    changed |= removePathCycles(policy);
    notify(6);
    changed |= replaceConstantConstraints(policy, options.mode);
    notify(7);
    return changed;
}

void mergeAndSimplify(CandidatePolicy& policy, const SimplifyOptions& options,
                      std::size_t* mergedPairs) {
    constexpr std::size_t kMaxIterations = 100;
    for (std::size_t iter = 0; iter < kMaxIterations; ++iter) {
        const std::size_t merges = mergeRules(policy);
        if (mergedPairs) *mergedPairs += merges;
        if (options.observer) options.observer(stage::kMerge, policy.rules());
        const bool simplified = simplifyRules(policy, options);
        if (merges == 0 && !simplified) return;
    }
    logWarn("merge/simplify fixpoint did not settle within the iteration cap");
}

// ---------------------------------------------------------------------------
// End-to-end pipeline

std::vector<Rule> minePolicy(const ClassModel& cm, const ObjectModel& om,
                             const AuthorizationSet& au, const MineOptions& options,
                             MiningReport* report) {
    MiningReport local;
    MiningReport& rep = report ? *report : local;

    const auto totalStart = Clock::now();
    const auto phase1Start = totalStart;

    const std::vector<TripleKey> triples = enumerateTriples(au, om);
    rep.triples = triples.size();

    // Feature catalogs per type pair are shared across actions and reused by
    // negation elimination.
    std::map<std::pair<std::string, std::string>, std::vector<Feature>> catalogs;
    for (const auto& t : triples) {
        auto key = std::make_pair(t.subjectType, t.resourceType);
        if (!catalogs.count(key))
            catalogs[key] = generateFeatures(cm, om, t.subjectType, t.resourceType,
                                             options.limits);
    }

    struct TripleResult {
        std::vector<Rule> rules;
        std::size_t featuresGenerated = 0;
        std::size_t featuresAfterReduction = 0;
        std::size_t vectors = 0;
        double datasetSeconds = 0.0;
        double treeSeconds = 0.0;
        double extractSeconds = 0.0;
    };
    std::vector<TripleResult> results(triples.size());
    std::vector<std::exception_ptr> failures(triples.size());

    auto processTriple = [&](std::size_t idx, EvalContext& ctx) {
        const TripleKey& t = triples[idx];
        TripleResult& out = results[idx];
        try {
            const auto dsStart = Clock::now();
            LabeledDataset full = buildDataset(
                ctx, au, t, catalogs.at({t.subjectType, t.resourceType}));
            out.featuresGenerated = full.features.size();
            out.vectors = full.numVectors();
            LabeledDataset ds = collapseEquivalentFeatures(dropConstantFeatures(full));
            out.featuresAfterReduction = ds.features.size();
            out.datasetSeconds = secondsSince(dsStart);

            const auto treeStart = Clock::now();
            std::vector<std::size_t> wsc;
            DatasetView view = viewOf(ds, wsc);
            std::unique_ptr<TreeNode> tree;
            try {
                tree = buildTree(view, options.criterion);
            } catch (const UnseparableSubset&) {
                // the equivalence reduction is lossy on negatives; retry the
                // triple with the full catalog before giving up
                logWarn("triple " + t.subjectType + "/" + t.resourceType + "/" +
                        t.action +
                        " became unseparable after feature reduction; retrying "
                        "with the full catalog");
                ds = dropConstantFeatures(std::move(full));
                out.featuresAfterReduction = ds.features.size();
                view = viewOf(ds, wsc);
                tree = buildTree(view, options.criterion);
            }
            out.treeSeconds = secondsSince(treeStart);

            const auto extractStart = Clock::now();
            out.rules = extractRules(*tree, ds);
            out.extractSeconds = secondsSince(extractStart);

            if (!options.dumpTreesDir.empty()) {
                namespace fs = std::filesystem;
                fs::create_directories(options.dumpTreesDir);
                const std::string base = options.dumpTreesDir + "/tree_" + t.subjectType +
                                         "_" + t.resourceType + "_" + t.action;
                std::ofstream txt(base + ".txt");
                dumpTreeText(txt, *tree, ds);
                std::ofstream dot(base + ".dot");
                dumpTreeDot(dot, *tree, ds);
            }
        } catch (...) {
            failures[idx] = std::current_exception();
        }
    };

    const std::size_t workers =
        std::max<std::size_t>(1, std::min(options.threads, triples.size()));
    if (workers <= 1) {
        EvalContext ctx(cm, om);
        for (std::size_t i = 0; i < triples.size(); ++i) processTriple(i, ctx);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&]() {
                EvalContext ctx(cm, om);
                for (;;) {
                    const std::size_t idx = next.fetch_add(1);
                    if (idx >= triples.size()) return;
                    processTriple(idx, ctx);
                }
            });
        }
        for (auto& th : pool) th.join();
    }

    for (const auto& f : failures)
        if (f) std::rethrow_exception(f);

    std::vector<Rule> candidates;
    double dsSum = 0, treeSum = 0, extractSum = 0;
    for (const auto& r : results) {
        candidates.insert(candidates.end(), r.rules.begin(), r.rules.end());
        rep.featuresGenerated += r.featuresGenerated;
        rep.featuresAfterReduction += r.featuresAfterReduction;
        rep.featureVectors += r.vectors;
        dsSum += r.datasetSeconds;
        treeSum += r.treeSeconds;
        extractSum += r.extractSeconds;
    }
    rep.extractedRules = candidates.size();
    rep.wscExtracted = wscPolicy(candidates);
    rep.timings["dataset_build"] = dsSum;
    rep.timings["tree_build"] = treeSum;
    rep.timings["extraction"] = extractSum;
    rep.timings["phase1_wall"] = secondsSince(phase1Start);

    const auto phase2Start = Clock::now();
    EvalContext ctx(cm, om);
    CandidatePolicy policy(ctx, au, std::move(candidates));
    if (options.observer) options.observer(stage::kExtract, policy.rules());

    if (options.mode == MiningMode::Dtrm) {
        const auto negStart = Clock::now();
        eliminateNegativeFeatures(policy, catalogs, rep.negativesEliminatedBySubstep);
        rep.timings["negation_elimination"] = secondsSince(negStart);
        if (options.observer) options.observer(stage::kNegationElimination, policy.rules());
    } else {
        rep.timings["negation_elimination"] = 0.0;
    }
    rep.rulesAfterNegationElimination = policy.rules().size();

    const auto simplifyStart = Clock::now();
    SimplifyOptions simplifyOptions;
    simplifyOptions.mode = options.mode;
    simplifyOptions.observer = options.observer;
    std::size_t merged = 0;
    mergeAndSimplify(policy, simplifyOptions, &merged);
    rep.mergedPairs = merged;
    rep.timings["merge_and_simplify"] = secondsSince(simplifyStart);
    rep.timings["phase2_wall"] = secondsSince(phase2Start);
    rep.timings["total_wall"] = secondsSince(totalStart);

    std::vector<Rule> out = policy.rules();
    std::sort(out.begin(), out.end());
    rep.rulesFinal = out.size();
    rep.wscFinal = wscPolicy(out);
    return out;
}

} // namespace rebac
