#pragma once

#include "rebac/model.hpp"
#include "rebac/rule.hpp"

#include <map>
#include <memory>
#include <vector>

namespace rebac {

/// Navigates `path` from the object with id `objectId`. The empty path yields
/// the object's own id. A Bottom intermediate on a many path contributes
/// nothing; on a one/optional chain it yields Absent. Unknown objects and
/// ill-typed paths raise StructuralError.
Value nav(const ClassModel& cm, const ObjectModel& om, const std::string& objectId,
          const std::vector<std::string>& path);

/// Positive-then-complement semantics on an already navigated value: an
/// Absent operand falsifies the positive form, negation flips the result.
bool conditionRelationHolds(const Value& v, const AtomicCondition& ac);
bool constraintRelationHolds(const Value& subjectValue, const Value& resourceValue,
                             const AtomicConstraint& acn);

bool satisfiesAtomicCondition(const ClassModel& cm, const ObjectModel& om,
                              const std::string& objectId, const AtomicCondition& ac);

bool satisfiesAtomicConstraint(const ClassModel& cm, const ObjectModel& om,
                               const std::string& subjectId, const std::string& resourceId,
                               const AtomicConstraint& acn);

bool satisfiesRule(const ClassModel& cm, const ObjectModel& om, const SraTuple& t,
                   const Rule& rule);

/// All SRA tuples satisfying the rule, over subjects of its subject type,
/// resources of its resource type, and its own actions. Sorted.
std::vector<SraTuple> ruleMeaning(const ClassModel& cm, const ObjectModel& om,
                                  const Rule& rule);

/// Union of the rules' meanings. Sorted, deduplicated.
std::vector<SraTuple> policyMeaning(const ClassModel& cm, const ObjectModel& om,
                                    const std::vector<Rule>& rules);

/// Memoizes nav results per (path, object); the workhorse behind dataset
/// construction and phase-2 validity checks. Not thread-safe: use one
/// context per worker.
class EvalContext {
public:
    EvalContext(const ClassModel& cm, const ObjectModel& om) : cm_(cm), om_(om) {}

    const ClassModel& classModel() const { return cm_; }
    const ObjectModel& objectModel() const { return om_; }

    const Value& navCached(const std::string& objectId, const std::vector<std::string>& path);
    const Value& navCached(std::size_t objectIndex, const std::vector<std::string>& path);

    bool satisfiesCondition(const std::string& objectId, const AtomicCondition& ac);
    bool satisfiesConstraint(const std::string& subjectId, const std::string& resourceId,
                             const AtomicConstraint& acn);
    bool satisfiesRule(const SraTuple& t, const Rule& rule);

    /// Meaning as (subject, resource) pairs only; actions are attached by the
    /// caller. Sorted by (subject, resource).
    std::vector<std::pair<std::string, std::string>> rulePairs(const Rule& rule);

private:
    struct PathCache {
        std::vector<std::unique_ptr<Value>> perObject;
    };

    const ClassModel& cm_;
    const ObjectModel& om_;
    std::map<std::vector<std::string>, PathCache> cache_;
};

} // namespace rebac
