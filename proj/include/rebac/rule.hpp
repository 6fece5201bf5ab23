#pragma once

#include "rebac/model.hpp"
#include "rebac/value.hpp"

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

namespace rebac {

enum class CondOp { In, Contains };
enum class ConsOp { Equal, In, Contains, Supseteq, Subseteq };

std::string condOpToString(CondOp op);
std::string consOpToString(ConsOp op);
std::optional<CondOp> condOpFromString(const std::string& s);
std::optional<ConsOp> consOpFromString(const std::string& s);

/// Test on a single object: nav(o, path) op vals. op=in keeps a value set,
/// op=contains a single atomic (vals.size() == 1).
struct AtomicCondition {
    std::vector<std::string> path; // non-empty
    CondOp op = CondOp::In;
    std::vector<Atomic> vals;      // sorted, deduplicated, non-empty
    bool negated = false;

    auto operator<=>(const AtomicCondition&) const = default;
};

/// Relation between a subject path and a resource path. Either path may be
/// empty (the object itself).
struct AtomicConstraint {
    std::vector<std::string> subjectPath;
    ConsOp op = ConsOp::Equal;
    std::vector<std::string> resourcePath;
    bool negated = false;

    auto operator<=>(const AtomicConstraint&) const = default;
};

/// Conjunctive condition/constraint sets are kept sorted and deduplicated so
/// rule comparison and serialization are canonical.
struct Rule {
    std::string subjectType;
    std::vector<AtomicCondition> subjectCondition;
    std::string resourceType;
    std::vector<AtomicCondition> resourceCondition;
    std::vector<AtomicConstraint> constraint;
    std::vector<std::string> actions; // sorted, non-empty

    auto operator<=>(const Rule&) const = default;

    void canonicalize();
};

struct SraTuple {
    std::string subject;
    std::string resource;
    std::string action;

    auto operator<=>(const SraTuple&) const = default;
};

/// The set of permitted subject-resource-action triples; ground truth for mining.
class AuthorizationSet {
public:
    AuthorizationSet() = default;
    explicit AuthorizationSet(std::vector<SraTuple> tuples);

    bool contains(const SraTuple& t) const;
    const std::vector<SraTuple>& tuples() const { return tuples_; }
    std::size_t size() const { return tuples_.size(); }
    bool empty() const { return tuples_.empty(); }

    void validate(const ObjectModel& om, const std::vector<std::string>& actions) const;

private:
    std::vector<SraTuple> tuples_; // sorted, deduplicated
};

struct Policy {
    ClassModel classModel;
    ObjectModel objectModel;
    std::vector<std::string> actions;
    std::vector<Rule> rules;
};

// Weighted structural complexity: conditions count |path| + |vals|,
// constraints |p1| + |p2|, negation adds 1; a rule adds its action count.
std::size_t wscAtomic(const AtomicCondition& c);
std::size_t wscAtomic(const AtomicConstraint& c);
std::size_t wscRule(const Rule& r);
std::size_t wscPolicy(const std::vector<Rule>& rules);

/// Derives the operator from the path's multiplicity (one/optional -> in,
/// many -> contains) and canonicalizes vals. Throws StructuralError on an
/// ill-typed path or empty value set.
AtomicCondition makeCondition(const ClassModel& cm, const std::string& startClass,
                              std::vector<std::string> path, std::vector<Atomic> vals,
                              bool negated = false);

/// Derives the operator from the two paths' multiplicities and checks that
/// their terminal types agree.
AtomicConstraint makeConstraint(const ClassModel& cm, const std::string& subjectType,
                                std::vector<std::string> subjectPath,
                                const std::string& resourceType,
                                std::vector<std::string> resourcePath,
                                bool negated = false);

/// Typing, multiplicity/operator coupling, and non-emptiness checks for a
/// rule against the class model. Throws StructuralError.
void validateRule(const ClassModel& cm, const Rule& rule);

bool ruleHasNegation(const Rule& rule);

std::string describe(const AtomicCondition& c);
std::string describe(const AtomicConstraint& c);
std::string describe(const Rule& r);

} // namespace rebac
