#include "rebac/rule.hpp"

#include "rebac/error.hpp"

#include <algorithm>
#include <sstream>

namespace rebac {

std::string condOpToString(CondOp op) {
    return op == CondOp::In ? "in" : "contains";
}

std::string consOpToString(ConsOp op) {
    switch (op) {
        case ConsOp::Equal: return "equal";
        case ConsOp::In: return "in";
        case ConsOp::Contains: return "contains";
        case ConsOp::Supseteq: return "supseteq";
        case ConsOp::Subseteq: return "subseteq";
    }
    return "?";
}

std::optional<CondOp> condOpFromString(const std::string& s) {
    if (s == "in") return CondOp::In;
    if (s == "contains") return CondOp::Contains;
    return std::nullopt;
}

std::optional<ConsOp> consOpFromString(const std::string& s) {
    if (s == "equal") return ConsOp::Equal;
    if (s == "in") return ConsOp::In;
    if (s == "contains") return ConsOp::Contains;
    if (s == "supseteq") return ConsOp::Supseteq;
    if (s == "subseteq") return ConsOp::Subseteq;
    return std::nullopt;
}

namespace {

template <typename T>
void sortUnique(std::vector<T>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

} // namespace

void Rule::canonicalize() {
    sortUnique(subjectCondition);
    sortUnique(resourceCondition);
    sortUnique(constraint);
    sortUnique(actions);
}

AuthorizationSet::AuthorizationSet(std::vector<SraTuple> tuples) : tuples_(std::move(tuples)) {
    sortUnique(tuples_);
}

bool AuthorizationSet::contains(const SraTuple& t) const {
    return std::binary_search(tuples_.begin(), tuples_.end(), t);
}

void AuthorizationSet::validate(const ObjectModel& om,
                                const std::vector<std::string>& actions) const {
    for (const auto& t : tuples_) {
        if (!om.hasObject(t.subject))
            throw StructuralError("AU subject '" + t.subject + "' not in object model");
        if (!om.hasObject(t.resource))
            throw StructuralError("AU resource '" + t.resource + "' not in object model");
        if (std::find(actions.begin(), actions.end(), t.action) == actions.end())
            throw StructuralError("AU action '" + t.action + "' not in action set");
    }
}

std::size_t wscAtomic(const AtomicCondition& c) {
    std::size_t w = c.path.size() + c.vals.size();
    if (c.negated) w += 1;
    return w;
}

std::size_t wscAtomic(const AtomicConstraint& c) {
    std::size_t w = c.subjectPath.size() + c.resourcePath.size();
    if (c.negated) w += 1;
    return w;
}

std::size_t wscRule(const Rule& r) {
    std::size_t w = r.actions.size();
    for (const auto& c : r.subjectCondition) w += wscAtomic(c);
    for (const auto& c : r.resourceCondition) w += wscAtomic(c);
    for (const auto& c : r.constraint) w += wscAtomic(c);
    return w;
}

std::size_t wscPolicy(const std::vector<Rule>& rules) {
    std::size_t w = 0;
    for (const auto& r : rules) w += wscRule(r);
    return w;
}

AtomicCondition makeCondition(const ClassModel& cm, const std::string& startClass,
                              std::vector<std::string> path, std::vector<Atomic> vals,
                              bool negated) {
    if (path.empty())
        throw StructuralError("atomic condition requires a non-empty path");
    const PathInfo info = pathInfo(cm, startClass, path);
    AtomicCondition c;
    c.path = std::move(path);
    c.op = info.multiplicity == Multiplicity::Many ? CondOp::Contains : CondOp::In;
    c.negated = negated;
    sortUnique(vals);
    if (vals.empty())
        throw StructuralError("atomic condition requires a non-empty value set");
    if (c.op == CondOp::Contains && vals.size() != 1)
        throw StructuralError("contains-condition takes a single value");
    c.vals = std::move(vals);
    return c;
}

AtomicConstraint makeConstraint(const ClassModel& cm, const std::string& subjectType,
                                std::vector<std::string> subjectPath,
                                const std::string& resourceType,
                                std::vector<std::string> resourcePath, bool negated) {
    const PathInfo si = pathInfo(cm, subjectType, subjectPath);
    const PathInfo ri = pathInfo(cm, resourceType, resourcePath);
    if (si.type != ri.type)
        throw StructuralError("constraint path types differ: " + si.type + " vs " + ri.type);
    AtomicConstraint c;
    c.subjectPath = std::move(subjectPath);
    c.resourcePath = std::move(resourcePath);
    c.negated = negated;
    const bool sMany = si.multiplicity == Multiplicity::Many;
    const bool rMany = ri.multiplicity == Multiplicity::Many;
    if (!sMany && !rMany)
        c.op = ConsOp::Equal;
    else if (!sMany && rMany)
        c.op = ConsOp::In;
    else if (sMany && !rMany)
        c.op = ConsOp::Contains;
    else
        c.op = ConsOp::Supseteq; // subseteq variants are built explicitly
    return c;
}

namespace {

void validateCondition(const ClassModel& cm, const std::string& startClass,
                       const AtomicCondition& c) {
    if (c.path.empty())
        throw StructuralError("atomic condition with empty path");
    if (c.vals.empty())
        throw StructuralError("atomic condition with empty value set");
    const PathInfo info = pathInfo(cm, startClass, c.path);
    const CondOp expected =
        info.multiplicity == Multiplicity::Many ? CondOp::Contains : CondOp::In;
    if (c.op != expected)
        throw StructuralError("condition operator '" + condOpToString(c.op) +
                              "' mismatches multiplicity of path on " + startClass);
    if (c.op == CondOp::Contains && c.vals.size() != 1)
        throw StructuralError("contains-condition takes a single value");
}

void validateConstraint(const ClassModel& cm, const std::string& subjectType,
                        const std::string& resourceType, const AtomicConstraint& c) {
    const PathInfo si = pathInfo(cm, subjectType, c.subjectPath);
    const PathInfo ri = pathInfo(cm, resourceType, c.resourcePath);
    if (si.type != ri.type)
        throw StructuralError("constraint path types differ: " + si.type + " vs " + ri.type);
    const bool sMany = si.multiplicity == Multiplicity::Many;
    const bool rMany = ri.multiplicity == Multiplicity::Many;
    bool ok = false;
    switch (c.op) {
        case ConsOp::Equal: ok = !sMany && !rMany; break;
        case ConsOp::In: ok = !sMany && rMany; break;
        case ConsOp::Contains: ok = sMany && !rMany; break;
        case ConsOp::Supseteq:
        case ConsOp::Subseteq: ok = sMany && rMany; break;
    }
    if (!ok)
        throw StructuralError("constraint operator '" + consOpToString(c.op) +
                              "' incompatible with path multiplicities");
}

} // namespace

void validateRule(const ClassModel& cm, const Rule& rule) {
    if (!cm.hasClass(rule.subjectType))
        throw StructuralError("rule subject type undeclared: " + rule.subjectType);
    if (!cm.hasClass(rule.resourceType))
        throw StructuralError("rule resource type undeclared: " + rule.resourceType);
    if (rule.actions.empty())
        throw StructuralError("rule has an empty action set");
    for (const auto& c : rule.subjectCondition) validateCondition(cm, rule.subjectType, c);
    for (const auto& c : rule.resourceCondition) validateCondition(cm, rule.resourceType, c);
    for (const auto& c : rule.constraint)
        validateConstraint(cm, rule.subjectType, rule.resourceType, c);
}

bool ruleHasNegation(const Rule& rule) {
    for (const auto& c : rule.subjectCondition)
        if (c.negated) return true;
    for (const auto& c : rule.resourceCondition)
        if (c.negated) return true;
    for (const auto& c : rule.constraint)
        if (c.negated) return true;
    return false;
}

namespace {

std::string pathToString(const std::vector<std::string>& path) {
    if (path.empty()) return "<self>";
    std::string s;
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (i) s += ".";
        s += path[i];
    }
    return s;
}

} // namespace

std::string describe(const AtomicCondition& c) {
    std::ostringstream os;
    if (c.negated) os << "not(";
    os << pathToString(c.path) << " " << condOpToString(c.op) << " ";
    if (c.op == CondOp::In) {
        os << "{";
        for (std::size_t i = 0; i < c.vals.size(); ++i) {
            if (i) os << ", ";
            os << atomicToString(c.vals[i]);
        }
        os << "}";
    } else {
        os << atomicToString(c.vals.front());
    }
    if (c.negated) os << ")";
    return os.str();
}

std::string describe(const AtomicConstraint& c) {
    std::ostringstream os;
    if (c.negated) os << "not(";
    os << "subject." << pathToString(c.subjectPath) << " " << consOpToString(c.op)
       << " resource." << pathToString(c.resourcePath);
    if (c.negated) os << ")";
    return os.str();
}

std::string describe(const Rule& r) {
    std::ostringstream os;
    os << "<" << r.subjectType << "; ";
    if (r.subjectCondition.empty()) os << "true";
    for (std::size_t i = 0; i < r.subjectCondition.size(); ++i) {
        if (i) os << " and ";
        os << describe(r.subjectCondition[i]);
    }
    os << "; " << r.resourceType << "; ";
    if (r.resourceCondition.empty()) os << "true";
    for (std::size_t i = 0; i < r.resourceCondition.size(); ++i) {
        if (i) os << " and ";
        os << describe(r.resourceCondition[i]);
    }
    os << "; ";
    if (r.constraint.empty()) os << "true";
    for (std::size_t i = 0; i < r.constraint.size(); ++i) {
        if (i) os << " and ";
        os << describe(r.constraint[i]);
    }
    os << "; {";
    for (std::size_t i = 0; i < r.actions.size(); ++i) {
        if (i) os << ", ";
        os << r.actions[i];
    }
    os << "}>";
    return os.str();
}

} // namespace rebac
