#include "rebac/eval.hpp"

#include "rebac/error.hpp"

#include <algorithm>

namespace rebac {

Value nav(const ClassModel& cm, const ObjectModel& om, const std::string& objectId,
          const std::vector<std::string>& path) {
    const Object& start = om.object(objectId);
    pathInfo(cm, start.type, path); // type-check up front; throws on ill-typed paths
    if (path.empty()) return Value::single(Atomic{start.id});

    std::string currentClass = start.type;
    bool many = false;
    std::vector<Atomic> atoms{Atomic{start.id}};
    for (const auto& fieldName : path) {
        const FieldDecl& decl = cm.field(currentClass, fieldName);
        std::vector<Atomic> next;
        for (const auto& a : atoms) {
            const Object& cur = om.object(std::get<std::string>(a));
            if (fieldName == kIdField) {
                next.emplace_back(cur.id);
                continue;
            }
            auto it = cur.fields.find(fieldName);
            if (it == cur.fields.end()) continue; // absent optional value
            const Value& fv = it->second;
            if (fv.isSingle())
                next.push_back(fv.atom());
            else if (fv.isSet())
                next.insert(next.end(), fv.atoms().begin(), fv.atoms().end());
        }
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        atoms = std::move(next);
        if (decl.multiplicity == Multiplicity::Many) many = true;
        currentClass = decl.type;
    }

    if (many) return Value::set(std::move(atoms));
    if (atoms.empty()) return Value::absent();
    return Value::single(atoms.front());
}

bool conditionRelationHolds(const Value& v, const AtomicCondition& ac) {
    bool pos = false;
    if (ac.op == CondOp::In) {
        pos = v.isSingle() && std::binary_search(ac.vals.begin(), ac.vals.end(), v.atom());
    } else {
        pos = v.isSet() && v.setContains(ac.vals.front());
    }
    return ac.negated ? !pos : pos;
}

bool constraintRelationHolds(const Value& a, const Value& b, const AtomicConstraint& acn) {
    bool pos = false;
    switch (acn.op) {
        case ConsOp::Equal:
            // Absent compares false even against Absent: no value is not a value.
            pos = a.isSingle() && b.isSingle() && a.atom() == b.atom();
            break;
        case ConsOp::In:
            pos = a.isSingle() && b.isSet() && b.setContains(a.atom());
            break;
        case ConsOp::Contains:
            pos = a.isSet() && b.isSingle() && a.setContains(b.atom());
            break;
        case ConsOp::Supseteq:
            pos = a.isSet() && b.isSet() && atomSetSupseteq(a.atoms(), b.atoms());
            break;
        case ConsOp::Subseteq:
            pos = a.isSet() && b.isSet() && atomSetSubseteq(a.atoms(), b.atoms());
            break;
    }
    return acn.negated ? !pos : pos;
}

bool satisfiesAtomicCondition(const ClassModel& cm, const ObjectModel& om,
                              const std::string& objectId, const AtomicCondition& ac) {
    return conditionRelationHolds(nav(cm, om, objectId, ac.path), ac);
}

bool satisfiesAtomicConstraint(const ClassModel& cm, const ObjectModel& om,
                               const std::string& subjectId, const std::string& resourceId,
                               const AtomicConstraint& acn) {
    return constraintRelationHolds(nav(cm, om, subjectId, acn.subjectPath),
                           nav(cm, om, resourceId, acn.resourcePath), acn);
}

bool satisfiesRule(const ClassModel& cm, const ObjectModel& om, const SraTuple& t,
                   const Rule& rule) {
    EvalContext ctx(cm, om);
    return ctx.satisfiesRule(t, rule);
}

std::vector<SraTuple> ruleMeaning(const ClassModel& cm, const ObjectModel& om,
                                  const Rule& rule) {
    EvalContext ctx(cm, om);
    std::vector<SraTuple> out;
    for (const auto& [s, r] : ctx.rulePairs(rule))
        for (const auto& a : rule.actions) out.push_back({s, r, a});
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<SraTuple> policyMeaning(const ClassModel& cm, const ObjectModel& om,
                                    const std::vector<Rule>& rules) {
    EvalContext ctx(cm, om);
    std::vector<SraTuple> out;
    for (const auto& rule : rules)
        for (const auto& [s, r] : ctx.rulePairs(rule))
            for (const auto& a : rule.actions) out.push_back({s, r, a});
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

const Value& EvalContext::navCached(const std::string& objectId,
                                    const std::vector<std::string>& path) {
    return navCached(om_.indexOf(objectId), path);
}

const Value& EvalContext::navCached(std::size_t objectIndex,
                                    const std::vector<std::string>& path) {
    PathCache& pc = cache_[path];
    if (pc.perObject.empty()) pc.perObject.resize(om_.size());
    auto& slot = pc.perObject[objectIndex];
    if (!slot)
        slot = std::make_unique<Value>(nav(cm_, om_, om_.objectAt(objectIndex).id, path));
    return *slot;
}

bool EvalContext::satisfiesCondition(const std::string& objectId, const AtomicCondition& ac) {
    return conditionRelationHolds(navCached(objectId, ac.path), ac);
}

bool EvalContext::satisfiesConstraint(const std::string& subjectId,
                                      const std::string& resourceId,
                                      const AtomicConstraint& acn) {
    return constraintRelationHolds(navCached(subjectId, acn.subjectPath),
                           navCached(resourceId, acn.resourcePath), acn);
}

bool EvalContext::satisfiesRule(const SraTuple& t, const Rule& rule) {
    const Object* s = om_.findObject(t.subject);
    const Object* r = om_.findObject(t.resource);
    if (!s) throw StructuralError("unknown object id: " + t.subject);
    if (!r) throw StructuralError("unknown object id: " + t.resource);
    if (s->type != rule.subjectType || r->type != rule.resourceType) return false;
    if (!std::binary_search(rule.actions.begin(), rule.actions.end(), t.action)) return false;
    for (const auto& c : rule.subjectCondition)
        if (!satisfiesCondition(t.subject, c)) return false;
    for (const auto& c : rule.resourceCondition)
        if (!satisfiesCondition(t.resource, c)) return false;
    for (const auto& c : rule.constraint)
        if (!satisfiesConstraint(t.subject, t.resource, c)) return false;
    return true;
}

std::vector<std::pair<std::string, std::string>> EvalContext::rulePairs(const Rule& rule) {
    std::vector<std::pair<std::string, std::string>> pairs;
    std::vector<const std::string*> subjects;
    for (const auto& s : om_.objectsOfType(rule.subjectType)) {
        bool ok = true;
        for (const auto& c : rule.subjectCondition)
            if (!satisfiesCondition(s, c)) { ok = false; break; }
        if (ok) subjects.push_back(&s);
    }
    std::vector<const std::string*> resources;
    for (const auto& r : om_.objectsOfType(rule.resourceType)) {
        bool ok = true;
        for (const auto& c : rule.resourceCondition)
            if (!satisfiesCondition(r, c)) { ok = false; break; }
        if (ok) resources.push_back(&r);
    }
    for (const auto* s : subjects) {
        for (const auto* r : resources) {
            bool ok = true;
            for (const auto& c : rule.constraint)
                if (!satisfiesConstraint(*s, *r, c)) { ok = false; break; }
            if (ok) pairs.emplace_back(*s, *r);
        }
    }
    return pairs;
}

} // namespace rebac
