#include "rebac/features.hpp"

#include "rebac/error.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <unordered_map>

namespace rebac {

std::string describe(const Feature& f) {
    std::ostringstream os;
    switch (f.kind) {
        case FeatureKind::SubjectCondition:
            os << describe(f.condition);
            break;
        case FeatureKind::ResourceCondition:
            os << "resource: " << describe(f.condition);
            break;
        case FeatureKind::Constraint:
            os << describe(f.constraint);
            break;
    }
    return os.str();
}

std::vector<TripleKey> enumerateTriples(const AuthorizationSet& au, const ObjectModel& om) {
    std::vector<TripleKey> triples;
    for (const auto& t : au.tuples())
        triples.push_back({om.object(t.subject).type, om.object(t.resource).type, t.action});
    std::sort(triples.begin(), triples.end());
    triples.erase(std::unique(triples.begin(), triples.end()), triples.end());
    return triples;
}

namespace {

struct PathEntry {
    std::vector<std::string> fields;
    PathInfo info;
};

/// All navigation paths from `startClass` up to `maxLen` steps. Intermediate
/// steps follow reference fields; terminals may be reference or Boolean
/// fields. The implicit `id` field is not enumerated.
std::vector<PathEntry> enumeratePaths(const ClassModel& cm, const std::string& startClass,
                                      std::size_t maxLen, bool includeEmpty) {
    std::vector<PathEntry> out;
    if (includeEmpty)
        out.push_back({{}, PathInfo{startClass, Multiplicity::One}});
    struct Frame {
        std::string cls;
        std::vector<std::string> fields;
        Multiplicity mult;
    };
    std::vector<Frame> work{{startClass, {}, Multiplicity::One}};
    while (!work.empty()) {
        Frame f = std::move(work.back());
        work.pop_back();
        if (f.fields.size() >= maxLen) continue;
        for (const auto& decl : cm.fieldsOf(f.cls)) {
            Multiplicity m = f.mult;
            if (decl.multiplicity == Multiplicity::Many)
                m = Multiplicity::Many;
            else if (decl.multiplicity == Multiplicity::Optional && m != Multiplicity::Many)
                m = Multiplicity::Optional;
            auto fields = f.fields;
            fields.push_back(decl.name);
            out.push_back({fields, PathInfo{decl.type, m}});
            if (decl.isReference()) work.push_back({decl.type, std::move(fields), m});
        }
    }
    std::sort(out.begin(), out.end(),
              [](const PathEntry& a, const PathEntry& b) { return a.fields < b.fields; });
    return out;
}

/// Distinct atomic values reachable via `path` over all objects of `cls`.
std::vector<Atomic> valuePool(const ClassModel& cm, const ObjectModel& om,
                              const std::string& cls, const std::vector<std::string>& path) {
    std::vector<Atomic> pool;
    for (const auto& id : om.objectsOfType(cls)) {
        const Value v = nav(cm, om, id, path);
        if (v.isSingle())
            pool.push_back(v.atom());
        else if (v.isSet())
            pool.insert(pool.end(), v.atoms().begin(), v.atoms().end());
    }
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
    return pool;
}

bool catalogLess(const Feature& a, const Feature& b) {
    if (a.wsc != b.wsc) return a.wsc < b.wsc;
    if (a.kind != b.kind) return a.kind < b.kind;
    if (a.kind == FeatureKind::Constraint) return a.constraint < b.constraint;
    return a.condition < b.condition;
}

void addConditionFeatures(const ClassModel& cm, const ObjectModel& om,
                          const std::string& cls, FeatureKind kind, std::size_t maxLen,
                          const FeatureLimits& limits, std::vector<Feature>& out) {
    if (limits.maxConditionSetElems == 0) return;
    for (const auto& entry : enumeratePaths(cm, cls, maxLen, /*includeEmpty=*/false)) {
        for (const auto& v : valuePool(cm, om, cls, entry.fields)) {
            Feature f;
            f.kind = kind;
            f.condition.path = entry.fields;
            f.condition.op = entry.info.multiplicity == Multiplicity::Many
                                 ? CondOp::Contains
                                 : CondOp::In;
            f.condition.vals = {v};
            f.condition.negated = false;
            f.wsc = wscAtomic(f.condition);
            out.push_back(std::move(f));
        }
    }
}

} // namespace

std::vector<Feature> generateFeatures(const ClassModel& cm, const ObjectModel& om,
                                      const std::string& subjectType,
                                      const std::string& resourceType,
                                      const FeatureLimits& limits) {
    std::vector<Feature> out;
    addConditionFeatures(cm, om, subjectType, FeatureKind::SubjectCondition,
                         limits.effectiveSubjectPathLen(), limits, out);
    addConditionFeatures(cm, om, resourceType, FeatureKind::ResourceCondition,
                         limits.effectiveResourcePathLen(), limits, out);

    const std::size_t mtpl = limits.maxConstraintTotalPathLen;
    const auto subjectPaths = enumeratePaths(cm, subjectType, mtpl, /*includeEmpty=*/true);
    const auto resourcePaths = enumeratePaths(cm, resourceType, mtpl, /*includeEmpty=*/true);
    for (const auto& sp : subjectPaths) {
        for (const auto& rp : resourcePaths) {
            const std::size_t total = sp.fields.size() + rp.fields.size();
            if (total == 0 || total > mtpl) continue;
            if (sp.info.type != rp.info.type) continue;
            const bool sMany = sp.info.multiplicity == Multiplicity::Many;
            const bool rMany = rp.info.multiplicity == Multiplicity::Many;
            std::vector<ConsOp> ops;
            if (!sMany && !rMany)
                ops = {ConsOp::Equal};
            else if (!sMany && rMany)
                ops = {ConsOp::In};
            else if (sMany && !rMany)
                ops = {ConsOp::Contains};
            else
                ops = {ConsOp::Supseteq, ConsOp::Subseteq};
            for (ConsOp op : ops) {
                Feature f;
                f.kind = FeatureKind::Constraint;
                f.constraint.subjectPath = sp.fields;
                f.constraint.resourcePath = rp.fields;
                f.constraint.op = op;
                f.constraint.negated = false;
                f.wsc = wscAtomic(f.constraint);
                out.push_back(std::move(f));
            }
        }
    }

    std::sort(out.begin(), out.end(), catalogLess);
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

LabeledDataset buildDataset(EvalContext& ctx, const AuthorizationSet& au,
                            const TripleKey& triple, std::vector<Feature> features) {
    const ObjectModel& om = ctx.objectModel();
    LabeledDataset ds;
    ds.triple = triple;
    ds.features = std::move(features);
    ds.subjects = om.objectsOfType(triple.subjectType);
    ds.resources = om.objectsOfType(triple.resourceType);
    const std::size_t numS = ds.subjects.size();
    const std::size_t numR = ds.resources.size();
    const std::size_t n = numS * numR;

    ds.labels = BitVec(n);
    for (std::size_t si = 0; si < numS; ++si)
        for (std::size_t ri = 0; ri < numR; ++ri)
            if (au.contains({ds.subjects[si], ds.resources[ri], triple.action}))
                ds.labels.set(si * numR + ri, true);

    ds.featureBits.reserve(ds.features.size());
    for (const auto& f : ds.features) {
        BitVec bits(n);
        switch (f.kind) {
            case FeatureKind::SubjectCondition:
                for (std::size_t si = 0; si < numS; ++si) {
                    if (conditionRelationHolds(ctx.navCached(ds.subjects[si], f.condition.path),
                                               f.condition))
                        bits.setRange(si * numR, si * numR + numR);
                }
                break;
            case FeatureKind::ResourceCondition: {
                std::vector<bool> hold(numR);
                for (std::size_t ri = 0; ri < numR; ++ri)
                    hold[ri] = conditionRelationHolds(
                        ctx.navCached(ds.resources[ri], f.condition.path), f.condition);
                for (std::size_t si = 0; si < numS; ++si)
                    for (std::size_t ri = 0; ri < numR; ++ri)
                        if (hold[ri]) bits.set(si * numR + ri, true);
                break;
            }
            case FeatureKind::Constraint: {
                std::vector<const Value*> sv(numS);
                std::vector<const Value*> rv(numR);
                for (std::size_t si = 0; si < numS; ++si)
                    sv[si] = &ctx.navCached(ds.subjects[si], f.constraint.subjectPath);
                for (std::size_t ri = 0; ri < numR; ++ri)
                    rv[ri] = &ctx.navCached(ds.resources[ri], f.constraint.resourcePath);
                for (std::size_t si = 0; si < numS; ++si)
                    for (std::size_t ri = 0; ri < numR; ++ri)
                        if (constraintRelationHolds(*sv[si], *rv[ri], f.constraint))
                            bits.set(si * numR + ri, true);
                break;
            }
        }
        ds.featureBits.push_back(std::move(bits));
    }
    return ds;
}

namespace {

LabeledDataset project(LabeledDataset ds, const std::vector<std::size_t>& keep) {
    LabeledDataset out;
    out.triple = std::move(ds.triple);
    out.subjects = std::move(ds.subjects);
    out.resources = std::move(ds.resources);
    out.labels = std::move(ds.labels);
    out.features.reserve(keep.size());
    out.featureBits.reserve(keep.size());
    for (std::size_t idx : keep) {
        out.features.push_back(std::move(ds.features[idx]));
        out.featureBits.push_back(std::move(ds.featureBits[idx]));
    }
    return out;
}

} // namespace

LabeledDataset dropConstantFeatures(LabeledDataset ds) {
    const std::size_t n = ds.numVectors();
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < ds.features.size(); ++i) {
        const std::size_t c = ds.featureBits[i].count();
        if (c != 0 && c != n) keep.push_back(i);
    }
    if (keep.size() == ds.features.size()) return ds;
    return project(std::move(ds), keep);
}

LabeledDataset collapseEquivalentFeatures(LabeledDataset ds) {
    if (!ds.labels.any()) return ds; // no positive evidence to key on
    std::vector<std::size_t> keep;
    // bucket by hash of the label-masked bit pattern, verify within buckets
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> buckets;
    std::vector<BitVec> masked(ds.features.size());
    auto hashOf = [](const BitVec& bv) {
        std::uint64_t h = 1469598103934665603ull;
        for (std::size_t i = 0; i < bv.size(); i += 64) {
            std::uint64_t w = 0;
            for (std::size_t j = i; j < std::min(bv.size(), i + 64); ++j)
                if (bv.get(j)) w |= std::uint64_t{1} << (j - i);
            h = (h ^ w) * 1099511628211ull;
        }
        return h;
    };
    for (std::size_t i = 0; i < ds.features.size(); ++i) {
        masked[i] = ds.featureBits[i] & ds.labels;
        // Features false on every positive enter rules only negated; they are
        // not interchangeable, and collapsing them routinely leaves negatives
        // inseparable. Keep them all.
        if (!masked[i].any()) {
            keep.push_back(i);
            continue;
        }
        const std::uint64_t h = hashOf(masked[i]);
        auto& bucket = buckets[h];
        bool duplicate = false;
        for (std::size_t prev : bucket) {
            if (masked[prev] == masked[i]) { // catalog order keeps the lowest-WSC one
                duplicate = true;
                break;
            }
        }
        if (!duplicate) {
            bucket.push_back(i);
            keep.push_back(i);
        }
    }
    if (keep.size() == ds.features.size()) return ds;
    return project(std::move(ds), keep);
}

} // namespace rebac
