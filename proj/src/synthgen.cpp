#include "rebac/synthgen.hpp"

#include "rebac/error.hpp"
#include "rebac/eval.hpp"
#include "rebac/json_io.hpp"

#include <algorithm>
#include <filesystem>

namespace rebac {

namespace {

/// splitmix64; self-contained so instances are byte-identical across
/// platforms and standard libraries.
struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        state += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    std::size_t below(std::size_t n) { return n == 0 ? 0 : next() % n; }

    bool chance(std::size_t percent) { return below(100) < percent; }

    template <typename T>
    const T& pick(const std::vector<T>& v) {
        return v[below(v.size())];
    }

    /// Random subset of size [minSize, maxSize], preserving order.
    template <typename T>
    std::vector<T> subset(const std::vector<T>& v, std::size_t minSize,
                          std::size_t maxSize) {
        maxSize = std::min(maxSize, v.size());
        minSize = std::min(minSize, maxSize);
        const std::size_t size = minSize + below(maxSize - minSize + 1);
        std::vector<std::size_t> idx(v.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        for (std::size_t i = idx.size(); i > 1; --i)
            std::swap(idx[i - 1], idx[below(i)]);
        idx.resize(size);
        std::sort(idx.begin(), idx.end());
        std::vector<T> out;
        for (auto i : idx) out.push_back(v[i]);
        return out;
    }
};

constexpr std::size_t kAuxInstances = 3;
constexpr std::size_t kResourceFactor = 5;

const std::vector<std::string> kActionNames{"read",   "write", "edit",   "view",
                                            "assign", "approve", "delete", "audit"};

std::string subjectClassName(std::size_t k) { return "User" + std::to_string(k); }
std::string resourceClassName(std::size_t k) { return "Res" + std::to_string(k); }

} // namespace

GeneratedInstance generate(const GenConfig& cfg) {
    if (cfg.sizeParam < 1 || cfg.numRules < 1 || cfg.maxPathLen < 1)
        throw StructuralError("generator requires N >= 1, M >= 1, and maxPathLen >= 1");
    Rng rng(cfg.seed * 0x9E3779B97F4A7C15ull + 0xD1B54A32D192ED03ull);

    GeneratedInstance inst;
    ClassModel& cm = inst.classModel;

    cm.addClass("Dept", {});
    cm.addClass("Org", {});
    cm.addClass("Skill", {});
    for (std::size_t k = 0; k < cfg.numSubjectClasses; ++k) {
        cm.addClass(subjectClassName(k),
                    {{"dept", "Dept", Multiplicity::One},
                     {"org", "Org", Multiplicity::One},
                     {"office", "Org", Multiplicity::Optional},
                     {"skills", "Skill", Multiplicity::Many},
                     {"isTrainee", "Boolean", Multiplicity::One}});
    }
    for (std::size_t k = 0; k < cfg.numResourceClasses; ++k) {
        const std::string ownerClass = subjectClassName(k % cfg.numSubjectClasses);
        cm.addClass(resourceClassName(k),
                    {{"dept", "Dept", Multiplicity::One},
                     {"depts", "Dept", Multiplicity::Many},
                     {"org", "Org", Multiplicity::One},
                     {"members", ownerClass, Multiplicity::Many},
                     {"topic", "Skill", Multiplicity::One},
                     {"isPublic", "Boolean", Multiplicity::One}});
    }
    cm.validate();

    ObjectModel& om = inst.objectModel;
    std::vector<std::string> depts, orgs, skills;
    for (std::size_t i = 0; i < kAuxInstances; ++i) {
        depts.push_back("dept" + std::to_string(i));
        orgs.push_back("org" + std::to_string(i));
        skills.push_back("skill" + std::to_string(i));
        om.addObject({depts.back(), "Dept", {}});
        om.addObject({orgs.back(), "Org", {}});
        om.addObject({skills.back(), "Skill", {}});
    }

    auto atomSet = [](const std::vector<std::string>& ids) {
        std::vector<Atomic> atoms;
        for (const auto& s : ids) atoms.emplace_back(s);
        return Value::set(std::move(atoms));
    };

    std::vector<std::vector<std::string>> subjectIds(cfg.numSubjectClasses);
    for (std::size_t k = 0; k < cfg.numSubjectClasses; ++k) {
        for (std::size_t i = 0; i < cfg.sizeParam; ++i) {
            const std::string id = "u" + std::to_string(k) + "_" + std::to_string(i);
            subjectIds[k].push_back(id);
        }
    }
    for (std::size_t k = 0; k < cfg.numSubjectClasses; ++k) {
        for (std::size_t i = 0; i < cfg.sizeParam; ++i) {
            Object o;
            o.id = subjectIds[k][i];
            o.type = subjectClassName(k);
            o.fields["dept"] = Value::single(Atomic{rng.pick(depts)});
            o.fields["org"] = Value::single(Atomic{rng.pick(orgs)});
            o.fields["skills"] = atomSet(rng.subset(skills, 0, 3));
            if (rng.chance(50))
                o.fields["office"] = Value::single(Atomic{rng.pick(orgs)});
            o.fields["isTrainee"] = Value::single(Atomic{rng.chance(30)});
            om.addObject(std::move(o));
        }
    }
    for (std::size_t k = 0; k < cfg.numResourceClasses; ++k) {
        const auto& owners = subjectIds[k % cfg.numSubjectClasses];
        for (std::size_t i = 0; i < kResourceFactor * cfg.sizeParam; ++i) {
            Object o;
            o.id = "r" + std::to_string(k) + "_" + std::to_string(i);
            o.type = resourceClassName(k);
            o.fields["dept"] = Value::single(Atomic{rng.pick(depts)});
            o.fields["depts"] = atomSet(rng.subset(depts, 1, 2));
            o.fields["org"] = Value::single(Atomic{rng.pick(orgs)});
            o.fields["members"] = atomSet(rng.subset(owners, 0, std::min<std::size_t>(3, owners.size())));
            o.fields["topic"] = Value::single(Atomic{rng.pick(skills)});
            o.fields["isPublic"] = Value::single(Atomic{rng.chance(50)});
            om.addObject(std::move(o));
        }
    }
    om.seal();
    om.validate(cm);

    const std::size_t numActions =
        std::min(kActionNames.size(), std::max<std::size_t>(2, (cfg.numRules + 1) / 2));
    inst.actions.assign(kActionNames.begin(),
                        kActionNames.begin() + static_cast<std::ptrdiff_t>(numActions));
    std::sort(inst.actions.begin(), inst.actions.end());

    auto atomVec = [&rng](const std::vector<std::string>& ids, std::size_t minSize,
                          std::size_t maxSize) {
        std::vector<Atomic> atoms;
        for (const auto& s : rng.subset(ids, minSize, maxSize)) atoms.emplace_back(s);
        return atoms;
    };

    EvalContext ctx(cm, om);
    for (std::size_t m = 0; m < cfg.numRules; ++m) {
        bool accepted = false;
        for (std::size_t attempt = 0; attempt < 60 && !accepted; ++attempt) {
            const std::size_t sk = rng.below(cfg.numSubjectClasses);
            const std::size_t rk = rng.below(cfg.numResourceClasses);
            Rule rule;
            rule.subjectType = subjectClassName(sk);
            rule.resourceType = resourceClassName(rk);
            const std::size_t numAtoms = 1 + rng.below(2);
            for (std::size_t a = 0; a < numAtoms; ++a) {
                const std::size_t wide = rng.chance(25) ? 2 : 1;
                const std::size_t grammarArms = cfg.maxPathLen >= 2 ? 11 : 10;
                switch (rng.below(grammarArms)) {
                    case 0:
                        rule.subjectCondition.push_back(makeCondition(
                            cm, rule.subjectType, {"dept"}, atomVec(depts, wide, wide)));
                        break;
                    case 1:
                        rule.subjectCondition.push_back(makeCondition(
                            cm, rule.subjectType, {"org"}, atomVec(orgs, wide, wide)));
                        break;
                    case 2:
                        rule.subjectCondition.push_back(
                            makeCondition(cm, rule.subjectType, {"skills"},
                                          {Atomic{rng.pick(skills)}}));
                        break;
                    case 3:
                        rule.subjectCondition.push_back(makeCondition(
                            cm, rule.subjectType, {"isTrainee"}, {Atomic{false}}));
                        break;
                    case 4:
                        rule.resourceCondition.push_back(makeCondition(
                            cm, rule.resourceType, {"dept"}, atomVec(depts, wide, wide)));
                        break;
                    case 5:
                        rule.resourceCondition.push_back(makeCondition(
                            cm, rule.resourceType, {"isPublic"}, {Atomic{false}}));
                        break;
                    case 6:
                        rule.constraint.push_back(makeConstraint(
                            cm, rule.subjectType, {"dept"}, rule.resourceType, {"dept"}));
                        break;
                    case 7:
                        rule.constraint.push_back(makeConstraint(
                            cm, rule.subjectType, {"dept"}, rule.resourceType, {"depts"}));
                        break;
                    case 8:
                        rule.constraint.push_back(makeConstraint(
                            cm, rule.subjectType, {"skills"}, rule.resourceType, {"topic"}));
                        break;
                    case 9:
                        if (sk == rk % cfg.numSubjectClasses) {
                            rule.constraint.push_back(makeConstraint(
                                cm, rule.subjectType, {}, rule.resourceType, {"members"}));
                        } else {
                            rule.constraint.push_back(makeConstraint(
                                cm, rule.subjectType, {"org"}, rule.resourceType, {"org"}));
                        }
                        break;
                    case 10: // two-step path; only sampled when maxPathLen allows
                        rule.resourceCondition.push_back(
                            makeCondition(cm, rule.resourceType, {"members", "dept"},
                                          {Atomic{rng.pick(depts)}}));
                        break;
                }
            }
            const std::size_t numRuleActions = 1 + rng.below(2);
            for (std::size_t a = 0; a < numRuleActions; ++a)
                rule.actions.push_back(rng.pick(inst.actions));
            rule.canonicalize();
            if (std::find(inst.rules.begin(), inst.rules.end(), rule) != inst.rules.end())
                continue;
            if (ctx.rulePairs(rule).empty()) continue; // dead rule, resample
            inst.rules.push_back(std::move(rule));
            accepted = true;
        }
        if (!accepted)
            throw StructuralError("could not sample a non-vacuous rule after 60 attempts");
    }

    inst.au = AuthorizationSet(policyMeaning(cm, om, inst.rules));
    return inst;
}

void emitInstance(const GeneratedInstance& inst, const std::string& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ParseError("cannot create directory " + dir + ": " + ec.message());
    writeFile(dir + "/classmodel.json", classModelToJson(inst.classModel));
    writeFile(dir + "/objectmodel.json", objectModelToJson(inst.objectModel));
    writeFile(dir + "/acl.json", aclToJson(inst.actions, inst.au));
    writeFile(dir + "/reference_policy.json", policyRulesToJson(inst.rules));
}

} // namespace rebac
