#include "rebac/features.hpp"

#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>

using namespace rebac;
using namespace rebac::testing;

TEST_CASE("enumerateTriples") {
    ClassModel cm;
    cm.addClass("Nurse", {});
    cm.addClass("HR", {});
    ObjectModel om;
    om.addObject({"n1", "Nurse", {}});
    om.addObject({"n2", "Nurse", {}});
    om.addObject({"hr1", "HR", {}});
    om.addObject({"hr2", "HR", {}});
    om.seal();

    SUBCASE("single tuple") {
        const AuthorizationSet au({{"n1", "hr1", "read"}});
        const auto triples = enumerateTriples(au, om);
        REQUIRE(triples.size() == 1);
        CHECK(triples[0] == TripleKey{"Nurse", "HR", "read"});
    }
    SUBCASE("two nurses reading yields one triple") {
        const AuthorizationSet au({{"n1", "hr1", "read"}, {"n2", "hr2", "read"}});
        CHECK(enumerateTriples(au, om).size() == 1);
    }
    SUBCASE("count matches a brute-force dedup") {
        const AuthorizationSet au({{"n1", "hr1", "read"},
                                   {"n2", "hr1", "write"},
                                   {"hr1", "n1", "read"},
                                   {"n1", "hr2", "read"}});
        std::set<TripleKey> expected;
        for (const auto& t : au.tuples())
            expected.insert({om.object(t.subject).type, om.object(t.resource).type, t.action});
        const auto triples = enumerateTriples(au, om);
        CHECK(triples.size() == expected.size());
        CHECK(std::is_sorted(triples.begin(), triples.end()));
    }
}

TEST_CASE("generateFeatures") {
    SUBCASE("Boolean field appears as a value-test feature") {
        const ToyInstance t = emrToy();
        const auto features =
            generateFeatures(t.cm, t.om, "Physician", "MedicalRecord", FeatureLimits{});
        const bool hasTraineeFalse = std::any_of(
            features.begin(), features.end(), [](const Feature& f) {
                return f.kind == FeatureKind::SubjectCondition &&
                       f.condition.path == std::vector<std::string>{"isTrainee"} &&
                       f.condition.vals == std::vector<Atomic>{Atomic{false}};
            });
        const bool hasTraineeTrue = std::any_of(
            features.begin(), features.end(), [](const Feature& f) {
                return f.kind == FeatureKind::SubjectCondition &&
                       f.condition.vals == std::vector<Atomic>{Atomic{true}};
            });
        CHECK(hasTraineeFalse);
        CHECK(hasTraineeTrue);
    }
    SUBCASE("zero subject path budget removes subject conditions") {
        const ToyInstance t = emrToy();
        FeatureLimits limits;
        limits.maxSubjectPathLen = 0;
        const auto features =
            generateFeatures(t.cm, t.om, "Physician", "MedicalRecord", limits);
        CHECK(std::none_of(features.begin(), features.end(), [](const Feature& f) {
            return f.kind == FeatureKind::SubjectCondition;
        }));
    }
    SUBCASE("constraint catalog matches a hand enumeration") {
        // S.d: one->D, R.d: one->D, R.ds: many->D. Type-matched pairs:
        //   [d] equal [d], [d] in [ds] -- and nothing else.
        ClassModel cm;
        cm.addClass("D", {});
        cm.addClass("S", {{"d", "D", Multiplicity::One}});
        cm.addClass("R", {{"d", "D", Multiplicity::One}, {"ds", "D", Multiplicity::Many}});
        ObjectModel om;
        om.addObject({"x1", "D", {}});
        om.addObject({"s1", "S", {{"d", one("x1")}}});
        om.addObject({"r1", "R", {{"d", one("x1")}, {"ds", many({"x1"})}}});
        om.seal();
        om.validate(cm);

        const auto features = generateFeatures(cm, om, "S", "R", FeatureLimits{});
        std::vector<AtomicConstraint> constraints;
        for (const auto& f : features)
            if (f.kind == FeatureKind::Constraint) constraints.push_back(f.constraint);
        REQUIRE(constraints.size() == 2);
        CHECK(constraints[0] == makeConstraint(cm, "S", {"d"}, "R", {"d"}));
        CHECK(constraints[1] == makeConstraint(cm, "S", {"d"}, "R", {"ds"}));
    }
    SUBCASE("id-terminated paths are not enumerated") {
        const ToyInstance t = deptToy();
        const auto features =
            generateFeatures(t.cm, t.om, "Employee", "Document", FeatureLimits{});
        for (const auto& f : features) {
            if (f.kind == FeatureKind::Constraint) {
                CHECK((f.constraint.subjectPath.empty() ||
                       f.constraint.subjectPath.back() != kIdField));
            } else {
                CHECK(f.condition.path.back() != kIdField);
            }
        }
    }
    SUBCASE("deterministic order by wsc") {
        const ToyInstance t = edocToy();
        const auto a = generateFeatures(t.cm, t.om, "Employee", "Document", FeatureLimits{});
        const auto b = generateFeatures(t.cm, t.om, "Employee", "Document", FeatureLimits{});
        CHECK(a == b);
        CHECK(std::is_sorted(a.begin(), a.end(), [](const Feature& x, const Feature& y) {
            return x.wsc < y.wsc;
        }));
    }
}

namespace {

LabeledDataset emrDataset() {
    const ToyInstance t = emrToy(); // datasets are self-contained copies
    EvalContext ctx(t.cm, t.om);
    const auto features =
        generateFeatures(t.cm, t.om, "Physician", "MedicalRecord", FeatureLimits{});
    return buildDataset(ctx, t.au, {"Physician", "MedicalRecord", "read"}, features);
}

} // namespace

TEST_CASE("buildDataset") {
    const ToyInstance t = emrToy();
    EvalContext ctx(t.cm, t.om);
    const auto features =
        generateFeatures(t.cm, t.om, "Physician", "MedicalRecord", FeatureLimits{});

    SUBCASE("vector count is the full cross product") {
        const auto ds = buildDataset(ctx, t.au, {"Physician", "MedicalRecord", "read"},
                                     features);
        CHECK(ds.numVectors() == 4 * 6);
    }
    SUBCASE("labels follow AU membership") {
        const auto ds = buildDataset(ctx, t.au, {"Physician", "MedicalRecord", "read"},
                                     features);
        for (std::size_t v = 0; v < ds.numVectors(); ++v) {
            const bool inAu =
                t.au.contains({ds.subjectOf(v), ds.resourceOf(v), "read"});
            CHECK(ds.labels.get(v) == inAu);
        }
    }
    SUBCASE("empty AU labels everything false") {
        const AuthorizationSet empty;
        const auto ds = buildDataset(ctx, empty, {"Physician", "MedicalRecord", "read"},
                                     features);
        CHECK(ds.labels.count() == 0);
    }
}

TEST_CASE("dropConstantFeatures") {
    LabeledDataset ds = emrDataset();
    const std::size_t n = ds.numVectors();

    // plant one all-true and one all-false column
    Feature allTrue;
    allTrue.kind = FeatureKind::SubjectCondition;
    allTrue.condition.path = {"planted_true"};
    allTrue.wsc = 99;
    ds.features.push_back(allTrue);
    ds.featureBits.emplace_back(n, true);
    Feature allFalse = allTrue;
    allFalse.condition.path = {"planted_false"};
    ds.features.push_back(allFalse);
    ds.featureBits.emplace_back(n, false);

    const auto reduced = dropConstantFeatures(ds);
    // survivors equal a brute-force column scan
    std::vector<Feature> expected;
    for (std::size_t i = 0; i < ds.features.size(); ++i) {
        const std::size_t c = ds.featureBits[i].count();
        if (c != 0 && c != n) expected.push_back(ds.features[i]);
    }
    CHECK(reduced.features == expected);

    SUBCASE("idempotent") {
        const auto twice = dropConstantFeatures(reduced);
        CHECK(twice.features == reduced.features);
    }
}

TEST_CASE("collapseEquivalentFeatures") {
    SUBCASE("keeps the lowest-wsc representative per positive pattern") {
        LabeledDataset ds;
        ds.triple = {"S", "R", "a"};
        ds.subjects = {"s1", "s2", "s3", "s4"};
        ds.resources = {"r1"};
        ds.labels = BitVec(4);
        ds.labels.set(0, true);
        ds.labels.set(1, true);
        auto addFeature = [&](std::vector<bool> bits, std::size_t wsc, const char* name) {
            Feature f;
            f.kind = FeatureKind::SubjectCondition;
            f.condition.path = {name};
            f.condition.op = CondOp::In;
            f.condition.vals = {Atomic{true}};
            f.wsc = wsc;
            BitVec bv(bits.size());
            for (std::size_t i = 0; i < bits.size(); ++i) bv.set(i, bits[i]);
            ds.features.push_back(f);
            ds.featureBits.push_back(bv);
        };
        // catalog order is ascending wsc; f_cheap and f_dear agree on the two
        // positive vectors and differ on a negative one
        addFeature({true, true, false, false}, 2, "f_cheap");
        addFeature({true, true, true, false}, 3, "f_dear");
        addFeature({true, false, false, true}, 2, "f_other");

        const auto reduced = collapseEquivalentFeatures(ds);
        REQUIRE(reduced.features.size() == 2);
        CHECK(reduced.features[0].condition.path == std::vector<std::string>{"f_cheap"});
        CHECK(reduced.features[1].condition.path == std::vector<std::string>{"f_other"});

        const auto twice = collapseEquivalentFeatures(reduced);
        CHECK(twice.features == reduced.features); // idempotent

        // all-false-on-positives features are exempt from collapsing
        auto withNegOnly = ds;
        auto addNegFeature = [&](std::vector<bool> bits, const char* name) {
            Feature f;
            f.kind = FeatureKind::SubjectCondition;
            f.condition.path = {name};
            f.condition.op = CondOp::In;
            f.condition.vals = {Atomic{true}};
            f.wsc = 2;
            BitVec bv(bits.size());
            for (std::size_t i = 0; i < bits.size(); ++i) bv.set(i, bits[i]);
            withNegOnly.features.push_back(f);
            withNegOnly.featureBits.push_back(bv);
        };
        addNegFeature({false, false, true, false}, "n1");
        addNegFeature({false, false, false, true}, "n2");
        const auto kept = collapseEquivalentFeatures(withNegOnly);
        CHECK(kept.features.size() == 4); // both negative-only features survive
    }
    SUBCASE("single feature unchanged") {
        LabeledDataset ds = emrDataset();
        ds = dropConstantFeatures(ds);
        const auto once = collapseEquivalentFeatures(ds);
        const auto twice = collapseEquivalentFeatures(once);
        CHECK(once.features == twice.features);
    }
    SUBCASE("no positive vectors: unchanged") {
        LabeledDataset ds = emrDataset();
        ds.labels = BitVec(ds.numVectors());
        const auto out = collapseEquivalentFeatures(ds);
        CHECK(out.features.size() == ds.features.size());
    }
    SUBCASE("reductions never relabel a vector") {
        LabeledDataset ds = emrDataset();
        const BitVec before = ds.labels;
        ds = dropConstantFeatures(std::move(ds));
        ds = collapseEquivalentFeatures(std::move(ds));
        CHECK(ds.labels == before);
    }
}

TEST_CASE("reductions preserve separability on the toy instances") {
    auto separable = [](const LabeledDataset& ds) {
        for (std::size_t a = 0; a < ds.numVectors(); ++a) {
            for (std::size_t b = a + 1; b < ds.numVectors(); ++b) {
                if (ds.labels.get(a) == ds.labels.get(b)) continue;
                bool differ = false;
                for (std::size_t f = 0; f < ds.features.size() && !differ; ++f)
                    differ = ds.bit(f, a) != ds.bit(f, b);
                if (!differ) return false;
            }
        }
        return true;
    };
    for (const auto& toy : {emrToy(), edocToy(), deptToy()}) {
        EvalContext ctx(toy.cm, toy.om);
        for (const auto& triple : enumerateTriples(toy.au, toy.om)) {
            auto features = generateFeatures(toy.cm, toy.om, triple.subjectType,
                                             triple.resourceType, FeatureLimits{});
            LabeledDataset ds = buildDataset(ctx, toy.au, triple, std::move(features));
            REQUIRE(separable(ds));
            ds = dropConstantFeatures(std::move(ds));
            ds = collapseEquivalentFeatures(std::move(ds));
            CHECK(separable(ds));
        }
    }
}
