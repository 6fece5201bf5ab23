#include "rebac/error.hpp"
#include "rebac/tree.hpp"

#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

using namespace rebac;
using namespace rebac::testing;

namespace {

struct RawDataset {
    std::vector<BitVec> bits;
    std::vector<std::size_t> wsc;
    BitVec labels;

    DatasetView view() const {
        DatasetView v;
        v.numVectors = labels.size();
        v.featureBits = bits;
        v.featureWsc = wsc;
        v.labels = &labels;
        return v;
    }
};

RawDataset fromRows(const std::vector<std::vector<int>>& rows,
                    const std::vector<int>& labels, std::vector<std::size_t> wsc = {}) {
    RawDataset ds;
    const std::size_t n = rows.size();
    const std::size_t f = rows.empty() ? 0 : rows[0].size();
    ds.labels = BitVec(n);
    for (std::size_t i = 0; i < n; ++i) ds.labels.set(i, labels[i] != 0);
    for (std::size_t j = 0; j < f; ++j) {
        BitVec col(n);
        for (std::size_t i = 0; i < n; ++i) col.set(i, rows[i][j] != 0);
        ds.bits.push_back(std::move(col));
    }
    ds.wsc = wsc.empty() ? std::vector<std::size_t>(f, 1) : std::move(wsc);
    return ds;
}

/// Random separable dataset: identical bit rows are forced to share a label.
RawDataset randomSeparable(TestRng& rng, std::size_t maxFeatures = 12,
                           std::size_t maxVectors = 64) {
    const std::size_t f = 1 + rng.below(maxFeatures);
    const std::size_t n = 2 + rng.below(maxVectors - 1);
    std::vector<std::vector<int>> rows(n, std::vector<int>(f));
    std::vector<int> labels(n);
    std::map<std::vector<int>, int> seen;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < f; ++j) rows[i][j] = rng.below(2) ? 1 : 0;
        auto it = seen.find(rows[i]);
        if (it != seen.end())
            labels[i] = it->second;
        else
            seen[rows[i]] = labels[i] = rng.below(2) ? 1 : 0;
    }
    std::vector<std::size_t> wsc(f);
    for (auto& w : wsc) w = 1 + rng.below(5);
    return fromRows(rows, labels, wsc);
}

/// Vectors of the view satisfying every literal of a permit path.
std::set<std::size_t> literalCover(const DatasetView& view,
                                   const std::vector<std::pair<std::size_t, bool>>& path) {
    std::set<std::size_t> out;
    for (std::size_t v = 0; v < view.numVectors; ++v) {
        bool ok = true;
        for (const auto& [f, branch] : path)
            if (view.featureBits[f].get(v) != branch) { ok = false; break; }
        if (ok) out.insert(v);
    }
    return out;
}

} // namespace

TEST_CASE("gini impurity") {
    const std::size_t homogeneous[] = {7, 0};
    CHECK(giniImpurity(homogeneous) == doctest::Approx(0.0).epsilon(1e-12));
    const std::size_t even[] = {5, 5};
    CHECK(giniImpurity(even) == doctest::Approx(0.5).epsilon(1e-12));
    const std::size_t skewed[] = {3, 1};
    CHECK(giniImpurity(skewed) == doctest::Approx(0.375).epsilon(1e-12));
    CHECK(giniImpurity(std::vector<std::size_t>{}) == 0.0);
}

TEST_CASE("entropy impurity") {
    const std::size_t homogeneous[] = {4, 0};
    CHECK(entropyImpurity(homogeneous) == doctest::Approx(0.0).epsilon(1e-12));
    const std::size_t even[] = {8, 8};
    CHECK(entropyImpurity(even) == doctest::Approx(1.0).epsilon(1e-12));
    const std::size_t skewed[] = {3, 1};
    const double expected = -(0.75 * std::log2(0.75) + 0.25 * std::log2(0.25));
    CHECK(entropyImpurity(skewed) == doctest::Approx(expected).epsilon(1e-9));
    CHECK(entropyImpurity(skewed) == doctest::Approx(0.8112781244591328).epsilon(1e-9));
}

TEST_CASE("scoreSplit") {
    // f0 separates perfectly; f1 is constant true; f2 partial
    const RawDataset ds = fromRows({{1, 1, 1}, {1, 1, 0}, {0, 1, 1}, {0, 1, 0}},
                                   {1, 1, 0, 0});
    const BitVec all(4, true);

    SUBCASE("perfect separator scores zero") {
        CHECK(scoreSplit(ds.view(), all, 0, Criterion::Gini).impurity ==
              doctest::Approx(0.0));
        CHECK(scoreSplit(ds.view(), all, 0, Criterion::Entropy).impurity ==
              doctest::Approx(0.0));
    }
    SUBCASE("constant feature scores the parent impurity") {
        CHECK(scoreSplit(ds.view(), all, 1, Criterion::Gini).impurity ==
              doctest::Approx(0.5));
        CHECK(scoreSplit(ds.view(), all, 1, Criterion::Entropy).impurity ==
              doctest::Approx(1.0));
    }
    SUBCASE("scores match an exhaustive oracle and the argmin agrees") {
        // six vectors, two candidate features
        const RawDataset toy = fromRows(
            {{1, 0}, {1, 0}, {1, 1}, {0, 1}, {0, 1}, {0, 0}}, {1, 1, 1, 0, 0, 0});
        const BitVec subset(6, true);
        for (std::size_t f = 0; f < 2; ++f) {
            std::size_t n1 = 0, pos1 = 0, n0 = 0, pos0 = 0;
            for (std::size_t v = 0; v < 6; ++v) {
                if (toy.bits[f].get(v)) {
                    ++n1;
                    pos1 += toy.labels.get(v);
                } else {
                    ++n0;
                    pos0 += toy.labels.get(v);
                }
            }
            auto gini = [](std::size_t pos, std::size_t n) {
                if (n == 0) return 0.0;
                const double p = double(pos) / n, q = double(n - pos) / n;
                return 1.0 - p * p - q * q;
            };
            const double oracle =
                (double(n0) / 6) * gini(pos0, n0) + (double(n1) / 6) * gini(pos1, n1);
            CHECK(scoreSplit(toy.view(), subset, f, Criterion::Gini).impurity ==
                  doctest::Approx(oracle).epsilon(1e-12));
        }
        const std::size_t chosen =
            chooseSplit(toy.view(), subset, std::vector<bool>(2, false), Criterion::Gini);
        CHECK(chosen == 0); // feature 0 misclassifies one vector, feature 1 two
    }
}

TEST_CASE("chooseSplit tie-breaking") {
    SUBCASE("unique impurity minimizer wins regardless of wsc") {
        const RawDataset ds =
            fromRows({{1, 1}, {1, 0}, {0, 1}, {0, 0}}, {1, 1, 0, 0}, {9, 1});
        CHECK(chooseSplit(ds.view(), BitVec(4, true), {false, false}, Criterion::Gini) == 0);
    }
    SUBCASE("equal impurity falls back to lower wsc") {
        // both features separate perfectly
        const RawDataset ds =
            fromRows({{1, 1}, {1, 1}, {0, 0}, {0, 0}}, {1, 1, 0, 0}, {4, 2});
        CHECK(chooseSplit(ds.view(), BitVec(4, true), {false, false}, Criterion::Gini) == 1);
        CHECK(chooseSplit(ds.view(), BitVec(4, true), {false, false}, Criterion::Entropy) ==
              1);
    }
    SUBCASE("full tie falls back to the lower feature index") {
        const RawDataset ds =
            fromRows({{1, 1}, {1, 1}, {0, 0}, {0, 0}}, {1, 1, 0, 0}, {3, 3});
        CHECK(chooseSplit(ds.view(), BitVec(4, true), {false, false}, Criterion::Gini) == 0);
    }
    SUBCASE("unseparable subsets are reported with a conflicting pair") {
        const RawDataset ds = fromRows({{1}, {1}}, {1, 0});
        CHECK_THROWS_AS(
            chooseSplit(ds.view(), BitVec(2, true), {false}, Criterion::Gini),
            UnseparableSubset);
    }
}

TEST_CASE("buildTree") {
    SUBCASE("all-positive dataset is a single PERMIT leaf") {
        const RawDataset ds = fromRows({{1}, {0}}, {1, 1});
        const auto tree = buildTree(ds.view(), Criterion::Gini);
        REQUIRE(tree->leaf);
        CHECK(tree->permit);
    }
    SUBCASE("training labels are reproduced exactly") {
        TestRng rng(7);
        for (int i = 0; i < 20; ++i) {
            const RawDataset ds = randomSeparable(rng);
            const auto tree = buildTree(ds.view(), Criterion::Gini);
            for (std::size_t v = 0; v < ds.labels.size(); ++v)
                REQUIRE(classify(*tree, ds.view(), v) == ds.labels.get(v));
        }
    }
    SUBCASE("identical inputs build identical trees") {
        TestRng rngA(11), rngB(11);
        const RawDataset a = randomSeparable(rngA);
        const RawDataset b = randomSeparable(rngB);
        const auto ta = buildTree(a.view(), Criterion::Gini);
        const auto tb = buildTree(b.view(), Criterion::Gini);
        CHECK(permitPaths(*ta) == permitPaths(*tb));
    }
}

TEST_CASE("extraction") {
    SUBCASE("permit-path covers partition the positives") {
        TestRng rng(23);
        for (int i = 0; i < 20; ++i) {
            const RawDataset ds = randomSeparable(rng);
            const auto tree = buildTree(ds.view(), Criterion::Gini);
            std::set<std::size_t> all;
            std::size_t sum = 0;
            for (const auto& path : permitPaths(*tree)) {
                const auto cover = literalCover(ds.view(), path);
                sum += cover.size();
                all.insert(cover.begin(), cover.end());
            }
            REQUIRE(sum == all.size()); // pairwise disjoint
            std::set<std::size_t> positives;
            for (std::size_t v = 0; v < ds.labels.size(); ++v)
                if (ds.labels.get(v)) positives.insert(v);
            REQUIRE(all == positives);
        }
    }
}

TEST_CASE("tree on the medical-records toy") {
    const ToyInstance t = emrToy();
    EvalContext ctx(t.cm, t.om);
    auto features =
        generateFeatures(t.cm, t.om, "Physician", "MedicalRecord", FeatureLimits{});
    LabeledDataset ds =
        buildDataset(ctx, t.au, {"Physician", "MedicalRecord", "read"}, features);
    ds = dropConstantFeatures(std::move(ds));
    ds = collapseEquivalentFeatures(std::move(ds));

    std::vector<std::size_t> wsc;
    const DatasetView view = viewOf(ds, wsc);
    const auto tree = buildTree(view, Criterion::Gini);

    SUBCASE("root splits on the assignment constraint") {
        REQUIRE_FALSE(tree->leaf);
        CHECK(ds.features[tree->featureIndex].kind == FeatureKind::Constraint);
        CHECK(ds.features[tree->featureIndex].constraint ==
              makeConstraint(t.cm, "Physician", {}, "MedicalRecord", {"physician"}));
        // deny side is a leaf, permit side tests the trainee flag
        REQUIRE(tree->falseChild->leaf);
        CHECK_FALSE(tree->falseChild->permit);
        REQUIRE_FALSE(tree->trueChild->leaf);
        const Feature& second = ds.features[tree->trueChild->featureIndex];
        CHECK(second.kind != FeatureKind::Constraint);
        CHECK(second.condition.path == std::vector<std::string>{"isTrainee"});
    }
    SUBCASE("training consistency on the toy") {
        for (std::size_t v = 0; v < view.numVectors; ++v)
            CHECK(classify(*tree, view, v) == ds.labels.get(v));
    }
    SUBCASE("extracted rule meanings are disjoint and cover the positives") {
        const auto rules = extractRules(*tree, ds);
        std::vector<SraTuple> combined;
        std::size_t total = 0;
        for (const auto& r : rules) {
            const auto m = ruleMeaning(t.cm, t.om, r);
            total += m.size();
            combined.insert(combined.end(), m.begin(), m.end());
        }
        std::sort(combined.begin(), combined.end());
        combined.erase(std::unique(combined.begin(), combined.end()), combined.end());
        CHECK(total == combined.size());
        CHECK(combined == t.au.tuples());
    }
    SUBCASE("gini and entropy agree on the extracted meaning") {
        const auto treeE = buildTree(view, Criterion::Entropy);
        const auto rulesG = extractRules(*tree, ds);
        const auto rulesE = extractRules(*treeE, ds);
        CHECK(policyMeaning(t.cm, t.om, rulesG) == policyMeaning(t.cm, t.om, rulesE));
    }
    SUBCASE("single permit leaf extracts an unconditional rule") {
        LabeledDataset trivial;
        trivial.triple = {"Physician", "MedicalRecord", "read"};
        trivial.subjects = {"p1"};
        trivial.resources = {"m1"};
        trivial.labels = BitVec(1, true);
        std::vector<std::size_t> w;
        const auto leaf = buildTree(viewOf(trivial, w), Criterion::Gini);
        const auto rules = extractRules(*leaf, trivial);
        REQUIRE(rules.size() == 1);
        CHECK(rules[0].subjectCondition.empty());
        CHECK(rules[0].resourceCondition.empty());
        CHECK(rules[0].constraint.empty());
        CHECK(rules[0].actions == std::vector<std::string>{"read"});
    }
}

TEST_CASE("impurity comparisons are exact for gini") {
    // mathematically equal scores from different count distributions must tie,
    // letting the wsc tie-break decide
    const RawDataset ds = fromRows(
        {{1, 0}, {1, 0}, {0, 1}, {0, 1}, {1, 0}, {0, 1}, {1, 0}, {0, 1}},
        {1, 1, 0, 0, 1, 0, 0, 1}, {5, 2});
    // both features produce mirrored (3,1)/(1,3) children: identical impurity
    const auto s0 = scoreSplit(ds.view(), BitVec(8, true), 0, Criterion::Gini);
    const auto s1 = scoreSplit(ds.view(), BitVec(8, true), 1, Criterion::Gini);
    CHECK(s0.impurity == doctest::Approx(s1.impurity));
    CHECK(splitBetter(s1, s0)); // same impurity, lower wsc
    CHECK_FALSE(splitBetter(s0, s1));
    CHECK(chooseSplit(ds.view(), BitVec(8, true), {false, false}, Criterion::Gini) == 1);
}
