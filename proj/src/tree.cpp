#include "rebac/tree.hpp"

#include "rebac/error.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

namespace rebac {

std::string criterionToString(Criterion c) {
    return c == Criterion::Gini ? "gini" : "entropy";
}

std::optional<Criterion> criterionFromString(const std::string& s) {
    if (s == "gini") return Criterion::Gini;
    if (s == "entropy") return Criterion::Entropy;
    return std::nullopt;
}

DatasetView viewOf(const LabeledDataset& ds, std::vector<std::size_t>& wscScratch) {
    wscScratch.clear();
    wscScratch.reserve(ds.features.size());
    for (const auto& f : ds.features) wscScratch.push_back(f.wsc);
    DatasetView view;
    view.numVectors = ds.numVectors();
    view.featureBits = ds.featureBits;
    view.featureWsc = wscScratch;
    view.labels = &ds.labels;
    return view;
}

double giniImpurity(std::span<const std::size_t> counts) {
    std::size_t total = 0;
    for (auto c : counts) total += c;
    if (total == 0) return 0.0;
    double sumSq = 0.0;
    for (auto c : counts) {
        const double p = static_cast<double>(c) / static_cast<double>(total);
        sumSq += p * p;
    }
    return 1.0 - sumSq;
}

double entropyImpurity(std::span<const std::size_t> counts) {
    std::size_t total = 0;
    for (auto c : counts) total += c;
    if (total == 0) return 0.0;
    double h = 0.0;
    for (auto c : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / static_cast<double>(total);
        h -= p * std::log2(p);
    }
    return h;
}

namespace {

long double entropyTerm(std::size_t pos, std::size_t neg) {
    const std::size_t counts[2] = {pos, neg};
    // long double mirror of entropyImpurity for ordering precision
    const long double total = static_cast<long double>(pos + neg);
    if (total == 0) return 0.0L;
    long double h = 0.0L;
    for (auto c : counts) {
        if (c == 0) continue;
        const long double p = static_cast<long double>(c) / total;
        h -= p * std::log2(p);
    }
    return h;
}

/// Rational value of a0/n0 + a1/n1 with zero-size children contributing 0.
void rationalOf(const SplitScore& s, long long& num, long long& den) {
    if (s.n0 == 0) {
        num = s.a1;
        den = s.n1;
    } else if (s.n1 == 0) {
        num = s.a0;
        den = s.n0;
    } else {
        num = s.a0 * s.n1 + s.a1 * s.n0;
        den = s.n0 * s.n1;
    }
    if (den == 0) den = 1; // empty subset; value is 0 either way
}

} // namespace

bool splitBetter(const SplitScore& lhs, const SplitScore& rhs) {
    int cmp = 0;
    if (lhs.exact && rhs.exact) {
        long long ln, ld, rn, rd;
        rationalOf(lhs, ln, ld);
        rationalOf(rhs, rn, rd);
        const __int128 a = static_cast<__int128>(ln) * rd;
        const __int128 b = static_cast<__int128>(rn) * ld;
        cmp = a < b ? -1 : (a > b ? 1 : 0);
    } else {
        cmp = lhs.approx < rhs.approx ? -1 : (lhs.approx > rhs.approx ? 1 : 0);
    }
    if (cmp != 0) return cmp < 0;
    if (lhs.featureWsc != rhs.featureWsc) return lhs.featureWsc < rhs.featureWsc;
    return lhs.featureIndex < rhs.featureIndex;
}

SplitScore scoreSplit(const DatasetView& view, const BitVec& subset,
                      std::size_t featureIndex, Criterion criterion) {
    const BitVec& bits = view.featureBits[featureIndex];
    const std::size_t n = subset.count();
    const std::size_t n1 = subset.countAnd(bits);
    const std::size_t n0 = n - n1;
    const std::size_t pos1 = subset.countAnd(bits, *view.labels);
    const std::size_t posTotal = subset.countAnd(*view.labels);
    const std::size_t pos0 = posTotal - pos1;
    const std::size_t neg1 = n1 - pos1;
    const std::size_t neg0 = n0 - pos0;

    SplitScore s;
    s.featureIndex = featureIndex;
    s.featureWsc = view.featureWsc[featureIndex];

    auto weighted = [&](double child0, double child1) {
        if (n == 0) return 0.0;
        return (static_cast<double>(n0) * child0 + static_cast<double>(n1) * child1) /
               static_cast<double>(n);
    };

    if (criterion == Criterion::Gini) {
        s.exact = true;
        s.n0 = static_cast<long long>(n0);
        s.n1 = static_cast<long long>(n1);
        s.a0 = static_cast<long long>(n0) * static_cast<long long>(n0) -
               static_cast<long long>(pos0) * static_cast<long long>(pos0) -
               static_cast<long long>(neg0) * static_cast<long long>(neg0);
        s.a1 = static_cast<long long>(n1) * static_cast<long long>(n1) -
               static_cast<long long>(pos1) * static_cast<long long>(pos1) -
               static_cast<long long>(neg1) * static_cast<long long>(neg1);
        const std::size_t c0[2] = {pos0, neg0};
        const std::size_t c1[2] = {pos1, neg1};
        s.impurity = weighted(giniImpurity(c0), giniImpurity(c1));
    } else {
        s.exact = false;
        const long double w0 = n == 0 ? 0.0L : static_cast<long double>(n0) / n;
        const long double w1 = n == 0 ? 0.0L : static_cast<long double>(n1) / n;
        s.approx = w0 * entropyTerm(pos0, neg0) + w1 * entropyTerm(pos1, neg1);
        s.impurity = static_cast<double>(s.approx);
    }
    return s;
}

std::size_t chooseSplit(const DatasetView& view, const BitVec& subset,
                        const std::vector<bool>& used, Criterion criterion) {
    const std::size_t size = subset.count();
    bool haveBest = false;
    SplitScore best;
    for (std::size_t f = 0; f < view.featureBits.size(); ++f) {
        if (used[f]) continue;
        const std::size_t n1 = subset.countAnd(view.featureBits[f]);
        if (n1 == 0 || n1 == size) continue; // does not separate this subset
        SplitScore s = scoreSplit(view, subset, f, criterion);
        if (!haveBest || splitBetter(s, best)) {
            best = s;
            haveBest = true;
        }
    }
    if (!haveBest) {
        // every remaining feature is constant here: report a conflicting pair
        std::size_t firstPos = subset.size(), firstNeg = subset.size();
        for (std::size_t i = 0; i < subset.size(); ++i) {
            if (!subset.get(i)) continue;
            if (view.labels->get(i)) {
                if (firstPos == subset.size()) firstPos = i;
            } else if (firstNeg == subset.size()) {
                firstNeg = i;
            }
            if (firstPos != subset.size() && firstNeg != subset.size()) break;
        }
        throw UnseparableSubset(
            "no remaining feature separates a label-mixed subset; "
            "feature limits are too tight (vectors " +
                std::to_string(firstPos) + " and " + std::to_string(firstNeg) + ")",
            firstPos, firstNeg);
    }
    return best.featureIndex;
}

namespace {

std::unique_ptr<TreeNode> buildSubtree(const DatasetView& view, const BitVec& subset,
                                       std::vector<bool>& used, Criterion criterion) {
    const std::size_t size = subset.count();
    const std::size_t pos = subset.countAnd(*view.labels);
    if (pos == 0 || pos == size) {
        auto leaf = std::make_unique<TreeNode>();
        leaf->leaf = true;
        leaf->permit = pos != 0;
        return leaf;
    }
    const std::size_t f = chooseSplit(view, subset, used, criterion);
    auto node = std::make_unique<TreeNode>();
    node->featureIndex = f;
    used[f] = true;
    node->falseChild = buildSubtree(view, subset.andNot(view.featureBits[f]), used, criterion);
    node->trueChild = buildSubtree(view, subset & view.featureBits[f], used, criterion);
    used[f] = false;
    return node;
}

} // namespace

std::unique_ptr<TreeNode> buildTree(const DatasetView& view, Criterion criterion) {
    BitVec all(view.numVectors, true);
    std::vector<bool> used(view.featureBits.size(), false);
    return buildSubtree(view, all, used, criterion);
}

bool classify(const TreeNode& root, const DatasetView& view, std::size_t vectorIndex) {
    const TreeNode* node = &root;
    while (!node->leaf) {
        node = view.featureBits[node->featureIndex].get(vectorIndex) ? node->trueChild.get()
                                                                     : node->falseChild.get();
    }
    return node->permit;
}

namespace {

void collectPermitPaths(const TreeNode& node,
                        std::vector<std::pair<std::size_t, bool>>& prefix,
                        std::vector<std::vector<std::pair<std::size_t, bool>>>& out) {
    if (node.leaf) {
        if (node.permit) out.push_back(prefix);
        return;
    }
    prefix.emplace_back(node.featureIndex, false);
    collectPermitPaths(*node.falseChild, prefix, out);
    prefix.back().second = true;
    collectPermitPaths(*node.trueChild, prefix, out);
    prefix.pop_back();
}

} // namespace

std::vector<std::vector<std::pair<std::size_t, bool>>> permitPaths(const TreeNode& root) {
    std::vector<std::vector<std::pair<std::size_t, bool>>> out;
    std::vector<std::pair<std::size_t, bool>> prefix;
    collectPermitPaths(root, prefix, out);
    return out;
}

std::vector<Rule> extractRules(const TreeNode& root, const LabeledDataset& ds) {
    std::vector<Rule> rules;
    for (const auto& path : permitPaths(root)) {
        Rule r;
        r.subjectType = ds.triple.subjectType;
        r.resourceType = ds.triple.resourceType;
        r.actions = {ds.triple.action};
        for (const auto& [fi, branch] : path) {
            const Feature& f = ds.features[fi];
            switch (f.kind) {
                case FeatureKind::SubjectCondition: {
                    AtomicCondition c = f.condition;
                    c.negated = !branch;
                    r.subjectCondition.push_back(std::move(c));
                    break;
                }
                case FeatureKind::ResourceCondition: {
                    AtomicCondition c = f.condition;
                    c.negated = !branch;
                    r.resourceCondition.push_back(std::move(c));
                    break;
                }
                case FeatureKind::Constraint: {
                    AtomicConstraint c = f.constraint;
                    c.negated = !branch;
                    r.constraint.push_back(std::move(c));
                    break;
                }
            }
        }
        r.canonicalize();
        rules.push_back(std::move(r));
    }
    return rules;
}

namespace {

void dumpTextNode(std::ostream& os, const TreeNode& node, const LabeledDataset& ds,
                  std::size_t depth) {
    const std::string indent(depth * 2, ' ');
    if (node.leaf) {
        os << indent << (node.permit ? "PERMIT" : "DENY") << "\n";
        return;
    }
    os << indent << "[" << describe(ds.features[node.featureIndex]) << "]\n";
    os << indent << "false:\n";
    dumpTextNode(os, *node.falseChild, ds, depth + 1);
    os << indent << "true:\n";
    dumpTextNode(os, *node.trueChild, ds, depth + 1);
}

std::size_t dumpDotNode(std::ostream& os, const TreeNode& node, const LabeledDataset& ds,
                        std::size_t& nextId) {
    const std::size_t id = nextId++;
    if (node.leaf) {
        os << "  n" << id << " [shape=box, style=filled, fillcolor=\""
           << (node.permit ? "#c8e6c9" : "#ffcdd2") << "\", label=\""
           << (node.permit ? "PERMIT" : "DENY") << "\"];\n";
        return id;
    }
    std::string label = describe(ds.features[node.featureIndex]);
    std::string escaped;
    for (char c : label) {
        if (c == '"' || c == '\\') escaped += '\\';
        escaped += c;
    }
    os << "  n" << id << " [shape=box, label=\"" << escaped << "\"];\n";
    const std::size_t f = dumpDotNode(os, *node.falseChild, ds, nextId);
    const std::size_t t = dumpDotNode(os, *node.trueChild, ds, nextId);
    os << "  n" << id << " -> n" << f << " [label=\"false\"];\n";
    os << "  n" << id << " -> n" << t << " [label=\"true\"];\n";
    return id;
}

} // namespace

void dumpTreeText(std::ostream& os, const TreeNode& root, const LabeledDataset& ds) {
    os << ds.triple.subjectType << " x " << ds.triple.resourceType << " : "
       << ds.triple.action << "\n";
    dumpTextNode(os, root, ds, 0);
}

void dumpTreeDot(std::ostream& os, const TreeNode& root, const LabeledDataset& ds) {
    os << "digraph decision_tree {\n";
    std::size_t nextId = 0;
    dumpDotNode(os, root, ds, nextId);
    os << "}\n";
}

} // namespace rebac
