#pragma once

#include "rebac/bitvec.hpp"
#include "rebac/features.hpp"

#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace rebac {

enum class Criterion { Gini, Entropy };

std::string criterionToString(Criterion c);
std::optional<Criterion> criterionFromString(const std::string& s);

/// Binary decision tree node. Leaves carry the classification; internal nodes
/// test one dataset feature, false branch first.
struct TreeNode {
    bool leaf = false;
    bool permit = false;             // valid for leaves
    std::size_t featureIndex = 0;    // valid for internal nodes
    std::unique_ptr<TreeNode> falseChild;
    std::unique_ptr<TreeNode> trueChild;
};

/// Minimal dataset surface the learner needs; decouples tree building from
/// feature bodies so synthetic bit matrices can drive it directly.
struct DatasetView {
    std::size_t numVectors = 0;
    std::span<const BitVec> featureBits;
    std::span<const std::size_t> featureWsc;
    const BitVec* labels = nullptr;
};

DatasetView viewOf(const LabeledDataset& ds, std::vector<std::size_t>& wscScratch);

/// 1 - sum((count_i/total)^2); empty input is 0.
double giniImpurity(std::span<const std::size_t> counts);
/// Base-2 entropy with 0*log0 = 0; empty input is 0.
double entropyImpurity(std::span<const std::size_t> counts);

/// Score of splitting `subset` on one feature: child impurities weighted by
/// child size. Gini scores carry exact integer state so ties are detected
/// without floating-point noise.
struct SplitScore {
    double impurity = 0.0; // weighted child impurity
    std::size_t featureWsc = 0;
    std::size_t featureIndex = 0;

    // exact gini comparison state: impurity = (a0/n0 + a1/n1) / n,
    // a_j = n_j^2 - pos_j^2 - neg_j^2; n_j == 0 contributes 0
    bool exact = false;
    long long a0 = 0, n0 = 0, a1 = 0, n1 = 0;
    long double approx = 0.0; // comparison value for entropy
};

/// Orders by (impurity, featureWsc, featureIndex), smaller better.
bool splitBetter(const SplitScore& lhs, const SplitScore& rhs);

SplitScore scoreSplit(const DatasetView& view, const BitVec& subset,
                      std::size_t featureIndex, Criterion criterion);

/// Argmin over features that actually separate the subset. Throws
/// UnseparableSubset (with a conflicting vector pair) when none does.
std::size_t chooseSplit(const DatasetView& view, const BitVec& subset,
                        const std::vector<bool>& used, Criterion criterion);

/// Unpruned CART: recursion splits until every leaf's subset is
/// label-homogeneous, so the tree reproduces every training label.
std::unique_ptr<TreeNode> buildTree(const DatasetView& view, Criterion criterion);

bool classify(const TreeNode& root, const DatasetView& view, std::size_t vectorIndex);

/// Root-to-PERMIT-leaf paths as (featureIndex, branchTaken) literal lists.
std::vector<std::vector<std::pair<std::size_t, bool>>> permitPaths(const TreeNode& root);

/// One rule per PERMIT path: true-edge features enter positively, false-edge
/// features negated; the action set is the triple's single action.
std::vector<Rule> extractRules(const TreeNode& root, const LabeledDataset& ds);

void dumpTreeText(std::ostream& os, const TreeNode& root, const LabeledDataset& ds);
void dumpTreeDot(std::ostream& os, const TreeNode& root, const LabeledDataset& ds);

} // namespace rebac
