#include "rebac/error.hpp"
#include "rebac/improve.hpp"
#include "rebac/json_io.hpp"
#include "rebac/logging.hpp"
#include "rebac/metrics.hpp"
#include "rebac/synthgen.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <iomanip>
#include <iostream>

namespace {

using namespace rebac;
using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitInexact = 1;
constexpr int kExitInput = 2;
constexpr int kExitAlgorithm = 3;

struct CommonOptions {
    std::string classModelPath;
    std::string objectModelPath;
    std::string mode = "dtrm";
    std::string criterion = "gini";
    FeatureLimits limits;
    std::size_t threads = 1;
    std::string dumpTreesDir;
    std::string outDir;
};

void addMiningFlags(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("--cm", opts.classModelPath, "class model JSON file")->required();
    cmd->add_option("--om", opts.objectModelPath, "object model JSON file")->required();
    cmd->add_option("--mode", opts.mode, "mining mode: dtrm | dtrm-minus")
        ->check(CLI::IsMember({"dtrm", "dtrm-minus"}));
    cmd->add_option("--criterion", opts.criterion, "split criterion: gini | entropy")
        ->check(CLI::IsMember({"gini", "entropy"}));
    cmd->add_option("--mspl", opts.limits.maxSubjectPathLen, "max subject condition path length");
    cmd->add_option("--mrpl", opts.limits.maxResourcePathLen, "max resource condition path length");
    cmd->add_option("--mtpl", opts.limits.maxConstraintTotalPathLen,
                    "max total constraint path length");
    cmd->add_option("--mcse", opts.limits.maxConditionSetElems, "max condition set size");
    cmd->add_option("--sped", opts.limits.subjectPathExtraDerefs,
                    "extra subject path dereferences");
    cmd->add_option("--rped", opts.limits.resourcePathExtraDerefs,
                    "extra resource path dereferences");
    cmd->add_option("--threads", opts.threads, "phase-1 worker threads")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--dump-trees", opts.dumpTreesDir, "write per-triple tree dumps here");
    cmd->add_option("--out", opts.outDir, "output directory")->required();
}

MineOptions toMineOptions(const CommonOptions& opts) {
    MineOptions mo;
    mo.limits = opts.limits;
    mo.criterion = *criterionFromString(opts.criterion);
    mo.mode = *miningModeFromString(opts.mode);
    mo.threads = opts.threads;
    mo.dumpTreesDir = opts.dumpTreesDir;
    return mo;
}

ordered_json reportToJson(const MiningReport& rep, double semantic) {
    ordered_json j;
    j["triples"] = rep.triples;
    j["featuresGenerated"] = rep.featuresGenerated;
    j["featuresAfterReduction"] = rep.featuresAfterReduction;
    j["featureVectors"] = rep.featureVectors;
    j["rules"] = {{"extracted", rep.extractedRules},
                  {"afterNegationElimination", rep.rulesAfterNegationElimination},
                  {"final", rep.rulesFinal}};
    j["wsc"] = {{"extracted", rep.wscExtracted}, {"final", rep.wscFinal}};
    ordered_json neg;
    for (std::size_t s = 0; s < 5; ++s)
        neg["substep" + std::to_string(s + 1)] = rep.negativesEliminatedBySubstep[s];
    j["negationElimination"] = std::move(neg);
    j["mergedPairs"] = rep.mergedPairs;
    j["semanticSimilarity"] = semantic;
    // timings vary run to run; everything above is deterministic
    ordered_json timings;
    for (const auto& [k, v] : rep.timings) timings[k] = v;
    j["timings"] = std::move(timings);
    return j;
}

ordered_json similarityToJson(const SimilarityReport& rep) {
    ordered_json j;
    j["semantic"] = rep.semantic;
    j["syntactic"] = rep.syntactic;
    j["wscMined"] = rep.wscMined;
    j["wscReference"] = rep.wscReference;
    j["wscRatio"] = rep.wscReference == 0
                        ? 0.0
                        : static_cast<double>(rep.wscMined) /
                              static_cast<double>(rep.wscReference);
    ordered_json matches = ordered_json::array();
    for (const auto& m : rep.perRuleBestMatch)
        matches.push_back({{"mined", m.minedIndex},
                           {"reference", m.referenceIndex},
                           {"score", m.score}});
    j["perRuleBestMatch"] = std::move(matches);
    return j;
}

void printSimilarityTable(const SimilarityReport& rep) {
    std::cout << std::left << std::setw(14) << "metric" << "value\n";
    std::cout << std::left << std::setw(14) << "semantic" << rep.semantic << "\n";
    std::cout << std::left << std::setw(14) << "syntactic" << rep.syntactic << "\n";
    std::cout << std::left << std::setw(14) << "wscMined" << rep.wscMined << "\n";
    std::cout << std::left << std::setw(14) << "wscReference" << rep.wscReference << "\n";
}

void ensureDir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ParseError("cannot create directory " + dir + ": " + ec.message());
}

int cmdMine(const CommonOptions& opts, const std::string& aclPath) {
    const ClassModel cm = loadClassModel(opts.classModelPath);
    const ObjectModel om = loadObjectModel(opts.objectModelPath, cm);
    const AclData acl = loadAcl(aclPath, om);

    MiningReport report;
    const std::vector<Rule> mined = minePolicy(cm, om, acl.au, toMineOptions(opts), &report);
    const double semantic = semanticSimilarityToAu(cm, om, mined, acl.au);

    ensureDir(opts.outDir);
    writeFile(opts.outDir + "/mined_policy.json", policyRulesToJson(mined));
    writeFile(opts.outDir + "/mining_report.json",
              reportToJson(report, semantic).dump(2) + "\n");

    std::cout << "rules: " << mined.size() << "\n";
    std::cout << "wsc: " << wscPolicy(mined) << "\n";
    std::cout << "semantic similarity: " << semantic << "\n";
    return semantic == 1.0 ? kExitOk : kExitInexact;
}

int cmdEvaluate(const CommonOptions& opts, const std::string& policyPath) {
    const ClassModel cm = loadClassModel(opts.classModelPath);
    const ObjectModel om = loadObjectModel(opts.objectModelPath, cm);
    const std::vector<Rule> reference = loadPolicyRules(policyPath, cm);

    // the evaluation loop: reference rules induce AU, the miner reconstructs a
    // policy from AU alone, and the result is compared against the simplified
    // reference
    const AuthorizationSet au(policyMeaning(cm, om, reference));
    MiningReport report;
    const std::vector<Rule> mined = minePolicy(cm, om, au, toMineOptions(opts), &report);
    const std::vector<Rule> simplified = simplifyReference(cm, om, reference, au);
    const SimilarityReport sim = comparePolicies(cm, om, mined, simplified);

    ensureDir(opts.outDir);
    writeFile(opts.outDir + "/mined_policy.json", policyRulesToJson(mined));
    writeFile(opts.outDir + "/simplified_reference.json", policyRulesToJson(simplified));
    writeFile(opts.outDir + "/mining_report.json",
              reportToJson(report, sim.semantic).dump(2) + "\n");
    writeFile(opts.outDir + "/similarity_report.json",
              similarityToJson(sim).dump(2) + "\n");

    printSimilarityTable(sim);
    std::cout << "phase1 seconds: " << report.phase1Seconds() << "\n";
    std::cout << "phase2 seconds: " << report.phase2Seconds() << "\n";
    return sim.semantic == 1.0 ? kExitOk : kExitInexact;
}

int cmdCompare(const std::string& cmPath, const std::string& omPath, const std::string& aPath,
               const std::string& bPath, const std::string& outFile) {
    const ClassModel cm = loadClassModel(cmPath);
    const ObjectModel om = loadObjectModel(omPath, cm);
    const std::vector<Rule> a = loadPolicyRules(aPath, cm);
    const std::vector<Rule> b = loadPolicyRules(bPath, cm);
    const SimilarityReport rep = comparePolicies(cm, om, a, b);
    if (!outFile.empty()) writeFile(outFile, similarityToJson(rep).dump(2) + "\n");
    printSimilarityTable(rep);
    return kExitOk;
}

int cmdGenerate(const GenConfig& cfg, const std::string& outDir) {
    const GeneratedInstance inst = generate(cfg);
    emitInstance(inst, outDir);
    std::cout << "objects: " << inst.objectModel.size() << "\n";
    std::cout << "rules: " << inst.rules.size() << "\n";
    std::cout << "au: " << inst.au.size() << "\n";
    return kExitOk;
}

int cmdStats(const std::string& cmPath, const std::string& omPath,
             const std::string& aclPath) {
    const ClassModel cm = loadClassModel(cmPath);
    const ObjectModel om = loadObjectModel(omPath, cm);
    const AclData acl = loadAcl(aclPath, om);

    std::size_t fieldCount = 0;
    for (std::size_t i = 0; i < om.size(); ++i)
        fieldCount += 1 + cm.fieldsOf(om.objectAt(i).type).size(); // id plus declared

    std::cout << "#obj " << om.size() << "\n";
    std::cout << "#field " << fieldCount << "\n";
    std::size_t total = 0;
    for (const auto& t : enumerateTriples(acl.au, om)) {
        const std::size_t fv = om.objectsOfType(t.subjectType).size() *
                               om.objectsOfType(t.resourceType).size();
        total += fv;
        std::cout << "#FV " << t.subjectType << " " << t.resourceType << " " << t.action
                  << " " << fv << "\n";
    }
    std::cout << "#FV total " << total << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ReBAC policy miner: decision-tree mining of relationship-based "
                 "access control rules from ACLs"};
    app.require_subcommand(1);

    CommonOptions mineOpts;
    std::string aclPath;
    CLI::App* mine = app.add_subcommand("mine", "mine a policy from an ACL instance");
    addMiningFlags(mine, mineOpts);
    mine->add_option("--acl", aclPath, "ACL JSON file")->required();

    CommonOptions evalOpts;
    std::string referencePath;
    CLI::App* evaluate = app.add_subcommand(
        "evaluate", "compute AU from a reference policy, mine it back, and compare");
    addMiningFlags(evaluate, evalOpts);
    evaluate->add_option("--policy", referencePath, "reference policy JSON file")->required();

    std::string cmpCm, cmpOm, cmpA, cmpB, cmpOut;
    CLI::App* compare = app.add_subcommand("compare", "similarity metrics for two policies");
    compare->add_option("--cm", cmpCm, "class model JSON file")->required();
    compare->add_option("--om", cmpOm, "object model JSON file")->required();
    compare->add_option("--a", cmpA, "first policy (mined)")->required();
    compare->add_option("--b", cmpB, "second policy (reference)")->required();
    compare->add_option("--out", cmpOut, "write the report JSON here");

    GenConfig genCfg;
    std::string genOut;
    CLI::App* gen = app.add_subcommand("generate", "emit a seeded synthetic instance");
    gen->add_option("--seed", genCfg.seed, "generator seed");
    gen->add_option("--n", genCfg.sizeParam, "instances per subject class")
        ->check(CLI::PositiveNumber);
    gen->add_option("--rules", genCfg.numRules, "number of rules")->check(CLI::PositiveNumber);
    gen->add_option("--subject-classes", genCfg.numSubjectClasses, "subject class count")
        ->check(CLI::PositiveNumber);
    gen->add_option("--resource-classes", genCfg.numResourceClasses, "resource class count")
        ->check(CLI::PositiveNumber);
    gen->add_option("--max-path-len", genCfg.maxPathLen, "rule path length bound");
    gen->add_option("--out", genOut, "output directory")->required();

    std::string statsCm, statsOm, statsAcl;
    CLI::App* stats = app.add_subcommand("stats", "instance size metrics");
    stats->add_option("--cm", statsCm, "class model JSON file")->required();
    stats->add_option("--om", statsOm, "object model JSON file")->required();
    stats->add_option("--acl", statsAcl, "ACL JSON file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (mine->parsed()) return cmdMine(mineOpts, aclPath);
        if (evaluate->parsed()) return cmdEvaluate(evalOpts, referencePath);
        if (compare->parsed()) return cmdCompare(cmpCm, cmpOm, cmpA, cmpB, cmpOut);
        if (gen->parsed()) return cmdGenerate(genCfg, genOut);
        if (stats->parsed()) return cmdStats(statsCm, statsOm, statsAcl);
    } catch (const ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const StructuralError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const UnseparableSubset& e) {
        std::cerr << "mining failed: " << e.what() << "\n";
        return kExitAlgorithm;
    } catch (const NegationEliminationExhausted& e) {
        std::cerr << "mining failed: " << e.what() << "\n";
        return kExitAlgorithm;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitAlgorithm;
    }
    return kExitOk;
}
