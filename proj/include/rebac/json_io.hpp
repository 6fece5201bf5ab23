#pragma once

#include "rebac/model.hpp"
#include "rebac/rule.hpp"

#include <string>
#include <vector>

namespace rebac {

// File formats (field names are fixed):
//   class model   {"classes": {name: {"fields": {fname: {"type": t, "multiplicity": m}}}}}
//   object model  {"objects": [{"id": ..., "type": ..., "fields": {fname: v | [v...] | null}}]}
//   ACL           {"actions": [...], "au": [["sid","rid","action"], ...]}
//   policy        {"rules": [{"subjectType", "subjectCondition": [...], "resourceType",
//                  "resourceCondition": [...], "constraint": [...], "actions": [...]}]}
// Condition atoms: {"path": [...], "op": "in"|"contains", "val": list | single, "neg": bool}
// Constraint atoms: {"sPath": [...], "op": ..., "rPath": [...], "neg": bool}

struct AclData {
    std::vector<std::string> actions;
    AuthorizationSet au;
};

ClassModel parseClassModel(const std::string& jsonText);
ObjectModel parseObjectModel(const std::string& jsonText, const ClassModel& cm);
AclData parseAcl(const std::string& jsonText, const ObjectModel& om);
std::vector<Rule> parsePolicyRules(const std::string& jsonText, const ClassModel& cm);

ClassModel loadClassModel(const std::string& path);
ObjectModel loadObjectModel(const std::string& path, const ClassModel& cm);
AclData loadAcl(const std::string& path, const ObjectModel& om);
std::vector<Rule> loadPolicyRules(const std::string& path, const ClassModel& cm);

// Serializers emit canonical form: keys in fixed order, rules sorted, two-space
// indent, trailing newline. Identical inputs produce identical bytes.
std::string classModelToJson(const ClassModel& cm);
std::string objectModelToJson(const ObjectModel& om);
std::string aclToJson(const std::vector<std::string>& actions, const AuthorizationSet& au);
std::string policyRulesToJson(std::vector<Rule> rules);

void writeFile(const std::string& path, const std::string& content);
std::string readFile(const std::string& path);

} // namespace rebac
