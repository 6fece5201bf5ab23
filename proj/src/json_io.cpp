#include "rebac/json_io.hpp"

#include "rebac/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace rebac {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

json parseJsonText(const std::string& text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(what + ": " + e.what());
    }
}

Atomic atomicFromJson(const json& j, const std::string& where) {
    if (j.is_boolean()) return Atomic{j.get<bool>()};
    if (j.is_string()) return Atomic{j.get<std::string>()};
    throw ParseError(where + ": expected a string or boolean value");
}

ordered_json atomicToJson(const Atomic& a) {
    if (std::holds_alternative<bool>(a)) return std::get<bool>(a);
    return std::get<std::string>(a);
}

std::vector<std::string> stringListFromJson(const json& j, const std::string& where) {
    if (!j.is_array()) throw ParseError(where + ": expected an array of strings");
    std::vector<std::string> out;
    for (const auto& e : j) {
        if (!e.is_string()) throw ParseError(where + ": expected strings");
        out.push_back(e.get<std::string>());
    }
    return out;
}

} // namespace

ClassModel parseClassModel(const std::string& jsonText) {
    const json root = parseJsonText(jsonText, "class model");
    if (!root.is_object() || !root.contains("classes") || !root["classes"].is_object())
        throw ParseError("class model: expected top-level object with \"classes\"");
    ClassModel cm;
    for (const auto& [name, decl] : root["classes"].items()) {
        if (!decl.is_object() || !decl.contains("fields") || !decl["fields"].is_object())
            throw ParseError("class " + name + ": expected object with \"fields\"");
        std::vector<FieldDecl> fields;
        for (const auto& [fname, fdecl] : decl["fields"].items()) {
            if (!fdecl.is_object() || !fdecl.contains("type") ||
                !fdecl.contains("multiplicity"))
                throw ParseError("class " + name + ", field " + fname +
                                 ": expected \"type\" and \"multiplicity\"");
            FieldDecl f;
            f.name = fname;
            f.type = fdecl["type"].get<std::string>();
            const auto m = multiplicityFromString(fdecl["multiplicity"].get<std::string>());
            if (!m)
                throw ParseError("class " + name + ", field " + fname +
                                 ": multiplicity must be one|optional|many");
            f.multiplicity = *m;
            fields.push_back(std::move(f));
        }
        // keep a canonical field order
        std::sort(fields.begin(), fields.end(),
                  [](const FieldDecl& a, const FieldDecl& b) { return a.name < b.name; });
        cm.addClass(name, std::move(fields));
    }
    try {
        cm.validate();
    } catch (const StructuralError& e) {
        throw ParseError(std::string("class model: ") + e.what());
    }
    return cm;
}

ObjectModel parseObjectModel(const std::string& jsonText, const ClassModel& cm) {
    const json root = parseJsonText(jsonText, "object model");
    if (!root.is_object() || !root.contains("objects") || !root["objects"].is_array())
        throw ParseError("object model: expected top-level object with \"objects\"");
    ObjectModel om;
    for (const auto& jo : root["objects"]) {
        if (!jo.is_object() || !jo.contains("id") || !jo.contains("type"))
            throw ParseError("object model: each object needs \"id\" and \"type\"");
        Object obj;
        obj.id = jo["id"].get<std::string>();
        obj.type = jo["type"].get<std::string>();
        if (jo.contains("fields")) {
            if (!jo["fields"].is_object())
                throw ParseError("object " + obj.id + ": \"fields\" must be an object");
            for (const auto& [fname, fval] : jo["fields"].items()) {
                const std::string where = "object " + obj.id + ", field " + fname;
                if (fval.is_null()) continue; // absent optional value
                if (fval.is_array()) {
                    std::vector<Atomic> atoms;
                    for (const auto& e : fval) atoms.push_back(atomicFromJson(e, where));
                    obj.fields[fname] = Value::set(std::move(atoms));
                } else {
                    obj.fields[fname] = Value::single(atomicFromJson(fval, where));
                }
            }
        }
        try {
            om.addObject(std::move(obj));
        } catch (const StructuralError& e) {
            throw ParseError(std::string("object model: ") + e.what());
        }
    }
    om.seal();
    try {
        om.validate(cm);
    } catch (const StructuralError& e) {
        throw ParseError(std::string("object model: ") + e.what());
    }
    return om;
}

AclData parseAcl(const std::string& jsonText, const ObjectModel& om) {
    const json root = parseJsonText(jsonText, "acl");
    if (!root.is_object() || !root.contains("actions") || !root.contains("au"))
        throw ParseError("acl: expected top-level object with \"actions\" and \"au\"");
    AclData acl;
    acl.actions = stringListFromJson(root["actions"], "acl actions");
    std::sort(acl.actions.begin(), acl.actions.end());
    acl.actions.erase(std::unique(acl.actions.begin(), acl.actions.end()),
                      acl.actions.end());
    if (!root["au"].is_array()) throw ParseError("acl: \"au\" must be an array");
    std::vector<SraTuple> tuples;
    for (const auto& e : root["au"]) {
        if (!e.is_array() || e.size() != 3)
            throw ParseError("acl: each AU entry must be [subject, resource, action]");
        tuples.push_back({e[0].get<std::string>(), e[1].get<std::string>(),
                          e[2].get<std::string>()});
    }
    acl.au = AuthorizationSet(std::move(tuples));
    try {
        acl.au.validate(om, acl.actions);
    } catch (const StructuralError& e) {
        throw ParseError(std::string("acl: ") + e.what());
    }
    return acl;
}

namespace {

AtomicCondition conditionFromJson(const json& j, const std::string& where) {
    if (!j.is_object() || !j.contains("path") || !j.contains("op") || !j.contains("val"))
        throw ParseError(where + ": condition needs \"path\", \"op\", \"val\"");
    AtomicCondition c;
    c.path = stringListFromJson(j["path"], where + " path");
    const auto op = condOpFromString(j["op"].get<std::string>());
    if (!op) throw ParseError(where + ": condition op must be in|contains");
    c.op = *op;
    if (c.op == CondOp::In) {
        if (!j["val"].is_array()) throw ParseError(where + ": in-condition val must be a list");
        for (const auto& e : j["val"]) c.vals.push_back(atomicFromJson(e, where));
    } else {
        c.vals.push_back(atomicFromJson(j["val"], where));
    }
    std::sort(c.vals.begin(), c.vals.end());
    c.vals.erase(std::unique(c.vals.begin(), c.vals.end()), c.vals.end());
    c.negated = j.value("neg", false);
    return c;
}

AtomicConstraint constraintFromJson(const json& j, const std::string& where) {
    if (!j.is_object() || !j.contains("sPath") || !j.contains("op") || !j.contains("rPath"))
        throw ParseError(where + ": constraint needs \"sPath\", \"op\", \"rPath\"");
    AtomicConstraint c;
    c.subjectPath = stringListFromJson(j["sPath"], where + " sPath");
    c.resourcePath = stringListFromJson(j["rPath"], where + " rPath");
    const auto op = consOpFromString(j["op"].get<std::string>());
    if (!op) throw ParseError(where + ": unknown constraint op");
    c.op = *op;
    c.negated = j.value("neg", false);
    return c;
}

ordered_json conditionToJson(const AtomicCondition& c) {
    ordered_json j;
    j["path"] = c.path;
    j["op"] = condOpToString(c.op);
    if (c.op == CondOp::In) {
        ordered_json vals = ordered_json::array();
        for (const auto& v : c.vals) vals.push_back(atomicToJson(v));
        j["val"] = std::move(vals);
    } else {
        j["val"] = atomicToJson(c.vals.front());
    }
    j["neg"] = c.negated;
    return j;
}

ordered_json constraintToJson(const AtomicConstraint& c) {
    ordered_json j;
    j["sPath"] = c.subjectPath;
    j["op"] = consOpToString(c.op);
    j["rPath"] = c.resourcePath;
    j["neg"] = c.negated;
    return j;
}

} // namespace

std::vector<Rule> parsePolicyRules(const std::string& jsonText, const ClassModel& cm) {
    const json root = parseJsonText(jsonText, "policy");
    if (!root.is_object() || !root.contains("rules") || !root["rules"].is_array())
        throw ParseError("policy: expected top-level object with \"rules\"");
    std::vector<Rule> rules;
    std::size_t idx = 0;
    for (const auto& jr : root["rules"]) {
        const std::string where = "rule " + std::to_string(idx);
        if (!jr.is_object() || !jr.contains("subjectType") || !jr.contains("resourceType") ||
            !jr.contains("actions"))
            throw ParseError(where +
                             ": needs \"subjectType\", \"resourceType\", \"actions\"");
        Rule r;
        r.subjectType = jr["subjectType"].get<std::string>();
        r.resourceType = jr["resourceType"].get<std::string>();
        if (jr.contains("subjectCondition"))
            for (const auto& e : jr["subjectCondition"])
                r.subjectCondition.push_back(conditionFromJson(e, where));
        if (jr.contains("resourceCondition"))
            for (const auto& e : jr["resourceCondition"])
                r.resourceCondition.push_back(conditionFromJson(e, where));
        if (jr.contains("constraint"))
            for (const auto& e : jr["constraint"])
                r.constraint.push_back(constraintFromJson(e, where));
        r.actions = stringListFromJson(jr["actions"], where + " actions");
        r.canonicalize();
        try {
            validateRule(cm, r);
        } catch (const StructuralError& e) {
            throw ParseError(where + ": " + e.what());
        }
        rules.push_back(std::move(r));
        ++idx;
    }
    return rules;
}

std::string classModelToJson(const ClassModel& cm) {
    ordered_json classes = ordered_json::object();
    for (const auto& [name, fields] : cm.classes()) {
        ordered_json jf = ordered_json::object();
        for (const auto& f : fields) {
            ordered_json d;
            d["type"] = f.type;
            d["multiplicity"] = multiplicityToString(f.multiplicity);
            jf[f.name] = std::move(d);
        }
        classes[name] = ordered_json{{"fields", std::move(jf)}};
    }
    ordered_json root{{"classes", std::move(classes)}};
    return root.dump(2) + "\n";
}

std::string objectModelToJson(const ObjectModel& om) {
    ordered_json objects = ordered_json::array();
    for (std::size_t i = 0; i < om.size(); ++i) {
        const Object& o = om.objectAt(i);
        ordered_json jo;
        jo["id"] = o.id;
        jo["type"] = o.type;
        ordered_json jf = ordered_json::object();
        for (const auto& [fname, value] : o.fields) {
            if (value.isAbsent()) {
                jf[fname] = nullptr;
            } else if (value.isSingle()) {
                jf[fname] = atomicToJson(value.atom());
            } else {
                ordered_json arr = ordered_json::array();
                for (const auto& a : value.atoms()) arr.push_back(atomicToJson(a));
                jf[fname] = std::move(arr);
            }
        }
        jo["fields"] = std::move(jf);
        objects.push_back(std::move(jo));
    }
    ordered_json root{{"objects", std::move(objects)}};
    return root.dump(2) + "\n";
}

std::string aclToJson(const std::vector<std::string>& actions, const AuthorizationSet& au) {
    ordered_json root;
    std::vector<std::string> sortedActions = actions;
    std::sort(sortedActions.begin(), sortedActions.end());
    root["actions"] = sortedActions;
    ordered_json tuples = ordered_json::array();
    for (const auto& t : au.tuples())
        tuples.push_back(ordered_json::array({t.subject, t.resource, t.action}));
    root["au"] = std::move(tuples);
    return root.dump(2) + "\n";
}

std::string policyRulesToJson(std::vector<Rule> rules) {
    for (auto& r : rules) r.canonicalize();
    std::sort(rules.begin(), rules.end());
    ordered_json jrules = ordered_json::array();
    for (const auto& r : rules) {
        ordered_json j;
        j["subjectType"] = r.subjectType;
        ordered_json sc = ordered_json::array();
        for (const auto& c : r.subjectCondition) sc.push_back(conditionToJson(c));
        j["subjectCondition"] = std::move(sc);
        j["resourceType"] = r.resourceType;
        ordered_json rc = ordered_json::array();
        for (const auto& c : r.resourceCondition) rc.push_back(conditionToJson(c));
        j["resourceCondition"] = std::move(rc);
        ordered_json con = ordered_json::array();
        for (const auto& c : r.constraint) con.push_back(constraintToJson(c));
        j["constraint"] = std::move(con);
        j["actions"] = r.actions;
        jrules.push_back(std::move(j));
    }
    ordered_json root{{"rules", std::move(jrules)}};
    return root.dump(2) + "\n";
}

std::string readFile(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void writeFile(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write file: " + path);
    out << content;
    if (!out) throw ParseError("write failed: " + path);
}

ClassModel loadClassModel(const std::string& path) {
    try {
        return parseClassModel(readFile(path));
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

ObjectModel loadObjectModel(const std::string& path, const ClassModel& cm) {
    try {
        return parseObjectModel(readFile(path), cm);
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

AclData loadAcl(const std::string& path, const ObjectModel& om) {
    try {
        return parseAcl(readFile(path), om);
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

std::vector<Rule> loadPolicyRules(const std::string& path, const ClassModel& cm) {
    try {
        return parsePolicyRules(readFile(path), cm);
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

} // namespace rebac
