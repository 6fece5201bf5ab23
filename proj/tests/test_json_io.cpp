#include "rebac/error.hpp"
#include "rebac/json_io.hpp"

#include "support.hpp"

#include <doctest.h>

using namespace rebac;
using namespace rebac::testing;

TEST_CASE("class model round trip with exact field names") {
    const char* text = R"({
      "classes": {
        "Dept": {"fields": {}},
        "User": {"fields": {
          "dept": {"type": "Dept", "multiplicity": "one"},
          "teams": {"type": "Dept", "multiplicity": "many"},
          "alt": {"type": "Dept", "multiplicity": "optional"},
          "active": {"type": "Boolean", "multiplicity": "one"}
        }}
      }
    })";
    const ClassModel cm = parseClassModel(text);
    CHECK(cm.hasClass("User"));
    CHECK(cm.field("User", "teams").multiplicity == Multiplicity::Many);
    CHECK(cm.field("User", "active").isBoolean());

    const std::string out = classModelToJson(cm);
    const ClassModel again = parseClassModel(out);
    CHECK(classModelToJson(again) == out);
}

TEST_CASE("object model parsing") {
    const ClassModel cm = parseClassModel(R"({
      "classes": {
        "Dept": {"fields": {}},
        "User": {"fields": {
          "dept": {"type": "Dept", "multiplicity": "one"},
          "teams": {"type": "Dept", "multiplicity": "many"},
          "alt": {"type": "Dept", "multiplicity": "optional"},
          "active": {"type": "Boolean", "multiplicity": "one"}
        }}
      }
    })");

    SUBCASE("values, sets, and nulls") {
        const ObjectModel om = parseObjectModel(R"({
          "objects": [
            {"id": "d1", "type": "Dept", "fields": {}},
            {"id": "u1", "type": "User", "fields": {
              "dept": "d1", "teams": ["d1"], "alt": null, "active": true}}
          ]
        })", cm);
        CHECK(om.size() == 2);
        const Object& u1 = om.object("u1");
        CHECK(u1.fields.at("dept") == one("d1"));
        CHECK(u1.fields.at("teams") == many({"d1"}));
        CHECK(u1.fields.count("alt") == 0);
        CHECK(u1.fields.at("active") == one(true));

        const std::string out = objectModelToJson(om);
        const ObjectModel again = parseObjectModel(out, cm);
        CHECK(objectModelToJson(again) == out);
    }
    SUBCASE("dangling reference names the object and field") {
        try {
            parseObjectModel(R"({
              "objects": [
                {"id": "u1", "type": "User", "fields": {
                  "dept": "ghost", "teams": [], "active": false}}
              ]
            })", cm);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            const std::string msg = e.what();
            CHECK(msg.find("u1") != std::string::npos);
            CHECK(msg.find("dept") != std::string::npos);
        }
    }
    SUBCASE("malformed JSON is a parse error") {
        CHECK_THROWS_AS(parseObjectModel("{", cm), ParseError);
    }
}

TEST_CASE("acl parsing") {
    const ClassModel cm = parseClassModel(
        R"({"classes": {"U": {"fields": {}}, "R": {"fields": {}}}})");
    const ObjectModel om = parseObjectModel(R"({
      "objects": [{"id": "u1", "type": "U", "fields": {}},
                   {"id": "r1", "type": "R", "fields": {}}]
    })", cm);

    const AclData acl = parseAcl(
        R"({"actions": ["read", "write"], "au": [["u1", "r1", "read"]]})", om);
    CHECK(acl.actions == std::vector<std::string>{"read", "write"});
    CHECK(acl.au.contains({"u1", "r1", "read"}));

    SUBCASE("unknown subject rejected") {
        CHECK_THROWS_AS(
            parseAcl(R"({"actions": ["read"], "au": [["ghost", "r1", "read"]]})", om),
            ParseError);
    }
    SUBCASE("action outside the action set rejected") {
        CHECK_THROWS_AS(
            parseAcl(R"({"actions": ["read"], "au": [["u1", "r1", "write"]]})", om),
            ParseError);
    }
}

TEST_CASE("policy rules round trip") {
    const ToyInstance t = edocToy();
    const std::string out = policyRulesToJson(t.rules);

    SUBCASE("exact field names") {
        CHECK(out.find("\"subjectType\"") != std::string::npos);
        CHECK(out.find("\"subjectCondition\"") != std::string::npos);
        CHECK(out.find("\"resourceCondition\"") != std::string::npos);
        CHECK(out.find("\"constraint\"") != std::string::npos);
        CHECK(out.find("\"sPath\"") != std::string::npos);
        CHECK(out.find("\"rPath\"") != std::string::npos);
        CHECK(out.find("\"neg\"") != std::string::npos);
        CHECK(out.find("\"path\"") != std::string::npos);
        CHECK(out.find("\"val\"") != std::string::npos);
    }
    SUBCASE("parse inverts serialize") {
        const auto rules = parsePolicyRules(out, t.cm);
        CHECK(rules == t.rules);
        CHECK(policyRulesToJson(rules) == out);
    }
    SUBCASE("rules with ill-typed operators are rejected") {
        std::string bad = out;
        const auto pos = bad.find("\"op\": \"contains\"");
        REQUIRE(pos != std::string::npos);
        bad.replace(pos, 17, "\"op\": \"subseteq\"");
        CHECK_THROWS_AS(parsePolicyRules(bad, t.cm), ParseError);
    }
    SUBCASE("boolean atoms survive the trip") {
        ClassModel cm;
        cm.addClass("R", {});
        cm.addClass("U", {{"active", "Boolean", Multiplicity::One}});
        Rule r;
        r.subjectType = "U";
        r.resourceType = "R";
        r.actions = {"read"};
        r.subjectCondition.push_back(makeCondition(cm, "U", {"active"}, {Atomic{false}}));
        const std::string text = policyRulesToJson({r});
        CHECK(text.find("false") != std::string::npos);
        const auto rules = parsePolicyRules(text, cm);
        REQUIRE(rules.size() == 1);
        CHECK(rules[0].subjectCondition[0].vals == std::vector<Atomic>{Atomic{false}});
    }
}
