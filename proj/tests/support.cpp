#include "support.hpp"

namespace rebac::testing {

ToyInstance deptToy() {
    ToyInstance t;
    t.cm.addClass("Department", {});
    t.cm.addClass("Employee", {{"dept", "Department", Multiplicity::One}});
    t.cm.addClass("Document", {});
    t.cm.validate();

    for (const char* d : {"MechEng", "ChemEng", "ElecEng"})
        t.om.addObject({d, "Department", {}});
    t.om.addObject({"e1", "Employee", {{"dept", one("MechEng")}}});
    t.om.addObject({"e2", "Employee", {{"dept", one("MechEng")}}});
    t.om.addObject({"e3", "Employee", {{"dept", one("ChemEng")}}});
    t.om.addObject({"e4", "Employee", {{"dept", one("ChemEng")}}});
    t.om.addObject({"e5", "Employee", {{"dept", one("ElecEng")}}});
    t.om.addObject({"e6", "Employee", {{"dept", one("ElecEng")}}});
    t.om.addObject({"doc1", "Document", {}});
    t.om.addObject({"doc2", "Document", {}});

    t.actions = {"read"};
    Rule r;
    r.subjectType = "Employee";
    r.resourceType = "Document";
    r.subjectCondition.push_back(
        makeCondition(t.cm, "Employee", {"dept"}, ids({"ChemEng", "ElecEng"})));
    r.actions = {"read"};
    t.rules.push_back(r);
    t.finalize();
    return t;
}

ToyInstance emrToy() {
    ToyInstance t;
    t.cm.addClass("Physician", {{"isTrainee", "Boolean", Multiplicity::One}});
    t.cm.addClass("MedicalRecord", {{"physician", "Physician", Multiplicity::Many}});
    t.cm.validate();

    t.om.addObject({"p1", "Physician", {{"isTrainee", one(false)}}});
    t.om.addObject({"p2", "Physician", {{"isTrainee", one(false)}}});
    t.om.addObject({"p3", "Physician", {{"isTrainee", one(false)}}});
    t.om.addObject({"p4", "Physician", {{"isTrainee", one(true)}}});
    t.om.addObject({"m1", "MedicalRecord", {{"physician", many({"p1"})}}});
    t.om.addObject({"m2", "MedicalRecord", {{"physician", many({"p1"})}}});
    t.om.addObject({"m3", "MedicalRecord", {{"physician", many({"p2"})}}});
    t.om.addObject({"m4", "MedicalRecord", {{"physician", many({"p2"})}}});
    t.om.addObject({"m5", "MedicalRecord", {{"physician", many({"p3"})}}});
    t.om.addObject({"m6", "MedicalRecord", {{"physician", many({"p4"})}}});

    t.actions = {"read"};
    Rule r;
    r.subjectType = "Physician";
    r.resourceType = "MedicalRecord";
    r.subjectCondition.push_back(
        makeCondition(t.cm, "Physician", {"isTrainee"}, {Atomic{false}}));
    r.constraint.push_back(
        makeConstraint(t.cm, "Physician", {}, "MedicalRecord", {"physician"}));
    r.actions = {"read"};
    t.rules.push_back(r);
    t.finalize();
    return t;
}

ToyInstance edocToy() {
    ToyInstance t;
    t.cm.addClass("Organization", {});
    t.cm.addClass("Project", {{"relatedDoc", "Document", Multiplicity::Many}});
    t.cm.addClass("Employee", {{"employer", "Organization", Multiplicity::One},
                               {"workOn", "Project", Multiplicity::Many}});
    t.cm.addClass("Document", {});
    t.cm.validate();

    for (const char* o : {"LargeBank", "SmallCorp", "MidBank"})
        t.om.addObject({o, "Organization", {}});
    for (const char* d : {"d1", "d2", "d3", "d4"}) t.om.addObject({d, "Document", {}});
    t.om.addObject({"prj1", "Project", {{"relatedDoc", many({"d1", "d2"})}}});
    t.om.addObject({"prj2", "Project", {{"relatedDoc", many({"d3"})}}});
    t.om.addObject({"prj3", "Project", {{"relatedDoc", many({"d4"})}}});
    t.om.addObject({"w1", "Employee",
                    {{"employer", one("LargeBank")}, {"workOn", many({"prj1"})}}});
    t.om.addObject({"w2", "Employee",
                    {{"employer", one("LargeBank")}, {"workOn", many({"prj1", "prj2"})}}});
    t.om.addObject({"w3", "Employee",
                    {{"employer", one("SmallCorp")}, {"workOn", many({"prj2"})}}});
    t.om.addObject({"w4", "Employee",
                    {{"employer", one("MidBank")}, {"workOn", many({"prj3"})}}});
    t.om.addObject({"w5", "Employee", {{"employer", one("LargeBank")}, {"workOn", many({})}}});

    t.actions = {"read"};
    Rule r;
    r.subjectType = "Employee";
    r.resourceType = "Document";
    r.subjectCondition.push_back(
        makeCondition(t.cm, "Employee", {"employer"}, ids({"LargeBank"})));
    r.constraint.push_back(makeConstraint(t.cm, "Employee", {"workOn", "relatedDoc"},
                                          "Document", {}));
    r.actions = {"read"};
    t.rules.push_back(r);
    t.finalize();
    return t;
}

} // namespace rebac::testing
