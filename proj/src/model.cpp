#include "rebac/model.hpp"

#include "rebac/error.hpp"

#include <algorithm>
#include <sstream>

namespace rebac {

std::string multiplicityToString(Multiplicity m) {
    switch (m) {
        case Multiplicity::One: return "one";
        case Multiplicity::Optional: return "optional";
        case Multiplicity::Many: return "many";
    }
    return "?";
}

std::optional<Multiplicity> multiplicityFromString(const std::string& s) {
    if (s == "one") return Multiplicity::One;
    if (s == "optional") return Multiplicity::Optional;
    if (s == "many") return Multiplicity::Many;
    return std::nullopt;
}

const FieldDecl ClassModel::idField_{kIdField, kStringType, Multiplicity::One};

void ClassModel::addClass(const std::string& name, std::vector<FieldDecl> fields) {
    if (classes_.count(name))
        throw StructuralError("duplicate class declaration: " + name);
    // canonical field order keeps serialization and path enumeration stable
    std::sort(fields.begin(), fields.end(),
              [](const FieldDecl& a, const FieldDecl& b) { return a.name < b.name; });
    classes_[name] = std::move(fields);
}

const std::vector<FieldDecl>& ClassModel::fieldsOf(const std::string& className) const {
    auto it = classes_.find(className);
    if (it == classes_.end())
        throw StructuralError("unknown class: " + className);
    return it->second;
}

const FieldDecl* ClassModel::findField(const std::string& className,
                                       const std::string& fieldName) const {
    auto it = classes_.find(className);
    if (it == classes_.end()) return nullptr;
    if (fieldName == kIdField) return &idField_;
    for (const auto& f : it->second)
        if (f.name == fieldName) return &f;
    return nullptr;
}

const FieldDecl& ClassModel::field(const std::string& className,
                                   const std::string& fieldName) const {
    const FieldDecl* f = findField(className, fieldName);
    if (!f)
        throw StructuralError("class " + className + " has no field '" + fieldName + "'");
    return *f;
}

void ClassModel::validate() const {
    for (const auto& [name, fields] : classes_) {
        std::vector<std::string> seen;
        for (const auto& f : fields) {
            if (f.name == kIdField)
                throw StructuralError("class " + name + " declares reserved field 'id'");
            if (std::find(seen.begin(), seen.end(), f.name) != seen.end())
                throw StructuralError("class " + name + " declares field '" + f.name +
                                      "' twice");
            seen.push_back(f.name);
            if (f.isBoolean()) {
                if (f.multiplicity != Multiplicity::One)
                    throw StructuralError("Boolean field " + name + "." + f.name +
                                          " must have multiplicity one");
            } else if (f.isString()) {
                throw StructuralError("field " + name + "." + f.name +
                                      " uses reserved type String");
            } else if (!classes_.count(f.type)) {
                throw StructuralError("field " + name + "." + f.name +
                                      " references undeclared class " + f.type);
            }
        }
    }
}

PathInfo pathInfo(const ClassModel& cm, const std::string& startClass,
                  const std::vector<std::string>& path) {
    if (!cm.hasClass(startClass))
        throw StructuralError("unknown class: " + startClass);
    std::string current = startClass;
    Multiplicity mult = Multiplicity::One;
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (current == kBooleanType || current == kStringType)
            throw StructuralError("path navigates through terminal type " + current);
        const FieldDecl& f = cm.field(current, path[i]);
        if (f.multiplicity == Multiplicity::Many)
            mult = Multiplicity::Many;
        else if (f.multiplicity == Multiplicity::Optional && mult != Multiplicity::Many)
            mult = Multiplicity::Optional;
        current = f.type;
    }
    return PathInfo{current, mult};
}

const std::vector<std::string> ObjectModel::emptyIds_{};

void ObjectModel::addObject(Object obj) {
    if (index_.count(obj.id))
        throw StructuralError("duplicate object id: " + obj.id);
    index_[obj.id] = 0; // placeholder until seal()
    objects_.push_back(std::move(obj));
}

void ObjectModel::seal() {
    std::sort(objects_.begin(), objects_.end(),
              [](const Object& a, const Object& b) { return a.id < b.id; });
    index_.clear();
    byType_.clear();
    for (std::size_t i = 0; i < objects_.size(); ++i) {
        index_[objects_[i].id] = i;
        byType_[objects_[i].type].push_back(objects_[i].id);
    }
}

const Object* ObjectModel::findObject(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return nullptr;
    return &objects_[it->second];
}

const Object& ObjectModel::object(const std::string& id) const {
    const Object* o = findObject(id);
    if (!o)
        throw StructuralError("unknown object id: " + id);
    return *o;
}

std::size_t ObjectModel::indexOf(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end())
        throw StructuralError("unknown object id: " + id);
    return it->second;
}

const std::vector<std::string>& ObjectModel::objectsOfType(const std::string& className) const {
    auto it = byType_.find(className);
    if (it == byType_.end()) return emptyIds_;
    return it->second;
}

namespace {

void checkFieldValue(const ObjectModel& om, const Object& obj, const FieldDecl& decl,
                     const Value& v) {
    const std::string where = "object " + obj.id + ", field " + decl.name;
    auto checkAtom = [&](const Atomic& a) {
        if (decl.isBoolean()) {
            if (!std::holds_alternative<bool>(a))
                throw StructuralError(where + ": expected Boolean value");
            return;
        }
        if (!std::holds_alternative<std::string>(a))
            throw StructuralError(where + ": expected object reference");
        const Object* target = om.findObject(std::get<std::string>(a));
        if (!target)
            throw StructuralError(where + ": dangling reference to '" +
                                  std::get<std::string>(a) + "'");
        if (target->type != decl.type)
            throw StructuralError(where + ": reference to " + target->id + " of type " +
                                  target->type + ", expected " + decl.type);
    };
    switch (decl.multiplicity) {
        case Multiplicity::One:
            if (!v.isSingle())
                throw StructuralError(where + ": multiplicity one requires exactly one value");
            checkAtom(v.atom());
            break;
        case Multiplicity::Optional:
            if (v.isSet())
                throw StructuralError(where + ": multiplicity optional forbids a value set");
            if (v.isSingle()) checkAtom(v.atom());
            break;
        case Multiplicity::Many:
            if (!v.isSet())
                throw StructuralError(where + ": multiplicity many requires a value set");
            for (const auto& a : v.atoms()) checkAtom(a);
            break;
    }
}

} // namespace

void ObjectModel::validate(const ClassModel& cm) const {
    for (const auto& obj : objects_) {
        if (!cm.hasClass(obj.type))
            throw StructuralError("object " + obj.id + " has undeclared type " + obj.type);
        const auto& decls = cm.fieldsOf(obj.type);
        for (const auto& [fname, value] : obj.fields) {
            if (fname == kIdField)
                throw StructuralError("object " + obj.id + " stores reserved field 'id'");
            const FieldDecl* decl = nullptr;
            for (const auto& d : decls)
                if (d.name == fname) { decl = &d; break; }
            if (!decl)
                throw StructuralError("object " + obj.id + " sets unknown field '" + fname +
                                      "' for class " + obj.type);
            checkFieldValue(*this, obj, *decl, value);
        }
        // one-multiplicity fields must be present
        for (const auto& d : decls) {
            if (d.multiplicity == Multiplicity::One && !obj.fields.count(d.name))
                throw StructuralError("object " + obj.id + " misses required field '" +
                                      d.name + "'");
            if (d.multiplicity == Multiplicity::Many && !obj.fields.count(d.name))
                throw StructuralError("object " + obj.id + " misses set-valued field '" +
                                      d.name + "' (use an empty list)");
        }
    }
}

} // namespace rebac
