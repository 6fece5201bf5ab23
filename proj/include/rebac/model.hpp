#pragma once

#include "rebac/value.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace rebac {

enum class Multiplicity { One, Optional, Many };

std::string multiplicityToString(Multiplicity m);
std::optional<Multiplicity> multiplicityFromString(const std::string& s);

/// Reserved type name for Boolean fields; any other field type is a class name.
inline constexpr const char* kBooleanType = "Boolean";
/// Type of the implicit `id` field.
inline constexpr const char* kStringType = "String";
/// Every class implicitly carries this field; it never appears in declarations.
inline constexpr const char* kIdField = "id";

struct FieldDecl {
    std::string name;
    std::string type; // class name, "Boolean", or "String" (implicit id only)
    Multiplicity multiplicity = Multiplicity::One;

    bool isBoolean() const { return type == kBooleanType; }
    bool isString() const { return type == kStringType; }
    bool isReference() const { return !isBoolean() && !isString(); }
};

/// The entity schema: class name -> declared fields, in declaration order.
class ClassModel {
public:
    void addClass(const std::string& name, std::vector<FieldDecl> fields);

    bool hasClass(const std::string& name) const { return classes_.count(name) != 0; }
    const std::map<std::string, std::vector<FieldDecl>>& classes() const { return classes_; }
    const std::vector<FieldDecl>& fieldsOf(const std::string& className) const;

    /// Declared field, or the implicit `id` field. Throws StructuralError if absent.
    const FieldDecl& field(const std::string& className, const std::string& fieldName) const;
    const FieldDecl* findField(const std::string& className, const std::string& fieldName) const;

    /// Checks reference targets, Boolean multiplicities, and the `id` reservation.
    void validate() const;

private:
    std::map<std::string, std::vector<FieldDecl>> classes_;
    static const FieldDecl idField_;
};

struct PathInfo {
    std::string type;          // terminal type: class name, Boolean, or String
    Multiplicity multiplicity; // many if any step is many; one if all one; else optional
};

/// Resolves type and multiplicity of a field-name sequence starting at
/// `startClass`. The empty path denotes the object itself (type startClass,
/// multiplicity one). Throws StructuralError on an ill-typed path.
PathInfo pathInfo(const ClassModel& cm, const std::string& startClass,
                  const std::vector<std::string>& path);

struct Object {
    std::string id;
    std::string type;
    std::map<std::string, Value> fields; // declared fields only; id is implicit
};

/// Immutable after load; all lookups are read-only.
class ObjectModel {
public:
    void addObject(Object obj);

    bool hasObject(const std::string& id) const { return index_.count(id) != 0; }
    const Object& object(const std::string& id) const;
    const Object* findObject(const std::string& id) const;

    /// Dense 0-based index assigned in id order; stable for a loaded model.
    std::size_t indexOf(const std::string& id) const;
    const Object& objectAt(std::size_t idx) const { return objects_[idx]; }
    std::size_t size() const { return objects_.size(); }

    /// Object ids of a class, sorted. Unknown classes yield an empty list.
    const std::vector<std::string>& objectsOfType(const std::string& className) const;

    /// Full type/multiplicity/reference-target consistency check against cm.
    void validate(const ClassModel& cm) const;

    /// Rebuilds the id -> dense-index mapping; call after the last addObject.
    void seal();

private:
    std::vector<Object> objects_;          // sorted by id after seal()
    std::map<std::string, std::size_t> index_;
    std::map<std::string, std::vector<std::string>> byType_;
    static const std::vector<std::string> emptyIds_;
};

} // namespace rebac
