#pragma once

#include <algorithm>
#include <compare>
#include <string>
#include <variant>
#include <vector>

namespace rebac {

// An atomic value: a Boolean or an object id / id-string.
// variant ordering (bool alternatives first, false < true, strings
// lexicographic) doubles as the canonical total order on atomics.
using Atomic = std::variant<bool, std::string>;

std::string atomicToString(const Atomic& a);

/// Result of navigating a path from an object: no value, one atomic,
/// or a set of atomics (for multiplicity-many paths).
class Value {
public:
    enum class Kind { Absent, Single, Set };

    Value() = default;

    static Value absent() { return Value(Kind::Absent, {}, {}); }
    static Value single(Atomic a) { return Value(Kind::Single, std::move(a), {}); }
    static Value set(std::vector<Atomic> atoms) {
        std::sort(atoms.begin(), atoms.end());
        atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
        return Value(Kind::Set, {}, std::move(atoms));
    }

    Kind kind() const { return kind_; }
    bool isAbsent() const { return kind_ == Kind::Absent; }
    bool isSingle() const { return kind_ == Kind::Single; }
    bool isSet() const { return kind_ == Kind::Set; }

    const Atomic& atom() const { return single_; }

    /// Sorted, deduplicated elements; valid only for Kind::Set.
    const std::vector<Atomic>& atoms() const { return setAtoms_; }

    bool setContains(const Atomic& a) const {
        return std::binary_search(setAtoms_.begin(), setAtoms_.end(), a);
    }

    friend bool operator==(const Value&, const Value&) = default;

private:
    Value(Kind k, Atomic s, std::vector<Atomic> v)
        : kind_(k), single_(std::move(s)), setAtoms_(std::move(v)) {}

    Kind kind_ = Kind::Absent;
    Atomic single_;
    std::vector<Atomic> setAtoms_;
};

// Set relations on sorted atom vectors.
bool atomSetSupseteq(const std::vector<Atomic>& lhs, const std::vector<Atomic>& rhs);
bool atomSetSubseteq(const std::vector<Atomic>& lhs, const std::vector<Atomic>& rhs);

std::string valueToString(const Value& v);

} // namespace rebac
