#pragma once

#include "rebac/eval.hpp"
#include "rebac/model.hpp"
#include "rebac/rule.hpp"

#include <string>
#include <vector>

namespace rebac::testing {

struct ToyInstance {
    ClassModel cm;
    ObjectModel om;
    std::vector<std::string> actions;
    std::vector<Rule> rules;
    AuthorizationSet au;

    void finalize() {
        om.seal();
        om.validate(cm);
        for (auto& r : rules) r.canonicalize();
        au = AuthorizationSet(policyMeaning(cm, om, rules));
    }
};

inline Value one(const char* id) { return Value::single(Atomic{std::string(id)}); }
inline Value one(bool b) { return Value::single(Atomic{b}); }
inline Value many(std::vector<std::string> ids) {
    std::vector<Atomic> atoms;
    for (auto& s : ids) atoms.emplace_back(std::move(s));
    return Value::set(std::move(atoms));
}
inline std::vector<Atomic> ids(std::vector<std::string> v) {
    std::vector<Atomic> atoms;
    for (auto& s : v) atoms.emplace_back(std::move(s));
    return atoms;
}

/// Employees in three departments; documents readable by everyone outside
/// MechEng. The complement-form workout for negation elimination.
ToyInstance deptToy();

/// Physicians and their assigned medical records; trainees are shut out.
/// One condition plus one constraint in a single rule.
ToyInstance emrToy();

/// Bank employees reading documents related to their projects.
ToyInstance edocToy();

/// splitmix64; keeps seeded tests identical across platforms.
struct TestRng {
    std::uint64_t state;
    explicit TestRng(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        state += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    std::size_t below(std::size_t n) { return n == 0 ? 0 : next() % n; }
};

} // namespace rebac::testing
