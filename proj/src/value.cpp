#include "rebac/value.hpp"

#include <sstream>

namespace rebac {

std::string atomicToString(const Atomic& a) {
    if (std::holds_alternative<bool>(a)) return std::get<bool>(a) ? "true" : "false";
    return std::get<std::string>(a);
}

bool atomSetSupseteq(const std::vector<Atomic>& lhs, const std::vector<Atomic>& rhs) {
    return std::includes(lhs.begin(), lhs.end(), rhs.begin(), rhs.end());
}

bool atomSetSubseteq(const std::vector<Atomic>& lhs, const std::vector<Atomic>& rhs) {
    return std::includes(rhs.begin(), rhs.end(), lhs.begin(), lhs.end());
}

std::string valueToString(const Value& v) {
    switch (v.kind()) {
        case Value::Kind::Absent:
            return "_|_";
        case Value::Kind::Single:
            return atomicToString(v.atom());
        case Value::Kind::Set: {
            std::ostringstream os;
            os << "{";
            bool first = true;
            for (const auto& a : v.atoms()) {
                if (!first) os << ", ";
                os << atomicToString(a);
                first = false;
            }
            os << "}";
            return os.str();
        }
    }
    return "?";
}

} // namespace rebac
