#pragma once

#include <stdexcept>
#include <string>

namespace rebac {

/// Ill-typed path, unknown object, or model inconsistency. Distinct from
/// the legal "no value" result of navigation.
class StructuralError : public std::runtime_error {
public:
    explicit StructuralError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input file (JSON shape, schema violation); carries location context.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Two feature vectors share every feature bit but differ in label: the
/// feature catalog (or its limits) cannot separate the dataset.
class UnseparableSubset : public std::runtime_error {
public:
    UnseparableSubset(std::string what, std::size_t vectorA, std::size_t vectorB)
        : std::runtime_error(std::move(what)), vectorA(vectorA), vectorB(vectorB) {}

    std::size_t vectorA;
    std::size_t vectorB;
};

/// All five negative-feature elimination substeps failed for a rule.
class NegationEliminationExhausted : public std::runtime_error {
public:
    explicit NegationEliminationExhausted(const std::string& what)
        : std::runtime_error(what) {}
};

} // namespace rebac
