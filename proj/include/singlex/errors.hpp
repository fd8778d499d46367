#pragma once

#include <stdexcept>
#include <string>

namespace singlex {

// Base class for all recoverable errors raised by the library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct EmptyConcept : Error {
    EmptyConcept() : Error("concept text is empty or all whitespace") {}
};

struct SelfLoop : Error {
    explicit SelfLoop(const std::string& name)
        : Error("self-loop assertion on concept '" + name + "'") {}
};

struct ParseError : Error {
    ParseError(const std::string& what, std::size_t line)
        : Error("parse error at line " + std::to_string(line) + ": " + what),
          line_number(line) {}
    std::size_t line_number;
};

struct UnknownEmotion : Error {
    explicit UnknownEmotion(const std::string& label)
        : Error("unknown emotion category '" + label + "'") {}
};

struct UnknownRelation : Error {
    explicit UnknownRelation(const std::string& name)
        : Error("relation '" + name + "' is not registered") {}
};

struct SingularSource : Error {
    SingularSource() : Error("AUTO blend weight requested for an all-zero matrix") {}
};

struct NoConvergence : Error {
    explicit NoConvergence(std::size_t iters)
        : Error("Lanczos did not reach tolerance after " + std::to_string(iters) +
                " iterations") {}
};

struct RankTooLarge : Error {
    RankTooLarge(std::size_t k, std::size_t min_dim)
        : Error("requested rank " + std::to_string(k) + " exceeds min dimension " +
                std::to_string(min_dim)) {}
};

struct UnknownConcept : Error {
    explicit UnknownConcept(const std::string& name)
        : Error("concept '" + name + "' is not indexed in the space") {}
};

struct ZeroVector : Error {
    explicit ZeroVector(const std::string& name)
        : Error("concept '" + name + "' has an all-zero embedding") {}
};

struct OutOfRange : Error {
    explicit OutOfRange(const std::string& what) : Error(what) {}
};

struct EmptyInput : Error {
    explicit EmptyInput(const std::string& what) : Error(what) {}
};

struct DimensionMismatch : Error {
    DimensionMismatch(std::size_t expected, std::size_t got)
        : Error("dimension mismatch: expected " + std::to_string(expected) +
                ", got " + std::to_string(got)) {}
};

struct SingularSystem : Error {
    SingularSystem() : Error("normal equations are rank-deficient (lambda = 0)") {}
};

struct NoOverlap : Error {
    NoOverlap() : Error("no benchmark concept is present in the space") {}
};

struct AxisOutOfRange : Error {
    AxisOutOfRange(std::size_t axis, std::size_t k)
        : Error("axis " + std::to_string(axis) + " out of range for k = " +
                std::to_string(k)) {}
};

struct IoError : Error {
    explicit IoError(const std::string& path) : Error("cannot write '" + path + "'") {}
};

}  // namespace singlex
