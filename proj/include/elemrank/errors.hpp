#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace elemrank {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed value handed to a constructor (negative coefficient, empty family, ...).
class InvalidInputError : public Error {
public:
    explicit InvalidInputError(const std::string& msg) : Error(msg) {}
};

/// Syntax error with byte-accurate position information.
class ParseError : public Error {
public:
    ParseError(std::size_t offset, std::string expected, std::string found)
        : Error("parse error at offset " + std::to_string(offset) + ": expected " + expected
                + ", found " + found),
          offset_(offset),
          expected_(std::move(expected)),
          found_(std::move(found)) {}

    std::size_t offset() const { return offset_; }
    const std::string& expected() const { return expected_; }
    const std::string& found() const { return found_; }

private:
    std::size_t offset_;
    std::string expected_;
    std::string found_;
};

/// A group expression failed its structural checks.
class IllFormedError : public Error {
public:
    explicit IllFormedError(std::vector<std::string> violations)
        : Error(join(violations)), violations_(std::move(violations)) {}

    const std::vector<std::string>& violations() const { return violations_; }

private:
    static std::string join(const std::vector<std::string>& vs) {
        std::string msg = "ill-formed expression";
        for (const auto& v : vs) msg += "; " + v;
        return msg;
    }
    std::vector<std::string> violations_;
};

/// An operation was invoked outside the hypotheses of the rule that defines it.
class HypothesisError : public Error {
public:
    explicit HypothesisError(const std::string& msg) : Error(msg) {}
};

/// Arithmetic failure during evaluation: representation overflow or an
/// undefined step such as the predecessor of a limit ordinal.
class EvalError : public Error {
public:
    explicit EvalError(const std::string& msg) : Error(msg) {}
};

} // namespace elemrank
