#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace hplab {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (ln of a
/// nonpositive real, beta outside (0,1], eta <= 0, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(std::string message, std::size_t offset, std::vector<std::string> expected)
        : Error(format(message, offset, expected)), offset_(offset), expected_(std::move(expected))
    {}

    std::size_t offset() const noexcept { return offset_; }
    const std::vector<std::string>& expected() const noexcept { return expected_; }

private:
    static std::string format(const std::string& message, std::size_t offset,
                              const std::vector<std::string>& expected)
    {
        std::string out = message + " at byte " + std::to_string(offset);
        if (!expected.empty()) {
            out += " (expected one of:";
            for (const auto& e : expected) out += " " + e;
            out += ")";
        }
        return out;
    }

    std::size_t offset_;
    std::vector<std::string> expected_;
};

class UnknownIdentifier : public Error {
public:
    UnknownIdentifier(const std::string& name, std::size_t offset)
        : Error("unknown identifier '" + name + "' at byte " + std::to_string(offset)),
          name_(name)
    {}
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

class UnboundParameter : public Error {
public:
    explicit UnboundParameter(const std::string& name)
        : Error("unbound parameter '" + name + "'"), name_(name)
    {}
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

/// The Caputo closed-form table has no entry for the given profile.
class UnsupportedCaputoForm : public Error {
public:
    using Error::Error;
};

class EmptyValidityRegion : public Error {
public:
    using Error::Error;
};

/// Basis sample matrix failed the singular-value gate.
class IllConditionedBasis : public Error {
public:
    using Error::Error;
};

/// Failure inside a time-stepping run: Newton divergence, positivity loss,
/// maximum-principle violation. Carries the offending node and time.
class SolverError : public Error {
public:
    SolverError(const std::string& what, std::ptrdiff_t node, double time)
        : Error(what + " (node " + std::to_string(node) + ", t=" + std::to_string(time) + ")"),
          node_(node), time_(time)
    {}
    std::ptrdiff_t node() const noexcept { return node_; }
    double time() const noexcept { return time_; }

private:
    std::ptrdiff_t node_;
    double time_;
};

}  // namespace hplab
