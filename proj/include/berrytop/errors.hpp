#pragma once

#include "berrytop/types.hpp"

#include <cstddef>
#include <stdexcept>
#include <string>

namespace berrytop {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The effective field vanishes, so the adiabatic eigenstates are undefined.
class DegenerateField : public Error {
public:
    using Error::Error;
};

/// Evaluation point lies on the Dirac string of the requested chart.
class ChartSingular : public Error {
public:
    ChartSingular(Chart chart, const std::string& what) : Error(what), chart_(chart) {}
    Chart chart() const { return chart_; }

private:
    Chart chart_;
};

class NonPlanarField : public Error {
public:
    using Error::Error;
};

class ContractViolation : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Base for positioned errors raised by the field-expression language.
/// `position` is a 0-based byte offset into the expression source and
/// `component` names the field component ("bx", "by", "bz") when known.
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t position, std::string component = {});

    std::size_t position() const { return position_; }
    const std::string& component() const { return component_; }
    const std::string& message() const { return message_; }

    /// Rethrows the same error type tagged with a field component.
    [[noreturn]] virtual void rethrow_with_component(const std::string& component) const;

protected:
    static std::string format(const std::string& message, std::size_t position, const std::string& component);

private:
    std::string message_;
    std::size_t position_;
    std::string component_;
};

class LexError : public ParseError {
public:
    using ParseError::ParseError;
    [[noreturn]] void rethrow_with_component(const std::string& component) const override;
};

class SyntaxError : public ParseError {
public:
    using ParseError::ParseError;
    [[noreturn]] void rethrow_with_component(const std::string& component) const override;
};

class NameError : public ParseError {
public:
    NameError(std::string identifier, std::size_t position, std::string component = {});
    const std::string& identifier() const { return identifier_; }
    [[noreturn]] void rethrow_with_component(const std::string& component) const override;

private:
    std::string identifier_;
};

class EvalError : public ParseError {
public:
    using ParseError::ParseError;
    [[noreturn]] void rethrow_with_component(const std::string& component) const override;
};

}  // namespace berrytop
