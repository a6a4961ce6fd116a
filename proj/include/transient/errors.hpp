#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace transient {

/// Root of every error the library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument is outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Target conversion that no finite time can reach (alpha = 1 or k = 0).
class UnreachableTargetError : public DomainError {
public:
    using DomainError::DomainError;
};

/// A DSC record releases no net heat, so conversion is undefined.
class ZeroEnthalpyError : public Error {
public:
    using Error::Error;
};

class FractureError : public Error {
public:
    FractureError(std::string material, double strain)
        : Error("material '" + material + "' fractured at strain " + std::to_string(strain)),
          material_(std::move(material)),
          strain_(strain) {}

    const std::string& material() const noexcept { return material_; }
    double strain() const noexcept { return strain_; }

private:
    std::string material_;
    double strain_;
};

/// Commanded pressure beyond the actuator's rated range.
class ActuationError : public Error {
public:
    using Error::Error;
};

/// Sensor input outside its calibrated validity band.
class ValidityError : public Error {
public:
    using Error::Error;
};

class SensorFailedError : public Error {
public:
    using Error::Error;
};

/// Malformed input text; carries the 1-based line number when known.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}
    explicit ParseError(const std::string& what) : ParseError(what, 0) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

/// Simulation reached a physically inconsistent state (e.g. left the world).
class SimulationFault : public Error {
public:
    using Error::Error;
};

}  // namespace transient
