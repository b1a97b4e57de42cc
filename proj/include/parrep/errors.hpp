#pragma once

#include <stdexcept>
#include <string>

namespace parrep {

/// Base class for all errors raised by the simulation and analysis code.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class AllReplicasExitedError : public Error {
public:
    explicit AllReplicasExitedError(const std::string& what) : Error(what) {}
};

class EmptyWindowError : public Error {
public:
    explicit EmptyWindowError(const std::string& what) : Error(what) {}
};

class InsufficientSamplesError : public Error {
public:
    explicit InsufficientSamplesError(const std::string& what) : Error(what) {}
};

class NegativeQuadraticFormError : public Error {
public:
    explicit NegativeQuadraticFormError(const std::string& what) : Error(what) {}
};

class ReducibleError : public Error {
public:
    explicit ReducibleError(const std::string& what) : Error(what) {}
};

class BoxTooSmallError : public Error {
public:
    explicit BoxTooSmallError(const std::string& what) : Error(what) {}
};

class SingularSystemError : public Error {
public:
    explicit SingularSystemError(const std::string& what) : Error(what) {}
};

class SchemaError : public Error {
public:
    SchemaError(const std::string& path, const std::string& what)
        : Error(path + ": " + what), field_path(path) {}
    std::string field_path;
};

}  // namespace parrep
