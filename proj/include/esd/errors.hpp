#pragma once

#include <stdexcept>
#include <string>

namespace esd {

// Base class for everything this library throws.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class NonSquare : public Error {
public:
    explicit NonSquare(const std::string& what) : Error(what) {}
};

class DimensionMismatch : public Error {
public:
    explicit DimensionMismatch(const std::string& what) : Error(what) {}
};

class ConvergenceFailure : public Error {
public:
    explicit ConvergenceFailure(const std::string& what) : Error(what) {}
};

class InvalidNormalization : public Error {
public:
    explicit InvalidNormalization(const std::string& what) : Error(what) {}
};

class InvalidParams : public Error {
public:
    explicit InvalidParams(const std::string& what) : Error(what) {}
};

class InvalidDensityMatrix : public Error {
public:
    explicit InvalidDensityMatrix(const std::string& what) : Error(what) {}
};

// density_to_xstate: the matrix has entries outside the X pattern, or the
// two middle populations differ beyond tolerance.
class NotXForm : public Error {
public:
    explicit NotXForm(const std::string& what) : Error(what) {}
};

class StepTooLarge : public Error {
public:
    explicit StepTooLarge(const std::string& what) : Error(what) {}
};

class NotEntangledInitially : public Error {
public:
    explicit NotEntangledInitially(const std::string& what) : Error(what) {}
};

class SingularSystem : public Error {
public:
    explicit SingularSystem(const std::string& what) : Error(what) {}
};

class PreparationLeak : public Error {
public:
    explicit PreparationLeak(const std::string& what) : Error(what) {}
};

class NonUnitaryCompletion : public Error {
public:
    explicit NonUnitaryCompletion(const std::string& what) : Error(what) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(what) {}
};

} // namespace esd
