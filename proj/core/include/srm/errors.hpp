#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace srm {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// ---- ingestion / shape errors -------------------------------------------

class MalformedRow : public Error {
public:
    MalformedRow(std::size_t line, const std::string& msg)
        : Error("series: malformed row at line " + std::to_string(line) + ": " + msg),
          line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

class NonMonotonicTimestamps : public Error {
public:
    using Error::Error;
};

class StepMismatch : public Error {
public:
    using Error::Error;
};

class LengthMismatch : public Error {
public:
    using Error::Error;
};

class AlignmentError : public Error {
public:
    using Error::Error;
};

class InsufficientHistory : public Error {
public:
    using Error::Error;
};

// ---- statistics ----------------------------------------------------------

class NoValidData : public Error {
public:
    using Error::Error;
};

class NotEnoughValidData : public Error {
public:
    using Error::Error;
};

class NotEnoughValidPairs : public Error {
public:
    using Error::Error;
};

/// The series is constant, so correlations are undefined.
class ZeroVariance : public Error {
public:
    using Error::Error;
};

// ---- coefficient solver / grid --------------------------------------------

class NoAdmissibleSolution : public Error {
public:
    using Error::Error;
};

class OutsideGrid : public Error {
public:
    using Error::Error;
};

class NeighborUnsolved : public Error {
public:
    using Error::Error;
};

// ---- forecast models -------------------------------------------------------

class NoDaylightHistory : public Error {
public:
    using Error::Error;
};

class InvalidAlpha : public Error {
public:
    using Error::Error;
};

class EmptyEnsemble : public Error {
public:
    using Error::Error;
};

// ---- metrics ----------------------------------------------------------------

class ZeroNormalizer : public Error {
public:
    using Error::Error;
};

class ZeroDenominator : public Error {
public:
    using Error::Error;
};

// ---- synthetic generator ------------------------------------------------------

class UnstableSpec : public Error {
public:
    using Error::Error;
};

}  // namespace srm
