#pragma once

#include <stdexcept>
#include <string>

namespace rdinv {

enum class ErrorCode {
    InvalidArgument,
    BlowUpDetected,
    NewtonDivergence,
    ProbeOutsideDomain,
    MalformedTraceFile,
    MalformedCoefficientFile,
    BudgetTooSmall,
    InvalidRoots,
    AsymmetricData,
    Io,
};

const char* to_string(ErrorCode code) noexcept;

/// Base of every error raised by the library. The code is what the C API
/// reports; the message carries the detail.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& what) : Error(ErrorCode::InvalidArgument, what) {}
};

/// The solution exceeded the blow-up cap before the requested horizon.
class BlowUpDetected : public Error {
public:
    BlowUpDetected(double time, double max_abs)
        : Error(ErrorCode::BlowUpDetected,
                "BlowUpDetected: max|u| = " + std::to_string(max_abs) + " at t = " + std::to_string(time)),
          time_(time) {}

    double time() const noexcept { return time_; }

private:
    double time_;
};

class NewtonDivergence : public Error {
public:
    NewtonDivergence(double time, const std::string& detail)
        : Error(ErrorCode::NewtonDivergence, "NewtonDivergence at t = " + std::to_string(time) + ": " + detail),
          time_(time) {}

    double time() const noexcept { return time_; }

private:
    double time_;
};

class ProbeOutsideDomain : public Error {
public:
    explicit ProbeOutsideDomain(const std::string& what) : Error(ErrorCode::ProbeOutsideDomain, what) {}
};

class MalformedTraceFile : public Error {
public:
    explicit MalformedTraceFile(const std::string& what) : Error(ErrorCode::MalformedTraceFile, what) {}
};

class MalformedCoefficientFile : public Error {
public:
    explicit MalformedCoefficientFile(const std::string& what)
        : Error(ErrorCode::MalformedCoefficientFile, what) {}
};

class BudgetTooSmall : public Error {
public:
    explicit BudgetTooSmall(const std::string& what) : Error(ErrorCode::BudgetTooSmall, what) {}
};

class InvalidRoots : public Error {
public:
    explicit InvalidRoots(const std::string& what) : Error(ErrorCode::InvalidRoots, what) {}
};

class AsymmetricData : public Error {
public:
    explicit AsymmetricData(const std::string& what) : Error(ErrorCode::AsymmetricData, what) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(ErrorCode::Io, what) {}
};

}  // namespace rdinv
