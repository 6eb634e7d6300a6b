#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mcbound {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when a configured resource cap is hit (elaboration, closure, oracle).
class ResourceLimit : public Error {
public:
    ResourceLimit(const std::string& what, std::size_t limit) : Error(what), limit_(limit) {}
    std::size_t limit() const noexcept { return limit_; }

private:
    std::size_t limit_;
};

class SyntaxError : public Error {
public:
    SyntaxError(const std::string& msg, int line, int column)
        : Error("syntax error at " + std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
          line_(line),
          column_(column) {}
    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

#define MCBOUND_DEFINE_ERROR(Name)                 \
    class Name : public Error {                    \
    public:                                        \
        using Error::Error;                        \
    }

MCBOUND_DEFINE_ERROR(ArityMismatch);
MCBOUND_DEFINE_ERROR(UnknownPoint);
MCBOUND_DEFINE_ERROR(UnknownVariable);
MCBOUND_DEFINE_ERROR(UnsatisfiableInvariant);
MCBOUND_DEFINE_ERROR(UnknownTransition);
MCBOUND_DEFINE_ERROR(MismatchedPoints);
MCBOUND_DEFINE_ERROR(NegativeCycle);
MCBOUND_DEFINE_ERROR(InconsistentRestriction);
MCBOUND_DEFINE_ERROR(NotInstrumented);
MCBOUND_DEFINE_ERROR(NotIdempotent);
MCBOUND_DEFINE_ERROR(NoBound);
MCBOUND_DEFINE_ERROR(InconsistentCertificate);
MCBOUND_DEFINE_ERROR(CertificateViolation);
MCBOUND_DEFINE_ERROR(PreconditionError);
MCBOUND_DEFINE_ERROR(DegenerateSamples);
MCBOUND_DEFINE_ERROR(FuelExhausted);
MCBOUND_DEFINE_ERROR(VariantViolation);
MCBOUND_DEFINE_ERROR(MissingFixture);

#undef MCBOUND_DEFINE_ERROR

class Explosion : public ResourceLimit {
public:
    using ResourceLimit::ResourceLimit;
};

class StateExplosion : public ResourceLimit {
public:
    using ResourceLimit::ResourceLimit;
};

}  // namespace mcbound
