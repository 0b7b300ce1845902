#pragma once

#include <stdexcept>
#include <string>

namespace ltail {

enum class Errc {
    NotPrime,
    BadReduction,
    OverBound,
    GoodReduction,
    ZeroInput,
    NotCoprime,
    EmptyFamily,
    InvalidConstraints,
    TableTooSmall,
    NonFundamental,
    WrongSign,
    AlphaOutOfRange,
    DegenerateSchedule,
    IndexOutOfRange,
    BadVariance,
    NotPrimeSupported,
    SupportViolation,
    OmegaViolation,
    LengthExceeded,
    TooLargeToFactor,
    ConstraintViolation,
    CacheMiss,
    InsufficientData,
    NotWellFactorable,
    ROutOfRange,
    BadTheta,
    NotPSD,
    DimMismatch,
    DimensionBlowup,
    ParseError,
    IoError,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace ltail
