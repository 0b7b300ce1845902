#include "ltail/errors.hpp"

namespace ltail {

const char* errc_name(Errc c) {
    switch (c) {
        case Errc::NotPrime: return "NotPrime";
        case Errc::BadReduction: return "BadReduction";
        case Errc::OverBound: return "OverBound";
        case Errc::GoodReduction: return "GoodReduction";
        case Errc::ZeroInput: return "ZeroInput";
        case Errc::NotCoprime: return "NotCoprime";
        case Errc::EmptyFamily: return "EmptyFamily";
        case Errc::InvalidConstraints: return "InvalidConstraints";
        case Errc::TableTooSmall: return "TableTooSmall";
        case Errc::NonFundamental: return "NonFundamental";
        case Errc::WrongSign: return "WrongSign";
        case Errc::AlphaOutOfRange: return "AlphaOutOfRange";
        case Errc::DegenerateSchedule: return "DegenerateSchedule";
        case Errc::IndexOutOfRange: return "IndexOutOfRange";
        case Errc::BadVariance: return "BadVariance";
        case Errc::NotPrimeSupported: return "NotPrimeSupported";
        case Errc::SupportViolation: return "SupportViolation";
        case Errc::OmegaViolation: return "OmegaViolation";
        case Errc::LengthExceeded: return "LengthExceeded";
        case Errc::TooLargeToFactor: return "TooLargeToFactor";
        case Errc::ConstraintViolation: return "ConstraintViolation";
        case Errc::CacheMiss: return "CacheMiss";
        case Errc::InsufficientData: return "InsufficientData";
        case Errc::NotWellFactorable: return "NotWellFactorable";
        case Errc::ROutOfRange: return "ROutOfRange";
        case Errc::BadTheta: return "BadTheta";
        case Errc::NotPSD: return "NotPSD";
        case Errc::DimMismatch: return "DimMismatch";
        case Errc::DimensionBlowup: return "DimensionBlowup";
        case Errc::ParseError: return "ParseError";
        case Errc::IoError: return "IoError";
    }
    return "Error";
}

}  // namespace ltail
