#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bmforge {

/// Numerical tolerances shared by every module.
///
/// `geom` is the absolute length tolerance for polygon canonicalization and
/// containment, `det` bounds admissible affine determinants, `cert` is the
/// certificate tolerance and `weight` the minimum admissible John weight.
struct Tolerances {
    double geom = 1e-9;
    double det = 1e-12;
    double cert = 1e-7;
    double weight = 1e-9;
};

enum class ErrorCode {
    DegenerateInput,
    OriginNotInterior,
    SingularMap,
    Infeasible,
    NonConverged,
    NoContacts,
    NoCertificate,
    InfeasibleWeights,
    WrongArity,
    CertificateInvalid,
    NotAContactPoint,
    ChainViolated,
    EpsilonTooLarge,
    PreconditionViolated,
    InconsistentConditions,
    NotSymmetric,
    UnknownScenario,
    ParameterOutOfRange,
    ParseError,
};

inline std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::DegenerateInput: return "DegenerateInput";
        case ErrorCode::OriginNotInterior: return "OriginNotInterior";
        case ErrorCode::SingularMap: return "SingularMap";
        case ErrorCode::Infeasible: return "Infeasible";
        case ErrorCode::NonConverged: return "NonConverged";
        case ErrorCode::NoContacts: return "NoContacts";
        case ErrorCode::NoCertificate: return "NoCertificate";
        case ErrorCode::InfeasibleWeights: return "InfeasibleWeights";
        case ErrorCode::WrongArity: return "WrongArity";
        case ErrorCode::CertificateInvalid: return "CertificateInvalid";
        case ErrorCode::NotAContactPoint: return "NotAContactPoint";
        case ErrorCode::ChainViolated: return "ChainViolated";
        case ErrorCode::EpsilonTooLarge: return "EpsilonTooLarge";
        case ErrorCode::PreconditionViolated: return "PreconditionViolated";
        case ErrorCode::InconsistentConditions: return "InconsistentConditions";
        case ErrorCode::NotSymmetric: return "NotSymmetric";
        case ErrorCode::UnknownScenario: return "UnknownScenario";
        case ErrorCode::ParameterOutOfRange: return "ParameterOutOfRange";
        case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the named codes.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace bmforge
