#pragma once

#include <stdexcept>
#include <string>

namespace weylscope {

enum class ErrorKind {
    ParseError,
    SymmetryError,
    ArityError,
    UnknownSymbol,
    DomainError,
    DivisionNearZero,
    NotPositiveDefinite,
    DimensionTooSmall,
    ShapeMismatch,
    StencilOutOfDomain,
    GaugeInstability,
    RankDrift,
    RankNotOne,
    OddDimensionRequired,
    EvenDimension,
    NoAdmissiblePair,
    RankZeroOmega,
    KernelEscape,
    BadParams,
    BadKind,
    ConfigError,
};

inline const char* error_kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::SymmetryError: return "SymmetryError";
        case ErrorKind::ArityError: return "ArityError";
        case ErrorKind::UnknownSymbol: return "UnknownSymbol";
        case ErrorKind::DomainError: return "DomainError";
        case ErrorKind::DivisionNearZero: return "DivisionNearZero";
        case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
        case ErrorKind::DimensionTooSmall: return "DimensionTooSmall";
        case ErrorKind::ShapeMismatch: return "ShapeMismatch";
        case ErrorKind::StencilOutOfDomain: return "StencilOutOfDomain";
        case ErrorKind::GaugeInstability: return "GaugeInstability";
        case ErrorKind::RankDrift: return "RankDrift";
        case ErrorKind::RankNotOne: return "RankNotOne";
        case ErrorKind::OddDimensionRequired: return "OddDimensionRequired";
        case ErrorKind::EvenDimension: return "EvenDimension";
        case ErrorKind::NoAdmissiblePair: return "NoAdmissiblePair";
        case ErrorKind::RankZeroOmega: return "RankZeroOmega";
        case ErrorKind::KernelEscape: return "KernelEscape";
        case ErrorKind::BadParams: return "BadParams";
        case ErrorKind::BadKind: return "BadKind";
        case ErrorKind::ConfigError: return "ConfigError";
    }
    return "Error";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message),
          kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void raise(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

} // namespace weylscope
