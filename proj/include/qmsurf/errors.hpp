#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qmsurf {

enum class ErrorCode {
    SplitAlgebra,
    DefiniteAlgebra,
    NotClosed,
    NotIntegral,
    RankDeficient,
    SaturationStuck,
    SearchExhausted,
    NotUnimodular,
    NotAUnit,
    NotInOrder,
    DegeneratePeriods,
    RiemannRelationViolation,
    StepTooSmall,
    StepTooLarge,
    NotSiegel,
    InconsistentH11,
    MissingH11,
    PreconditionViolation,
};

constexpr std::string_view error_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::SplitAlgebra: return "SplitAlgebra";
        case ErrorCode::DefiniteAlgebra: return "DefiniteAlgebra";
        case ErrorCode::NotClosed: return "NotClosed";
        case ErrorCode::NotIntegral: return "NotIntegral";
        case ErrorCode::RankDeficient: return "RankDeficient";
        case ErrorCode::SaturationStuck: return "SaturationStuck";
        case ErrorCode::SearchExhausted: return "SearchExhausted";
        case ErrorCode::NotUnimodular: return "NotUnimodular";
        case ErrorCode::NotAUnit: return "NotAUnit";
        case ErrorCode::NotInOrder: return "NotInOrder";
        case ErrorCode::DegeneratePeriods: return "DegeneratePeriods";
        case ErrorCode::RiemannRelationViolation: return "RiemannRelationViolation";
        case ErrorCode::StepTooSmall: return "StepTooSmall";
        case ErrorCode::StepTooLarge: return "StepTooLarge";
        case ErrorCode::NotSiegel: return "NotSiegel";
        case ErrorCode::InconsistentH11: return "InconsistentH11";
        case ErrorCode::MissingH11: return "MissingH11";
        case ErrorCode::PreconditionViolation: return "PreconditionViolation";
    }
    return "Unknown";
}

/// Every failure surfaced by the library carries one of the typed codes above.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& detail)
        : std::runtime_error(std::string(error_name(code)) + ": " + detail), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

inline void require(bool condition, ErrorCode code, const std::string& detail) {
    if (!condition) throw Error(code, detail);
}

}  // namespace qmsurf
