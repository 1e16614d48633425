#pragma once

#include "qmsurf/errors.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qmsurf {

/// A fibered surface f: X -> C described by its combinatorics.
struct FibrationData {
    int genus_base = 0;
    int fiber_genus = 1;
    std::vector<std::int64_t> singular_fibers;  // component counts m_s
    std::optional<std::int64_t> h11;
    std::optional<std::int64_t> geometric_genus;  // p_g = 0 forces H^2 = H^{1,1}
};

inline void validate(const FibrationData& data) {
    require(data.genus_base >= 0, ErrorCode::PreconditionViolation, "base genus must be nonnegative");
    require(data.fiber_genus >= 1, ErrorCode::PreconditionViolation, "fiber genus must be at least 1");
    for (auto m : data.singular_fibers)
        require(m >= 1, ErrorCode::PreconditionViolation, "component count " + std::to_string(m) + " < 1");
}

struct LerayRanks {
    std::int64_t rank_L0L1 = 1;  // section + fiber components not multiples of the fiber
    std::int64_t rank_L2L3 = 1;  // class of a fiber
    std::optional<std::int64_t> rank_middle_if_h11;
};

inline LerayRanks leray_ranks(const FibrationData& data) {
    validate(data);
    LerayRanks ranks;
    for (auto m : data.singular_fibers) ranks.rank_L0L1 += m - 1;
    if (data.h11) {
        const std::int64_t middle = *data.h11 - ranks.rank_L0L1 - ranks.rank_L2L3;
        require(middle >= 0, ErrorCode::InconsistentH11,
                "h11 = " + std::to_string(*data.h11) + " is smaller than the divisor classes already present");
        ranks.rank_middle_if_h11 = middle;
    }
    return ranks;
}

struct PicardVerdict {
    std::int64_t rho = 0;  // exact when maximal, otherwise a lower bound
    bool maximal = false;
    bool exact = false;
};

/// Extremal fibrations are Picard maximal; otherwise only the divisor span of
/// the outer Leray pieces is certified.
inline PicardVerdict picard_verdict(const FibrationData& data, bool extremal) {
    require(data.h11.has_value(), ErrorCode::MissingH11, "h11 must be supplied");
    const LerayRanks ranks = leray_ranks(data);
    const bool no_transcendental = data.geometric_genus && *data.geometric_genus == 0;
    if (extremal || no_transcendental || *ranks.rank_middle_if_h11 == 0) return {*data.h11, true, true};
    return {ranks.rank_L0L1 + ranks.rank_L2L3, false, false};
}

}  // namespace qmsurf
