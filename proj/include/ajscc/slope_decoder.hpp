#pragma once

// Receiver-side recovery of (V_gs, V_ds) from consecutive drain currents.
//
// Two consecutive currents are assumed to lie on one curve. Their mean times
// lambda estimates the curve slope; each grid level g has the exact slope
// lambda*A(g). Levels are ranked by slope mismatch and the first whose
// inversions of both currents fall inside the transmitter's V_ds range is
// accepted (range-check correction).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "ajscc/errors.hpp"
#include "ajscc/mosfet.hpp"

namespace ajscc {

struct DecodeResult {
    double vgs_hat = 0.0;
    double vds_hat = 0.0;
    std::size_t level_index = 0;
    std::size_t correction_rank = 0;  ///< 0 when the best slope match was accepted
};

struct DecoderOptions {
    /// What to return when no candidate passes the range check.
    enum class Fallback {
        rank0,          ///< best slope match, inversions unbounded
        min_violation,  ///< candidate whose inversions stray least outside the range
    };

    double tau = 0.05;  ///< V, slack on both ends of the range check
    bool range_check = true;
    Fallback fallback = Fallback::min_violation;
};

/// lambda * (i1 + i2) / 2
inline double pair_slope_estimate(double i1, double i2, const MosfetParams& p) {
    return p.lambda_clm * 0.5 * (i1 + i2);
}

/// Exact dI_ds/dV_ds on the curve of level g; equals the two-point slope of
/// any two points on that curve.
inline double candidate_slope(const MosfetParams& p, double g) {
    return p.lambda_clm * curve_gain(p, g);
}

namespace detail {

inline void check_current(double i) {
    require<DomainError>(std::isfinite(i) && i >= 0.0, "decoder: currents must be finite and >= 0");
}

inline double range_violation(double v, double lo, double hi) {
    if (v < lo) return lo - v;
    if (v > hi) return v - hi;
    return 0.0;
}

}  // namespace detail

inline std::pair<DecodeResult, DecodeResult> decode_pair(double i1, double i2, const VgsGrid& grid,
                                                         const MosfetParams& p, double vds_lo,
                                                         double vds_hi, const DecoderOptions& opt = {}) {
    detail::require<ConfigError>(!grid.empty(), "decode_pair: empty grid");
    detail::check_current(i1);
    detail::check_current(i2);

    const double est = pair_slope_estimate(i1, i2, p);
    const std::size_t n = grid.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<double> mismatch(n);
    for (std::size_t j = 0; j < n; ++j) mismatch[j] = std::abs(est - candidate_slope(p, grid[j]));
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return mismatch[a] < mismatch[b]; });

    auto make = [&](std::size_t rank) {
        const std::size_t j = order[rank];
        const double g = grid[j];
        return std::pair{DecodeResult{g, invert_vds(p, g, i1), j, rank},
                         DecodeResult{g, invert_vds(p, g, i2), j, rank}};
    };

    if (!opt.range_check) return make(0);

    const double lo = vds_lo - opt.tau;
    const double hi = vds_hi + opt.tau;
    std::size_t best_rank = 0;
    double best_violation = INFINITY;
    for (std::size_t r = 0; r < n; ++r) {
        const double g = grid[order[r]];
        const double v1 = invert_vds(p, g, i1);
        const double v2 = invert_vds(p, g, i2);
        const double viol = detail::range_violation(v1, lo, hi) + detail::range_violation(v2, lo, hi);
        if (viol == 0.0) return make(r);
        if (viol < best_violation) {
            best_violation = viol;
            best_rank = r;
        }
    }
    return make(opt.fallback == DecoderOptions::Fallback::rank0 ? 0 : best_rank);
}

/// Decodes one sensor's time series. Sample k >= 1 takes the second result of
/// pair (k-1, k); sample 0 takes the first result of pair (0, 1).
inline std::vector<DecodeResult> decode_series(std::span<const double> ids, const VgsGrid& grid,
                                               const MosfetParams& p, double vds_lo, double vds_hi,
                                               const DecoderOptions& opt = {}) {
    detail::require<InsufficientDataError>(ids.size() >= 2, "decode_series: need at least two samples");
    std::vector<DecodeResult> out(ids.size());
    out[0] = decode_pair(ids[0], ids[1], grid, p, vds_lo, vds_hi, opt).first;
    for (std::size_t k = 1; k < ids.size(); ++k)
        out[k] = decode_pair(ids[k - 1], ids[k], grid, p, vds_lo, vds_hi, opt).second;
    return out;
}

}  // namespace ajscc
