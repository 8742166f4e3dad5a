#pragma once

// Square-law MOSFET with channel-length modulation used as a two-signal
// analog encoder: x1 drives V_ds, a quantized x2 drives V_gs, and the drain
// current carries both.

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ajscc/errors.hpp"

namespace ajscc {

/// Device constants of the saturation-region drain current model.
/// Defaults are a 0.18 um nMOS.
struct MosfetParams {
    double k_gain = 155e-6;    ///< A/V^2, the lumped W*mu*C_ox/L
    double v_th = 0.74;        ///< V
    double lambda_clm = 0.037; ///< 1/V

    void validate() const {
        detail::require<ConfigError>(k_gain > 0.0 && std::isfinite(k_gain), "k_gain must be > 0");
        detail::require<ConfigError>(v_th > 0.0 && std::isfinite(v_th), "v_th must be > 0");
        detail::require<ConfigError>(lambda_clm >= 0.0 && std::isfinite(lambda_clm),
                                     "lambda_clm must be >= 0");
    }
};

/// Quantization step and voltage ranges of the encoder.
struct AjsccConfig {
    double phi = 0.5;
    double vgs_lo = 1.0;
    double vgs_hi = 5.0;
    double vds_lo = 4.5;
    double vds_hi = 10.0;

    void validate(const MosfetParams& p) const {
        detail::require<ConfigError>(std::isfinite(phi) && phi > 0.0, "phi must be > 0");
        detail::require<ConfigError>(vgs_hi > vgs_lo, "vgs_hi must exceed vgs_lo");
        // small slack so that e.g. phi = 0.41 on [5, 10] is not rejected by rounding
        detail::require<ConfigError>(phi <= (vgs_hi - vgs_lo) * (1.0 + 1e-12),
                                     "phi must not exceed vgs_hi - vgs_lo");
        detail::require<ConfigError>(vds_hi > vds_lo, "vds_hi must exceed vds_lo");
        detail::require<ConfigError>(vgs_lo > p.v_th, "vgs_lo must lie above the threshold voltage");
    }
};

/// Discrete V_gs levels vgs_lo + i*phi, i = 0.. while the level stays <= vgs_hi.
class VgsGrid {
public:
    VgsGrid() = default;
    VgsGrid(double lo, double phi, std::size_t count) : lo_(lo), phi_(phi) {
        levels_.reserve(count);
        for (std::size_t i = 0; i < count; ++i) levels_.push_back(lo + static_cast<double>(i) * phi);
    }

    [[nodiscard]] std::size_t size() const noexcept { return levels_.size(); }
    [[nodiscard]] bool empty() const noexcept { return levels_.empty(); }
    [[nodiscard]] double operator[](std::size_t i) const { return levels_[i]; }
    [[nodiscard]] double front() const { return levels_.front(); }
    [[nodiscard]] double back() const { return levels_.back(); }
    [[nodiscard]] double phi() const noexcept { return phi_; }
    [[nodiscard]] std::span<const double> levels() const noexcept { return levels_; }
    [[nodiscard]] auto begin() const noexcept { return levels_.begin(); }
    [[nodiscard]] auto end() const noexcept { return levels_.end(); }

private:
    double lo_ = 0.0;
    double phi_ = 0.0;
    std::vector<double> levels_;
};

inline VgsGrid build_grid(const AjsccConfig& cfg, const MosfetParams& p = {}) {
    cfg.validate(p);
    const auto steps = static_cast<std::size_t>(std::floor((cfg.vgs_hi - cfg.vgs_lo) / cfg.phi + 1e-9));
    return VgsGrid(cfg.vgs_lo, cfg.phi, steps + 1);
}

struct Quantized {
    std::size_t index;
    double level;
};

/// Nearest grid level; exact ties go to the higher level and values outside
/// the grid clamp to the nearest endpoint.
inline Quantized quantize_to_grid(double v, const VgsGrid& grid) {
    detail::require<ConfigError>(!grid.empty(), "quantize_to_grid: empty grid");
    if (grid.size() == 1) return {0, grid[0]};
    const double pos = std::floor((v - grid.front()) / grid.phi() + 0.5);
    std::size_t idx = 0;
    if (pos >= static_cast<double>(grid.size() - 1))
        idx = grid.size() - 1;
    else if (pos > 0.0)
        idx = static_cast<std::size_t>(pos);
    return {idx, grid[idx]};
}

/// A(g) = k/2 * (g - v_th)^2, the V_ds-independent factor of the drain current.
inline double curve_gain(const MosfetParams& p, double vgs_level) {
    detail::require<DomainError>(vgs_level >= p.v_th, "curve_gain: vgs below threshold");
    const double ov = vgs_level - p.v_th;
    return 0.5 * p.k_gain * ov * ov;
}

/// Saturation-region drain current I_ds = A(vgs) * (1 + lambda * vds).
inline double drain_current(const MosfetParams& p, double vgs, double vds) {
    detail::require<DomainError>(vgs > p.v_th, "drain_current: vgs must exceed v_th");
    detail::require<DomainError>(vds >= 0.0, "drain_current: vds must be >= 0");
    return curve_gain(p, vgs) * (1.0 + p.lambda_clm * vds);
}

/// Diagnostic only; the encoder does not enforce vds > vgs - v_th.
inline bool in_saturation(const MosfetParams& p, double vgs, double vds) noexcept {
    return vds > vgs - p.v_th;
}

/// Closed-form inverse of drain_current along one curve.
inline double invert_vds(const MosfetParams& p, double vgs_level, double ids) {
    detail::require<DomainError>(vgs_level > p.v_th, "invert_vds: vgs must exceed v_th");
    detail::require<DomainError>(p.lambda_clm > 0.0, "invert_vds: undefined for lambda_clm = 0");
    return (ids / curve_gain(p, vgs_level) - 1.0) / p.lambda_clm;
}

struct EncodedSample {
    std::size_t level_index;
    double vgs_level;
    double ids;
    bool saturated;  ///< vds > vgs - v_th at the encoded point
};

inline EncodedSample encode_sample(const MosfetParams& p, const AjsccConfig& cfg, const VgsGrid& grid,
                                   double x1, double x2) {
    detail::require<DomainError>(x1 >= cfg.vds_lo && x1 <= cfg.vds_hi,
                                 "encode_sample: x1 outside [vds_lo, vds_hi]");
    const auto q = quantize_to_grid(x2, grid);
    return {q.index, q.level, drain_current(p, q.level, x1), in_saturation(p, q.level, x1)};
}

}  // namespace ajscc
