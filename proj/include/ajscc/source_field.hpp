#pragma once

// Ground-truth sensor fields. Six fixed unit-interval source distributions,
// their exact densities, samplers, and a 3-D (x, y, time) field generator
// with block-wise spatio-temporal correlation.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/math/special_functions/erf.hpp>

#include "ajscc/errors.hpp"
#include "ajscc/random.hpp"

namespace ajscc {

enum class DistributionKind { normal, uniform, cosine, triangular, invgau, weibull };

inline constexpr std::array<DistributionKind, 6> all_distribution_kinds{
    DistributionKind::normal,     DistributionKind::uniform, DistributionKind::cosine,
    DistributionKind::triangular, DistributionKind::invgau,  DistributionKind::weibull};

inline constexpr std::string_view to_string(DistributionKind k) {
    switch (k) {
        case DistributionKind::normal: return "normal";
        case DistributionKind::uniform: return "uniform";
        case DistributionKind::cosine: return "cosine";
        case DistributionKind::triangular: return "triangular";
        case DistributionKind::invgau: return "invgau";
        case DistributionKind::weibull: return "weibull";
    }
    return "?";
}

inline std::optional<DistributionKind> parse_distribution(std::string_view s) {
    for (auto k : all_distribution_kinds)
        if (to_string(k) == s) return k;
    return std::nullopt;
}

namespace dist {

// Parameterizations on [0, 1]. normal, invgau and weibull are truncated to
// the unit interval and renormalized.
inline constexpr double normal_mu = 0.5;
inline constexpr double normal_sigma = 0.15;
inline constexpr double invgau_mu = 0.3;
inline constexpr double invgau_shape = 1.0;
inline constexpr double weibull_shape = 1.5;
inline constexpr double weibull_scale = 0.35;

inline double std_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

inline double normal_raw_cdf(double x) { return std_normal_cdf((x - normal_mu) / normal_sigma); }

inline double invgau_raw_cdf(double x) {
    if (x <= 0.0) return 0.0;
    const double r = std::sqrt(invgau_shape / x);
    return std_normal_cdf(r * (x / invgau_mu - 1.0)) +
           std::exp(2.0 * invgau_shape / invgau_mu) * std_normal_cdf(-r * (x / invgau_mu + 1.0));
}

inline double weibull_raw_cdf(double x) {
    if (x <= 0.0) return 0.0;
    return -std::expm1(-std::pow(x / weibull_scale, weibull_shape));
}

inline double normal_mass() {
    static const double m = normal_raw_cdf(1.0) - normal_raw_cdf(0.0);
    return m;
}
inline double invgau_mass() {
    static const double m = invgau_raw_cdf(1.0);
    return m;
}
inline double weibull_mass() {
    static const double m = weibull_raw_cdf(1.0);
    return m;
}

inline double invgau_raw_pdf(double x) {
    if (x <= 0.0) return 0.0;
    const double d = x - invgau_mu;
    return std::sqrt(invgau_shape / (2.0 * std::numbers::pi * x * x * x)) *
           std::exp(-invgau_shape * d * d / (2.0 * invgau_mu * invgau_mu * x));
}

}  // namespace dist

/// Density of `kind` on [0, 1]; zero outside.
inline double pdf_unit(DistributionKind kind, double x) {
    if (!(x >= 0.0 && x <= 1.0)) return 0.0;
    switch (kind) {
        case DistributionKind::uniform: return 1.0;
        case DistributionKind::normal: {
            const double z = (x - dist::normal_mu) / dist::normal_sigma;
            return std::exp(-0.5 * z * z) / (dist::normal_sigma * std::sqrt(2.0 * std::numbers::pi)) /
                   dist::normal_mass();
        }
        case DistributionKind::cosine: return 1.0 - std::cos(2.0 * std::numbers::pi * x);
        case DistributionKind::triangular: return x < 0.5 ? 4.0 * x : 4.0 * (1.0 - x);
        case DistributionKind::invgau: return dist::invgau_raw_pdf(x) / dist::invgau_mass();
        case DistributionKind::weibull: {
            if (x <= 0.0) return 0.0;
            const double t = x / dist::weibull_scale;
            return dist::weibull_shape / dist::weibull_scale * std::pow(t, dist::weibull_shape - 1.0) *
                   std::exp(-std::pow(t, dist::weibull_shape)) / dist::weibull_mass();
        }
    }
    return 0.0;
}

/// Closed-form CDF on [0, 1].
inline double cdf_unit(DistributionKind kind, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    switch (kind) {
        case DistributionKind::uniform: return x;
        case DistributionKind::normal:
            return (dist::normal_raw_cdf(x) - dist::normal_raw_cdf(0.0)) / dist::normal_mass();
        case DistributionKind::cosine: return x - std::sin(2.0 * std::numbers::pi * x) / (2.0 * std::numbers::pi);
        case DistributionKind::triangular: return x < 0.5 ? 2.0 * x * x : 1.0 - 2.0 * (1.0 - x) * (1.0 - x);
        case DistributionKind::invgau: return dist::invgau_raw_cdf(x) / dist::invgau_mass();
        case DistributionKind::weibull: return dist::weibull_raw_cdf(x) / dist::weibull_mass();
    }
    return 0.0;
}

namespace detail {

inline double invgau_pdf_bound() {
    static const double bound = [] {
        double m = 0.0;
        for (int i = 1; i <= 20000; ++i) m = std::max(m, pdf_unit(DistributionKind::invgau, i / 20000.0));
        return 1.02 * m;
    }();
    return bound;
}

}  // namespace detail

/// One draw; inverse CDF for uniform, normal, triangular and weibull,
/// rejection from a uniform proposal for cosine and invgau.
inline double sample_unit(DistributionKind kind, Engine& eng) {
    switch (kind) {
        case DistributionKind::uniform: return boost::random::uniform_01<double>()(eng);
        case DistributionKind::normal: {
            const double lo = dist::normal_raw_cdf(0.0);
            const double p = lo + uniform_open01(eng) * dist::normal_mass();
            const double z = std::numbers::sqrt2 * boost::math::erf_inv(2.0 * p - 1.0);
            return std::clamp(dist::normal_mu + dist::normal_sigma * z, 0.0, 1.0);
        }
        case DistributionKind::triangular: {
            const double u = boost::random::uniform_01<double>()(eng);
            return u < 0.5 ? std::sqrt(u / 2.0) : 1.0 - std::sqrt((1.0 - u) / 2.0);
        }
        case DistributionKind::weibull: {
            const double u = boost::random::uniform_01<double>()(eng);
            const double x = dist::weibull_scale *
                             std::pow(-std::log1p(-u * dist::weibull_mass()), 1.0 / dist::weibull_shape);
            return std::clamp(x, 0.0, 1.0);
        }
        case DistributionKind::cosine:
            for (;;) {
                const double x = boost::random::uniform_01<double>()(eng);
                if (2.0 * boost::random::uniform_01<double>()(eng) < pdf_unit(kind, x)) return x;
            }
        case DistributionKind::invgau: {
            const double bound = detail::invgau_pdf_bound();
            for (;;) {
                const double x = boost::random::uniform_01<double>()(eng);
                if (bound * boost::random::uniform_01<double>()(eng) < pdf_unit(kind, x)) return x;
            }
        }
    }
    return 0.0;
}

inline std::vector<double> sample_unit(DistributionKind kind, std::size_t n, Engine& eng) {
    detail::require<DomainError>(n >= 1, "sample_unit: n must be >= 1");
    std::vector<double> out(n);
    for (auto& v : out) v = sample_unit(kind, eng);
    return out;
}

inline double affine_scale(double x, double lo, double hi) { return lo + (hi - lo) * x; }
inline double affine_unscale(double y, double lo, double hi) { return (y - lo) / (hi - lo); }

inline std::vector<double> affine_scale(std::span<const double> xs, double lo, double hi) {
    std::vector<double> out(xs.size());
    std::transform(xs.begin(), xs.end(), out.begin(), [&](double x) { return affine_scale(x, lo, hi); });
    return out;
}

/// Density of lo + (hi - lo) * X for X ~ kind.
inline double scaled_pdf(DistributionKind kind, double y, double lo, double hi) {
    return pdf_unit(kind, affine_unscale(y, lo, hi)) / (hi - lo);
}

struct FieldConfig {
    enum class Correlation { block, iid };

    std::size_t nx = 20, ny = 20, nt = 20;
    std::size_t s_p = 10;  ///< spatial block edge, sensors
    std::size_t t_p = 10;  ///< temporal window, samples
    Correlation correlation_mode = Correlation::block;
    double jitter_sigma = 0.02;  ///< on the unit interval
    double scale_lo = 5.0;
    double scale_hi = 10.0;

    void validate() const {
        detail::require<ConfigError>(nx > 0 && ny > 0 && nt > 0, "field dimensions must be positive");
        detail::require<ConfigError>(s_p > 0 && t_p > 0, "s_p and t_p must be positive");
        detail::require<ConfigError>(nx % s_p == 0 && ny % s_p == 0, "s_p must divide nx and ny");
        detail::require<ConfigError>(nt % t_p == 0, "t_p must divide nt");
        detail::require<ConfigError>(jitter_sigma >= 0.0 && std::isfinite(jitter_sigma), "jitter_sigma must be >= 0");
        detail::require<ConfigError>(scale_hi > scale_lo, "scale_hi must exceed scale_lo");
    }

    [[nodiscard]] std::size_t cells() const { return nx * ny * nt; }
    [[nodiscard]] std::size_t blocks() const { return (nx / s_p) * (ny / s_p) * (nt / t_p); }
    [[nodiscard]] std::size_t index(std::size_t i, std::size_t j, std::size_t t) const { return (i * ny + j) * nt + t; }
};

/// x1 (V_ds) and x2 (V_gs) samples laid out as [nx][ny][nt], time fastest.
struct SensorField {
    FieldConfig cfg;
    std::vector<double> x1;
    std::vector<double> x2;
    DistributionKind kind_x1 = DistributionKind::uniform;
    DistributionKind kind_x2 = DistributionKind::uniform;
};

namespace detail {

template <class Fn>
void for_each_block(const FieldConfig& cfg, Fn&& fn) {
    std::size_t b = 0;
    for (std::size_t bi = 0; bi < cfg.nx / cfg.s_p; ++bi)
        for (std::size_t bj = 0; bj < cfg.ny / cfg.s_p; ++bj)
            for (std::size_t bt = 0; bt < cfg.nt / cfg.t_p; ++bt) fn(b++, bi, bj, bt);
}

template <class Fn>
void for_each_cell_in_block(const FieldConfig& cfg, std::size_t bi, std::size_t bj, std::size_t bt, Fn&& fn) {
    for (std::size_t i = bi * cfg.s_p; i < (bi + 1) * cfg.s_p; ++i)
        for (std::size_t j = bj * cfg.s_p; j < (bj + 1) * cfg.s_p; ++j)
            for (std::size_t t = bt * cfg.t_p; t < (bt + 1) * cfg.t_p; ++t) fn(cfg.index(i, j, t));
}

inline void fill_signal(const FieldConfig& cfg, DistributionKind kind, std::uint64_t seed, std::vector<double>& out) {
    out.assign(cfg.cells(), 0.0);
    for_each_block(cfg, [&](std::size_t b, std::size_t bi, std::size_t bj, std::size_t bt) {
        Engine eng(derive_seed(seed, {b}));
        if (cfg.correlation_mode == FieldConfig::Correlation::iid) {
            for_each_cell_in_block(cfg, bi, bj, bt, [&](std::size_t c) {
                out[c] = affine_scale(sample_unit(kind, eng), cfg.scale_lo, cfg.scale_hi);
            });
            return;
        }
        const double base = sample_unit(kind, eng);
        for_each_cell_in_block(cfg, bi, bj, bt, [&](std::size_t c) {
            double v = base;
            if (cfg.jitter_sigma > 0.0) v = std::clamp(base + cfg.jitter_sigma * standard_normal(eng), 0.0, 1.0);
            out[c] = affine_scale(v, cfg.scale_lo, cfg.scale_hi);
        });
    });
}

}  // namespace detail

/// Block mode: one base draw per (s_p x s_p block, t_p window) and signal,
/// cells = base + N(0, jitter_sigma^2) clipped to [0, 1]. iid mode: every
/// cell drawn independently. Both are then scaled to [scale_lo, scale_hi].
inline SensorField generate_field(const FieldConfig& cfg, DistributionKind kind_x1, DistributionKind kind_x2,
                                  std::uint64_t seed) {
    cfg.validate();
    SensorField f;
    f.cfg = cfg;
    f.kind_x1 = kind_x1;
    f.kind_x2 = kind_x2;
    detail::fill_signal(cfg, kind_x1, derive_seed(seed, "x1"), f.x1);
    detail::fill_signal(cfg, kind_x2, derive_seed(seed, "x2"), f.x2);
    return f;
}

}  // namespace ajscc
