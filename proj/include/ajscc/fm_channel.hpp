#pragma once

// Frequency-modulated uplink: a drain current is mapped to a tone frequency,
// passed through a single-tap Rician gain with a random Doppler offset, buried
// in complex AWGN and recovered from the peak bin of an n_fft-point FFT.
//
// Everything runs at complex baseband with sample rate = bandwidth_hz, so a
// tone frequency in (0, BW) maps directly onto FFT bin f * n_fft / BW.

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <span>
#include <vector>

#include <fftw3.h>

#include "ajscc/errors.hpp"
#include "ajscc/random.hpp"

namespace ajscc {

struct ChannelConfig {
    enum class Mode { ideal, faded };
    /// How the received spectrum is produced; see transmit().
    enum class Synthesis { spectral, time_domain };

    double snr_db = 20.0;
    double bandwidth_hz = 200e3;
    std::size_t n_fft = 8192;
    double rician_k = 10.0;
    double doppler_frac = 0.02;
    double ids_max_ref = 1e-2;  ///< A; the largest current the link must carry
    Mode mode = Mode::faded;
    Synthesis synthesis = Synthesis::spectral;

    void validate() const {
        detail::require<ConfigError>(std::isfinite(snr_db), "snr_db must be finite");
        detail::require<ConfigError>(bandwidth_hz > 0.0 && std::isfinite(bandwidth_hz), "bandwidth_hz must be > 0");
        detail::require<ConfigError>(n_fft >= 64 && (n_fft & (n_fft - 1)) == 0,
                                     "n_fft must be a power of two >= 64");
        detail::require<ConfigError>(rician_k >= 0.0 && std::isfinite(rician_k), "rician_k must be >= 0");
        detail::require<ConfigError>(doppler_frac >= 0.0 && doppler_frac < 0.5, "doppler_frac must lie in [0, 0.5)");
        detail::require<ConfigError>(ids_max_ref > 0.0 && std::isfinite(ids_max_ref), "ids_max_ref must be > 0");
    }
};

struct Transmission {
    double true_freq = 0.0;     ///< Hz, before Doppler
    double received_ids = 0.0;  ///< A
    long bin_error = 0;         ///< detected bin minus the bin nearest true_freq
};

/// Hz per ampere; the largest current lands at 90% of the band.
inline double scale_factor(const ChannelConfig& cfg) { return 0.9 * cfg.bandwidth_hz / cfg.ids_max_ref; }

/// Per-sample noise variance for unit expected signal power.
inline double noise_variance(double snr_db) { return std::pow(10.0, -snr_db / 10.0); }

/// g = sqrt(K/(K+1)) + sqrt(1/(2(K+1))) * (z1 + i z2); E|g|^2 = 1.
inline std::complex<double> rician_gain(double k, Engine& eng) {
    const double los = std::sqrt(k / (k + 1.0));
    const double s = std::sqrt(1.0 / (2.0 * (k + 1.0)));
    const double z1 = standard_normal(eng);
    const double z2 = standard_normal(eng);
    return {los + s * z1, s * z2};
}

struct Baseband {
    std::vector<std::complex<double>> signal;  ///< faded tone
    std::vector<std::complex<double>> noise;
};

/// Time-domain samples of gain * exp(2 pi i nu n) plus CN(0, sigma2) noise,
/// nu = freq / bandwidth in cycles per sample.
inline Baseband synthesize_baseband(double freq_hz, std::complex<double> gain, double sigma2, std::size_t n,
                                    double bandwidth_hz, Engine& eng) {
    Baseband bb;
    bb.signal.resize(n);
    bb.noise.resize(n);
    const double nu = freq_hz / bandwidth_hz;
    const double s = std::sqrt(sigma2 / 2.0);
    for (std::size_t i = 0; i < n; ++i) {
        double cycles = nu * static_cast<double>(i);
        cycles -= std::floor(cycles);
        bb.signal[i] = gain * std::polar(1.0, 2.0 * std::numbers::pi * cycles);
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double re = standard_normal(eng);
        const double im = standard_normal(eng);
        bb.noise[i] = {s * re, s * im};
    }
    return bb;
}

namespace detail {

struct FftwBuffer {
    fftw_complex* ptr = nullptr;
    explicit FftwBuffer(std::size_t n) : ptr(fftw_alloc_complex(n)) {
        if (!ptr) throw std::bad_alloc();
    }
    ~FftwBuffer() { fftw_free(ptr); }
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;
};

// One FFTW_ESTIMATE plan per length. ESTIMATE keeps the algorithm choice
// independent of timing, so output is bit-identical between runs.
inline fftw_plan forward_plan(std::size_t n) {
    static std::mutex mutex;
    static std::map<std::size_t, fftw_plan> plans;
    std::lock_guard lock(mutex);
    auto it = plans.find(n);
    if (it != plans.end()) return it->second;
    FftwBuffer in(n), out(n);
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), in.ptr, out.ptr, FFTW_FORWARD, FFTW_ESTIMATE);
    plans.emplace(n, plan);
    return plan;
}

/// |sum_{n<N} exp(2 pi i x n)| = |sin(pi N x) / sin(pi x)|
inline double dirichlet_magnitude(double x, std::size_t n) {
    x -= std::round(x);
    const double den = std::sin(std::numbers::pi * x);
    if (std::abs(den) < 1e-15) return static_cast<double>(n);
    return std::abs(std::sin(std::numbers::pi * static_cast<double>(n) * x) / den);
}

}  // namespace detail

/// Index of the largest-magnitude FFT bin (first one on ties).
inline std::size_t fft_peak_bin(std::span<const std::complex<double>> samples) {
    const std::size_t n = samples.size();
    detail::require<ConfigError>(n >= 2 && (n & (n - 1)) == 0, "fft_peak_bin: length must be a power of two");
    detail::FftwBuffer in(n), out(n);
    for (std::size_t i = 0; i < n; ++i) {
        in.ptr[i][0] = samples[i].real();
        in.ptr[i][1] = samples[i].imag();
    }
    fftw_execute_dft(detail::forward_plan(n), in.ptr, out.ptr);
    std::size_t best = 0;
    double best_mag = -1.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double m = out.ptr[k][0] * out.ptr[k][0] + out.ptr[k][1] * out.ptr[k][1];
        if (m > best_mag) {
            best_mag = m;
            best = k;
        }
    }
    return best;
}

/// Draws the peak bin of |FFT(gain * tone + noise)| directly in the frequency
/// domain. The DFT of CN(0, sigma2) white noise is iid CN(0, n*sigma2) across
/// bins, and the tone contributes a Dirichlet kernel. Bins within
/// `half_window` of the tone are drawn explicitly; for the rest the tone
/// leakage (below -46 dB at 64 bins) is dropped and the largest noise-only
/// magnitude is sampled from the maximum-of-exponentials CDF.
inline std::size_t spectral_peak_bin(double nu, double gain_mag, double sigma2, std::size_t n, Engine& eng,
                                     std::size_t half_window = 64) {
    half_window = std::min(half_window, (n - 1) / 2);
    const double bin_var = static_cast<double>(n) * sigma2;
    const double s = std::sqrt(bin_var / 2.0);
    const auto nn = static_cast<long>(n);
    long k0 = static_cast<long>(std::llround(nu * static_cast<double>(n))) % nn;
    if (k0 < 0) k0 += nn;

    std::size_t best = 0;
    double best_mag2 = -1.0;
    const auto w = static_cast<long>(half_window);
    for (long d = -w; d <= w; ++d) {
        const long k = ((k0 + d) % nn + nn) % nn;
        const double a = gain_mag * detail::dirichlet_magnitude(nu - static_cast<double>(k) / static_cast<double>(n), n);
        const double re = a + s * standard_normal(eng);
        const double im = s * standard_normal(eng);
        const double m2 = re * re + im * im;
        if (m2 > best_mag2) {
            best_mag2 = m2;
            best = static_cast<std::size_t>(k);
        }
    }
    const std::size_t far = n - (2 * half_window + 1);
    if (far == 0) return best;
    // max of `far` iid Exp(bin_var): F(x) = (1 - exp(-x/bin_var))^far
    const double u = uniform_open01(eng);
    const double far_max2 = -bin_var * std::log(-std::expm1(std::log(u) / static_cast<double>(far)));
    if (far_max2 > best_mag2) {
        const auto r = static_cast<long>(uniform_index(eng, far));
        return static_cast<std::size_t>(((k0 + w + 1 + r) % nn + nn) % nn);
    }
    return best;
}

/// Sends one current through the channel:
///   f = S*ids; Doppler offset uniform in +-doppler_frac*f; Rician gain drawn
///   once; AWGN at snr_db relative to unit expected power; peak FFT bin b;
///   received = b * BW / n_fft / S.
inline Transmission transmit(double ids, const ChannelConfig& cfg, Engine& eng) {
    const double scale = scale_factor(cfg);
    const double f = scale * ids;
    detail::require<ModulationRangeError>(f > 0.0 && f < cfg.bandwidth_hz,
                                          "transmit: modulated frequency outside (0, bandwidth)");
    Transmission tx;
    tx.true_freq = f;
    if (cfg.mode == ChannelConfig::Mode::ideal) {
        tx.received_ids = ids;
        return tx;
    }
    const double delta = cfg.doppler_frac > 0.0 ? uniform(eng, -cfg.doppler_frac * f, cfg.doppler_frac * f) : 0.0;
    const auto gain = rician_gain(cfg.rician_k, eng);
    const double sigma2 = noise_variance(cfg.snr_db);

    std::size_t bin = 0;
    if (cfg.synthesis == ChannelConfig::Synthesis::time_domain) {
        auto bb = synthesize_baseband(f + delta, gain, sigma2, cfg.n_fft, cfg.bandwidth_hz, eng);
        for (std::size_t i = 0; i < cfg.n_fft; ++i) bb.signal[i] += bb.noise[i];
        bin = fft_peak_bin(bb.signal);
    } else {
        bin = spectral_peak_bin((f + delta) / cfg.bandwidth_hz, std::abs(gain), sigma2, cfg.n_fft, eng);
    }
    const double bin_hz = cfg.bandwidth_hz / static_cast<double>(cfg.n_fft);
    tx.received_ids = static_cast<double>(bin) * bin_hz / scale;
    tx.bin_error = static_cast<long>(bin) - static_cast<long>(std::llround(f / bin_hz));
    return tx;
}

/// Element-wise transmit; sample i uses the substream derive_seed(seed, {i}),
/// so results do not depend on how a caller splits the work.
inline std::vector<double> transmit_block(std::span<const double> ids, const ChannelConfig& cfg,
                                          std::uint64_t seed) {
    cfg.validate();
    std::vector<double> out(ids.size());
    if (cfg.mode == ChannelConfig::Mode::ideal) {
        Engine unused(0);
        for (std::size_t i = 0; i < ids.size(); ++i) out[i] = transmit(ids[i], cfg, unused).received_ids;
        return out;
    }
    for (std::size_t i = 0; i < ids.size(); ++i) {
        Engine eng(derive_seed(seed, {i}));
        out[i] = transmit(ids[i], cfg, eng).received_ids;
    }
    return out;
}

}  // namespace ajscc
