#pragma once

// End-to-end link evaluation: field -> encoder -> FM channel -> slope decoder,
// scored by block-averaged MSE, and sweeps over phi, SNR and bandwidth.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ajscc/errors.hpp"
#include "ajscc/fm_channel.hpp"
#include "ajscc/mosfet.hpp"
#include "ajscc/parallel.hpp"
#include "ajscc/random.hpp"
#include "ajscc/slope_decoder.hpp"
#include "ajscc/source_field.hpp"

namespace ajscc {

struct MseReport {
    double mse_gs = 0.0;
    double mse_ds = 0.0;
    double mse_sum = 0.0;  ///< (mse_gs + mse_ds) / 2
};

inline MseReport make_report(double mse_gs, double mse_ds) { return {mse_gs, mse_ds, 0.5 * (mse_gs + mse_ds)}; }

/// Mean of each (s_p x s_p, t_p) block of a [nx][ny][nt] array, in
/// detail::for_each_block order.
inline std::vector<double> block_means(const FieldConfig& cfg, std::span<const double> data) {
    detail::require<ContractError>(data.size() == cfg.cells(), "block_means: array does not match the field shape");
    std::vector<double> out;
    out.reserve(cfg.blocks());
    const double cells = static_cast<double>(cfg.s_p * cfg.s_p * cfg.t_p);
    detail::for_each_block(cfg, [&](std::size_t, std::size_t bi, std::size_t bj, std::size_t bt) {
        double sum = 0.0;
        detail::for_each_cell_in_block(cfg, bi, bj, bt, [&](std::size_t c) { sum += data[c]; });
        out.push_back(sum / cells);
    });
    return out;
}

/// Per signal: mean over blocks of (block mean of truth - block mean of
/// decoded)^2. s_p and t_p override the field's own block sizes.
inline MseReport block_averaged_mse(const SensorField& truth, std::span<const double> x1_hat,
                                    std::span<const double> x2_hat, std::size_t s_p, std::size_t t_p) {
    FieldConfig cfg = truth.cfg;
    cfg.s_p = s_p;
    cfg.t_p = t_p;
    try {
        cfg.validate();
    } catch (const ConfigError& e) {
        throw ContractError(std::string("block_averaged_mse: ") + e.what());
    }
    detail::require<ContractError>(truth.x1.size() == cfg.cells() && truth.x2.size() == cfg.cells(),
                                   "block_averaged_mse: truth arrays do not match the field shape");
    detail::require<ContractError>(x1_hat.size() == cfg.cells() && x2_hat.size() == cfg.cells(),
                                   "block_averaged_mse: decoded arrays do not match the field shape");
    auto mse = [&](std::span<const double> a, std::span<const double> b) {
        const auto ma = block_means(cfg, a);
        const auto mb = block_means(cfg, b);
        double s = 0.0;
        for (std::size_t i = 0; i < ma.size(); ++i) s += (ma[i] - mb[i]) * (ma[i] - mb[i]);
        return s / static_cast<double>(ma.size());
    };
    return make_report(mse(truth.x2, x2_hat), mse(truth.x1, x1_hat));
}

inline MseReport block_averaged_mse(const SensorField& truth, std::span<const double> x1_hat,
                                    std::span<const double> x2_hat) {
    return block_averaged_mse(truth, x1_hat, x2_hat, truth.cfg.s_p, truth.cfg.t_p);
}

/// Everything one pipeline run needs. x2 drives V_gs directly, so the grid
/// spans the field's scaled range.
struct LinkSetup {
    FieldConfig field{};
    DistributionKind kind_x1 = DistributionKind::uniform;
    DistributionKind kind_x2 = DistributionKind::uniform;
    AjsccConfig ajscc{0.41, 5.0, 10.0, 4.5, 10.0};
    MosfetParams mosfet{};
    ChannelConfig channel{};
    DecoderOptions decoder{};

    void validate() const {
        field.validate();
        mosfet.validate();
        ajscc.validate(mosfet);
        channel.validate();
        detail::require<ConfigError>(field.nt >= 2, "nt must be >= 2 for pair decoding");
    }
};

struct LinkResult {
    SensorField truth;
    std::vector<double> x2_quantized;  ///< encoder V_gs level per cell
    std::vector<double> x1_hat;
    std::vector<double> x2_hat;
};

/// One realization of the full link. Each sensor's time series is encoded,
/// sent with channel substream derive_seed(seed, "channel", {sensor}) and
/// decoded pairwise in time order. The modulation reference current is the
/// drain current at (vgs_hi, vds_hi).
inline LinkResult simulate_link(const LinkSetup& setup, std::uint64_t seed) {
    setup.validate();
    const auto& fc = setup.field;
    LinkResult r;
    r.truth = generate_field(fc, setup.kind_x1, setup.kind_x2, derive_seed(seed, "field"));
    const auto grid = build_grid(setup.ajscc, setup.mosfet);
    ChannelConfig ch = setup.channel;
    ch.ids_max_ref = drain_current(setup.mosfet, setup.ajscc.vgs_hi, setup.ajscc.vds_hi);

    r.x2_quantized.resize(fc.cells());
    r.x1_hat.resize(fc.cells());
    r.x2_hat.resize(fc.cells());
    std::vector<double> ids(fc.nt);
    for (std::size_t i = 0; i < fc.nx; ++i) {
        for (std::size_t j = 0; j < fc.ny; ++j) {
            const std::size_t base = fc.index(i, j, 0);
            for (std::size_t t = 0; t < fc.nt; ++t) {
                const auto e = encode_sample(setup.mosfet, setup.ajscc, grid, r.truth.x1[base + t], r.truth.x2[base + t]);
                ids[t] = e.ids;
                r.x2_quantized[base + t] = e.vgs_level;
            }
            const auto rx = transmit_block(ids, ch, derive_seed(seed, "channel", {i * fc.ny + j}));
            const auto dec = decode_series(rx, grid, setup.mosfet, setup.ajscc.vds_lo, setup.ajscc.vds_hi, setup.decoder);
            for (std::size_t t = 0; t < fc.nt; ++t) {
                r.x1_hat[base + t] = dec[t].vds_hat;
                r.x2_hat[base + t] = dec[t].vgs_hat;
            }
        }
    }
    return r;
}

inline MseReport run_pipeline_once(const LinkSetup& setup, std::uint64_t seed) {
    const auto r = simulate_link(setup, seed);
    return block_averaged_mse(r.truth, r.x1_hat, r.x2_hat);
}

struct SweepPoint {
    double phi = 0.0;
    double snr_db = 0.0;
    double bandwidth_hz = 0.0;
    MseReport report{};
    std::uint64_t seed = 0;
};

struct PhiSweep {
    std::vector<SweepPoint> points;
    double phi_star = 0.0;
};

namespace detail {

inline MseReport mean_report(std::span<const MseReport> rs) {
    double gs = 0.0, ds = 0.0;
    for (const auto& r : rs) {
        gs += r.mse_gs;
        ds += r.mse_ds;
    }
    const auto n = static_cast<double>(rs.size());
    return make_report(gs / n, ds / n);
}

}  // namespace detail

/// Mean MseReport over `trials` runs per phi. Trial t uses the same seed at
/// every phi (common random numbers), so differences between phi values are
/// not masked by field-to-field variation. phi_star is the argmin of mean
/// mse_sum, ties to the smaller phi.
inline PhiSweep sweep_phi(const LinkSetup& setup, std::span<const double> phi_grid, std::size_t trials,
                          std::uint64_t seed, unsigned threads = 0) {
    detail::require<ConfigError>(!phi_grid.empty(), "sweep_phi: empty phi grid");
    detail::require<ConfigError>(trials >= 1, "sweep_phi: trials must be >= 1");
    for (std::size_t i = 1; i < phi_grid.size(); ++i)
        detail::require<ConfigError>(phi_grid[i] > phi_grid[i - 1], "sweep_phi: phi grid must be increasing");
    for (double phi : phi_grid) {
        LinkSetup s = setup;
        s.ajscc.phi = phi;
        s.validate();
    }

    const std::size_t np = phi_grid.size();
    const auto runs = parallel_map(np * trials, threads, [&](std::size_t w) {
        LinkSetup s = setup;
        s.ajscc.phi = phi_grid[w / trials];
        return run_pipeline_once(s, derive_seed(seed, "trial", {w % trials}));
    });

    PhiSweep out;
    for (std::size_t p = 0; p < np; ++p) {
        const auto rep = detail::mean_report(std::span(runs).subspan(p * trials, trials));
        out.points.push_back({phi_grid[p], setup.channel.snr_db, setup.channel.bandwidth_hz, rep, seed});
    }
    std::size_t best = 0;
    for (std::size_t p = 1; p < np; ++p)
        if (out.points[p].report.mse_sum < out.points[best].report.mse_sum) best = p;
    out.phi_star = out.points[best].phi;
    return out;
}

/// Full (snr x bandwidth) cross product at the setup's phi; every
/// (snr, bw, trial) gets its own seed. Rows are snr-major.
inline std::vector<SweepPoint> sweep_snr_bw(const LinkSetup& setup, std::span<const double> snr_grid,
                                            std::span<const double> bw_grid, std::size_t trials, std::uint64_t seed,
                                            unsigned threads = 0) {
    detail::require<ConfigError>(!snr_grid.empty() && !bw_grid.empty(), "sweep_snr_bw: empty grid");
    detail::require<ConfigError>(trials >= 1, "sweep_snr_bw: trials must be >= 1");
    const std::size_t ns = snr_grid.size(), nb = bw_grid.size();
    auto setup_for = [&](std::size_t si, std::size_t bi) {
        LinkSetup s = setup;
        s.channel.snr_db = snr_grid[si];
        s.channel.bandwidth_hz = bw_grid[bi];
        return s;
    };
    for (std::size_t si = 0; si < ns; ++si)
        for (std::size_t bi = 0; bi < nb; ++bi) setup_for(si, bi).validate();

    const auto runs = parallel_map(ns * nb * trials, threads, [&](std::size_t w) {
        const std::size_t t = w % trials, cell = w / trials;
        const std::size_t si = cell / nb, bi = cell % nb;
        return run_pipeline_once(setup_for(si, bi), derive_seed(seed, "snr_bw", {si, bi, t}));
    });

    std::vector<SweepPoint> out;
    for (std::size_t cell = 0; cell < ns * nb; ++cell) {
        const auto rep = detail::mean_report(std::span(runs).subspan(cell * trials, trials));
        out.push_back({setup.ajscc.phi, snr_grid[cell / nb], bw_grid[cell % nb], rep, seed});
    }
    return out;
}

}  // namespace ajscc
