#pragma once

// Source-distribution identification at the receiver: a kernel density
// estimate of the decoded samples is compared with every candidate density
// by Kullback-Leibler divergence D(candidate || KDE), minimized over kernel
// bandwidth and kernel shape; the candidate with the smallest minimum wins.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "ajscc/errors.hpp"
#include "ajscc/source_field.hpp"

namespace ajscc {

enum class KernelKind { normal, box, triangle, epanechnikov };

inline constexpr std::array<KernelKind, 4> all_kernel_kinds{KernelKind::normal, KernelKind::box, KernelKind::triangle,
                                                            KernelKind::epanechnikov};

inline constexpr std::string_view to_string(KernelKind k) {
    switch (k) {
        case KernelKind::normal: return "normal";
        case KernelKind::box: return "box";
        case KernelKind::triangle: return "triangle";
        case KernelKind::epanechnikov: return "epanechnikov";
    }
    return "?";
}

inline std::optional<KernelKind> parse_kernel(std::string_view s) {
    for (auto k : all_kernel_kinds)
        if (to_string(k) == s) return k;
    return std::nullopt;
}

inline double kernel_value(KernelKind k, double u) {
    const double a = std::abs(u);
    switch (k) {
        case KernelKind::normal: return std::exp(-0.5 * u * u) / std::sqrt(2.0 * std::numbers::pi);
        case KernelKind::box: return a <= 1.0 ? 0.5 : 0.0;
        case KernelKind::triangle: return a <= 1.0 ? 1.0 - a : 0.0;
        case KernelKind::epanechnikov: return a <= 1.0 ? 0.75 * (1.0 - u * u) : 0.0;
    }
    return 0.0;
}

struct KdeConfig {
    std::vector<double> h_grid{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
    std::vector<KernelKind> kernels{all_kernel_kinds.begin(), all_kernel_kinds.end()};
    std::size_t integration_points = 1024;
    double density_floor = 1e-12;

    void validate() const {
        detail::require<ConfigError>(!h_grid.empty(), "h_grid must not be empty");
        detail::require<ConfigError>(!kernels.empty(), "kernels must not be empty");
        for (std::size_t i = 0; i < h_grid.size(); ++i) {
            detail::require<ConfigError>(h_grid[i] > 0.0, "h_grid values must be > 0");
            if (i > 0) detail::require<ConfigError>(h_grid[i] > h_grid[i - 1], "h_grid must be strictly increasing");
        }
        detail::require<ConfigError>(integration_points >= 128, "integration_points must be >= 128");
        detail::require<ConfigError>(density_floor > 0.0, "density_floor must be > 0");
    }
};

/// (1 / (K h)) * sum_k f((y - y_k) / h), evaluated term by term.
inline double kde_pdf(std::span<const double> samples, double h, KernelKind k, double y) {
    detail::require<InsufficientDataError>(!samples.empty(), "kde_pdf: no samples");
    detail::require<DomainError>(h > 0.0, "kde_pdf: bandwidth must be > 0");
    double sum = 0.0;
    for (double s : samples) sum += kernel_value(k, (y - s) / h);
    return sum / (static_cast<double>(samples.size()) * h);
}

namespace detail {

struct WeightedPoints {
    std::vector<double> values;
    std::vector<double> weights;
};

inline WeightedPoints collapse_duplicates(std::span<const double> samples) {
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    WeightedPoints wp;
    for (double v : sorted) {
        if (!wp.values.empty() && wp.values.back() == v) {
            wp.weights.back() += 1.0;
        } else {
            wp.values.push_back(v);
            wp.weights.push_back(1.0);
        }
    }
    return wp;
}

}  // namespace detail

/// Uniform grid of n points on [lo, hi].
inline std::vector<double> linear_grid(double lo, double hi, std::size_t n) {
    std::vector<double> g(n);
    const double dx = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) g[i] = lo + dx * static_cast<double>(i);
    g.back() = hi;
    return g;
}

/// The KDE on linear_grid(lo, hi, n). Same sum as kde_pdf, organized per
/// sample: compact kernels only touch grid points within h, and the normal
/// kernel is walked outward from the nearest grid point with the exact
/// ratio recurrence of exp(-u^2/2) until it underflows.
inline std::vector<double> kde_on_grid(std::span<const double> samples, double h, KernelKind k, double lo, double hi,
                                       std::size_t n) {
    detail::require<InsufficientDataError>(!samples.empty(), "kde_on_grid: no samples");
    detail::require<DomainError>(h > 0.0, "kde_on_grid: bandwidth must be > 0");
    detail::require<DomainError>(hi > lo && n >= 2, "kde_on_grid: bad grid");
    const auto grid = linear_grid(lo, hi, n);
    const double dx = (hi - lo) / static_cast<double>(n - 1);
    const auto pts = detail::collapse_duplicates(samples);
    std::vector<double> acc(n, 0.0);
    const auto last = static_cast<long>(n) - 1;

    for (std::size_t p = 0; p < pts.values.size(); ++p) {
        const double s = pts.values[p];
        const double w = pts.weights[p];
        if (k == KernelKind::normal) {
            long j0 = static_cast<long>(std::llround((s - lo) / dx));
            j0 = std::clamp(j0, 0L, last);
            const double u0 = (grid[j0] - s) / h;
            const double base = std::exp(-0.5 * u0 * u0);
            const double step = dx / h;
            const double c = std::exp(-step * step);  // ratio-of-ratios
            // upward: term(j+1)/term(j) = exp(-(u_j*step + step^2/2))
            double term = base;
            double ratio = std::exp(-(u0 * step + 0.5 * step * step));
            acc[j0] += w * term;
            for (long j = j0 + 1; j <= last; ++j) {
                term *= ratio;
                ratio *= c;
                if (term < 1e-300) break;
                acc[j] += w * term;
            }
            term = base;
            ratio = std::exp(u0 * step - 0.5 * step * step);
            for (long j = j0 - 1; j >= 0; --j) {
                term *= ratio;
                ratio *= c;
                if (term < 1e-300) break;
                acc[j] += w * term;
            }
            continue;
        }
        const long jlo = std::max(0L, static_cast<long>(std::floor((s - h - lo) / dx)));
        const long jhi = std::min(last, static_cast<long>(std::ceil((s + h - lo) / dx)));
        for (long j = jlo; j <= jhi; ++j) acc[j] += w * kernel_value(k, (grid[j] - s) / h);
    }
    const double norm = k == KernelKind::normal ? 1.0 / std::sqrt(2.0 * std::numbers::pi) : 1.0;
    const double scale = norm / (static_cast<double>(samples.size()) * h);
    for (auto& v : acc) v *= scale;
    return acc;
}

/// Trapezoid-rule D(p || q) over tabulated densities on a uniform grid with
/// spacing dx; both densities are floored before the log.
inline double kld_tabulated(std::span<const double> p, std::span<const double> q, double dx, double floor) {
    detail::require<ContractError>(p.size() == q.size() && p.size() >= 2, "kld_tabulated: size mismatch");
    double sum = 0.0;
    const std::size_t n = p.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double pi = std::max(p[i], floor);
        const double qi = std::max(q[i], floor);
        const double f = pi * std::log(pi / qi);
        sum += (i == 0 || i + 1 == n) ? 0.5 * f : f;
    }
    return sum * dx;
}

/// D_KL(p || q) = integral of p log(p / q) over [lo, hi], trapezoid rule on n
/// points, natural log.
template <class P, class Q>
double kld_numeric(P&& pdf_p, Q&& pdf_q, double lo, double hi, std::size_t n, double floor) {
    detail::require<DomainError>(hi > lo, "kld_numeric: hi must exceed lo");
    detail::require<DomainError>(n >= 128, "kld_numeric: need at least 128 points");
    const auto grid = linear_grid(lo, hi, n);
    std::vector<double> p(n), q(n);
    for (std::size_t i = 0; i < n; ++i) {
        p[i] = pdf_p(grid[i]);
        q[i] = pdf_q(grid[i]);
    }
    return kld_tabulated(p, q, (hi - lo) / static_cast<double>(n - 1), floor);
}

struct Candidate {
    DistributionKind kind;
    std::function<double(double)> pdf;
};

/// The six source densities scaled onto [lo, hi].
inline std::vector<Candidate> standard_candidates(double lo, double hi) {
    std::vector<Candidate> out;
    for (auto k : all_distribution_kinds)
        out.push_back({k, [k, lo, hi](double y) { return scaled_pdf(k, y, lo, hi); }});
    return out;
}

struct CandidateScore {
    DistributionKind kind;
    double min_kld;
    double best_h;
    KernelKind best_kernel;
};

struct EstimationResult {
    DistributionKind selected;
    double best_h;
    KernelKind best_kernel;
    std::vector<CandidateScore> scores;  ///< in candidate order
};

/// Grid search over (h, kernel) for every candidate. Ties keep the earliest
/// entry in enumeration order (candidates, then h, then kernel).
inline EstimationResult estimate_source(std::span<const double> samples, std::span<const Candidate> candidates,
                                        const KdeConfig& cfg, double lo, double hi) {
    cfg.validate();
    detail::require<InsufficientDataError>(samples.size() >= 30, "estimate_source: need at least 30 samples");
    detail::require<ConfigError>(!candidates.empty(), "estimate_source: no candidates");
    detail::require<DomainError>(hi > lo, "estimate_source: hi must exceed lo");

    const std::size_t n = cfg.integration_points;
    const auto grid = linear_grid(lo, hi, n);
    const double dx = (hi - lo) / static_cast<double>(n - 1);
    std::vector<std::vector<double>> cand_vals(candidates.size(), std::vector<double>(n));
    for (std::size_t c = 0; c < candidates.size(); ++c)
        for (std::size_t i = 0; i < n; ++i) cand_vals[c][i] = candidates[c].pdf(grid[i]);

    std::vector<CandidateScore> scores;
    for (const auto& c : candidates) scores.push_back({c.kind, INFINITY, cfg.h_grid.front(), cfg.kernels.front()});

    for (double h : cfg.h_grid) {
        for (auto kern : cfg.kernels) {
            const auto kde = kde_on_grid(samples, h, kern, lo, hi, n);
            for (std::size_t c = 0; c < candidates.size(); ++c) {
                const double d = kld_tabulated(cand_vals[c], kde, dx, cfg.density_floor);
                if (d < scores[c].min_kld) scores[c] = {candidates[c].kind, d, h, kern};
            }
        }
    }
    std::size_t best = 0;
    for (std::size_t c = 1; c < scores.size(); ++c)
        if (scores[c].min_kld < scores[best].min_kld) best = c;
    return {scores[best].kind, scores[best].best_h, scores[best].best_kernel, std::move(scores)};
}

struct AccuracyEntry {
    std::size_t correct = 0;
    std::size_t total = 0;
    [[nodiscard]] double accuracy() const { return total == 0 ? 0.0 : static_cast<double>(correct) / total; }
};

/// Per-kind fraction of trials whose selected kind equals the true kind.
/// Kinds without trials are absent from the table.
inline std::map<DistributionKind, AccuracyEntry> classification_accuracy(
    std::span<const std::pair<DistributionKind, DistributionKind>> trials) {
    std::map<DistributionKind, AccuracyEntry> table;
    for (const auto& [truth, selected] : trials) {
        auto& e = table[truth];
        ++e.total;
        if (truth == selected) ++e.correct;
    }
    return table;
}

}  // namespace ajscc
