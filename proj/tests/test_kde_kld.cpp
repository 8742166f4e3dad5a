#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "ajscc/kde_kld.hpp"

using namespace ajscc;

namespace {

// Composite Simpson on [a, b] with n (even) intervals.
template <class F>
double simpson(F f, double a, double b, int n) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4 : 2);
    return s * h / 3;
}

std::vector<double> scaled_samples(DistributionKind k, std::size_t n, std::uint64_t seed) {
    Engine eng(seed);
    return affine_scale(sample_unit(k, n, eng), 5, 10);
}

}  // namespace

TEST(Kernel, PointValues) {
    EXPECT_DOUBLE_EQ(kernel_value(KernelKind::epanechnikov, 0), 0.75);
    EXPECT_DOUBLE_EQ(kernel_value(KernelKind::box, 0.999), 0.5);
    EXPECT_DOUBLE_EQ(kernel_value(KernelKind::box, 1.001), 0.0);
    EXPECT_DOUBLE_EQ(kernel_value(KernelKind::triangle, 0.25), 0.75);
    EXPECT_NEAR(kernel_value(KernelKind::normal, 0), 1 / std::sqrt(2 * std::numbers::pi), 1e-15);
    for (auto k : all_kernel_kinds) {
        EXPECT_EQ(parse_kernel(to_string(k)), k);
        EXPECT_DOUBLE_EQ(kernel_value(k, 0.3), kernel_value(k, -0.3));
    }
}

TEST(Kernel, IntegratesToOne) {
    for (auto k : all_kernel_kinds) {
        const double s = k == KernelKind::normal
                             ? simpson([&](double u) { return kernel_value(k, u); }, -12, 12, 20000)
                             : simpson([&](double u) { return kernel_value(k, u); }, -1, 0, 2000) +
                                   simpson([&](double u) { return kernel_value(k, u); }, 0, 1, 2000);
        EXPECT_NEAR(s, 1.0, 1e-9) << to_string(k);
    }
}

TEST(KdePdf, SingleSample) {
    const std::vector<double> s{0.0};
    EXPECT_NEAR(kde_pdf(s, 1.0, KernelKind::normal, 0.0), 0.39894, 1e-5);
    EXPECT_THROW(kde_pdf(std::vector<double>{}, 1.0, KernelKind::normal, 0.0), InsufficientDataError);
    EXPECT_THROW(kde_pdf(s, 0.0, KernelKind::normal, 0.0), DomainError);
}

TEST(KdePdf, TranslationPermutationAndSign) {
    const auto s = scaled_samples(DistributionKind::normal, 200, 1);
    auto shifted = s;
    for (auto& v : shifted) v += 3.25;
    auto permuted = s;
    std::reverse(permuted.begin(), permuted.end());
    for (auto k : all_kernel_kinds) {
        for (double y = 4.0; y < 11.0; y += 0.37) {
            const double v = kde_pdf(s, 0.3, k, y);
            EXPECT_GE(v, 0.0);
            EXPECT_NEAR(kde_pdf(shifted, 0.3, k, y + 3.25), v, 1e-12);
            EXPECT_NEAR(kde_pdf(permuted, 0.3, k, y), v, 1e-12);
        }
    }
}

TEST(KdePdf, IntegratesToOne) {
    const auto s = scaled_samples(DistributionKind::weibull, 300, 2);
    const auto [mn, mx] = std::minmax_element(s.begin(), s.end());
    for (auto k : all_kernel_kinds) {
        for (double h : {0.1, 0.5, 1.0}) {
            const double integral =
                simpson([&](double y) { return kde_pdf(s, h, k, y); }, *mn - 5 * h, *mx + 5 * h, 20000);
            EXPECT_NEAR(integral, 1.0, 1e-3) << to_string(k) << " h=" << h;
        }
    }
}

TEST(KdeOnGrid, EqualsDirectSum) {
    auto s = scaled_samples(DistributionKind::cosine, 500, 3);
    s.insert(s.end(), {7.0, 7.0, 7.0, 4.0, 11.5});  // duplicates and out-of-window points
    const auto grid = linear_grid(5, 10, 257);
    for (auto k : all_kernel_kinds) {
        for (double h : {0.1, 0.35, 1.0}) {
            const auto fast = kde_on_grid(s, h, k, 5, 10, 257);
            for (std::size_t i = 0; i < grid.size(); ++i) {
                const double direct = kde_pdf(s, h, k, grid[i]);
                EXPECT_NEAR(fast[i], direct, 1e-9 * direct + 1e-300) << to_string(k) << " h=" << h << " i=" << i;
            }
        }
    }
}

TEST(KldNumeric, Examples) {
    auto unif = [](double) { return 0.2; };
    EXPECT_NEAR(kld_numeric(unif, unif, 5, 10, 1024, 1e-12), 0.0, 1e-9);
    auto one = [](double) { return 1.0; };
    auto half = [](double) { return 0.5; };
    EXPECT_NEAR(kld_numeric(one, half, 0, 1, 1024, 1e-12), std::log(2.0), 1e-9);
    EXPECT_THROW(kld_numeric(one, half, 1, 0, 1024, 1e-12), DomainError);
    EXPECT_THROW(kld_numeric(one, half, 0, 1, 100, 1e-12), DomainError);
}

TEST(KldNumeric, SelfIsZeroAndGibbs) {
    const auto cands = standard_candidates(5, 10);
    for (const auto& p : cands) {
        EXPECT_NEAR(kld_numeric(p.pdf, p.pdf, 5, 10, 1024, 1e-12), 0.0, 1e-9);
        for (const auto& q : cands) EXPECT_GE(kld_numeric(p.pdf, q.pdf, 5, 10, 1024, 1e-12), -1e-3);
    }
    // random piecewise-linear densities
    std::mt19937_64 eng(4);
    std::uniform_real_distribution<double> d(0.01, 3.0);
    for (int t = 0; t < 200; ++t) {
        std::vector<double> a(9), b(9);
        for (int i = 0; i < 9; ++i) {
            a[i] = d(eng);
            b[i] = d(eng);
        }
        auto make = [](std::vector<double> knots) {
            auto raw = [knots](double x) {
                const double pos = std::clamp(x, 0.0, 1.0) * 8;
                const int i = std::min(7, int(pos));
                return knots[i] + (pos - i) * (knots[i + 1] - knots[i]);
            };
            const double z = simpson(raw, 0, 1, 8000);
            return [raw, z](double x) { return raw(x) / z; };
        };
        EXPECT_GE(kld_numeric(make(a), make(b), 0, 1, 1024, 1e-12), -1e-3);
    }
}

TEST(KldTabulated, SizeMismatch) {
    const std::vector<double> p{1, 1, 1}, q{1, 1};
    EXPECT_THROW(kld_tabulated(p, q, 0.1, 1e-12), ContractError);
}

TEST(KdeConfig, Defaults) {
    KdeConfig c;
    EXPECT_EQ(c.h_grid.size(), 10u);
    EXPECT_DOUBLE_EQ(c.h_grid.front(), 0.1);
    EXPECT_DOUBLE_EQ(c.h_grid.back(), 1.0);
    EXPECT_EQ(c.kernels.size(), 4u);
    EXPECT_EQ(c.integration_points, 1024u);
    EXPECT_NO_THROW(c.validate());
    c.h_grid = {0.2, 0.1};
    EXPECT_THROW(c.validate(), ConfigError);
    c = {};
    c.integration_points = 64;
    EXPECT_THROW(c.validate(), ConfigError);
}

TEST(EstimateSource, ResultInvariantsAndDeterminism) {
    const auto s = scaled_samples(DistributionKind::triangular, 2000, 5);
    const auto cands = standard_candidates(5, 10);
    const auto r = estimate_source(s, cands, {}, 5, 10);
    ASSERT_EQ(r.scores.size(), 6u);
    std::size_t best = 0;
    for (std::size_t i = 0; i < 6; ++i) {
        EXPECT_GE(r.scores[i].min_kld, -1e-3);
        if (r.scores[i].min_kld < r.scores[best].min_kld) best = i;
    }
    EXPECT_EQ(r.selected, r.scores[best].kind);
    EXPECT_EQ(r.best_h, r.scores[best].best_h);
    const auto r2 = estimate_source(s, cands, {}, 5, 10);
    EXPECT_EQ(r2.selected, r.selected);
    for (std::size_t i = 0; i < 6; ++i) EXPECT_EQ(r2.scores[i].min_kld, r.scores[i].min_kld);
}

TEST(EstimateSource, ScoresMatchBruteForceGrid) {
    const auto s = scaled_samples(DistributionKind::normal, 300, 6);
    const auto cands = standard_candidates(5, 10);
    KdeConfig cfg;
    cfg.h_grid = {0.2, 0.6};
    const auto r = estimate_source(s, cands, cfg, 5, 10);
    for (std::size_t c = 0; c < cands.size(); ++c) {
        double best = INFINITY;
        for (double h : cfg.h_grid)
            for (auto k : cfg.kernels)
                best = std::min(best, kld_numeric(cands[c].pdf, [&](double y) { return kde_pdf(s, h, k, y); }, 5, 10,
                                                  1024, 1e-12));
        EXPECT_NEAR(r.scores[c].min_kld, best, 1e-9 * std::abs(best) + 1e-12);
    }
}

TEST(EstimateSource, SingleCandidateAndErrors) {
    const auto s = scaled_samples(DistributionKind::invgau, 500, 7);
    const auto all = standard_candidates(5, 10);
    const std::vector<Candidate> only{all[4]};
    EXPECT_EQ(estimate_source(s, only, {}, 5, 10).selected, DistributionKind::invgau);
    const std::vector<double> few(29, 7.0);
    EXPECT_THROW(estimate_source(few, all, {}, 5, 10), InsufficientDataError);
    EXPECT_THROW(estimate_source(s, std::vector<Candidate>{}, {}, 5, 10), ConfigError);
}

TEST(EstimateSource, UniformSamplesSelectUniform) {
    const auto cands = standard_candidates(5, 10);
    int hits = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed)
        hits += estimate_source(scaled_samples(DistributionKind::uniform, 10000, 100 + seed), cands, {}, 5, 10)
                    .selected == DistributionKind::uniform;
    EXPECT_GE(hits, 45);
}

TEST(EstimateSource, SelfConsistencyPerKind) {
    const auto cands = standard_candidates(5, 10);
    for (auto k : all_distribution_kinds) {
        int hits = 0;
        for (std::uint64_t seed = 0; seed < 50; ++seed)
            hits += estimate_source(scaled_samples(k, 10000, derive_seed(seed, to_string(k))), cands, {}, 5, 10)
                        .selected == k;
        const bool confusable = k == DistributionKind::cosine || k == DistributionKind::triangular ||
                                k == DistributionKind::invgau || k == DistributionKind::weibull;
        EXPECT_GE(hits, confusable ? 25 : 40) << to_string(k);
    }
}

TEST(EstimateSource, QuantizationDegradesCosine) {
    const auto cands = standard_candidates(5, 10);
    int misses = 0, clean_misses = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto s = scaled_samples(DistributionKind::cosine, 200, 500 + seed);
        clean_misses += estimate_source(s, cands, {}, 5, 10).selected != DistributionKind::cosine;
        for (auto& v : s) v = 5.0 + 0.5 * std::floor((v - 5.0) / 0.5 + 0.5);
        misses += estimate_source(s, cands, {}, 5, 10).selected != DistributionKind::cosine;
    }
    EXPECT_GT(misses, 0);
    EXPECT_GT(misses, clean_misses);
}

TEST(ClassificationAccuracy, Table) {
    using D = DistributionKind;
    std::vector<std::pair<D, D>> all_right{{D::uniform, D::uniform}, {D::normal, D::normal}};
    for (const auto& [k, e] : classification_accuracy(all_right)) EXPECT_DOUBLE_EQ(e.accuracy(), 1.0);

    std::vector<std::pair<D, D>> alt;
    for (int i = 0; i < 10; ++i) alt.emplace_back(D::cosine, i % 2 ? D::cosine : D::triangular);
    const auto t = classification_accuracy(alt);
    EXPECT_DOUBLE_EQ(t.at(D::cosine).accuracy(), 0.5);
    EXPECT_EQ(t.count(D::uniform), 0u);
}
