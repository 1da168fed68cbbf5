#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "corrbc/grouping.hpp"
#include "corrbc/pilot_systems.hpp"
#include "corrbc/rng.hpp"

using namespace corrbc;

TEST(OptimalAntennas, Examples) {
    PilotSystemResult r = optimal_antennas(100, 100, 32, 1, false);
    EXPECT_EQ(r.m_star, 16);
    EXPECT_DOUBLE_EQ(r.prelog, 8.0);
    r = optimal_antennas(100, 100, 32, 4, true);
    EXPECT_EQ(r.m_star, 64);
    EXPECT_DOUBLE_EQ(r.prelog, 32.0);
    r = optimal_antennas(10, 6, 100, 4, true);
    EXPECT_EQ(r.m_star, 6);
    EXPECT_DOUBLE_EQ(r.prelog, 5.91);
    // Uncorrelated ignores G.
    EXPECT_EQ(optimal_antennas(100, 100, 32, 8, false).m_star, 16);
    EXPECT_THROW(optimal_antennas(0, 1, 1, 1, true), std::invalid_argument);
}

TEST(OptimalAntennas, ExactSaturation) {
    const ExactPrelog a = optimal_prelog_exact(400, 400, 32, 1);
    EXPECT_EQ(a.numerator, 8);
    EXPECT_EQ(a.denominator, 1);
    const ExactPrelog b = optimal_prelog_exact(400, 400, 100, 1);
    EXPECT_EQ(b.numerator, 25);
    EXPECT_EQ(b.denominator, 1);
    const ExactPrelog c = optimal_prelog_exact(7, 7, 32, 1);
    EXPECT_EQ(c.numerator * 32, 7 * (32 - 7) * c.denominator);
}

TEST(OptimalAntennas, Invariants) {
    for (int m = 1; m <= 60; m += 3) {
        for (int k = 1; k <= 60; k += 4) {
            for (int tc = 1; tc <= 256; tc += 15) {
                const double iid = optimal_antennas(m, k, tc, 1, false).prelog;
                double prev = -1.0;
                for (int g = 1; g <= 16; ++g) {
                    const PilotSystemResult r = optimal_antennas(m, k, tc, g, true);
                    ASSERT_GE(r.prelog, iid);
                    ASSERT_GE(r.prelog, prev);
                    ASSERT_LE(r.m_star, m);
                    ASSERT_GE(r.prelog, 0.0);
                    if (g == 1) {
                        ASSERT_EQ(r.prelog, iid);
                    }
                    if (g >= 2.0 * std::min(m, k) / tc) {
                        ASSERT_EQ(r.m_star, std::min(m, k));
                    }
                    if (tc > 1) {
                        ASSERT_GE(r.prelog, optimal_antennas(m, k, tc - 1, g, true).prelog);
                    }
                    prev = r.prelog;
                }
            }
        }
    }
}

TEST(Figure1, ShapeAndSaturation) {
    const Table t = figure1_dataset();
    ASSERT_EQ(t.rows.size(), 2u * 3u * 400u);
    for (const auto& row : t.rows) {
        const int x = static_cast<int>(std::get<std::int64_t>(row[0]));
        const int tc = static_cast<int>(std::get<std::int64_t>(row[1]));
        const int g = static_cast<int>(std::get<std::int64_t>(row[2]));
        ASSERT_EQ(std::get<double>(row[3]), optimal_antennas(x, x, tc, g, g > 1).prelog);
    }
    // Last grid point of each curve is saturated at Tc G / 4.
    EXPECT_DOUBLE_EQ(std::get<double>(t.rows[3 * 400 - 1][3]), 64.0);  // Tc 32, G 8
    EXPECT_DOUBLE_EQ(std::get<double>(t.rows[3 * 400 + 399][3]), 25.0);  // Tc 100, G 1
}

TEST(System1, FullCooperationLimit) {
    // mu_p1 = 1 and r_p1 = 1 through M = K = G.
    const int tc = 50;
    const SystemParams s{64, 64, 64, 1, 1, tc, 100.0};
    const CapacityResult c = system1_rate_ratio(s, Pilot1Regime::large_r, 100.0, 1.0, 1.0);
    EXPECT_NEAR(c.value_bits, (1.0 - 1.0 / tc) * std::log2(100.0 / std::exp(1.0)), 1e-12);
    EXPECT_EQ(c.regime, Regime::large_r);
}

TEST(System1, NuScaling) {
    // Same M*, K, G; Tc changes only nu.
    const SystemParams slow{40, 20, 4, 10, 5, 10, 30.0};    // M* = 20, nu = 1/2
    const SystemParams fast{40, 20, 4, 10, 5, 100000, 30.0};  // nu -> 0
    const CapacityResult a = system1_rate_ratio(slow, Pilot1Regime::large_G, 30.0, 0.5, 2.0);
    const CapacityResult b = system1_rate_ratio(fast, Pilot1Regime::large_G, 30.0, 0.5, 2.0);
    EXPECT_NEAR(a.upper(), 0.5 * b.upper() / (1.0 - 20.0 / 400000.0), 1e-12);
    EXPECT_EQ(a.regime, Regime::large_system_mu_ge_1);
    EXPECT_NEAR(a.bracket.lo, -0.5, 1e-12);
}

TEST(System1, FigureTwoOrdering) {
    // r_p1 = 10, Tc = 50, P = 30: mu = 0.5 on top, then mu = 2, then mu = 1.
    for (int g = 1; g <= 20; ++g) {
        auto top = [&](int m, int k) {
            const SystemParams s{m, k, g, m / g, k / g, 50, 30.0};
            return system1_rate_ratio(s, Pilot1Regime::large_G, 30.0, 0.5, 4.0).upper();
        };
        const double half = top(10 * g, 20 * g);
        const double one = top(10 * g, 10 * g);
        const double two = top(20 * g, 10 * g);
        EXPECT_GE(half, two) << g;
        EXPECT_GE(two, one) << g;
    }
}

TEST(System1, Errors) {
    const SystemParams s{8, 4, 1, 8, 4, 1, 30.0};  // Tc G = 1: M* = 0
    EXPECT_THROW(system1_rate_ratio(s, Pilot1Regime::large_G, 30.0, 0.5, 2.0), std::invalid_argument);
    const SystemParams big{80, 40, 4, 20, 10, 100, 30.0};
    EXPECT_THROW(system1_rate_ratio(big, Pilot1Regime::large_G, 30.0, 0.5, 0.5), std::invalid_argument);
}

TEST(System2, FigureThreeConfig) {
    const PilotSystemResult r = system2_optimize(200, 40, 64, 10, 30.0);
    EXPECT_EQ(r.m_star, 40);
    EXPECT_GT(r.m_p2_star, r.m_star);
    EXPECT_LE(r.m_p2_star, 200);
    ASSERT_EQ(r.f_curve.size(), 161u);
    double best = -std::numeric_limits<double>::infinity();
    int arg = 0;
    for (int q = 40; q <= 200; ++q) {
        const double f = system2_objective(200, 40, 64, 10, 30.0, q);
        if (f > best) {
            best = f;
            arg = q;
        }
    }
    EXPECT_EQ(arg, r.m_p2_star);
    const Table t = figure3_dataset();
    int marked = 0;
    for (const auto& row : t.rows) {
        if (std::get<std::int64_t>(row[2]) == 1) {
            ++marked;
            EXPECT_EQ(std::get<std::int64_t>(row[0]), r.m_p2_star);
        }
    }
    EXPECT_EQ(marked, 1);
}

TEST(System2, ObjectiveHandComputed) {
    // Q = 80, K = 40, G = 10, Tc = 64, P = 30, M* = 40.
    const double mu = 2.0;
    const double expected = 40.0 * (64 - 8) * (std::log2(30.0 / std::exp(1.0) * mu) + 1.0 * std::log2(2.0) + 1.0);
    EXPECT_NEAR(system2_objective(200, 40, 64, 10, 30.0, 80), expected, 1e-9);
    // Q = K: the (Q/K - 1) term vanishes.
    EXPECT_NEAR(system2_objective(200, 40, 64, 10, 30.0, 40), 40.0 * 60.0 * std::log2(30.0 / std::exp(1.0)), 1e-9);
    EXPECT_EQ(system2_objective(200, 40, 64, 10, 30.0, 39), -std::numeric_limits<double>::infinity());
}

TEST(System2, LimitsInPowerAndGroups) {
    const PilotSystemResult low = system2_optimize(200, 40, 64, 10, 30.0);
    const PilotSystemResult high = system2_optimize(200, 40, 64, 10, 1e6);
    EXPECT_LE(high.m_p2_star - high.m_star, low.m_p2_star - low.m_star);
    const PilotSystemResult free = system2_optimize(200, 40, 64, 200, 30.0);
    EXPECT_EQ(free.m_p2_star, 200);
}

TEST(System2, Degenerate) {
    const PilotSystemResult r = system2_optimize(30, 40, 64, 10, 30.0);
    EXPECT_TRUE(r.degenerate);
    EXPECT_EQ(r.m_p2_star, r.m_star);
}

TEST(System2, RandomArgmaxCertificate) {
    RngStream rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        const int k = 1 + static_cast<int>(rng.next_u64() % 300);
        const int m = k + 1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(512 - k));
        const int tc = 2 + static_cast<int>(rng.next_u64() % 255);
        const int g = 1 + static_cast<int>(rng.next_u64() % 20);
        const double p = std::pow(10.0, rng.uniform(0.0, 4.0));
        const PilotSystemResult r = system2_optimize(m, k, tc, g, p);
        ASSERT_GE(r.m_p2_star, r.m_star);
        ASSERT_LE(r.m_p2_star, m);
        const double best = system2_objective(m, k, tc, g, p, r.m_p2_star);
        for (int q = r.m_star; q <= m; ++q) {
            ASSERT_GE(best, system2_objective(m, k, tc, g, p, q)) << trial << " q=" << q;
        }
    }
}

TEST(Figure5, SystemTwoDominatesAndGapGrowsWithTc) {
    const Table t = figure5_dataset();
    ASSERT_EQ(t.rows.size(), 2u * 16u * 2u);
    const std::size_t per_tc = 32;
    for (std::size_t i = 0; i < per_tc; i += 2) {
        const double r1_32 = std::get<double>(t.rows[i][3]);
        const double r2_32 = std::get<double>(t.rows[i + 1][3]);
        const double r1_128 = std::get<double>(t.rows[per_tc + i][3]);
        const double r2_128 = std::get<double>(t.rows[per_tc + i + 1][3]);
        EXPECT_GE(r2_32, r1_32);
        EXPECT_GE(r2_128, r1_128);
        EXPECT_GE(r2_128 - r1_128, r2_32 - r1_32);
    }
}

// The (1 - nu) training factor makes nu grow with K, so the curves are
// quadratic in K: the per-K rate is affine for system I and non-increasing for both.
TEST(Figure5, PerUserRateShape) {
    const Table t = figure5_dataset();
    for (std::size_t block = 0; block < 2; ++block) {
        std::vector<double> k;
        std::vector<double> per1;
        std::vector<double> per2;
        for (std::size_t i = block * 32; i < (block + 1) * 32; i += 2) {
            k.push_back(static_cast<double>(std::get<std::int64_t>(t.rows[i][0])));
            per1.push_back(std::get<double>(t.rows[i][3]) / k.back());
            per2.push_back(std::get<double>(t.rows[i + 1][3]) / k.back());
        }
        const double slope = (per1[1] - per1[0]) / (k[1] - k[0]);
        for (std::size_t i = 1; i < k.size(); ++i) {
            EXPECT_NEAR(per1[i], per1[0] + slope * (k[i] - k[0]), 1e-9) << block << " " << k[i];
            EXPECT_LE(per1[i], per1[i - 1]);
            EXPECT_LE(per2[i], per2[i - 1]);
        }
    }
}

TEST(Multiclass, Reductions) {
    EXPECT_DOUBLE_EQ(multiclass_prelog(100, 100, 32, 8, 2), 32.0);
    EXPECT_DOUBLE_EQ(multiclass_prelog(100, 100, 32, 8, 8), optimal_antennas(100, 100, 32, 1, false).prelog);
    EXPECT_EQ(multiclass_prelog(10, 10, 1, 1, 1), 0.0);
    RngStream rng(40);
    for (int trial = 0; trial < 1000; ++trial) {
        const int m = 1 + static_cast<int>(rng.next_u64() % 512);
        const int k = 1 + static_cast<int>(rng.next_u64() % 512);
        const int tc = 1 + static_cast<int>(rng.next_u64() % 256);
        const int g = 1 + static_cast<int>(rng.next_u64() % 16);
        ASSERT_NEAR(multiclass_prelog(m, k, tc, g, 1), optimal_antennas(m, k, tc, g, true).prelog, 1e-9);
    }
}

TEST(Tdd, BruteForce) {
    RngStream rng(41);
    for (int trial = 0; trial < 1000; ++trial) {
        TddConfig cfg;
        cfg.alpha = rng.uniform(1.0, 20.0);
        cfg.tc = 2 + static_cast<std::int64_t>(rng.next_u64() % 200);
        cfg.n2 = 1 + static_cast<std::int64_t>(rng.next_u64() % 20);
        cfg.n1 = cfg.n2 + 1 + static_cast<std::int64_t>(rng.next_u64() % 40);
        const std::int64_t k = 1 + static_cast<std::int64_t>(rng.next_u64() % 800);
        for (bool above : {false, true}) {
            std::int64_t best = 1;
            for (std::int64_t q = 2; q <= k; ++q) {
                if (tdd_dof(q, cfg, above) > tdd_dof(best, cfg, above) * (1.0 + 1e-12)) {
                    best = q;
                }
            }
            ASSERT_EQ(tdd_optimal_users(k, cfg, above), best) << trial;
        }
    }
}

TEST(Tdd, DefaultBreakpoints) {
    TddConfig cfg;
    cfg.n_lln = 600.0;
    const TddLimits lim = tdd_limits({1, 60, 61, 300}, cfg);
    EXPECT_DOUBLE_EQ(lim.saturation_start, 60.0);
    EXPECT_DOUBLE_EQ(lim.lln_entry, 60.0);
    EXPECT_DOUBLE_EQ(lim.post_lln_ceiling, 234.0);
    EXPECT_FALSE(lim.ordering_ok);
    EXPECT_EQ(std::get<std::string>(lim.table.rows[0][1]), "linear");
    EXPECT_EQ(std::get<std::string>(lim.table.rows[1][1]), "lln_linear");
    EXPECT_EQ(std::get<std::string>(lim.table.rows[3][1]), "lln_saturated");

    cfg.n_lln = 1000.0;
    const TddLimits ok = tdd_limits({50, 70, 99, 100, 300}, cfg);
    EXPECT_TRUE(ok.ordering_ok);
    EXPECT_EQ(std::get<std::string>(ok.table.rows[1][1]), "saturated");
    EXPECT_NEAR(std::get<double>(ok.table.rows[1][2]), 60.0 * (40.0 - 60.0 / 12.0 - 60.0 / 4.0), 1e-9);
    EXPECT_EQ(std::get<std::string>(ok.table.rows[3][1]), "lln_linear");
}

TEST(Tdd, LargeIntervalsDoNotOverflow) {
    TddConfig cfg;
    cfg.tc = 40;
    cfg.n2 = 1000000000;
    cfg.n1 = cfg.n2 + 1;
    const std::int64_t k = 1000000000000LL;
    const std::int64_t q = tdd_optimal_users(k, cfg, false);
    const long double real_opt = 40.0L * cfg.n1 * cfg.n2 / (2.0L * (cfg.n1 + cfg.n2));
    EXPECT_LE(std::abs(static_cast<long double>(q) - real_opt), 1.0L);
    EXPECT_EQ(tdd_optimal_users(k, cfg, true), 39LL * cfg.n1 / 2);
}

TEST(Tdd, Validation) {
    TddConfig cfg;
    cfg.alpha = 0.5;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    cfg = TddConfig{};
    cfg.n1 = 4;
    EXPECT_THROW(tdd_limits({1}, cfg), std::invalid_argument);
}
