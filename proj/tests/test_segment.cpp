#include <doctest.h>

#include <cmath>
#include <iostream>

#include "graphseg/segment.hpp"
#include "support/oracles.hpp"

using namespace graphseg;

namespace {

IndexPanel panel_of(const Eigen::MatrixXd& values) {
    IndexPanel p;
    p.values = values;
    for (int t = 0; t < values.cols(); ++t) {
        p.label_years.push_back(1960 + t);
        p.node_counts.push_back(30);
    }
    return p;
}

Eigen::MatrixXd random_panel(oracles::Rng& rng, int K, int T, double spread) {
    Eigen::MatrixXd X(K, T);
    for (int k = 0; k < K; ++k)
        for (int t = 0; t < T; ++t) X(k, t) = spread * rng.normal();
    return X;
}

SegmenterConfig config_with(double lambda,
                            PenaltyVariant v = PenaltyVariant::group_l2) {
    SegmenterConfig cfg;
    cfg.lambda = lambda;
    cfg.penalty = v;
    return cfg;
}

}  // namespace

TEST_CASE("standardize matches the direct formula") {
    Eigen::MatrixXd values(5, 3);
    values << 1, 2, 3,
              4, 8, 6,
              1, 1, 2,
              10, 20, 15,
              0.5, 0.25, 0.75;
    Standardized s = standardize(panel_of(values));
    CHECK(s.mean(0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(s.scale(0) == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-15));
    CHECK(s.X(0, 0) == doctest::Approx(-1.224744871391589).epsilon(1e-12));
    CHECK(s.X(0, 1) == doctest::Approx(0.0));
    CHECK(s.X(0, 2) == doctest::Approx(1.224744871391589).epsilon(1e-12));
    for (int k = 0; k < 5; ++k) {
        CHECK(s.X.row(k).mean() == doctest::Approx(0.0));
        CHECK(s.X.row(k).squaredNorm() / 3.0 == doctest::Approx(1.0));
    }

    SUBCASE("standardizing standardized rows is the identity") {
        Standardized twice = standardize(panel_of(s.X));
        CHECK((twice.X - s.X).cwiseAbs().maxCoeff() < 1e-12);
    }
    SUBCASE("constant row is rejected with its index") {
        values.row(3).setConstant(7.0);
        try {
            standardize(panel_of(values));
            FAIL("expected ConstantIndexRow");
        } catch (const ConstantIndexRow& e) {
            CHECK(e.row == 3);
        }
    }
}

TEST_CASE("objective examples") {
    SUBCASE("U = X leaves only the penalty") {
        oracles::Rng rng(31);
        Eigen::MatrixXd X = random_panel(rng, 3, 10, 2.0);
        double tv = 0.0;
        for (int t = 0; t + 1 < 10; ++t)
            tv += (X.col(t + 1) - X.col(t)).norm();
        CHECK(objective(X, X, 2.5, PenaltyVariant::group_l2) ==
              doctest::Approx(2.5 * tv).epsilon(1e-12));
    }
    SUBCASE("zero everywhere") {
        Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(2, 6);
        CHECK(objective(Z, Z, 5.0, PenaltyVariant::group_l2) == 0.0);
    }
    SUBCASE("hand-computed K=1 value") {
        Eigen::MatrixXd X(1, 2), U(1, 2);
        X << 0, 4;
        U << 1, 3;
        CHECK(objective(X, U, 2.0, PenaltyVariant::group_l2) ==
              doctest::Approx(6.0).epsilon(1e-15));
        CHECK(objective(X, U, 2.0, PenaltyVariant::literal_l1) ==
              doctest::Approx(6.0).epsilon(1e-15));
    }
    SUBCASE("shape mismatch") {
        Eigen::MatrixXd X(1, 2), U(2, 2);
        X.setZero();
        U.setZero();
        CHECK_THROWS_AS(objective(X, U, 1.0, PenaltyVariant::group_l2),
                        ShapeError);
    }
    SUBCASE("agrees with the reference formula") {
        oracles::Rng rng(32);
        for (int trial = 0; trial < 20; ++trial) {
            Eigen::MatrixXd X = random_panel(rng, 4, 12, 3.0);
            Eigen::MatrixXd U = random_panel(rng, 4, 12, 3.0);
            const double lam = rng.uniform() * 5.0;
            CHECK(objective(X, U, lam, PenaltyVariant::group_l2) ==
                  doctest::Approx(oracles::tv_objective_reference(X, U, lam, true))
                      .epsilon(1e-12));
            CHECK(objective(X, U, lam, PenaltyVariant::literal_l1) ==
                  doctest::Approx(oracles::tv_objective_reference(X, U, lam, false))
                      .epsilon(1e-12));
        }
    }
}

TEST_CASE("closed-form two-point solutions") {
    Eigen::MatrixXd X(1, 2);
    X << 0, 4;
    SUBCASE("jump shrinks by lambda/2 per side") {
        DenoisedPanel d = group_tv_denoise(X, config_with(2.0));
        CHECK(d.converged);
        CHECK(d.Y(0, 0) == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(d.Y(0, 1) == doctest::Approx(3.0).epsilon(1e-8));
    }
    SUBCASE("jump collapses to the mean at lambda >= 4") {
        DenoisedPanel d = group_tv_denoise(X, config_with(4.5));
        CHECK(d.Y(0, 0) == doctest::Approx(2.0).epsilon(1e-8));
        CHECK(d.Y(0, 1) == doctest::Approx(2.0).epsilon(1e-8));
    }
}

TEST_CASE("limit behavior") {
    oracles::Rng rng(33);
    Eigen::MatrixXd X = random_panel(rng, 5, 56, 1.0);
    SUBCASE("lambda 0 is the identity") {
        DenoisedPanel d = group_tv_denoise(X, config_with(0.0));
        CHECK((d.Y - X).cwiseAbs().maxCoeff() <= 1e-9);
        CHECK(d.converged);
    }
    SUBCASE("huge lambda collapses every row to its mean") {
        DenoisedPanel d = group_tv_denoise(X, config_with(1e6));
        const Eigen::VectorXd means = X.rowwise().mean();
        for (int k = 0; k < 5; ++k)
            for (int t = 0; t < 56; ++t)
                CHECK(d.Y(k, t) == doctest::Approx(means(k)).epsilon(1e-6));
    }
    SUBCASE("non-finite input is rejected") {
        X(2, 3) = std::nan("");
        CHECK_THROWS_AS(group_tv_denoise(X, config_with(1.0)), BadInput);
    }
}

TEST_CASE("solver objective never exceeds the trivial candidates") {
    oracles::Rng rng(34);
    for (int trial = 0; trial < 10; ++trial) {
        Eigen::MatrixXd X = random_panel(rng, 3, 15, 2.0);
        const double lam = 0.2 + 4.0 * rng.uniform();
        DenoisedPanel d = group_tv_denoise(X, config_with(lam));
        CHECK(d.objective_value ==
              doctest::Approx(objective(X, d.Y, lam, PenaltyVariant::group_l2))
                  .epsilon(1e-12));
        CHECK(d.objective_value <=
              objective(X, X, lam, PenaltyVariant::group_l2) + 1e-12);
        Eigen::MatrixXd mean_sol = X.rowwise().mean().replicate(1, X.cols());
        CHECK(d.objective_value <=
              objective(X, mean_sol, lam, PenaltyVariant::group_l2) + 1e-12);
    }
}

TEST_CASE("solver matches a long projected-subgradient reference run") {
    oracles::Rng rng(35);
    SegmenterConfig cfg;
    cfg.convergence_tol = 1e-12;
    cfg.max_iterations = 400000;
    for (int trial = 0; trial < 3; ++trial) {
        const int K = rng.uniform_int(1, 3);
        const int T = rng.uniform_int(5, 20);
        Eigen::MatrixXd X = random_panel(rng, K, T, 1.5);
        cfg.lambda = trial == 0 ? 0.3 : 1.0;
        for (PenaltyVariant v :
             {PenaltyVariant::group_l2, PenaltyVariant::literal_l1}) {
            cfg.penalty = v;
            DenoisedPanel d = group_tv_denoise(X, cfg);
            const double ref = oracles::projected_subgradient_reference(
                X, cfg.lambda, v == PenaltyVariant::group_l2, 1000000);
            CHECK(std::abs(d.objective_value - ref) <= 1e-6);
        }
    }
}

TEST_CASE("no random perturbation improves a solution (convexity certificate)") {
    oracles::Rng rng(36);
    Eigen::MatrixXd X = random_panel(rng, 4, 18, 1.0);
    const double lam = 2.0;
    SegmenterConfig cfg = config_with(lam);
    cfg.convergence_tol = 1e-12;
    DenoisedPanel d = group_tv_denoise(X, cfg);
    for (int trial = 0; trial < 100; ++trial) {
        Eigen::MatrixXd V = random_panel(rng, 4, 18, 1e-4);
        CHECK(objective(X, d.Y + V, lam, PenaltyVariant::group_l2) >=
              d.objective_value - 1e-7);
    }
}

TEST_CASE("group penalty aligns jumps; literal penalty may split them") {
    // Every component jumps at t=10 with noise.
    oracles::Rng rng(37);
    const int K = 5, T = 24;
    Eigen::MatrixXd X(K, T);
    for (int k = 0; k < K; ++k)
        for (int t = 0; t < T; ++t)
            X(k, t) = (t < 10 ? 0.0 : 2.0 + 0.3 * k) + 0.15 * rng.normal();

    const double lam = 3.0;
    SegmenterConfig grp = config_with(lam, PenaltyVariant::group_l2);
    SegmenterConfig lit = config_with(lam, PenaltyVariant::literal_l1);
    DenoisedPanel dg = group_tv_denoise(X, grp);
    DenoisedPanel dl = group_tv_denoise(X, lit);

    auto jump_locations = [&](const Eigen::MatrixXd& Y) {
        std::vector<int> out;
        for (int t = 0; t + 1 < T; ++t)
            if ((Y.col(t + 1) - Y.col(t)).cwiseAbs().maxCoeff() > 1e-3)
                out.push_back(t);
        return out;
    };
    auto jg = jump_locations(dg.Y), jl = jump_locations(dl.Y);
    // the group solution jumps at the shared location
    REQUIRE(!jg.empty());
    bool has_true_jump = false;
    for (int t : jg) has_true_jump |= std::abs(t - 9) <= 1;
    CHECK(has_true_jump);
    // per-component thresholds can only add distinct jump locations
    CHECK(jl.size() >= jg.size());
}

TEST_CASE("nested lambda diagnostic (report only, not asserted)") {
    oracles::Rng rng(38);
    const int T = 30;
    Eigen::MatrixXd X(5, T);
    for (int k = 0; k < 5; ++k)
        for (int t = 0; t < T; ++t)
            X(k, t) = (t < 10 ? 0 : t < 20 ? 1.5 : -0.5) + 0.2 * rng.normal();
    Standardized s;
    s.X = X;
    s.mean = Eigen::VectorXd::Zero(5);
    s.scale = Eigen::VectorXd::Ones(5);
    IndexPanel panel = panel_of(X);

    auto cps_at = [&](double lam) {
        SegmenterConfig cfg = config_with(lam);
        DenoisedPanel d = group_tv_denoise(X, cfg);
        return extract_change_points(d, s, panel, cfg).change_points;
    };
    auto big = cps_at(12.0), small = cps_at(4.0);
    bool nested = true;
    for (int cp : big)
        nested &= std::find(small.begin(), small.end(), cp) != small.end();
    MESSAGE("change points at lambda=12 nested in lambda=4: ",
            std::string(nested ? "yes" : "no"), " (", big.size(), " vs ",
            small.size(), ")");
}

TEST_CASE("change point extraction") {
    const int T = 20;
    Eigen::MatrixXd Y = Eigen::MatrixXd::Zero(5, T);

    Standardized s;
    s.mean = Eigen::VectorXd::LinSpaced(5, 10.0, 50.0);
    s.scale = Eigen::VectorXd::LinSpaced(5, 1.0, 3.0);
    IndexPanel panel = panel_of(Y);
    SegmenterConfig cfg = config_with(1.0);

    SUBCASE("constant panel has one era and no change points") {
        DenoisedPanel d{Y, 0.0, 10, true};
        s.X = Y;
        Segmentation seg = extract_change_points(d, s, panel, cfg);
        CHECK(seg.change_points.empty());
        REQUIRE(seg.era_count() == 1);
        CHECK(seg.eras[0].start_window == 0);
        CHECK(seg.eras[0].end_window == T - 1);
        CHECK(seg.eras[0].start_year == 1960);
        CHECK(seg.eras[0].end_year == 1960 + T - 1);
    }
    SUBCASE("single jump at t=9 splits two eras with mean levels") {
        for (int t = 10; t < T; ++t) Y(2, t) = 1.0;
        panel = panel_of(Y);
        s.X = Y;
        DenoisedPanel d{Y, 0.0, 10, true};
        Segmentation seg = extract_change_points(d, s, panel, cfg);
        CHECK(seg.change_points == std::vector<int>{9});
        CHECK(seg.change_years == std::vector<int>{1970});
        REQUIRE(seg.era_count() == 2);
        CHECK(seg.eras[0].level_std(2) == 0.0);
        CHECK(seg.eras[1].level_std(2) == 1.0);
        // original units invert the standardization
        CHECK(seg.eras[1].level_orig(2) ==
              doctest::Approx(1.0 * s.scale(2) + s.mean(2)));
        CHECK(seg.eras[1].level_orig(0) == doctest::Approx(s.mean(0)));
    }
}

TEST_CASE("lambda search for era counts") {
    oracles::Rng rng(39);
    const int T = 30;
    Eigen::MatrixXd raw(5, T);
    for (int k = 0; k < 5; ++k)
        for (int t = 0; t < T; ++t)
            raw(k, t) = (t < 10 ? 0 : t < 20 ? 3.0 : -2.0) +
                        0.25 * rng.normal() + 10.0 * k;
    IndexPanel panel = panel_of(raw);
    Standardized s = standardize(panel);
    SegmenterConfig base = config_with(0.0);

    SUBCASE("target 1 era reaches the mean solution") {
        LambdaSearchResult r = lambda_for_era_count(s, panel, 1, base);
        CHECK(r.exact);
        CHECK(r.segmentation.era_count() == 1);
    }
    SUBCASE("target T eras is reached by lambda 0 on generic data") {
        LambdaSearchResult r = lambda_for_era_count(s, panel, T, base);
        CHECK(r.exact);
        CHECK(r.segmentation.era_count() == T);
        CHECK(r.lambda == 0.0);
    }
    SUBCASE("three planted regimes are found at target 3") {
        LambdaSearchResult r = lambda_for_era_count(s, panel, 3, base);
        // sweep oracle: some lambda on a fine grid yields exactly 3 eras
        bool sweep_found = false;
        const double hi = lambda_upper_bound(s.X);
        for (int g = 1; g < 400 && !sweep_found; ++g) {
            SegmenterConfig cfg = config_with(hi * g / 400.0);
            DenoisedPanel d = group_tv_denoise(s.X, cfg);
            sweep_found =
                extract_change_points(d, s, panel, cfg).era_count() == 3;
        }
        REQUIRE(sweep_found);
        CHECK(r.exact);
        REQUIRE(r.segmentation.era_count() == 3);
        CHECK(std::abs(r.segmentation.change_points[0] - 9) <= 1);
        CHECK(std::abs(r.segmentation.change_points[1] - 19) <= 1);
    }
    SUBCASE("bad bounds are rejected") {
        CHECK_THROWS_AS(lambda_for_era_count(s, panel, 0, base), BadBounds);
        CHECK_THROWS_AS(lambda_for_era_count(s, panel, T + 1, base), BadBounds);
        CHECK_THROWS_AS(lambda_for_era_count(s, panel, 3, base, 5.0, 1.0),
                        BadBounds);
    }
}

TEST_CASE("lambda upper bound is tight") {
    oracles::Rng rng(40);
    Eigen::MatrixXd X = random_panel(rng, 4, 25, 1.0);
    const double bound = lambda_upper_bound(X);
    SegmenterConfig cfg = config_with(bound * 1.0001);
    DenoisedPanel d = group_tv_denoise(X, cfg);
    const Eigen::VectorXd means = X.rowwise().mean();
    CHECK((d.Y.colwise() - means).cwiseAbs().maxCoeff() < 1e-5);
    // just below the bound the solution is no longer constant
    cfg.lambda = bound * 0.97;
    DenoisedPanel d2 = group_tv_denoise(X, cfg);
    CHECK((d2.Y.colwise() - means).cwiseAbs().maxCoeff() > 1e-4);
}
