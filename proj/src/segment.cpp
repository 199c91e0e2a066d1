#include "graphseg/segment.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>

namespace graphseg {

std::string to_string(PenaltyVariant v) {
    return v == PenaltyVariant::group_l2 ? "group-l2" : "literal-l1";
}

PenaltyVariant penalty_from_string(const std::string& s) {
    if (s == "group-l2" || s == "group_l2") return PenaltyVariant::group_l2;
    if (s == "literal-l1" || s == "literal_l1") return PenaltyVariant::literal_l1;
    throw BadInput("unknown penalty variant '" + s + "'");
}

void SegmenterConfig::validate() const {
    if (lambda < 0.0) throw BadInput("lambda must be >= 0");
    if (convergence_tol <= 0.0) throw BadInput("convergence_tol must be > 0");
    if (max_iterations < 1) throw BadInput("max_iterations must be >= 1");
    if (changepoint_eps <= 0.0) throw BadInput("changepoint_eps must be > 0");
}

Standardized standardize(const IndexPanel& panel) {
    const int K = static_cast<int>(panel.values.rows());
    const int T = panel.T();
    if (T < 2) throw BadInput("standardize needs at least 2 windows");
    if (!panel.values.allFinite())
        throw BadInput("index panel has non-finite entries");

    Standardized out;
    out.X.resize(K, T);
    out.mean.resize(K);
    out.scale.resize(K);
    for (int k = 0; k < K; ++k) {
        const double mu = panel.values.row(k).mean();
        const double var =
            (panel.values.row(k).array() - mu).square().mean();
        if (var == 0.0)
            throw ConstantIndexRow(
                k, std::string("index row '") + IndexPanel::row_names[k] +
                       "' is constant; scale undefined");
        const double sd = std::sqrt(var);
        out.mean(k) = mu;
        out.scale(k) = sd;
        out.X.row(k) = (panel.values.row(k).array() - mu) / sd;
    }
    return out;
}

namespace {

double penalty_of_diff(const Eigen::MatrixXd& diff, PenaltyVariant variant) {
    if (variant == PenaltyVariant::group_l2)
        return diff.colwise().norm().sum();
    return diff.array().abs().sum();
}

}  // namespace

double objective(const Eigen::MatrixXd& X, const Eigen::MatrixXd& U,
                 double lambda, PenaltyVariant variant) {
    if (X.rows() != U.rows() || X.cols() != U.cols())
        throw ShapeError("objective: X and U shapes differ");
    const double fidelity = (X - U).squaredNorm();
    if (X.cols() < 2) return fidelity;
    const Eigen::MatrixXd diff =
        U.rightCols(U.cols() - 1) - U.leftCols(U.cols() - 1);
    return fidelity + lambda * penalty_of_diff(diff, variant);
}

DenoisedPanel group_tv_denoise(const Eigen::MatrixXd& X,
                               const SegmenterConfig& config) {
    config.validate();
    const int K = static_cast<int>(X.rows());
    const int T = static_cast<int>(X.cols());
    if (K < 1 || T < 2) throw BadInput("denoise needs K >= 1, T >= 2");
    if (!X.allFinite()) throw BadInput("denoise input has non-finite entries");

    DenoisedPanel out;
    if (config.lambda == 0.0) {
        out.Y = X;
        out.objective_value = 0.0;
        out.converged = true;
        return out;
    }

    // Chambolle-Pock on  min_U ||X-U||^2 + lambda * sum_t P(DU(t)):
    // dual ascent on Q (projected onto the penalty's dual ball), proximal
    // descent on U, over-relaxation theta = 1. sigma*tau*||D||^2 < 1 with
    // ||D||^2 <= 4.
    const double sigma = 0.49, tau = 0.49;
    const double lambda = config.lambda;

    Eigen::MatrixXd U = X;
    Eigen::MatrixXd Ubar = X;
    Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(K, T - 1);
    Eigen::MatrixXd Unew(K, T), DtQ(K, T);

    Eigen::MatrixXd best_Y = X;
    double best_obj = objective(X, X, lambda, config.penalty);
    double prev_obj = best_obj;

    for (int it = 1; it <= config.max_iterations; ++it) {
        // Q <- proj( Q + sigma * D(Ubar) )
        Q.noalias() += sigma * (Ubar.rightCols(T - 1) - Ubar.leftCols(T - 1));
        if (config.penalty == PenaltyVariant::group_l2) {
            for (int t = 0; t < T - 1; ++t) {
                const double nrm = Q.col(t).norm();
                if (nrm > lambda) Q.col(t) *= lambda / nrm;
            }
        } else {
            Q = Q.cwiseMax(-lambda).cwiseMin(lambda);
        }

        // U <- prox_{tau f}( U - tau * D^T Q ), f(U) = ||X-U||^2
        DtQ.col(0) = -Q.col(0);
        if (T > 2)
            DtQ.middleCols(1, T - 2) = Q.leftCols(T - 2) - Q.rightCols(T - 2);
        DtQ.col(T - 1) = Q.col(T - 2);
        Unew = (U - tau * DtQ + 2.0 * tau * X) / (1.0 + 2.0 * tau);

        const double du = (Unew - U).norm() / std::max(1.0, U.norm());
        Ubar = 2.0 * Unew - U;
        U.swap(Unew);

        const double obj = objective(X, U, lambda, config.penalty);
        const double dobj =
            std::abs(obj - prev_obj) / std::max(1.0, std::abs(prev_obj));
        prev_obj = obj;
        if (obj < best_obj) {
            best_obj = obj;
            best_Y = U;
        }
        out.iterations_used = it;
        if (du < config.convergence_tol && dobj < config.convergence_tol) {
            out.converged = true;
            break;
        }
    }

    // The constant column-mean solution is a known feasible candidate; never
    // return anything worse than it.
    Eigen::MatrixXd mean_sol =
        X.rowwise().mean().replicate(1, T);
    const double mean_obj = objective(X, mean_sol, lambda, config.penalty);
    if (mean_obj < best_obj) {
        best_obj = mean_obj;
        best_Y = std::move(mean_sol);
    }

    out.Y = std::move(best_Y);
    out.objective_value = best_obj;
    return out;
}

Segmentation extract_change_points(const DenoisedPanel& denoised,
                                   const Standardized& std_panel,
                                   const IndexPanel& panel,
                                   const SegmenterConfig& config) {
    const Eigen::MatrixXd& Y = denoised.Y;
    const int K = static_cast<int>(Y.rows());
    const int T = static_cast<int>(Y.cols());
    if (K != IndexPanel::kRows || T != panel.T() || K != std_panel.X.rows())
        throw ShapeError("extract_change_points: inconsistent shapes");

    Segmentation seg;
    seg.lambda = config.lambda;
    seg.penalty = config.penalty;
    seg.converged = denoised.converged;
    seg.objective_value = denoised.objective_value;
    seg.iterations = denoised.iterations_used;

    for (int t = 0; t + 1 < T; ++t) {
        const double jump =
            (Y.col(t + 1) - Y.col(t)).cwiseAbs().maxCoeff();
        if (jump > config.changepoint_eps) {
            seg.change_points.push_back(t);
            seg.change_years.push_back(panel.label_years[t + 1]);
        }
    }

    int start = 0;
    for (std::size_t b = 0; b <= seg.change_points.size(); ++b) {
        const int end = b < seg.change_points.size() ? seg.change_points[b]
                                                     : T - 1;
        Era era;
        era.start_window = start;
        era.end_window = end;
        era.start_year = panel.label_years[start];
        era.end_year = panel.label_years[end];
        era.level_std = Y.middleCols(start, end - start + 1).rowwise().mean();
        era.level_orig = era.level_std.cwiseProduct(std_panel.scale) +
                         std_panel.mean;
        seg.eras.push_back(std::move(era));
        start = end + 1;
    }
    return seg;
}

double lambda_upper_bound(const Eigen::MatrixXd& X, PenaltyVariant variant) {
    const int T = static_cast<int>(X.cols());
    if (T < 2) throw BadInput("lambda_upper_bound needs T >= 2");
    const Eigen::VectorXd row_mean = X.rowwise().mean();
    const Eigen::MatrixXd R = 2.0 * (X.colwise() - row_mean);
    Eigen::VectorXd cum = Eigen::VectorXd::Zero(X.rows());
    double bound = 0.0;
    for (int t = 0; t + 1 < T; ++t) {
        cum += R.col(t);
        const double norm = variant == PenaltyVariant::group_l2
                                ? cum.norm()
                                : cum.cwiseAbs().maxCoeff();
        bound = std::max(bound, norm);
    }
    return bound;
}

LambdaSearchResult lambda_for_era_count(const Standardized& std_panel,
                                        const IndexPanel& panel,
                                        int target_eras,
                                        const SegmenterConfig& base,
                                        double lambda_lo, double lambda_hi) {
    const int T = static_cast<int>(std_panel.X.cols());
    if (target_eras < 1 || target_eras > T)
        throw BadBounds("target era count " + std::to_string(target_eras) +
                        " outside [1, " + std::to_string(T) + "]");
    if (lambda_hi < 0.0)
        lambda_hi = lambda_upper_bound(std_panel.X, base.penalty);
    if (lambda_lo < 0.0 || lambda_hi <= lambda_lo)
        throw BadBounds("need 0 <= lambda_lo < lambda_hi");

    auto solve_at = [&](double lam) {
        SegmenterConfig cfg = base;
        cfg.lambda = lam;
        DenoisedPanel den = group_tv_denoise(std_panel.X, cfg);
        return extract_change_points(den, std_panel, panel, cfg);
    };

    LambdaSearchResult best;
    int best_gap = -1;
    auto consider = [&](double lam, Segmentation seg) {
        const int gap = std::abs(seg.era_count() - target_eras);
        if (best_gap < 0 || gap < best_gap) {
            best_gap = gap;
            best.lambda = lam;
            best.segmentation = std::move(seg);
            best.exact = gap == 0;
        }
    };

    double lo = lambda_lo, hi = lambda_hi;
    for (double lam : {hi, lo}) {
        Segmentation seg = solve_at(lam);
        consider(lam, std::move(seg));
        if (best.exact) return best;
    }
    for (int it = 0; it < 60 && !best.exact; ++it) {
        const double mid = 0.5 * (lo + hi);
        Segmentation seg = solve_at(mid);
        const int count = seg.era_count();
        consider(mid, std::move(seg));
        if (count > target_eras)
            lo = mid;
        else
            hi = mid;
    }
    return best;
}

std::string segmentation_to_json(const Segmentation& seg) {
    nlohmann::json j;
    j["lambda"] = seg.lambda;
    j["penalty_variant"] = to_string(seg.penalty);
    j["converged"] = seg.converged;
    j["objective"] = seg.objective_value;
    j["iterations"] = seg.iterations;
    j["era_count"] = seg.era_count();

    nlohmann::json cps = nlohmann::json::array();
    for (std::size_t b = 0; b < seg.change_points.size(); ++b) {
        cps.push_back({{"window", seg.change_points[b]},
                       {"label_year", seg.change_years[b]}});
    }
    j["change_points"] = std::move(cps);

    nlohmann::json eras = nlohmann::json::array();
    for (const Era& era : seg.eras) {
        nlohmann::json levels, levels_std;
        for (int k = 0; k < IndexPanel::kRows; ++k) {
            levels[IndexPanel::row_names[k]] = era.level_orig(k);
            levels_std[IndexPanel::row_names[k]] = era.level_std(k);
        }
        eras.push_back({{"start_window", era.start_window},
                        {"end_window", era.end_window},
                        {"start_year", era.start_year},
                        {"end_year", era.end_year},
                        {"levels", std::move(levels)},
                        {"levels_standardized", std::move(levels_std)}});
    }
    j["eras"] = std::move(eras);
    return j.dump(2) + "\n";
}

}  // namespace graphseg
