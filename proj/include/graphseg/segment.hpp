#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "graphseg/topology.hpp"

namespace graphseg {

// Temporal-difference penalty applied across the K components. group_l2
// couples the components so they jump together; literal_l1 penalizes each
// component's jumps separately.
enum class PenaltyVariant { group_l2, literal_l1 };

std::string to_string(PenaltyVariant v);
PenaltyVariant penalty_from_string(const std::string& s);

struct SegmenterConfig {
    double lambda = 1.0;
    PenaltyVariant penalty = PenaltyVariant::group_l2;
    double convergence_tol = 1e-9;
    int max_iterations = 100000;
    // Jump threshold separating solver jitter from real change points, as a
    // fraction of the per-component standardized scale.
    double changepoint_eps = 1e-3;

    void validate() const;
};

// Row-standardized index panel plus the affine parameters needed to map
// era levels back to original units.
struct Standardized {
    Eigen::MatrixXd X;     // K x T, zero row means, unit population std
    Eigen::VectorXd mean;  // per row
    Eigen::VectorXd scale; // per row, population std
};

Standardized standardize(const IndexPanel& panel);

// sum_{k,t} (X-U)^2 + lambda * sum_t P(U(t+1)-U(t)), with P the l2 norm
// across components (group_l2) or the l1 norm (literal_l1).
double objective(const Eigen::MatrixXd& X, const Eigen::MatrixXd& U,
                 double lambda, PenaltyVariant variant);

struct DenoisedPanel {
    Eigen::MatrixXd Y;
    double objective_value = 0.0;
    int iterations_used = 0;
    bool converged = false;
};

// Minimizes the objective with a primal-dual (Chambolle-Pock) iteration:
// fixed steps sigma = tau = 0.49 from the bound ||D||^2 <= 4 on the
// temporal difference operator, U0 = X, dual 0. Deterministic.
DenoisedPanel group_tv_denoise(const Eigen::MatrixXd& X,
                               const SegmenterConfig& config);

struct Era {
    int start_window = 0;
    int end_window = 0;  // inclusive
    int start_year = 0;
    int end_year = 0;
    Eigen::VectorXd level_std;   // per-index era mean of Y
    Eigen::VectorXd level_orig;  // mapped back through the standardization
};

struct Segmentation {
    double lambda = 0.0;
    PenaltyVariant penalty = PenaltyVariant::group_l2;
    bool converged = false;
    double objective_value = 0.0;
    int iterations = 0;
    std::vector<int> change_points;  // break between window t and t+1
    std::vector<int> change_years;   // label year of the first window after the break
    std::vector<Era> eras;

    int era_count() const { return static_cast<int>(eras.size()); }
};

// t is a change point iff max_k |Y_k(t+1) - Y_k(t)| > changepoint_eps.
// Era levels are per-era means of Y, reported in standardized units and,
// through `std`, in original units.
Segmentation extract_change_points(const DenoisedPanel& denoised,
                                   const Standardized& std_panel,
                                   const IndexPanel& panel,
                                   const SegmenterConfig& config);

// Smallest lambda at which the constant (column-mean) solution is optimal,
// from the stationarity condition at that solution. Above it the
// segmentation has a single era.
double lambda_upper_bound(const Eigen::MatrixXd& X,
                          PenaltyVariant variant = PenaltyVariant::group_l2);

struct LambdaSearchResult {
    double lambda = 0.0;
    Segmentation segmentation;
    bool exact = false;  // target era count reached exactly
};

// Bisection over lambda for a target era count. Era count is not
// guaranteed monotone in lambda; when the target is never hit the nearest
// count found is returned with exact=false.
LambdaSearchResult lambda_for_era_count(const Standardized& std_panel,
                                        const IndexPanel& panel,
                                        int target_eras,
                                        const SegmenterConfig& base,
                                        double lambda_lo = 0.0,
                                        double lambda_hi = -1.0);

// JSON report for one segmentation (era levels in original units).
std::string segmentation_to_json(const Segmentation& seg);

}  // namespace graphseg
