#pragma once

#include <string>
#include <vector>

namespace gfk {

// Per-checkpoint statistics over replications: the z_t, ln(z_t), ln(z_t)/t
// and sigma table columns.
struct CheckpointStat {
    double t = 0.0;
    double z_mean = 0.0;
    double ln_z = 0.0;
    double ln_z_over_t = 0.0;
    double sigma = 0.0;  // standard error of ln_z_over_t (delta method)
    double ls_fit = 0.0; // fitted ln(z_t)/t, filled in by the fits
};

enum class FitModel { Linear, Nonlinear };

struct FitResult {
    FitModel model = FitModel::Linear;
    double lambda1 = 0.0;
    double extrapolation_error = 0.0;
    // Linear: ln z = A t + B.  Nonlinear: ln z = A t + B + C e^{-D t}.
    double A = 0.0, B = 0.0, C = 0.0, D = 0.0;
    bool monotone_fit = true; // fitted ln(z)/t monotone over the checkpoints

    double fitted_ln_z_over_t(double t) const;
};

// Means and delta-method errors over the replication Z rows; the reduction
// runs in ascending replication-index order so results do not depend on
// the execution schedule.  zrows is indexed [replication][checkpoint].
std::vector<CheckpointStat> aggregate(const std::vector<std::vector<double>>& zrows,
                                      const std::vector<double>& checkpoint_times);

// Flat-buffer variant used by the runner: z[k * n_checkpoints + j].
std::vector<CheckpointStat> aggregate(const std::vector<double>& z, std::size_t n_rep,
                                      const std::vector<double>& checkpoint_times);

// Weighted least squares of ln z_t = A t + B, weights 1/sigma^2;
// lambda1 = lambda0 - A, error from the fit covariance of A.  Fills the
// ls_fit column of stats.
FitResult fit_linear(std::vector<CheckpointStat>& stats, double lambda0,
                     bool weighted = true);

// Weighted Levenberg iteration on ln z = A t + B + C e^{-D t} (D > 0),
// seeded from fit_linear.  Throws FitError after 500 iterations without
// convergence.
FitResult fit_nonlinear(std::vector<CheckpointStat>& stats, double lambda0,
                        bool weighted = true);

} // namespace gfk
