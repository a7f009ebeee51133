#include "gfk/estimator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

#include "gfk/errors.hpp"

namespace gfk {

double FitResult::fitted_ln_z_over_t(double t) const {
    double lnz = A * t + B;
    if (model == FitModel::Nonlinear) lnz += C * std::exp(-D * t);
    return lnz / t;
}

std::vector<CheckpointStat> aggregate(const std::vector<double>& z, std::size_t n_rep,
                                      const std::vector<double>& checkpoint_times) {
    const std::size_t nc = checkpoint_times.size();
    if (n_rep < 2) throw ConfigError("aggregate: need at least 2 replications");
    if (z.size() != n_rep * nc) throw ConfigError("aggregate: size mismatch");

    std::vector<CheckpointStat> stats(nc);
    for (std::size_t j = 0; j < nc; ++j) {
        // fixed ascending-index reduction order: results are identical for
        // any parallel execution schedule
        double sum = 0.0;
        for (std::size_t m = 0; m < n_rep; ++m) sum += z[m * nc + j];
        double mean = sum / static_cast<double>(n_rep);
        double ss = 0.0;
        for (std::size_t m = 0; m < n_rep; ++m) {
            double dv = z[m * nc + j] - mean;
            ss += dv * dv;
        }
        double sd = std::sqrt(ss / static_cast<double>(n_rep - 1));
        double se = sd / std::sqrt(static_cast<double>(n_rep));
        double t = checkpoint_times[j];
        CheckpointStat& s = stats[j];
        s.t = t;
        s.z_mean = mean;
        s.ln_z = std::log(mean);
        s.ln_z_over_t = s.ln_z / t;
        s.sigma = se / (mean * t); // delta method
    }
    return stats;
}

std::vector<CheckpointStat> aggregate(const std::vector<std::vector<double>>& zrows,
                                      const std::vector<double>& checkpoint_times) {
    std::vector<double> flat;
    flat.reserve(zrows.size() * checkpoint_times.size());
    for (const auto& row : zrows) {
        if (row.size() != checkpoint_times.size())
            throw ConfigError("aggregate: replication row length mismatch");
        flat.insert(flat.end(), row.begin(), row.end());
    }
    return aggregate(flat, zrows.size(), checkpoint_times);
}

namespace {

// 1/sigma^2 when every sigma is positive, otherwise uniform (exact data
// with zero spread would give infinite weights)
std::vector<double> fit_weights(const std::vector<CheckpointStat>& stats, bool weighted) {
    std::vector<double> w(stats.size(), 1.0);
    if (!weighted) return w;
    bool all_positive = std::all_of(stats.begin(), stats.end(),
                                    [](const CheckpointStat& s) { return s.sigma > 0.0; });
    if (!all_positive) return w;
    for (std::size_t i = 0; i < stats.size(); ++i) w[i] = 1.0 / (stats[i].sigma * stats[i].sigma);
    return w;
}

void fill_ls_fit(std::vector<CheckpointStat>& stats, FitResult& fit) {
    bool up = true, down = true;
    double prev = 0.0;
    for (std::size_t i = 0; i < stats.size(); ++i) {
        stats[i].ls_fit = fit.fitted_ln_z_over_t(stats[i].t);
        if (i > 0) {
            if (stats[i].ls_fit < prev) up = false;
            if (stats[i].ls_fit > prev) down = false;
        }
        prev = stats[i].ls_fit;
    }
    fit.monotone_fit = up || down;
}

// Gaussian elimination with partial pivoting; A is row-major n x n.
void solve_dense(std::vector<double>& A, std::vector<double>& b, std::size_t n) {
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(A[r * n + col]) > std::abs(A[piv * n + col])) piv = r;
        if (A[piv * n + col] == 0.0) throw FitError("singular normal equations");
        if (piv != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(A[piv * n + c], A[col * n + c]);
            std::swap(b[piv], b[col]);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            double f = A[r * n + col] / A[col * n + col];
            for (std::size_t c = col; c < n; ++c) A[r * n + c] -= f * A[col * n + c];
            b[r] -= f * b[col];
        }
    }
    for (std::size_t r = n; r-- > 0;) {
        double acc = b[r];
        for (std::size_t c = r + 1; c < n; ++c) acc -= A[r * n + c] * b[c];
        b[r] = acc / A[r * n + r];
    }
}

} // namespace

FitResult fit_linear(std::vector<CheckpointStat>& stats, double lambda0, bool weighted) {
    if (stats.size() < 3) throw FitError("fit_linear: need at least 3 checkpoints");
    std::vector<double> w = fit_weights(stats, weighted);

    double Sw = 0, St = 0, Stt = 0, Sy = 0, Sty = 0;
    for (std::size_t i = 0; i < stats.size(); ++i) {
        double t = stats[i].t, y = stats[i].ln_z;
        Sw += w[i];
        St += w[i] * t;
        Stt += w[i] * t * t;
        Sy += w[i] * y;
        Sty += w[i] * t * y;
    }
    double det = Stt * Sw - St * St;
    if (det <= 0.0 || !std::isfinite(det)) throw FitError("fit_linear: singular fit");

    FitResult fit;
    fit.model = FitModel::Linear;
    fit.A = (Sw * Sty - St * Sy) / det;
    fit.B = (Stt * Sy - St * Sty) / det;
    fit.lambda1 = lambda0 - fit.A;
    fit.extrapolation_error = std::sqrt(Sw / det);
    fill_ls_fit(stats, fit);
    return fit;
}

FitResult fit_nonlinear(std::vector<CheckpointStat>& stats, double lambda0, bool weighted) {
    if (stats.size() < 4) throw FitError("fit_nonlinear: need at least 4 checkpoints");
    const std::size_t m = stats.size();
    std::vector<double> w = fit_weights(stats, weighted);

    FitResult lin = fit_linear(stats, lambda0, weighted);
    double t1 = stats.front().t;
    std::array<double, 4> p = {lin.A, lin.B, stats.front().ln_z - lin.A * t1 - lin.B, 1.0 / t1};
    if (p[3] <= 0.0) p[3] = 1e-3;

    auto cost = [&](const std::array<double, 4>& q) {
        double c = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            double r = stats[i].ln_z - (q[0] * stats[i].t + q[1] + q[2] * std::exp(-q[3] * stats[i].t));
            c += w[i] * r * r;
        }
        return c;
    };

    constexpr int kMaxIterations = 500;
    double mu = 1e-3;
    double current = cost(p);
    bool converged = false;
    std::vector<double> JtJ(16), rhs(4);

    for (int iter = 0; iter < kMaxIterations; ++iter) {
        std::fill(JtJ.begin(), JtJ.end(), 0.0);
        std::fill(rhs.begin(), rhs.end(), 0.0);
        for (std::size_t i = 0; i < m; ++i) {
            double t = stats[i].t;
            double e = std::exp(-p[3] * t);
            double r = stats[i].ln_z - (p[0] * t + p[1] + p[2] * e);
            // model gradient: d(model)/d(A,B,C,D)
            double g[4] = {t, 1.0, e, -p[2] * t * e};
            for (int a = 0; a < 4; ++a) {
                rhs[a] += w[i] * g[a] * r;
                for (int b = 0; b < 4; ++b) JtJ[a * 4 + b] += w[i] * g[a] * g[b];
            }
        }
        bool improved = false;
        for (int damp = 0; damp < 60; ++damp) {
            std::vector<double> A = JtJ;
            std::vector<double> b = rhs;
            for (int a = 0; a < 4; ++a) A[a * 4 + a] += mu * std::max(JtJ[a * 4 + a], 1e-30);
            try {
                solve_dense(A, b, 4);
            } catch (const FitError&) {
                mu *= 10.0;
                continue;
            }
            std::array<double, 4> q = {p[0] + b[0], p[1] + b[1], p[2] + b[2], p[3] + b[3]};
            if (q[3] <= 0.0) { // keep the decay rate positive
                mu *= 10.0;
                continue;
            }
            double c = cost(q);
            if (c <= current) {
                double step2 = b[0] * b[0] + b[1] * b[1] + b[2] * b[2] + b[3] * b[3];
                bool tiny = (current - c) <= 1e-15 * (current + 1e-300) || step2 < 1e-28;
                p = q;
                current = c;
                mu = std::max(mu * 0.3, 1e-12);
                improved = true;
                if (tiny) converged = true;
                break;
            }
            mu *= 10.0;
        }
        if (!improved || converged) {
            converged = true;
            break;
        }
    }
    if (!converged) throw FitError("fit_nonlinear: no convergence within 500 iterations");

    // covariance of A from the weighted (J^T W J)^{-1}
    std::fill(JtJ.begin(), JtJ.end(), 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        double t = stats[i].t;
        double e = std::exp(-p[3] * t);
        double g[4] = {t, 1.0, e, -p[2] * t * e};
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) JtJ[a * 4 + b] += w[i] * g[a] * g[b];
    }
    std::vector<double> unit(4, 0.0);
    unit[0] = 1.0;
    std::vector<double> A = JtJ;
    double errA = 0.0;
    try {
        solve_dense(A, unit, 4); // first column of the inverse
        errA = unit[0] > 0.0 ? std::sqrt(unit[0]) : 0.0;
    } catch (const FitError&) {
        errA = 0.0;
    }

    FitResult fit;
    fit.model = FitModel::Nonlinear;
    fit.A = p[0];
    fit.B = p[1];
    fit.C = p[2];
    fit.D = p[3];
    fit.lambda1 = lambda0 - fit.A;
    fit.extrapolation_error = errA > 0.0 ? errA : lin.extrapolation_error;
    fill_ls_fit(stats, fit);
    return fit;
}

} // namespace gfk
