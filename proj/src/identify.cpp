#include "preisach/identify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "preisach/errors.hpp"

namespace preisach {

SignMatrix sign_matrix(const PreisachGrid& grid, std::span<const int> levels) {
    const int n = grid.unknown_count();
    const std::int64_t t = static_cast<std::int64_t>(levels.size());

    // The curve evolution is a cheap sequential scan; the per-step sign rows
    // dominate and are independent once the curves are stored.
    std::vector<MemoryCurve> curves;
    curves.reserve(levels.size());
    MemoryCurve c;
    for (int lvl : levels) {
        c = c.updated(lvl);
        curves.push_back(c);
    }

    SignMatrix out;
    out.rows = static_cast<int>(t);
    out.cols = n;
    out.a.resize(static_cast<std::size_t>(t) * n);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < t; ++i) {
        std::vector<std::int8_t> row = sign_row(curves[static_cast<std::size_t>(i)], grid);
        std::copy(row.begin(), row.end(), out.a.begin() + static_cast<std::size_t>(i) * n);
    }
    return out;
}

IdentificationSystem assemble(const PreisachGrid& grid, std::span<const double> inputs,
                              std::span<const double> y) {
    if (inputs.size() != y.size())
        throw validation_error("input and output sequences must have equal length");
    if (inputs.empty())
        throw validation_error("identification needs at least one sample");
    for (double v : y)
        if (!std::isfinite(v)) throw validation_error("measured outputs must be finite");
    std::vector<int> levels = to_levels(grid, inputs);
    return IdentificationSystem{grid, sign_matrix(grid, levels),
                                std::vector<double>(y.begin(), y.end())};
}

std::vector<std::int64_t> gram_int(const SignMatrix& delta) {
    const int n = delta.cols, t = delta.rows;
    std::vector<std::int64_t> g(static_cast<std::size_t>(n) * n, 0);
#pragma omp parallel for schedule(dynamic, 4)
    for (int a = 0; a < n; ++a) {
        for (int b = a; b < n; ++b) {
            std::int64_t acc = 0;
            const std::int8_t* pa = delta.a.data() + a;
            const std::int8_t* pb = delta.a.data() + b;
            for (int i = 0; i < t; ++i, pa += n, pb += n)
                acc += static_cast<std::int64_t>(*pa) * (*pb);
            g[static_cast<std::size_t>(a) * n + b] = acc;
            g[static_cast<std::size_t>(b) * n + a] = acc;
        }
    }
    return g;
}

Eigen::MatrixXd delta_dense(const SignMatrix& delta) {
    Eigen::MatrixXd a(delta.rows, delta.cols);
    for (int i = 0; i < delta.rows; ++i)
        for (int j = 0; j < delta.cols; ++j) a(i, j) = delta.at(i, j);
    return a;
}

namespace {

Eigen::VectorXd delta_t_y(const IdentificationSystem& sys) {
    const int n = sys.n(), t = sys.t();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < t; ++i) {
        const std::int8_t* row = sys.delta.a.data() + static_cast<std::size_t>(i) * n;
        const double yi = sys.y[static_cast<std::size_t>(i)];
        for (int j = 0; j < n; ++j) b[j] += row[j] > 0 ? yi : -yi;
    }
    return b;
}

std::vector<double> predict(const IdentificationSystem& sys, const KernelVector& x) {
    const int n = sys.n();
    const std::int64_t t = sys.t();
    std::vector<double> preds(static_cast<std::size_t>(t));
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < t; ++i) {
        const std::int8_t* row = sys.delta.a.data() + static_cast<std::size_t>(i) * n;
        double acc = 0.0;
        for (int j = 0; j < n; ++j) acc += row[j] > 0 ? x.x[j] : -x.x[j];
        preds[static_cast<std::size_t>(i)] = acc;
    }
    return preds;
}

void fill_fit_quality(const IdentificationSystem& sys, FitReport& report) {
    report.predictions = predict(sys, report.x_star);
    double ss = 0.0;
    for (std::size_t i = 0; i < report.predictions.size(); ++i) {
        double r = sys.y[i] - report.predictions[i];
        ss += r * r;
    }
    report.residual_rms = std::sqrt(ss / sys.t());
    report.objective = 0.5 * ss / sys.t();
}

} // namespace

ReducedSystem reduce(const IdentificationSystem& sys, double svd_tol) {
    if (!(svd_tol > 0.0) || !(svd_tol < 1.0))
        throw validation_error("svd tolerance must lie in (0, 1)");

    const int n = sys.n();
    std::vector<std::int64_t> g = gram_int(sys.delta);
    Eigen::MatrixXd gd(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            gd(i, j) = static_cast<double>(g[static_cast<std::size_t>(i) * n + j]);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gd);
    if (eig.info() != Eigen::Success)
        throw std::logic_error("eigendecomposition of the Gram matrix failed");
    const Eigen::VectorXd& ev = eig.eigenvalues();  // ascending
    const double sigma_max = ev[n - 1];
    if (!(sigma_max > 0.0))
        throw std::logic_error("sign matrix Gram has no positive spectrum");

    const double thr = svd_tol * sigma_max;
    int q = 0;
    for (int i = 0; i < n; ++i)
        if (ev[i] > thr) ++q;

    ReducedSystem rd;
    rd.q = q;
    rd.s_hat.resize(q);
    rd.v_hat.resize(n, q);
    for (int k = 0; k < q; ++k) {
        rd.s_hat[k] = ev[n - 1 - k];
        rd.v_hat.col(k) = eig.eigenvectors().col(n - 1 - k);
    }
    return rd;
}

FitReport solve(const IdentificationSystem& sys, double svd_tol) {
    ReducedSystem rd = reduce(sys, svd_tol);
    Eigen::VectorXd b = delta_t_y(sys);
    Eigen::VectorXd z = rd.s_hat.cwiseInverse().asDiagonal() * (rd.v_hat.transpose() * b);
    Eigen::VectorXd x = rd.v_hat * z;

    FitReport report;
    report.x_star.x.assign(x.data(), x.data() + x.size());
    report.q = rd.q;
    report.svd_tol = svd_tol;
    fill_fit_quality(sys, report);
    return report;
}

FitReport solve_nonneg(const IdentificationSystem& sys, double svd_tol, int max_iterations) {
    const int n = sys.n(), t = sys.t();
    const int free_idx = n - 1;  // constant term, unconstrained
    if (max_iterations <= 0) max_iterations = 3 * n + 50;

    Eigen::MatrixXd a = delta_dense(sys.delta);
    Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(sys.y.data(), t);

    const double scale = std::max(1.0, delta_t_y(sys).cwiseAbs().maxCoeff());
    const double tol_entry = 1e-12 * scale;
    const double tol_zero = 1e-14 * scale;

    std::vector<int> passive{free_idx};
    std::vector<char> in_passive(static_cast<std::size_t>(n), 0);
    in_passive[static_cast<std::size_t>(free_idx)] = 1;
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);

    auto solve_passive = [&](const std::vector<int>& p) {
        Eigen::MatrixXd ap(t, static_cast<int>(p.size()));
        for (std::size_t k = 0; k < p.size(); ++k) ap.col(static_cast<int>(k)) = a.col(p[k]);
        // Complete orthogonal decomposition gives the minimum-norm solution
        // even when the passive columns are linearly dependent.
        return Eigen::VectorXd(ap.completeOrthogonalDecomposition().solve(y));
    };

    auto apply_passive = [&](const std::vector<int>& p, const Eigen::VectorXd& z) {
        x.setZero();
        for (std::size_t k = 0; k < p.size(); ++k) x[p[k]] = z[static_cast<int>(k)];
    };

    apply_passive(passive, solve_passive(passive));

    int iter = 0;
    bool converged = false;
    while (iter < max_iterations) {
        ++iter;
        Eigen::VectorXd w = a.transpose() * (y - a * x);
        int best = -1;
        double best_w = tol_entry;
        for (int j = 0; j < n - 1; ++j) {
            if (!in_passive[static_cast<std::size_t>(j)] && w[j] > best_w) {
                best_w = w[j];
                best = j;
            }
        }
        if (best < 0) {
            converged = true;
            break;
        }
        passive.push_back(best);
        in_passive[static_cast<std::size_t>(best)] = 1;

        for (;;) {
            Eigen::VectorXd z = solve_passive(passive);
            bool feasible = true;
            double alpha = 1.0;
            for (std::size_t k = 0; k < passive.size(); ++k) {
                int j = passive[k];
                if (j == free_idx) continue;
                if (z[static_cast<int>(k)] <= 0.0) {
                    feasible = false;
                    double xk = x[j];
                    double denom = xk - z[static_cast<int>(k)];
                    double step = denom > 0.0 ? xk / denom : 0.0;
                    alpha = std::min(alpha, step);
                }
            }
            if (feasible) {
                apply_passive(passive, z);
                break;
            }
            // Back off along the segment to the feasible boundary and drop
            // the variables that landed on it.
            for (std::size_t k = 0; k < passive.size(); ++k) {
                int j = passive[k];
                x[j] += alpha * (z[static_cast<int>(k)] - x[j]);
            }
            std::vector<int> next;
            next.reserve(passive.size());
            for (int j : passive) {
                if (j != free_idx && x[j] <= tol_zero) {
                    in_passive[static_cast<std::size_t>(j)] = 0;
                    x[j] = 0.0;
                } else {
                    next.push_back(j);
                }
            }
            passive = std::move(next);
            if (passive.empty() || (passive.size() == 1 && passive[0] == free_idx)) {
                apply_passive(passive, solve_passive(passive));
                break;
            }
        }
    }

    Eigen::VectorXd grad = a.transpose() * (a * x - y);
    double kkt = 0.0;
    for (int j = 0; j < n; ++j) {
        if (j == free_idx || x[j] > 0.0)
            kkt = std::max(kkt, std::abs(grad[j]));
        else
            kkt = std::max(kkt, std::max(0.0, -grad[j]));
        if (j != free_idx) kkt = std::max(kkt, std::max(0.0, -x[j]));
    }

    FitReport report;
    report.x_star.x.assign(x.data(), x.data() + x.size());
    report.q = reduce(sys, svd_tol).q;
    report.svd_tol = svd_tol;
    report.converged = converged;
    report.iterations = iter;
    report.kkt_residual = kkt;
    fill_fit_quality(sys, report);
    return report;
}

std::vector<double> cross_validate(const IdentificationSystem& sys, int folds, double svd_tol) {
    const int t = sys.t(), n = sys.n();
    if (folds < 2) throw validation_error("cross-validation needs at least two folds");
    if (folds > t) throw validation_error("more folds than samples");

    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(folds));
    for (int k = 0; k < folds; ++k) {
        const int lo = static_cast<int>(static_cast<std::int64_t>(k) * t / folds);
        const int hi = static_cast<int>(static_cast<std::int64_t>(k + 1) * t / folds);

        IdentificationSystem train{sys.grid, SignMatrix{}, {}};
        train.delta.rows = t - (hi - lo);
        train.delta.cols = n;
        train.delta.a.reserve(static_cast<std::size_t>(train.delta.rows) * n);
        train.y.reserve(static_cast<std::size_t>(train.delta.rows));
        for (int i = 0; i < t; ++i) {
            if (i >= lo && i < hi) continue;
            const auto* row = sys.delta.a.data() + static_cast<std::size_t>(i) * n;
            train.delta.a.insert(train.delta.a.end(), row, row + n);
            train.y.push_back(sys.y[static_cast<std::size_t>(i)]);
        }

        FitReport fit = solve(train, svd_tol);
        double ss = 0.0;
        for (int i = lo; i < hi; ++i) {
            const auto* row = sys.delta.a.data() + static_cast<std::size_t>(i) * n;
            double pred = 0.0;
            for (int j = 0; j < n; ++j)
                pred += row[j] > 0 ? fit.x_star.x[static_cast<std::size_t>(j)]
                                   : -fit.x_star.x[static_cast<std::size_t>(j)];
            double r = sys.y[static_cast<std::size_t>(i)] - pred;
            ss += r * r;
        }
        out.push_back(std::sqrt(ss / (hi - lo)));
    }
    return out;
}

double objective_half_sq(const IdentificationSystem& sys, const KernelVector& x) {
    const int n = sys.n(), t = sys.t();
    double ss = 0.0;
    for (int i = 0; i < t; ++i) {
        const std::int8_t* row = sys.delta.a.data() + static_cast<std::size_t>(i) * n;
        double acc = 0.0;
        for (int j = 0; j < n; ++j) acc += row[j] > 0 ? x.x[j] : -x.x[j];
        double r = acc - sys.y[static_cast<std::size_t>(i)];
        ss += r * r;
    }
    return 0.5 * ss;
}

double reduced_objective(const ReducedSystem& rd, const IdentificationSystem& sys,
                         const Eigen::VectorXd& z) {
    Eigen::VectorXd b = delta_t_y(sys);
    double quad = 0.0;
    for (int k = 0; k < rd.q; ++k) quad += rd.s_hat[k] * z[k] * z[k];
    return 0.5 * quad - (rd.v_hat.transpose() * b).dot(z);
}

} // namespace preisach
