#include "wgqed/eigensolve.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <Eigen/Eigenvalues>

namespace wgqed {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

VectorXd random_vector(Index n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    VectorXd v(n);
    for (Index i = 0; i < n; ++i)
        v[i] = static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;
    return v;
}

void project_out(const std::vector<VectorXd>& locked, VectorXd& w) {
    for (int pass = 0; pass < 2; ++pass)
        for (const auto& q : locked) w -= q.dot(w) * q;
}

struct Pair {
    double value = 0.0;
    VectorXd vector;
    double residual = 0.0;
    std::size_t matvecs = 0;
    std::vector<double> history;
};

// Residual of the deflated problem (locked directions projected out).
double true_residual(const SparseOperator& op, const std::vector<VectorXd>& locked, const VectorXd& x, double theta,
                     std::size_t& matvecs) {
    VectorXd r = op.apply(x) - theta * x;
    ++matvecs;
    project_out(locked, r);
    return r.norm();
}

// Exact Rayleigh-Ritz on the (tiny) orthogonal complement of the locked set.
Pair complement_pair(const SparseOperator& op, const std::vector<VectorXd>& locked, std::uint64_t seed) {
    const Index n = static_cast<Index>(op.dim());
    const Index c = n - static_cast<Index>(locked.size());
    std::vector<VectorXd> basis;
    std::vector<VectorXd> all = locked;
    std::uint64_t s = seed;
    while (static_cast<Index>(basis.size()) < c) {
        VectorXd v = random_vector(n, s++);
        project_out(all, v);
        const double nv = v.norm();
        if (nv < 1e-8) continue;
        v /= nv;
        basis.push_back(v);
        all.push_back(v);
    }
    Pair p;
    MatrixXd hv(n, c);
    for (Index i = 0; i < c; ++i) {
        hv.col(i) = op.apply(basis[static_cast<std::size_t>(i)]);
        ++p.matvecs;
    }
    MatrixXd t(c, c);
    for (Index i = 0; i < c; ++i)
        for (Index j = 0; j < c; ++j) t(i, j) = basis[static_cast<std::size_t>(i)].dot(hv.col(j));
    t = 0.5 * (t + t.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(t);
    p.value = es.eigenvalues()[0];
    p.vector = VectorXd::Zero(n);
    for (Index i = 0; i < c; ++i) p.vector += es.eigenvectors()(i, 0) * basis[static_cast<std::size_t>(i)];
    p.vector.normalize();
    p.residual = true_residual(op, locked, p.vector, p.value, p.matvecs);
    p.history.push_back(p.value);
    return p;
}

// Lowest eigenpair of H restricted to the complement of `locked`, by
// thick-restart Lanczos with full reorthogonalization.
Pair lowest_pair(const SparseOperator& op, const std::vector<VectorXd>& locked,
                 const SolverOptions& opts, std::uint64_t seed) {
    const Index n = static_cast<Index>(op.dim());
    const Index free_dim = n - static_cast<Index>(locked.size());
    if (free_dim <= 3) return complement_pair(op, locked, seed);

    Index m = static_cast<Index>(opts.max_krylov);
    if (m == 0) m = std::clamp<Index>(static_cast<Index>(2e7 / static_cast<double>(n)), 24, 100);
    m = std::min(m, free_dim);
    m = std::max<Index>(m, 3);
    const Index keep = std::max<Index>(1, m / 2);
    const Index check_every = std::max<Index>(1, static_cast<Index>(opts.check_every));

    MatrixXd V(n, m + 1);
    MatrixXd T = MatrixXd::Zero(m + 1, m + 1);

    VectorXd v0 = random_vector(n, seed);
    project_out(locked, v0);
    V.col(0) = v0.normalized();

    Pair best;
    best.residual = std::numeric_limits<double>::infinity();
    std::size_t matvecs = 0;
    Index k = 0;
    VectorXd w(n);

    auto finish = [&](double theta, const VectorXd& y, Index size) {
        Pair p;
        p.value = theta;
        p.vector = V.leftCols(size) * y;
        project_out(locked, p.vector);
        p.vector.normalize();
        p.matvecs = matvecs;
        p.residual = true_residual(op, locked, p.vector, theta, p.matvecs);
        return p;
    };

    std::vector<double> history;
    while (true) {
        double beta = 0.0;
        Index j = k;
        for (; j < m; ++j) {
            op.apply(V.col(j), w);
            ++matvecs;
            project_out(locked, w);
            VectorXd h = V.leftCols(j + 1).transpose() * w;
            w.noalias() -= V.leftCols(j + 1) * h;
            VectorXd h2 = V.leftCols(j + 1).transpose() * w;
            w.noalias() -= V.leftCols(j + 1) * h2;
            h += h2;
            T.block(0, j, j + 1, 1) = h;
            T.block(j, 0, 1, j + 1) = h.transpose();
            beta = w.norm();
            const double scale = std::max(1.0, T.topLeftCorner(j + 1, j + 1).cwiseAbs().maxCoeff());
            const bool breakdown = beta <= 1e-13 * scale;
            const bool check = breakdown || j + 1 == m || ((j + 1 - k) % check_every == 0);
            if (!breakdown) {
                V.col(j + 1) = w / beta;
                T(j + 1, j) = beta;
                T(j, j + 1) = beta;
            }
            if (check) {
                Eigen::SelfAdjointEigenSolver<MatrixXd> es(T.topLeftCorner(j + 1, j + 1));
                const double theta = es.eigenvalues()[0];
                history.push_back(theta);
                const double estimate = breakdown ? 0.0 : beta * std::abs(es.eigenvectors()(j, 0));
                const double target = opts.tol * std::max(1.0, std::abs(theta));
                if (estimate <= target) {
                    Pair p = finish(theta, es.eigenvectors().col(0), j + 1);
                    matvecs = p.matvecs;
                    if (p.residual <= target || breakdown) {
                        p.history = std::move(history);
                        return p;
                    }
                    if (p.residual < best.residual) best = p;
                }
                if (breakdown) {
                    // Invariant subspace: continue from a fresh direction.
                    VectorXd r = random_vector(n, seed + 0x9e3779b97f4a7c15ULL * (matvecs + 1));
                    project_out(locked, r);
                    for (int pass = 0; pass < 2; ++pass) r -= V.leftCols(j + 1) * (V.leftCols(j + 1).transpose() * r);
                    V.col(j + 1) = r.normalized();
                    T(j + 1, j) = 0.0;
                    T(j, j + 1) = 0.0;
                    beta = 0.0;
                }
            }
            if (matvecs >= opts.max_matvec) {
                throw ConvergenceError("Lanczos did not converge within " +
                                           std::to_string(opts.max_matvec) + " matrix-vector products",
                                       best.residual);
            }
        }

        // Thick restart: keep the `keep` lowest Ritz vectors plus the residual direction.
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(T.topLeftCorner(m, m));
        const MatrixXd Y = es.eigenvectors().leftCols(keep);
        constexpr Index block = 4096;
        for (Index r0 = 0; r0 < n; r0 += block) {
            const Index rows = std::min(block, n - r0);
            MatrixXd tmp = V.block(r0, 0, rows, m) * Y;
            V.block(r0, 0, rows, keep) = tmp;
        }
        V.col(keep) = V.col(m);
        T.setZero();
        for (Index i = 0; i < keep; ++i) {
            T(i, i) = es.eigenvalues()[i];
            T(i, keep) = T(keep, i) = beta * es.eigenvectors()(m - 1, i);
        }
        k = keep;
    }
}

EigenResult dense_result(const SparseOperator& op, std::size_t k, std::uint64_t seed) {
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(op.to_dense());
    EigenResult r;
    r.dense = true;
    r.seed = seed;
    for (std::size_t i = 0; i < k; ++i) {
        r.energies.push_back(es.eigenvalues()[static_cast<Index>(i)]);
        VectorXd v = es.eigenvectors().col(static_cast<Index>(i));
        fix_sign(v);
        const double res = (op.apply(v) - r.energies.back() * v).norm();
        r.residual = std::max(r.residual, res);
        r.vectors.push_back(std::move(v));
    }
    r.ritz_history.push_back(r.energies.front());
    return r;
}

}  // namespace

void fix_sign(Eigen::VectorXd& v) {
    Index arg = 0;
    double best = -1.0;
    for (Index i = 0; i < v.size(); ++i) {
        if (std::abs(v[i]) > best * (1.0 + 1e-12)) {
            best = std::abs(v[i]);
            arg = i;
        }
    }
    if (v.size() > 0 && v[arg] < 0.0) v = -v;
}

EigenResult ground_state(const SparseOperator& op, double tol, std::uint64_t seed) {
    SolverOptions opts;
    opts.tol = tol;
    opts.seed = seed;
    return ground_state(op, opts);
}

EigenResult ground_state(const SparseOperator& op, const SolverOptions& opts) {
    return low_spectrum(op, 1, opts);
}

EigenResult low_spectrum(const SparseOperator& op, std::size_t k, const SolverOptions& opts) {
    if (op.dim() == 0) throw DimensionError("operator has dimension zero");
    if (k < 1 || k > op.dim()) throw DimensionError("requested levels must satisfy 1 <= k <= dim");
    if (!(opts.tol > 0.0)) throw SpecError("solver tolerance must be positive");
    if (op.dim() <= opts.dense_fallback) return dense_result(op, k, opts.seed);
    // Deflating a large fraction of the spectrum one level at a time is slower than dense.
    if (4 * k > op.dim() && op.dim() <= opts.dense_limit) return dense_result(op, k, opts.seed);

    EigenResult r;
    r.seed = opts.seed;
    std::vector<VectorXd> locked;
    for (std::size_t i = 0; i < k; ++i) {
        Pair p = lowest_pair(op, locked, opts, opts.seed + i);
        r.iterations += p.matvecs;
        if (i == 0) r.ritz_history = std::move(p.history);
        locked.push_back(std::move(p.vector));
        r.energies.push_back(p.value);
    }

    if (k > 1) {
        // Final Rayleigh-Ritz over the locked set restores orthogonality and order.
        const Index kk = static_cast<Index>(k);
        MatrixXd X(static_cast<Index>(op.dim()), kk);
        for (Index i = 0; i < kk; ++i) X.col(i) = locked[static_cast<std::size_t>(i)];
        Eigen::HouseholderQR<MatrixXd> qr(X);
        MatrixXd Q = qr.householderQ() * MatrixXd::Identity(X.rows(), kk);
        MatrixXd HQ(X.rows(), kk);
        for (Index i = 0; i < kk; ++i) {
            HQ.col(i) = op.apply(Q.col(i));
            ++r.iterations;
        }
        MatrixXd t = Q.transpose() * HQ;
        t = 0.5 * (t + t.transpose()).eval();
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(t);
        MatrixXd Xr = Q * es.eigenvectors();
        for (Index i = 0; i < kk; ++i) {
            r.energies[static_cast<std::size_t>(i)] = es.eigenvalues()[i];
            locked[static_cast<std::size_t>(i)] = Xr.col(i);
        }
    }

    for (std::size_t i = 0; i < k; ++i) {
        VectorXd& v = locked[i];
        v.normalize();
        fix_sign(v);
        const double res = (op.apply(v) - r.energies[i] * v).norm();
        ++r.iterations;
        r.residual = std::max(r.residual, res);
    }
    r.vectors = std::move(locked);
    return r;
}

std::vector<double> dense_spectrum(const SparseOperator& op, std::size_t dense_limit) {
    if (op.dim() == 0) throw DimensionError("operator has dimension zero");
    if (op.dim() > dense_limit)
        throw DimensionError("dimension " + std::to_string(op.dim()) + " exceeds dense limit " +
                             std::to_string(dense_limit));
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(op.to_dense(), Eigen::EigenvaluesOnly);
    const VectorXd& ev = es.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

}  // namespace wgqed
