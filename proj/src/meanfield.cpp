#include "wgqed/meanfield.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <string>
#include <thread>

#include <Eigen/Eigenvalues>

#include "wgqed/basis.hpp"
#include "wgqed/hamiltonian.hpp"

namespace wgqed {

namespace {

constexpr double kJFloor = 1e-6;
constexpr double kDegenerateTol = 1e-10;
constexpr int kMaxSector = 64;

struct Sector {
    SectorBasis basis;
    Eigen::VectorXd evals;
    Eigen::MatrixXd evecs;
};

ModelSpec sector_spec(const MeanFieldCell& c, int n, int cap) {
    ModelSpec s;
    s.L = c.d;
    s.atom_sites = {0};
    s.boundary = Boundary::open;
    s.J = c.J;
    s.g = c.g;
    s.delta = c.delta;
    s.nonlinearity = c.nonlinearity;
    s.n_trunc = std::max(cap, 1);
    s.n_ex = n;
    return s;
}

// phi = 0 sector n with no truncation effect (cap >= n).
Sector solve_sector(const MeanFieldCell& c, int n, int cap) {
    const ModelSpec s = sector_spec(c, n, cap);
    Sector out{enumerate_sector(s), {}, {}};
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(build_hamiltonian(s, out.basis).to_dense());
    out.evals = es.eigenvalues();
    out.evecs = es.eigenvectors();
    return out;
}

double sector_ground(const MeanFieldCell& c, int n) {
    return solve_sector(c, n, n).evals[0] - c.mu * n;
}

// Excitation number of the phi = 0 ground state; competing sectors within
// tolerance raise DegenerateGroundStateError.
int ground_sector(const MeanFieldCell& c) {
    int hi = 6;
    std::vector<double> e;
    while (true) {
        for (int n = static_cast<int>(e.size()); n <= hi; ++n) e.push_back(sector_ground(c, n));
        const auto it = std::min_element(e.begin(), e.end());
        const int best = static_cast<int>(it - e.begin());
        if (best <= hi - 2) {
            const double scale = std::max(1.0, std::abs(*it));
            for (int n = 0; n <= hi; ++n) {
                if (n != best && e[static_cast<std::size_t>(n)] - *it <= kDegenerateTol * scale)
                    throw DegenerateGroundStateError("cell ground state degenerate between " + std::to_string(best) +
                                                         " and " + std::to_string(n) + " excitations",
                                                     std::min(best, n), std::max(best, n));
            }
            return best;
        }
        hi += 4;
        if (hi > kMaxSector) throw TruncationError("cell occupation unbounded at this chemical potential");
    }
}

// a_x^+ (raise) or a_x applied to a sector vector, expressed in the target basis.
Eigen::VectorXd move_photon(const Sector& from, const Eigen::VectorXd& psi, const Sector& to, int x, bool raise) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(to.basis.dim()));
    std::vector<std::uint8_t> work(static_cast<std::size_t>(from.basis.sites()));
    const auto sx = static_cast<std::size_t>(x);
    for (std::size_t i = 0; i < from.basis.dim(); ++i) {
        const auto occ = from.basis.photons(i);
        const int n = occ[sx];
        if (!raise && n == 0) continue;
        std::copy(occ.begin(), occ.end(), work.begin());
        work[sx] = static_cast<std::uint8_t>(raise ? n + 1 : n - 1);
        auto k = to.basis.find(work, from.basis.atom_mask(i));
        if (!k) throw TruncationError("photon operator left the cell sector");
        out[static_cast<Eigen::Index>(*k)] += std::sqrt(static_cast<double>(raise ? n + 1 : n)) * psi[static_cast<Eigen::Index>(i)];
    }
    return out;
}

double golden_max(const std::function<double(double)>& f, double a, double b, double tol) {
    const double r = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - r * (b - a);
    double d = a + r * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 200 && b - a > tol; ++it) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    return fc >= fd ? c : d;
}

}  // namespace

void MeanFieldCell::validate() const {
    if (d < 1) throw SpecError("cell needs d >= 1");
    if (!(g >= 0.0)) throw SpecError("cell coupling g must be >= 0");
    if (n_trunc < 0) throw SpecError("cell truncation must be >= 0");
    if (!std::isfinite(J) || !std::isfinite(mu) || !std::isfinite(delta)) throw SpecError("cell parameters must be finite");
}

Eigen::MatrixXd build_hmf(const MeanFieldCell& cell, double phi1, double phi2) {
    cell.validate();
    const int T = cell.n_trunc;
    if (T < 1) throw SpecError("build_hmf needs an explicit n_trunc >= 1");
    if (cell.nonlinearity.max_occupation() < T) throw SpecError("nonlinearity table shorter than cell truncation");
    const int d = cell.d;
    const Eigen::Index base = T + 1;
    Eigen::Index cavity_states = 1;
    for (int x = 0; x < d; ++x) cavity_states *= base;
    const Eigen::Index dim = 2 * cavity_states;
    if (dim > 200000) throw ResourceError("cell dimension too large for dense diagonalization");

    std::vector<Eigen::Index> stride(static_cast<std::size_t>(d));
    for (int x = 0; x < d; ++x) stride[static_cast<std::size_t>(x)] = x == 0 ? 2 : stride[static_cast<std::size_t>(x - 1)] * base;
    std::vector<int> n(static_cast<std::size_t>(d));

    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    const double J = cell.J;
    const int site_d = d - 1;
    for (Eigen::Index idx = 0; idx < dim; ++idx) {
        const int a = static_cast<int>(idx % 2);
        Eigen::Index rest = idx / 2;
        int total = a;
        double diag = -cell.delta * a + 2.0 * J * phi1 * phi2;
        for (int x = 0; x < d; ++x) {
            n[static_cast<std::size_t>(x)] = static_cast<int>(rest % base);
            rest /= base;
            total += n[static_cast<std::size_t>(x)];
            diag += cell.nonlinearity.energy(n[static_cast<std::size_t>(x)]);
        }
        h(idx, idx) = diag - cell.mu * total;

        // a^+ on site x: lower-index partner of each raise.
        for (int x = 0; x < d; ++x) {
            const int nx = n[static_cast<std::size_t>(x)];
            if (nx == T) continue;
            const Eigen::Index up = idx + stride[static_cast<std::size_t>(x)];
            const double amp = std::sqrt(static_cast<double>(nx + 1));
            double src = 0.0;
            if (x == site_d) src += phi1;
            if (x == 0) src += phi2;
            if (src != 0.0) {
                h(up, idx) += -J * src * amp;
                h(idx, up) += -J * src * amp;
            }
            if (x + 1 < d) {
                const int ny = n[static_cast<std::size_t>(x + 1)];
                if (ny > 0) {
                    // a_x^+ a_{x+1}
                    const Eigen::Index to = up - stride[static_cast<std::size_t>(x + 1)];
                    const double v = -J * std::sqrt(static_cast<double>(ny) * (nx + 1));
                    h(to, idx) += v;
                    h(idx, to) += v;
                }
            }
        }
        // sigma^+ a on the atom's cavity
        if (a == 0 && n[0] > 0) {
            const Eigen::Index to = idx + 1 - stride[0];
            const double v = cell.g * std::sqrt(static_cast<double>(n[0]));
            h(to, idx) += v;
            h(idx, to) += v;
        }
    }
    return h;
}

double cell_ground_energy(const MeanFieldCell& cell, double phi1, double phi2) {
    cell.validate();
    MeanFieldCell c = cell;
    if (c.n_trunc == 0) {
        int n0 = 0;
        try {
            n0 = ground_sector(c);
        } catch (const DegenerateGroundStateError& e) {
            n0 = e.n_b;
        }
        c.n_trunc = n0 + 3;
    }
    while (true) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(build_hmf(c, phi1, phi2));
        const Eigen::VectorXd psi = es.eigenvectors().col(0);
        const Eigen::Index base = c.n_trunc + 1;
        double edge = 0.0;
        for (Eigen::Index idx = 0; idx < psi.size(); ++idx) {
            Eigen::Index rest = idx / 2;
            bool at_cap = false;
            for (int x = 0; x < c.d; ++x) {
                at_cap = at_cap || rest % base == c.n_trunc;
                rest /= base;
            }
            if (at_cap) edge += psi[idx] * psi[idx];
        }
        if (edge <= 1e-8) return es.eigenvalues()[0];
        if (cell.n_trunc != 0 || 2.0 * std::pow(base + 1.0, c.d) > 6000.0)
            throw TruncationError("cell truncation " + std::to_string(c.n_trunc) + " too small: boundary weight " +
                                  std::to_string(edge));
        ++c.n_trunc;
    }
}

LandauCoefficients landau_coefficients_in_sector(const MeanFieldCell& cell, int N) {
    cell.validate();
    if (N < 0) throw SpecError("sector must be >= 0");
    const int cap = N + 1;
    const Sector mid = solve_sector(cell, N, cap);
    const double e0 = mid.evals[0];
    if (mid.evals.size() > 1 && mid.evals[1] - e0 <= kDegenerateTol * std::max(1.0, std::abs(e0)))
        throw DegenerateGroundStateError("cell ground state degenerate within sector " + std::to_string(N), N, N);
    const Eigen::VectorXd psi = mid.evecs.col(0);
    const int site_1 = 0;
    const int site_d = cell.d - 1;

    LandauCoefficients lc;
    lc.n_ground = N;
    lc.E0 = e0 - cell.mu * N;
    double s_d = 0.0, s_1 = 0.0, s_x = 0.0;
    auto accumulate = [&](const Sector& s, int n, bool raise) {
        const Eigen::VectorXd pd = s.evecs.transpose() * move_photon(mid, psi, s, site_d, raise);
        const Eigen::VectorXd p1 = s.evecs.transpose() * move_photon(mid, psi, s, site_1, raise);
        for (Eigen::Index k = 0; k < s.evals.size(); ++k) {
            const double denom = lc.E0 - (s.evals[k] - cell.mu * n);
            s_d += pd[k] * pd[k] / denom;
            s_1 += p1[k] * p1[k] / denom;
            s_x += p1[k] * pd[k] / denom;
        }
    };
    accumulate(solve_sector(cell, N + 1, cap), N + 1, true);
    if (N > 0) accumulate(solve_sector(cell, N - 1, cap), N - 1, false);
    const double J = cell.J;
    lc.u1 = J * J * s_d;
    lc.u2 = J * J * s_1;
    lc.v = J + J * J * s_x;
    return lc;
}

LandauCoefficients landau_coefficients(const MeanFieldCell& cell) {
    cell.validate();
    return landau_coefficients_in_sector(cell, ground_sector(cell));
}

double hessian_determinant(const MeanFieldCell& cell, int sector, double J) {
    MeanFieldCell c = cell;
    c.J = J;
    const auto lc = landau_coefficients_in_sector(c, sector);
    return (lc.u1 * lc.u2 - lc.v * lc.v) / (J * J);
}

CriticalHopping critical_hopping_mf(const MeanFieldCell& cell, double mu) {
    cell.validate();
    MeanFieldCell c = cell;
    c.mu = mu;
    c.J = kJFloor;
    CriticalHopping out;
    out.n_mott = ground_sector(c);

    const double u = std::abs(c.nonlinearity.energy(std::min(2, c.nonlinearity.max_occupation())));
    const double j_max = 10.0 * std::max({c.g, u, std::abs(c.delta), 1.0});
    auto f = [&](double J) { return hessian_determinant(c, out.n_mott, J); };

    double lo = kJFloor;
    if (f(lo) >= 0.0) {
        out.lo = out.hi = lo;
        return out;
    }
    double hi = lo;
    bool found = false;
    while (hi < j_max) {
        lo = hi;
        hi = std::min(hi * 1.1, j_max);
        if (f(hi) >= 0.0) {
            found = true;
            break;
        }
    }
    if (!found) {
        out.lo = lo;
        out.hi = hi;
        return out;
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (f(mid) >= 0.0 ? hi : lo) = mid;
    }
    out.lo = lo;
    out.hi = hi;
    out.j_c = 0.5 * (lo + hi);
    return out;
}

LobeTip refine_lobe_tip(const MeanFieldCell& cell, int n, double mu_lo, double mu_hi) {
    auto jc = [&](double mu) {
        try {
            const auto r = critical_hopping_mf(cell, mu);
            return r.n_mott == n ? r.j_c.value_or(0.0) : 0.0;
        } catch (const DegenerateGroundStateError&) {
            return 0.0;
        }
    };
    const double tol = 1e-10 * std::max(1.0, std::abs(mu_hi - mu_lo));
    const double mu = golden_max(jc, mu_lo, mu_hi, tol);
    return {mu, jc(mu)};
}

MeanFieldResult lobe_scan(const MeanFieldCell& cell, const std::vector<double>& mu_grid, int target_n, int threads) {
    cell.validate();
    MeanFieldResult res;
    res.points.resize(mu_grid.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < mu_grid.size(); i = next++) {
            LobePoint p;
            p.mu = mu_grid[i];
            try {
                const auto r = critical_hopping_mf(cell, p.mu);
                p.mean_n = r.n_mott;
                p.j_c = r.j_c;
            } catch (const DegenerateGroundStateError&) {
                p.degenerate = true;
            }
            res.points[i] = p;
        }
    };
    const int nt = std::max(1, threads);
    std::vector<std::thread> pool;
    for (int t = 1; t < nt; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();

    std::map<int, std::size_t> best;
    for (std::size_t i = 0; i < res.points.size(); ++i) {
        const auto& p = res.points[i];
        if (p.mean_n < 0 || !p.j_c) continue;
        auto it = best.find(p.mean_n);
        if (it == best.end() || *res.points[it->second].j_c < *p.j_c) best[p.mean_n] = i;
    }
    for (const auto& p : res.points)
        if (p.mean_n >= 0 && !best.count(p.mean_n)) res.tips[p.mean_n] = {p.mu, 0.0};
    for (auto [n, i] : best) {
        const double a = mu_grid[i > 0 ? i - 1 : i];
        const double b = mu_grid[i + 1 < mu_grid.size() ? i + 1 : i];
        LobeTip tip{mu_grid[i], *res.points[i].j_c};
        if (b > a) {
            const auto refined = refine_lobe_tip(cell, n, std::min(a, b), std::max(a, b));
            if (refined.j_c > tip.j_c) tip = refined;
        }
        res.tips[n] = tip;
    }
    if (target_n > 0 && !res.tips.count(target_n))
        throw EmptyLobeError("no chemical potential on the grid yields " + std::to_string(target_n) + " excitations");
    return res;
}

}  // namespace wgqed
