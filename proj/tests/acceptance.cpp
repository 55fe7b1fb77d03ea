// Prints one PASS/FAIL line per acceptance criterion. Criteria listed in
// kDeclaredUnattainable are reported but do not change the exit status; any
// other failure does.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <mutex>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Eigenvalues>

#include "wgqed/analytics.hpp"
#include "wgqed/basis.hpp"
#include "wgqed/effective.hpp"
#include "wgqed/eigensolve.hpp"
#include "wgqed/hamiltonian.hpp"
#include "wgqed/meanfield.hpp"
#include "wgqed/observables.hpp"
#include "wgqed/polariton.hpp"

using namespace wgqed;

namespace {

const std::set<std::string> kDeclaredUnattainable = {"weak-coupling-threshold", "mott-plateau-g2"};

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [miss] " << what << ";";
        } else {
            detail << " " << what << ";";
        }
    }
};

std::string fmt(double v, int prec = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    return buf;
}

// Excitation sum rule over every ground state this binary produces.
struct SumRule {
    std::mutex m;
    std::size_t states = 0;
    double worst = 0.0;

    void record(const SectorBasis& b, const Eigen::VectorXd& psi) {
        const double err = std::abs(apply_number_operators(b, psi).total() - b.n_ex());
        std::lock_guard<std::mutex> lock(m);
        ++states;
        worst = std::max(worst, err);
    }
} g_sum_rule;

struct Ground {
    SectorBasis basis;
    EigenResult result;
};

Ground solve(const ModelSpec& m, const SolverOptions& opts = {}) {
    Ground g{enumerate_sector(m), {}};
    g.result = ground_state(build_hamiltonian(m, g.basis), opts);
    g_sum_rule.record(g.basis, g.result.ground_vector());
    return g;
}

unsigned workers() {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    return std::min(hw, 8u);
}

// Runs f(i) for i < n on a small pool; results are written by index.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f) {
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) f(i);
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < std::min<std::size_t>(workers(), n); ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
}

// Bisection on a sign change of f between lo (f >= 0) and hi (f < 0).
double bisect(const std::function<double(double)>& f, double lo, double hi, double rel_tol) {
    for (int it = 0; it < 200 && hi - lo > rel_tol * std::max(1.0, std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) >= 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// Single-photon bound state on a long ring.
Outcome single_photon_bound_state() {
    Outcome o;
    for (double g : {0.5, 1.0, 2.0}) {
        ModelSpec m;
        m.L = 201;
        m.atom_sites = {0};
        m.g = g;
        m.n_ex = 1;
        m.n_trunc = 1;
        const auto r = solve(m);
        const double exact = -std::sqrt(2.0 + std::sqrt(4.0 + std::pow(g, 4)));
        const double err = std::abs(r.result.ground_energy() - exact);
        o.require(err <= 1e-6, "g/J=" + fmt(g) + " |dE|=" + fmt(err, 2));
    }
    return o;
}

// J -> 0 thresholds from a direct single-cavity energy comparison.
Outcome strong_coupling_thresholds() {
    Outcome o;
    const double u = 1.0;
    auto cavity_ground = [&](int n, double g) {
        ModelSpec m;
        m.L = 1;
        m.atom_sites = {0};
        m.J = 0.0;
        m.g = g;
        m.nonlinearity = NonlinearitySpec::kerr(u);
        m.n_ex = n;
        m.n_trunc = n;
        const auto b = enumerate_sector(m);
        return dense_spectrum(build_hamiltonian(m, b)).front();
    };
    const double expected[] = {1.0, std::sqrt(21.0), std::sqrt(85.0), std::sqrt(217.0)};
    for (int n = 2; n <= 5; ++n) {
        // bound when E_n <= E_{n-1}: f < 0 above the threshold
        auto f = [&](double g) { return cavity_ground(n, g) - cavity_ground(n - 1, g) > 0.0 ? 1.0 : -1.0; };
        double hi = 1e-3;
        while (f(hi) >= 0.0) hi *= 1.5;
        const double root = bisect(f, hi / 1.5, hi, 1e-15);
        const double want = expected[n - 2];
        const double analytic = strong_binding_threshold(n, 0.0, u);
        const double err = std::max(std::abs(root - want), std::abs(analytic - want)) / want;
        o.require(err <= 1e-10, "n=" + std::to_string(n) + " g_b/U=" + fmt(root, 12) + " rel.err=" + fmt(err, 2));
    }
    return o;
}

Outcome impurity_parameter_anchors() {
    Outcome o;
    const std::vector<std::array<double, 3>> table = {{1.0, 1.15, 0.00}, {1.2, 1.14, 0.06}, {1.4, 1.13, 0.12}};
    for (const auto& [u, alpha, eps] : table) {
        const auto p = alpha_epsilon(2, 1.0, NonlinearitySpec::kerr(u), 0.0);
        const double a2 = std::round(p.alpha * 100) / 100;
        const double e2 = std::round(p.epsilon * 100) / 100 + 0.0;
        o.require(a2 == alpha && e2 == eps, "U/g=" + fmt(u) + " (" + fmt(a2, 3) + ", " + fmt(e2, 2) + ")");
    }
    return o;
}

// Impurity photon occupation for a one-atom ring of 13 sites, J/g = 0.01.
double detachment_occupation(int n, double u) {
    ModelSpec m;
    m.L = 13;
    m.atom_sites = {0};
    m.J = 0.01;
    m.g = 1.0;
    m.nonlinearity = NonlinearitySpec::kerr(u);
    m.n_ex = n;
    m.n_trunc = n;
    const auto r = solve(m);
    return apply_number_operators(r.basis, r.result.ground_vector()).photon_density[0];
}

Outcome photon_detachment() {
    Outcome o;
    std::map<int, double> step;  // U where N photons become N-1
    for (int N = 2; N <= 5; ++N) step[N] = 1.0 / resonant_threshold_ratio(N);

    // staircase in the five-excitation sector, sampled between thresholds
    const std::vector<double> plateaus = {0.3 * step[5], std::sqrt(step[5] * step[4]), std::sqrt(step[4] * step[3]),
                                          std::sqrt(step[3] * step[2]), 1.5 * step[2]};
    std::vector<double> occ(plateaus.size());
    parallel_for(plateaus.size(), [&](std::size_t i) { occ[i] = detachment_occupation(5, plateaus[i]); });
    bool unit_steps = true;
    std::string stairs;
    for (std::size_t i = 0; i + 1 < occ.size(); ++i) {
        unit_steps = unit_steps && std::abs(occ[i] - occ[i + 1] - 1.0) <= 0.15;
        stairs += fmt(occ[i], 3) + ">";
    }
    stairs += fmt(occ.back(), 3);
    o.require(unit_steps, "n_ex=5 plateaus " + stairs);

    // step locations for N = 2, 3 from the half-step crossing
    for (int N : {2, 3}) {
        auto f = [&](double u) { return detachment_occupation(N, u) - (N - 1.0); };
        const double u_c = bisect(f, 0.5 * step[N], 1.5 * step[N], 1e-4);
        const double rel = std::abs(u_c - step[N]) / step[N];
        o.require(rel <= 0.10, "N=" + std::to_string(N) + " step U/g=" + fmt(u_c) + " vs " + fmt(step[N]));
    }

    // effective model against ED away from the transition windows
    double worst = 0.0;
    std::mutex mu;
    std::vector<std::pair<int, double>> pts;
    for (int N = 2; N <= 5; ++N) {
        const double upper = N == 2 ? 2.0 : 0.8 * step[N - 1];
        for (double u = 0.01; u < upper; u *= 1.25)
            if (std::abs(u / step[N] - 1.0) > 0.2) pts.emplace_back(N, u);
    }
    parallel_for(pts.size(), [&](std::size_t i) {
        const auto [N, u] = pts[i];
        ModelSpec m;
        m.L = 13;
        m.atom_sites = {0};
        m.J = 0.01;
        m.g = 1.0;
        m.nonlinearity = NonlinearitySpec::kerr(u);
        const double eff = effective_ground_observables(build_effective_chain(N, m)).impurity_occupation;
        const double dev = std::abs(eff - detachment_occupation(N, u));
        std::lock_guard<std::mutex> lock(mu);
        worst = std::max(worst, dev);
    });
    o.require(worst <= 0.1, "effective vs ED max dev " + fmt(worst, 3) + " over " + std::to_string(pts.size()) + " points");
    return o;
}

// Smallest g at which the pair is bound on a 40-site ring.
double binding_contour(double u, bool correction) {
    BindingOptions bo;
    bo.finite_size_correction = correction;
    auto eb = [&](double g) {
        ModelSpec m;
        m.L = 40;
        m.atom_sites = {0};
        m.g = g;
        m.nonlinearity = NonlinearitySpec::kerr(u);
        return binding_energy_n2(m, bo).e_b < 0.0 ? -1.0 : 1.0;
    };
    double prev = 0.01;
    if (eb(prev) < 0.0) return prev;
    for (double g = prev * 1.1; g < 100.0; g *= 1.1) {
        if (eb(g) < 0.0) return bisect(eb, prev, g, 1e-6);
        prev = g;
    }
    return std::nan("");
}

Outcome weak_coupling_threshold() {
    Outcome o;
    const std::vector<double> strong_u = {2.0, 5.0, 10.0, 20.0};
    const std::vector<double> weak_u = {0.1, 0.25, 0.5};
    std::vector<double> us = strong_u;
    us.insert(us.end(), weak_u.begin(), weak_u.end());
    std::vector<double> with(us.size()), without(us.size());
    parallel_for(2 * us.size(), [&](std::size_t i) {
        const std::size_t k = i % us.size();
        (i < us.size() ? with[k] : without[k]) = binding_contour(us[k], i < us.size());
    });
    for (std::size_t k = 0; k < us.size(); ++k) {
        const double u = us[k];
        const bool large = k < strong_u.size();
        const double target = large ? std::sqrt(2.0 * u) : u;
        const double rel = std::abs(with[k] - target) / target;
        o.require(rel <= (large ? 0.15 : 0.10), "U/J=" + fmt(u) + " g_b=" + fmt(with[k]) + " vs " +
                                                      (large ? "sqrt(2UJ)=" : "U=") + fmt(target) + " (uncorrected " +
                                                      fmt(without[k]) + ")");
    }
    return o;
}

Outcome two_impurity_correlations() {
    Outcome o;
    const int L = 30;
    const int a = 7;  // atoms at +-7 around the reference site 0
    const std::vector<double> us = {1.0, 1.2, 1.4};
    std::vector<DensityCorrelation> c(us.size());
    std::vector<std::vector<double>> dens(us.size());
    parallel_for(us.size(), [&](std::size_t i) {
        ModelSpec m;
        m.L = L;
        m.atom_sites = {a, L - a};
        m.J = 0.1;
        m.g = 1.0;
        m.nonlinearity = NonlinearitySpec::kerr(us[i]);
        m.n_ex = 4;
        m.n_trunc = 4;
        const auto r = solve(m);
        c[i] = density_correlation(r.result.ground_vector(), r.basis, 0);
        dens[i] = apply_number_operators(r.basis, r.result.ground_vector()).photon_density;
    });
    auto interior = [&](int x) { return x != 0 && (x < a || x > L - a); };
    auto max_excluding_ref = [&](const DensityCorrelation& d) {
        double m = 0.0;
        for (int x = 1; x < L; ++x) m = std::max(m, std::abs(d.values[static_cast<std::size_t>(x)]));
        return m;
    };
    for (const auto& d : c) o.require(d.defined, "C_x defined");

    // bound regime: correlations peak on the impurities
    {
        const auto& v = c[0].values;
        const auto it = std::max_element(v.begin() + 1, v.end());
        const int arg = static_cast<int>(it - v.begin());
        o.require(arg == a || arg == L - a, "U/g=1.0 max C_x at x=" + std::to_string(arg));
    }
    // domain walls: the interior holds no second photon
    {
        double in = 0.0;
        for (int x = 0; x < L; ++x)
            if (interior(x)) in = std::max(in, std::abs(c[2].values[static_cast<std::size_t>(x)]));
        const double all = max_excluding_ref(c[2]);
        o.require(in <= 0.15 * all, "U/g=1.4 interior max " + fmt(in, 3) + " <= 0.15*" + fmt(all, 3));
    }
    // transparent impurities: repulsion near the reference, flat density elsewhere
    {
        const auto& v = c[1].values;
        const double near = std::max(v[1], v[L - 1]);
        const double far = v[L / 2];
        o.require(near < 0.2 * far, "U/g=1.2 C_1=" + fmt(near, 3) + " < 0.2*C_L/2=" + fmt(far, 3));
        auto flatness = [&](const std::vector<double>& d) {
            double lo = 1e300, hi = 0.0;
            for (int x = 0; x < L; ++x) {
                if (x == a || x == L - a) continue;
                lo = std::min(lo, d[static_cast<std::size_t>(x)]);
                hi = std::max(hi, d[static_cast<std::size_t>(x)]);
            }
            return lo / hi;
        };
        const double f12 = flatness(dens[1]);
        const double f14 = flatness(dens[2]);
        o.require(f12 >= 0.8, "U/g=1.2 unbound density min/max " + fmt(f12, 3) + " (U/g=1.4: " + fmt(f14, 3) + ")");
    }
    return o;
}

Outcome polariton_model_fidelity() {
    Outcome o;
    double prev = 1e300;
    for (double g : {5.0, 10.0, 50.0}) {
        const auto c = compare_spectra(periodic_array(2, 2, 1.0, g, 0.0, 4), 10);
        if (g == 5.0) o.require(c.max_deviation <= 0.05, "g/J=5 max dev " + fmt(c.max_deviation, 3));
        else o.require(c.max_deviation < prev, "g/J=" + fmt(g) + " max dev " + fmt(c.max_deviation, 3));
        prev = c.max_deviation;
    }
    return o;
}

Outcome mott_plateau_g2() {
    Outcome o;
    for (int N : {1, 2}) {
        const auto r = solve(periodic_array(4, 1, 1.0, 100.0, 0.0, 4 * N));
        const double g2 = g2_impurity_average(r.result.ground_vector(), r.basis).value_or(std::nan(""));
        const double target = N == 1 ? 0.0 : 4.0 / 9.0;
        const double tol = N == 1 ? 1e-3 : 1e-2;
        o.require(std::abs(g2 - target) <= tol, "N=" + std::to_string(N) + " g2=" + fmt(g2, 5) + " target " + fmt(target, 5));
    }
    return o;
}

MeanFieldCell mf_cell(int d, double g, double u, double J, double mu, double delta = 0.0) {
    MeanFieldCell c;
    c.d = d;
    c.g = g;
    c.nonlinearity = NonlinearitySpec::kerr(u);
    c.J = J;
    c.mu = mu;
    c.delta = delta;
    return c;
}

std::pair<double, double> lobe_edges(int N, double g, double u, double delta) {
    const auto nl = NonlinearitySpec::kerr(u);
    return {lower_polariton_energy(N, g, nl, delta) - lower_polariton_energy(N - 1, g, nl, delta),
            lower_polariton_energy(N + 1, g, nl, delta) - lower_polariton_energy(N, g, nl, delta)};
}

Outcome mean_field_correctness() {
    Outcome o;
    // (i) coefficients against a finite-difference Hessian
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    int cases = 0, attempts = 0;
    double worst = 0.0;
    while (cases < 50 && attempts < 500) {
        ++attempts;
        const int d = 1 + static_cast<int>(rng() % 3);
        const int N = 1 + static_cast<int>(rng() % 2);
        auto c = mf_cell(d, 0.5 + U(rng), 1.5 * U(rng), 0.01 + 0.05 * U(rng), 0.0, 0.4 * (U(rng) - 0.5));
        const auto [lo, hi] = lobe_edges(N, c.g, c.nonlinearity.kerr_u(), c.delta);
        c.mu = lo + (0.3 + 0.4 * U(rng)) * (hi - lo);
        LandauCoefficients lc;
        try {
            lc = landau_coefficients(c);
        } catch (const DegenerateGroundStateError&) {
            continue;
        }
        if (lc.n_ground != N) continue;
        const double h = 1e-3;
        const double e00 = cell_ground_energy(c, 0, 0);
        const double u1 = (cell_ground_energy(c, h, 0) + cell_ground_energy(c, -h, 0) - 2 * e00) / (2 * h * h);
        const double u2 = (cell_ground_energy(c, 0, h) + cell_ground_energy(c, 0, -h) - 2 * e00) / (2 * h * h);
        const double v = (cell_ground_energy(c, h, h) - cell_ground_energy(c, h, -h) - cell_ground_energy(c, -h, h) +
                          cell_ground_energy(c, -h, -h)) / (8 * h * h);
        worst = std::max({worst, std::abs(u1 - lc.u1) / std::abs(lc.u1), std::abs(u2 - lc.u2) / std::abs(lc.u2),
                          std::abs(v - lc.v) / std::abs(lc.v)});
        ++cases;
    }
    o.require(cases == 50 && worst <= 1e-4, "(i) " + std::to_string(cases) + " cells, max rel dev " + fmt(worst, 2));

    // (ii) decoupled atom: single-site Bose-Hubbard tip 2J/U = 3 - 2 sqrt 2
    const auto tip = refine_lobe_tip(mf_cell(1, 0.0, 1.0, 0.0, 0.5), 2, 0.05, 0.95);
    const double tip_err = std::abs(2.0 * tip.j_c - (3.0 - 2.0 * std::sqrt(2.0)));
    o.require(tip_err <= 1e-6, "(ii) tip 2J/U=" + fmt(2.0 * tip.j_c, 10) + " err " + fmt(tip_err, 2));

    // (iii) one sign change of the determinant up to the bracket
    int good = 0, total = 0;
    for (int d = 1; d <= 3; ++d) {
        for (int N = 1; N <= 3; ++N) {
            ++total;
            const auto [lo, hi] = lobe_edges(N, 1.0, 0.0, 0.0);
            const double mu = 0.5 * (lo + hi);
            const auto c = mf_cell(d, 1.0, 0.0, 0.0, mu);
            const auto r = critical_hopping_mf(c, mu);
            if (!r.j_c || r.n_mott != N) continue;
            int changes = 0;
            double prev = hessian_determinant(c, N, 1e-6);
            for (int k = 1; k <= 300; ++k) {
                const double J = k == 300 ? r.hi : 1e-6 * std::pow(r.hi / 1e-6, k / 300.0);
                const double f = hessian_determinant(c, N, J);
                if ((f >= 0.0) != (prev >= 0.0)) ++changes;
                prev = f;
            }
            if (changes == 1 && hessian_determinant(c, N, r.lo) < 0.0) ++good;
        }
    }
    o.require(good == total, "(iii) " + std::to_string(good) + "/" + std::to_string(total) + " lobes with one sign change");
    return o;
}

ModelSpec random_spec(std::mt19937_64& rng, std::size_t max_dim) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    while (true) {
        ModelSpec m;
        m.L = 2 + static_cast<int>(rng() % 7);
        m.boundary = rng() % 2 ? Boundary::open : Boundary::periodic;
        for (int x = 0; x < m.L; ++x)
            if (U(rng) < 0.4) m.atom_sites.push_back(x);
        m.J = 0.2 + 1.5 * U(rng);
        m.g = 2.0 * U(rng);
        m.delta = U(rng) - 0.5;
        m.nonlinearity = NonlinearitySpec::kerr(3.0 * U(rng));
        m.n_ex = 1 + static_cast<int>(rng() % 5);
        m.n_trunc = default_truncation(m.n_ex);
        if (sector_dimension(m) <= max_dim && sector_dimension(m) >= 2) return m;
    }
}

Outcome solver_integrity() {
    Outcome o;
    std::mt19937_64 rng(11);
    SolverOptions lanczos;
    lanczos.dense_fallback = 1;
    double worst = 0.0;
    std::size_t biggest = 0;
    const int instances = 60;
    for (int i = 0; i < instances; ++i) {
        const ModelSpec m = random_spec(rng, 2000);
        const auto basis = enumerate_sector(m);
        const auto op = build_hamiltonian(m, basis);
        lanczos.seed = static_cast<std::uint64_t>(i) + 1;
        const auto r = ground_state(op, lanczos);
        g_sum_rule.record(basis, r.ground_vector());
        worst = std::max(worst, std::abs(r.ground_energy() - dense_spectrum(op).front()));
        biggest = std::max(biggest, basis.dim());
    }
    o.require(worst <= 1e-9, std::to_string(instances) + " Lanczos/dense pairs (dim <= " + std::to_string(biggest) +
                                 ") max |dE| " + fmt(worst, 2));

    double gauge = 0.0;
    int bipartite = 0;
    while (bipartite < 30) {
        ModelSpec m = random_spec(rng, 1500);
        if (m.boundary == Boundary::periodic && m.L % 2 == 1 && m.L > 2) continue;
        ++bipartite;
        const auto b = enumerate_sector(m);
        const auto e1 = dense_spectrum(build_hamiltonian(m, b));
        ModelSpec flipped = m;
        flipped.J = -m.J;
        const auto e2 = dense_spectrum(build_hamiltonian(flipped, b));
        for (std::size_t k = 0; k < e1.size(); ++k) gauge = std::max(gauge, std::abs(e1[k] - e2[k]));
    }
    o.require(gauge <= 1e-12, "J -> -J on 30 bipartite lattices max |dE| " + fmt(gauge, 2));
    return o;
}

struct MapPoint {
    double g, u, v_pol, v_atom;
};

std::vector<MapPoint> phase_map(int cells, int d, const std::vector<double>& gs, const std::vector<double>& us) {
    std::vector<MapPoint> pts;
    for (double u : us)
        for (double g : gs) pts.push_back({g, u, 0.0, 0.0});
    parallel_for(pts.size(), [&](std::size_t i) {
        const auto r = solve(periodic_array(cells, d, 1.0, pts[i].g, pts[i].u, 2 * cells));
        const auto f = fluctuations(r.result.ground_vector(), r.basis);
        pts[i].v_pol = f.v_pol;
        pts[i].v_atom = f.v_atom;
    });
    return pts;
}

const MapPoint& at(const std::vector<MapPoint>& pts, double g, double u) {
    for (const auto& p : pts)
        if (p.g == g && p.u == u) return p;
    throw Error("map point missing");
}

Outcome reduced_phase_maps() {
    Outcome o;
    // d = 1, two excitations per cell, six cells
    const auto m1 = phase_map(6, 1, {0.1, 1.0, 10.0, 100.0, 1000.0}, {0.02, 1.0, 30.0, 351.0});
    const auto& sf = at(m1, 0.1, 0.02);
    const auto& mi1 = at(m1, 1000.0, 0.02);
    const auto& mi2 = at(m1, 0.1, 351.0);
    o.require(sf.v_pol >= 0.25, "d=1 superfluid corner v_pol=" + fmt(sf.v_pol, 3));
    o.require(mi1.v_pol <= 0.05 && mi1.v_atom >= 0.2,
              "d=1 Mott-I corner v_pol=" + fmt(mi1.v_pol, 3) + " v_atom=" + fmt(mi1.v_atom, 3));
    o.require(mi2.v_pol <= 0.05 && mi2.v_atom <= 0.05,
              "d=1 Mott-II corner v_pol=" + fmt(mi2.v_pol, 3) + " v_atom=" + fmt(mi2.v_atom, 3));

    // d = 2, two excitations per cell, four cells
    const std::vector<double> gs = {0.1, 0.3, 1.0, 3.0, 10.0, 30.0, 100.0};
    const auto m2 = phase_map(4, 2, gs, {0.02, 3.0, 30.0, 351.0});
    const auto& sf2 = at(m2, 0.1, 0.02);
    const auto& lobe2 = at(m2, 100.0, 0.02);
    const auto& lobe1 = at(m2, 100.0, 351.0);
    o.require(sf2.v_pol >= 0.25, "d=2 superfluid corner v_pol=" + fmt(sf2.v_pol, 3));
    o.require(lobe2.v_pol <= 0.05 && lobe2.v_atom >= 0.2,
              "d=2 two-bound corner v_pol=" + fmt(lobe2.v_pol, 3) + " v_atom=" + fmt(lobe2.v_atom, 3));
    o.require(lobe1.v_pol <= 0.05 && lobe1.v_atom >= 0.2,
              "d=2 one-bound corner v_pol=" + fmt(lobe1.v_pol, 3) + " v_atom=" + fmt(lobe1.v_atom, 3));

    // barrier estimate J_2 = eps_2 / (2 alpha_2) against v_pol where eps_2 > 0
    double mott_max = 0.0, sf_min = 1e300;
    int n_mott = 0, n_sf = 0;
    for (const auto& p : m2) {
        const double j2 = lobe_critical_hopping(2, p.g, NonlinearitySpec::kerr(p.u), 0.0);
        if (j2 <= 0.0) continue;
        if (j2 >= 2.0) {
            mott_max = std::max(mott_max, p.v_pol);
            ++n_mott;
        } else if (j2 <= 0.5) {
            sf_min = std::min(sf_min, p.v_pol);
            ++n_sf;
        }
    }
    o.require(n_mott > 0 && n_sf > 0 && mott_max < sf_min,
              "d=2 J_2/J>=2: max v_pol " + fmt(mott_max, 3) + " (" + std::to_string(n_mott) + " pts) < J_2/J<=0.5: min v_pol " +
                  fmt(sf_min, 3) + " (" + std::to_string(n_sf) + " pts)");
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"single-photon-bound-state", single_photon_bound_state},
        {"strong-coupling-thresholds", strong_coupling_thresholds},
        {"impurity-parameter-anchors", impurity_parameter_anchors},
        {"photon-detachment", photon_detachment},
        {"weak-coupling-threshold", weak_coupling_threshold},
        {"two-impurity-correlations", two_impurity_correlations},
        {"polariton-model-fidelity", polariton_model_fidelity},
        {"mott-plateau-g2", mott_plateau_g2},
        {"mean-field-correctness", mean_field_correctness},
        {"reduced-phase-maps", reduced_phase_maps},
        {"solver-integrity", solver_integrity},
    };
    int unexpected = 0;
    for (const auto& [name, run] : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << " exception: " << e.what();
        }
        // the sum rule covers every ground state solved so far
        if (name == "solver-integrity") {
            o.require(g_sum_rule.worst <= 1e-10, "sum rule on " + std::to_string(g_sum_rule.states) +
                                                      " ground states max err " + fmt(g_sum_rule.worst, 2));
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool declared = kDeclaredUnattainable.count(name) > 0;
        if (!o.pass && !declared) ++unexpected;
        std::printf("%s %s (%.1fs):%s%s\n", o.pass ? "PASS" : "FAIL", name.c_str(), secs, o.detail.str().c_str(),
                    !o.pass && declared ? " [declared unattainable]" : "");
        std::fflush(stdout);
    }
    return unexpected == 0 ? 0 : 1;
}
