#include "wgqed/observables.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wgqed/hamiltonian.hpp"

namespace wgqed {

namespace {

void check_state(const Eigen::VectorXd& state, const SectorBasis& basis) {
    if (static_cast<std::size_t>(state.size()) != basis.dim())
        throw SpecError("state length " + std::to_string(state.size()) + " does not match basis dimension " +
                        std::to_string(basis.dim()));
}

void check_site(const SectorBasis& basis, int x) {
    if (x < 0 || x >= basis.sites()) throw SpecError("site index " + std::to_string(x) + " out of range");
}

// <n_x^p n_y^q> for diagonal moments.
double moment(const Eigen::VectorXd& s, const SectorBasis& b, int x, int p, int y, int q) {
    double acc = 0.0;
    for (std::size_t i = 0; i < b.dim(); ++i) {
        const double w = s[static_cast<Eigen::Index>(i)] * s[static_cast<Eigen::Index>(i)];
        if (w == 0.0) continue;
        acc += w * std::pow(b.occupation(i, x), p) * std::pow(b.occupation(i, y), q);
    }
    return acc;
}

}  // namespace

double two_point(const Eigen::VectorXd& state, const SectorBasis& basis, int x, int y) {
    check_state(state, basis);
    check_site(basis, x);
    check_site(basis, y);
    if (x == y) return moment(state, basis, x, 1, x, 0);
    const int cap = basis.n_trunc();
    std::vector<std::uint8_t> work(static_cast<std::size_t>(basis.sites()));
    double acc = 0.0;
    for (std::size_t j = 0; j < basis.dim(); ++j) {
        const double cj = state[static_cast<Eigen::Index>(j)];
        if (cj == 0.0) continue;
        const auto occ = basis.photons(j);
        const int ny = occ[static_cast<std::size_t>(y)];
        const int nx = occ[static_cast<std::size_t>(x)];
        if (ny == 0 || nx == cap) continue;
        std::copy(occ.begin(), occ.end(), work.begin());
        work[static_cast<std::size_t>(y)] = static_cast<std::uint8_t>(ny - 1);
        work[static_cast<std::size_t>(x)] = static_cast<std::uint8_t>(nx + 1);
        if (auto k = basis.find(work, basis.atom_mask(j)))
            acc += state[static_cast<Eigen::Index>(*k)] * cj * std::sqrt(double(ny) * (nx + 1));
    }
    return acc;
}

std::vector<double> two_point_row(const Eigen::VectorXd& state, const SectorBasis& basis, int ref) {
    std::vector<double> row(static_cast<std::size_t>(basis.sites()));
    for (int x = 0; x < basis.sites(); ++x) row[static_cast<std::size_t>(x)] = two_point(state, basis, x, ref);
    return row;
}

DensityCorrelation density_correlation(const Eigen::VectorXd& state, const SectorBasis& basis, int ref) {
    check_state(state, basis);
    check_site(basis, ref);
    DensityCorrelation c;
    c.ref = ref;
    const int L = basis.sites();
    c.values.assign(static_cast<std::size_t>(L), 0.0);
    c.impurity.assign(static_cast<std::size_t>(L), false);
    for (int x = 0; x < L; ++x) c.impurity[static_cast<std::size_t>(x)] = basis.spec().atom_at(x) >= 0;
    const double denom = moment(state, basis, ref, 2, ref, 0);
    if (!(denom > 0.0)) return c;
    c.defined = true;
    for (int x = 0; x < L; ++x) c.values[static_cast<std::size_t>(x)] = moment(state, basis, x, 1, ref, 1) / denom;
    return c;
}

std::optional<double> g2_zero(const Eigen::VectorXd& state, const SectorBasis& basis, int site) {
    check_state(state, basis);
    check_site(basis, site);
    const double n = moment(state, basis, site, 1, site, 0);
    if (!(n > 0.0)) return std::nullopt;
    const double n2 = moment(state, basis, site, 2, site, 0);
    return (n2 - n) / (n * n);
}

std::optional<double> g2_impurity_average(const Eigen::VectorXd& state, const SectorBasis& basis) {
    double sum = 0.0;
    int count = 0;
    for (int site : basis.spec().atom_sites) {
        if (auto v = g2_zero(state, basis, site)) {
            sum += *v;
            ++count;
        }
    }
    if (count == 0) return std::nullopt;
    return sum / count;
}

Fluctuations fluctuations(const Eigen::VectorXd& state, const SectorBasis& basis) {
    check_state(state, basis);
    const auto& sites = basis.spec().atom_sites;
    Fluctuations f;
    if (sites.empty()) return f;
    for (std::size_t j = 0; j < sites.size(); ++j) {
        double m1 = 0.0, m2 = 0.0, a1 = 0.0;
        for (std::size_t i = 0; i < basis.dim(); ++i) {
            const double w = state[static_cast<Eigen::Index>(i)] * state[static_cast<Eigen::Index>(i)];
            const int a = basis.atom_excited(i, static_cast<int>(j)) ? 1 : 0;
            const int n = basis.occupation(i, sites[j]) + a;
            m1 += w * n;
            m2 += w * n * n;
            a1 += w * a;
        }
        f.v_pol += m2 - m1 * m1;
        f.v_atom += a1 - a1 * a1;
    }
    f.v_pol = std::max(0.0, f.v_pol / static_cast<double>(sites.size()));
    f.v_atom = std::max(0.0, f.v_atom / static_cast<double>(sites.size()));
    return f;
}

BindingEnergy binding_energy_n2(const ModelSpec& spec, const BindingOptions& opts) {
    if (spec.num_atoms() != 1) throw SpecError("binding energy needs exactly one atom");
    auto solve = [&](int n) {
        ModelSpec s = spec;
        s.n_ex = n;
        s.n_trunc = n;
        const auto basis = enumerate_sector(s);
        auto r = ground_state(build_hamiltonian(s, basis), opts.solver);
        return std::pair{std::move(r), basis};
    };
    BindingEnergy b;
    const auto [single, basis1] = solve(1);
    b.e_single = single.ground_energy();
    double atomic = 0.0;
    const auto& v = single.ground_vector();
    for (std::size_t i = 0; i < basis1.dim(); ++i)
        if (basis1.atom_mask(i) != 0) atomic += v[static_cast<Eigen::Index>(i)] * v[static_cast<Eigen::Index>(i)];
    b.cos_theta1 = std::sqrt(std::clamp(atomic, 0.0, 1.0));
    if (opts.finite_size_correction)
        b.correction = opts.correction_scale * spec.nonlinearity.energy(2) * b.cos_theta1 / spec.L;
    b.e_pair = solve(2).first.ground_energy();
    const double threshold = b.e_single + b.correction - 2.0 * std::abs(spec.J);
    b.e_b = std::min(b.e_pair - threshold, 0.0);
    return b;
}

ObservableReport observe(const Eigen::VectorXd& state, const SectorBasis& basis, int ref, bool full_two_point) {
    ObservableReport r;
    const auto prof = apply_number_operators(basis, state);
    r.densities = prof.photon_density;
    r.atom_excitation = prof.atom_excitation;
    if (full_two_point) {
        const int L = basis.sites();
        r.two_point.assign(static_cast<std::size_t>(L), std::vector<double>(static_cast<std::size_t>(L), 0.0));
        for (int x = 0; x < L; ++x) {
            r.two_point[static_cast<std::size_t>(x)][static_cast<std::size_t>(x)] = r.densities[static_cast<std::size_t>(x)];
            for (int y = x + 1; y < L; ++y) {
                const double v = two_point(state, basis, x, y);
                r.two_point[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] = v;
                r.two_point[static_cast<std::size_t>(y)][static_cast<std::size_t>(x)] = v;
            }
        }
    }
    r.c_x = density_correlation(state, basis, ref);
    for (int site : basis.spec().atom_sites) r.g2_sites.push_back(g2_zero(state, basis, site));
    r.g2_avg = g2_impurity_average(state, basis);
    r.fluct = fluctuations(state, basis);
    return r;
}

}  // namespace wgqed
