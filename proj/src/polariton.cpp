#include "wgqed/polariton.hpp"

#include <algorithm>
#include <cmath>

#include "wgqed/analytics.hpp"

namespace wgqed {

PolaritonSpec make_polariton_spec(const ModelSpec& model) {
    model.validate();
    PolaritonSpec p;
    p.model = model;
    const int cap = model.n_trunc;
    p.energy.resize(static_cast<std::size_t>(model.L));
    p.dressing.resize(static_cast<std::size_t>(model.L));
    for (int x = 0; x < model.L; ++x) {
        auto& e = p.energy[static_cast<std::size_t>(x)];
        auto& k = p.dressing[static_cast<std::size_t>(x)];
        e.resize(static_cast<std::size_t>(cap) + 1);
        k.resize(static_cast<std::size_t>(cap));
        const bool impurity = model.atom_at(x) >= 0;
        for (int n = 0; n <= cap; ++n) {
            e[static_cast<std::size_t>(n)] =
                impurity ? lower_polariton_energy(n, model.g, model.nonlinearity, model.delta)
                         : model.nonlinearity.energy(n);
        }
        for (int n = 0; n < cap; ++n) {
            k[static_cast<std::size_t>(n)] =
                impurity ? alpha_epsilon(n + 1, model.g, model.nonlinearity, model.delta).alpha /
                               std::sqrt(static_cast<double>(n + 1))
                         : 1.0;
        }
    }
    return p;
}

SectorBasis polariton_basis(const PolaritonSpec& p, int n_ex) {
    ModelSpec bosons = p.model;
    bosons.atom_sites.clear();
    bosons.n_ex = n_ex;
    return enumerate_sector(bosons);
}

SparseOperator build_hpol(const PolaritonSpec& p, const SectorBasis& basis) {
    const ModelSpec& m = p.model;
    if (basis.num_atoms() != 0 || basis.sites() != m.L || basis.n_trunc() != m.n_trunc)
        throw SpecError("polariton basis does not match the polariton spec");
    if (basis.n_ex() > m.n_trunc)
        throw SpecError("polariton tables truncated at n_trunc = " + std::to_string(m.n_trunc) +
                        " but n_ex = " + std::to_string(basis.n_ex()) + " allows hops beyond it");
    const int cap = m.n_trunc;
    const auto bonds = lattice_bonds(m.L, m.boundary);
    std::vector<MatrixEntry> entries;
    std::vector<std::uint8_t> work(static_cast<std::size_t>(m.L));

    for (std::size_t i = 0; i < basis.dim(); ++i) {
        const auto occ = basis.photons(i);
        double diag = 0.0;
        for (int x = 0; x < m.L; ++x)
            diag += p.energy[static_cast<std::size_t>(x)][occ[static_cast<std::size_t>(x)]];
        if (diag != 0.0) entries.push_back({i, i, diag});
        if (m.J == 0.0) continue;

        std::copy(occ.begin(), occ.end(), work.begin());
        for (auto [a, b] : bonds) {
            for (auto [from, to] : {std::pair{a, b}, std::pair{b, a}}) {
                const auto f = static_cast<std::size_t>(from);
                const auto t = static_cast<std::size_t>(to);
                const int nf = work[f];
                const int nt = work[t];
                if (nf == 0) continue;
                if (nt == cap) throw SpecError("polariton hop exceeds table truncation");
                // b_to^+ K_to(n_to) K_from(n_from - 1) b_from
                const double value = -m.J * std::sqrt(double(nf) * (nt + 1)) *
                                     p.dressing[t][static_cast<std::size_t>(nt)] *
                                     p.dressing[f][static_cast<std::size_t>(nf - 1)];
                work[f] = static_cast<std::uint8_t>(nf - 1);
                work[t] = static_cast<std::uint8_t>(nt + 1);
                auto col = basis.find(work, 0);
                if (col && *col > i) entries.push_back({i, *col, value});
                work[f] = static_cast<std::uint8_t>(nf);
                work[t] = static_cast<std::uint8_t>(nt);
            }
        }
    }
    return SparseOperator::from_entries(basis.dim(), std::move(entries));
}

SpectrumComparison compare_spectra(const ModelSpec& spec, std::size_t k, const SolverOptions& opts) {
    const auto full_basis = enumerate_sector(spec);
    const auto full = low_spectrum(build_hamiltonian(spec, full_basis), k, opts);
    const auto pspec = make_polariton_spec(spec);
    const auto pol_basis = polariton_basis(pspec, spec.n_ex);
    const auto pol = low_spectrum(build_hpol(pspec, pol_basis), std::min(k, pol_basis.dim()), opts);

    SpectrumComparison c;
    c.full = full.energies;
    c.polariton = pol.energies;
    c.width = c.full.back() - c.full.front();
    const double norm = c.width > 0.0 ? c.width : 1.0;
    for (std::size_t i = 0; i < std::min(c.full.size(), c.polariton.size()); ++i) {
        c.deviation.push_back(std::abs(c.polariton[i] - c.full[i]) / norm);
        c.max_deviation = std::max(c.max_deviation, c.deviation.back());
    }
    return c;
}

}  // namespace wgqed
