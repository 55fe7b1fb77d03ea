#include "wgqed/hamiltonian.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace wgqed {

SparseOperator SparseOperator::from_entries(std::size_t dim, std::vector<MatrixEntry> entries,
                                            double drop_tol) {
    for (auto& e : entries) {
        if (e.row >= dim || e.col >= dim) throw SpecError("matrix entry out of range");
        if (!std::isfinite(e.value)) throw SpecError("non-finite matrix entry");
        if (e.col < e.row) std::swap(e.row, e.col);
    }
    std::sort(entries.begin(), entries.end(), [](const MatrixEntry& a, const MatrixEntry& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });

    SparseOperator op;
    op.dim_ = dim;
    for (const auto& e : entries) {
        if (!op.upper_.empty() && op.upper_.back().row == e.row && op.upper_.back().col == e.col)
            op.upper_.back().value += e.value;
        else
            op.upper_.push_back(e);
    }
    std::erase_if(op.upper_, [drop_tol](const MatrixEntry& e) { return std::abs(e.value) < drop_tol; });

    std::vector<std::size_t> counts(dim + 1, 0);
    for (const auto& e : op.upper_) {
        ++counts[e.row + 1];
        if (e.col != e.row) ++counts[e.col + 1];
    }
    op.row_ptr_.assign(dim + 1, 0);
    for (std::size_t r = 0; r < dim; ++r) op.row_ptr_[r + 1] = op.row_ptr_[r] + counts[r + 1];
    op.cols_.resize(op.row_ptr_[dim]);
    op.values_.resize(op.row_ptr_[dim]);
    std::vector<std::size_t> fill(op.row_ptr_.begin(), op.row_ptr_.end() - 1);
    // Lower-triangle entries of row r come from upper entries (c, r) with c < r,
    // which appear in increasing c order, so each row ends up column-sorted
    // when the mirrored part is written before the upper part.
    for (const auto& e : op.upper_) {
        if (e.col != e.row) {
            op.cols_[fill[e.col]] = e.row;
            op.values_[fill[e.col]++] = e.value;
        }
    }
    for (const auto& e : op.upper_) {
        op.cols_[fill[e.row]] = e.col;
        op.values_[fill[e.row]++] = e.value;
    }
    return op;
}

void SparseOperator::apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const {
    if (static_cast<std::size_t>(x.size()) != dim_) throw SpecError("vector length mismatch");
    y.resize(static_cast<Eigen::Index>(dim_));
    const auto n = static_cast<std::ptrdiff_t>(dim_);
#pragma omp parallel for schedule(static) if (n > 200000)
    for (std::ptrdiff_t r = 0; r < n; ++r) {
        double s = 0.0;
        const auto ur = static_cast<std::size_t>(r);
        for (std::size_t k = row_ptr_[ur]; k < row_ptr_[ur + 1]; ++k)
            s += values_[k] * x[static_cast<Eigen::Index>(cols_[k])];
        y[r] = s;
    }
}

Eigen::VectorXd SparseOperator::apply(const Eigen::VectorXd& x) const {
    Eigen::VectorXd y;
    apply(x, y);
    return y;
}

Eigen::VectorXd SparseOperator::diagonal() const {
    Eigen::VectorXd d = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim_));
    for (const auto& e : upper_)
        if (e.row == e.col) d[static_cast<Eigen::Index>(e.row)] = e.value;
    return d;
}

double SparseOperator::trace() const { return diagonal().sum(); }

Eigen::MatrixXd SparseOperator::to_dense() const {
    const auto n = static_cast<Eigen::Index>(dim_);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (const auto& e : upper_) {
        m(static_cast<Eigen::Index>(e.row), static_cast<Eigen::Index>(e.col)) = e.value;
        m(static_cast<Eigen::Index>(e.col), static_cast<Eigen::Index>(e.row)) = e.value;
    }
    return m;
}

double SparseOperator::max_asymmetry() const {
    double worst = 0.0;
    for (std::size_t r = 0; r < dim_; ++r) {
        for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
            const std::size_t c = cols_[k];
            const auto begin = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[c]);
            const auto end = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[c + 1]);
            const auto it = std::lower_bound(begin, end, r);
            const double mirrored =
                (it != end && *it == r) ? values_[static_cast<std::size_t>(it - cols_.begin())] : 0.0;
            worst = std::max(worst, std::abs(values_[k] - mirrored));
        }
    }
    return worst;
}

void SparseOperator::write_coordinate(std::ostream& os) const {
    char buf[96];
    for (const auto& e : upper_) {
        std::snprintf(buf, sizeof buf, "%zu %zu %.17g\n", e.row, e.col, e.value);
        os << buf;
    }
}

SparseOperator build_hamiltonian(const ModelSpec& spec, const SectorBasis& basis) {
    const ModelSpec& bs = basis.spec();
    if (bs.L != spec.L || bs.n_ex != spec.n_ex || bs.n_trunc != spec.n_trunc ||
        bs.atom_sites != spec.atom_sites)
        throw SpecError("basis was not built from this model spec");
    spec.validate();

    const int L = spec.L;
    const int cap = spec.n_trunc;
    const auto bonds = lattice_bonds(L, spec.boundary);
    const std::size_t dim = basis.dim();

    std::vector<double> site_energy(static_cast<std::size_t>(cap) + 1);
    for (int n = 0; n <= cap; ++n) site_energy[static_cast<std::size_t>(n)] = spec.nonlinearity.energy(n);

    std::vector<MatrixEntry> entries;
    entries.reserve(dim * (2 + bonds.size() / 2 + static_cast<std::size_t>(spec.num_atoms())));
    std::vector<std::uint8_t> work(static_cast<std::size_t>(L));

    auto push_if_upper = [&](std::size_t row, std::span<const std::uint8_t> occ, std::uint64_t mask,
                             double value) {
        auto col = basis.find(occ, mask);
        if (col && *col > row) entries.push_back({row, *col, value});
    };

    for (std::size_t i = 0; i < dim; ++i) {
        const auto occ = basis.photons(i);
        const std::uint64_t mask = basis.atom_mask(i);

        double diag = -spec.delta * std::popcount(mask);
        for (int x = 0; x < L; ++x) diag += site_energy[occ[static_cast<std::size_t>(x)]];
        if (diag != 0.0) entries.push_back({i, i, diag});

        std::copy(occ.begin(), occ.end(), work.begin());
        if (spec.J != 0.0) {
            for (auto [a, b] : bonds) {
                for (auto [from, to] : {std::pair{a, b}, std::pair{b, a}}) {
                    const int nf = work[static_cast<std::size_t>(from)];
                    const int nt = work[static_cast<std::size_t>(to)];
                    if (nf == 0 || nt == cap) continue;
                    work[static_cast<std::size_t>(from)] = static_cast<std::uint8_t>(nf - 1);
                    work[static_cast<std::size_t>(to)] = static_cast<std::uint8_t>(nt + 1);
                    push_if_upper(i, work, mask, -spec.J * std::sqrt(double(nf) * (nt + 1)));
                    work[static_cast<std::size_t>(from)] = static_cast<std::uint8_t>(nf);
                    work[static_cast<std::size_t>(to)] = static_cast<std::uint8_t>(nt);
                }
            }
        }
        if (spec.g != 0.0) {
            for (int j = 0; j < spec.num_atoms(); ++j) {
                const auto s = static_cast<std::size_t>(spec.atom_sites[static_cast<std::size_t>(j)]);
                const int n = work[s];
                const std::uint64_t bit = std::uint64_t{1} << j;
                if (mask & bit) {
                    // a^+ sigma^-
                    if (n == cap) continue;
                    work[s] = static_cast<std::uint8_t>(n + 1);
                    push_if_upper(i, work, mask & ~bit, spec.g * std::sqrt(double(n + 1)));
                } else {
                    // a sigma^+
                    if (n == 0) continue;
                    work[s] = static_cast<std::uint8_t>(n - 1);
                    push_if_upper(i, work, mask | bit, spec.g * std::sqrt(double(n)));
                }
                work[s] = static_cast<std::uint8_t>(n);
            }
        }
    }
    return SparseOperator::from_entries(dim, std::move(entries));
}

ModelSpec stagger_transform(const ModelSpec& spec) {
    if (spec.boundary == Boundary::periodic && spec.L > 2 && spec.L % 2 == 1)
        throw NonBipartiteError("periodic ring with odd L = " + std::to_string(spec.L) +
                                " is not bipartite");
    ModelSpec out = spec;
    out.J = -spec.J;
    return out;
}

double NumberProfile::total() const {
    double t = 0.0;
    for (double v : photon_density) t += v;
    for (double v : atom_excitation) t += v;
    return t;
}

NumberProfile apply_number_operators(const SectorBasis& basis, const Eigen::VectorXd& state) {
    if (static_cast<std::size_t>(state.size()) != basis.dim())
        throw SpecError("state length does not match basis dimension");
    NumberProfile p;
    p.photon_density.assign(static_cast<std::size_t>(basis.sites()), 0.0);
    p.atom_excitation.assign(static_cast<std::size_t>(basis.num_atoms()), 0.0);
    for (std::size_t i = 0; i < basis.dim(); ++i) {
        const double w = state[static_cast<Eigen::Index>(i)] * state[static_cast<Eigen::Index>(i)];
        if (w == 0.0) continue;
        const auto occ = basis.photons(i);
        for (std::size_t x = 0; x < occ.size(); ++x) p.photon_density[x] += w * occ[x];
        const std::uint64_t mask = basis.atom_mask(i);
        for (int j = 0; j < basis.num_atoms(); ++j)
            if ((mask >> j) & 1u) p.atom_excitation[static_cast<std::size_t>(j)] += w;
    }
    return p;
}

}  // namespace wgqed
