#pragma once

#include <cstddef>
#include <vector>

#include "wgqed/basis.hpp"
#include "wgqed/eigensolve.hpp"
#include "wgqed/hamiltonian.hpp"

namespace wgqed {

// Occupation-dependent on-site energies E_x(n) and hopping dressings K_x(n)
// of the lower-polariton lattice model.
struct PolaritonSpec {
    ModelSpec model;
    std::vector<std::vector<double>> energy;   // [site][n], n = 0..n_trunc
    std::vector<std::vector<double>> dressing; // [site][n], n = 0..n_trunc-1

    bool is_impurity(int site) const { return model.atom_at(site) >= 0; }
};

PolaritonSpec make_polariton_spec(const ModelSpec& model);

// Bosonic sector basis (no atomic degrees of freedom) for H_pol.
SectorBasis polariton_basis(const PolaritonSpec& p, int n_ex);

SparseOperator build_hpol(const PolaritonSpec& p, const SectorBasis& basis);

struct SpectrumComparison {
    std::vector<double> full;
    std::vector<double> polariton;
    std::vector<double> deviation;  // |E_pol - E_full| / width
    double width = 0.0;             // E_full[k-1] - E_full[0]
    double max_deviation = 0.0;
};

SpectrumComparison compare_spectra(const ModelSpec& spec, std::size_t k, const SolverOptions& opts = {});

}  // namespace wgqed
