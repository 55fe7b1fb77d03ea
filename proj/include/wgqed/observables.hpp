#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "wgqed/basis.hpp"
#include "wgqed/eigensolve.hpp"

namespace wgqed {

// <a_x^+ a_y> in a real sector state.
double two_point(const Eigen::VectorXd& state, const SectorBasis& basis, int x, int y);
// <a_x^+ a_ref> for every x.
std::vector<double> two_point_row(const Eigen::VectorXd& state, const SectorBasis& basis, int ref);

struct DensityCorrelation {
    int ref = 0;
    bool defined = false;           // false when <n_ref^2> = 0
    std::vector<double> values;     // <n_x n_ref> / <n_ref^2>
    std::vector<bool> impurity;     // presentation flag, data kept
};

DensityCorrelation density_correlation(const Eigen::VectorXd& state, const SectorBasis& basis, int ref);

// <n(n-1)> / <n>^2 on one site; nullopt at zero density.
std::optional<double> g2_zero(const Eigen::VectorXd& state, const SectorBasis& basis, int site);
// Mean over impurity sites with nonzero density.
std::optional<double> g2_impurity_average(const Eigen::VectorXd& state, const SectorBasis& basis);

struct Fluctuations {
    double v_pol = 0.0;   // mean Var(a^+a + sigma^+sigma^-) over impurity sites
    double v_atom = 0.0;  // mean Var(sigma^+sigma^-) over atoms
};

Fluctuations fluctuations(const Eigen::VectorXd& state, const SectorBasis& basis);

struct BindingOptions {
    bool finite_size_correction = true;
    double correction_scale = 1.0;
    SolverOptions solver;
};

struct BindingEnergy {
    double e_b = 0.0;         // <= 0; negative when the pair is bound
    double e_single = 0.0;    // n_ex = 1 ground energy
    double e_pair = 0.0;      // n_ex = 2 ground energy
    double cos_theta1 = 0.0;  // sqrt(atomic weight) of the single-excitation ground state
    double correction = 0.0;
};

// Needs one atom; spec.n_ex is ignored (sectors 1 and 2 are solved).
BindingEnergy binding_energy_n2(const ModelSpec& spec, const BindingOptions& opts = {});

struct ObservableReport {
    std::vector<double> densities;
    std::vector<double> atom_excitation;
    std::vector<std::vector<double>> two_point;  // full L x L, empty when not requested
    DensityCorrelation c_x;
    std::vector<std::optional<double>> g2_sites;  // per atom
    std::optional<double> g2_avg;
    Fluctuations fluct;
};

ObservableReport observe(const Eigen::VectorXd& state, const SectorBasis& basis, int ref, bool full_two_point);

}  // namespace wgqed
