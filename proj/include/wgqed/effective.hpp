#pragma once

#include <vector>

#include "wgqed/model.hpp"

namespace wgqed {

// Single-particle chain for N excitations near the N-photon binding threshold.
// Site `impurity` carries the N-polariton (offset epsilon_N); all other sites
// hold the (N-1)-polariton at the impurity plus one free photon there.
struct EffectiveChain {
    int L = 100;
    int impurity = 0;
    Boundary boundary = Boundary::periodic;
    int N = 1;
    double J = 1.0;
    double epsilon_N = 0.0;
    double alpha_N = 1.0;
    // <psi_x| a_0^+ a_0 |psi_x> for x = impurity and x != impurity.
    double occupation_bound = 0.0;
    double occupation_detached = 0.0;

    // Signed distance from the impurity (minimal image on a ring).
    int offset(int site) const;
    std::vector<std::vector<double>> matrix() const;
};

// Uses spec.L, spec.boundary, spec.J and the single atom of spec as the impurity.
EffectiveChain build_effective_chain(int N, const ModelSpec& spec);

// Chain with explicit impurity parameters (occupations left at zero).
EffectiveChain make_chain(int L, Boundary b, double J, double epsilon, double alpha);

struct EffectiveObservables {
    double energy = 0.0;
    double impurity_occupation = 0.0;
    double delta_x_ph = 0.0;
    std::vector<double> weights;  // |c_x|^2 per site
};

EffectiveObservables effective_ground_observables(const EffectiveChain& chain);

}  // namespace wgqed
