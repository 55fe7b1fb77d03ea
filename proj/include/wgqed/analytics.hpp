#pragma once

#include <optional>
#include <utility>

#include "wgqed/model.hpp"

namespace wgqed {

enum class Branch { plus, minus };

// Eigenstate of one cavity with n excitations coupled to one two-level atom:
//   |n,+> = cos(theta/2)|g,n> + sin(theta/2)|e,n-1>
//   |n,-> = sin(theta/2)|g,n> - cos(theta/2)|e,n-1>
// Energies are in the rotating frame (n * omega_c removed).
struct DressedState {
    int n = 0;
    Branch branch = Branch::minus;
    double energy = 0.0;
    double theta = 0.0;
};

struct DressedPair {
    DressedState plus;
    DressedState minus;
};

// For n = 0 only the vacuum |g,0> exists; it is reported as the minus branch
// with theta = pi and energy 0, and `plus` mirrors it.
DressedPair jc_kerr_spectrum(int n, double g, const NonlinearitySpec& nl, double delta);

// Lower dressed energy E_{n,-}, with E_{0,-} = 0.
double lower_polariton_energy(int n, double g, const NonlinearitySpec& nl, double delta);
// theta_n with the theta_0 = pi convention.
double mixing_angle(int n, double g, const NonlinearitySpec& nl, double delta);

// Smallest g such that n photons stay bound for every larger coupling in the
// J -> 0 limit (E_{n,-} <= E_{n-1,-}, ties count as bound). Returns 0 when
// binding holds for all g > 0.
double strong_binding_threshold(int n, double delta, double u);

// sqrt(2 (n-1) U J), the weak-coupling estimate.
double weak_binding_threshold(int n, double u, double J);

// Closed-form g_b(n)/U at zero detuning: sqrt((2n-3)(2n(n-2)+1)).
double resonant_threshold_ratio(int n);

struct SinglePhotonBound {
    double e_minus;
    double e_plus;
    double lambda_minus;  // +inf when g = 0
    double lambda_plus;
};

// Resonant single-excitation bound states of one atom in an infinite chain.
SinglePhotonBound single_photon_bound(double g, double J);

struct ImpurityParameters {
    double alpha;    // modified hopping factor at the impurity
    double epsilon;  // E_{N,-} - E_{N-1,-}
};

ImpurityParameters alpha_epsilon(int N, double g, const NonlinearitySpec& nl, double delta);

// J_n = epsilon_n / (2 alpha_n); 0 when there is no barrier (epsilon_n <= 0).
double lobe_critical_hopping(int n, double g, const NonlinearitySpec& nl, double delta);

// Coupling g_n > 0 where E_{n,-} = E_{n-1,-} on resonance for a general
// on-site nonlinearity table; nullopt when no crossing exists on [0, g_max].
std::optional<double> generalized_critical_coupling(int n, const NonlinearitySpec& table,
                                                    double g_max = 0.0);

}  // namespace wgqed
