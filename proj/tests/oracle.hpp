#pragma once

// Independent brute-force references used by several test files.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "wgqed/basis.hpp"
#include "wgqed/model.hpp"

namespace oracle {

// Every (photons, mask) pair by odometer over [0, n_trunc]^L x masks.
inline std::vector<wgqed::Configuration> brute_force_configs(const wgqed::ModelSpec& s) {
    std::vector<wgqed::Configuration> out;
    std::vector<int> n(static_cast<std::size_t>(s.L), 0);
    const std::uint64_t masks = 1ULL << s.num_atoms();
    while (true) {
        int photons = 0;
        for (int v : n) photons += v;
        for (std::uint64_t m = 0; m < masks; ++m) {
            if (photons + std::popcount(m) == s.n_ex) out.push_back({n, m, s.num_atoms()});
        }
        int k = 0;
        while (k < s.L && n[static_cast<std::size_t>(k)] == s.n_trunc) n[static_cast<std::size_t>(k++)] = 0;
        if (k == s.L) break;
        ++n[static_cast<std::size_t>(k)];
    }
    return out;
}

inline double binom(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// Dense Hamiltonian assembled directly from the operator definitions on the
// brute-force configuration list, without the sector ranking.
inline Eigen::MatrixXd dense_hamiltonian(const wgqed::ModelSpec& s, const std::vector<wgqed::Configuration>& cfgs) {
    const auto n = static_cast<Eigen::Index>(cfgs.size());
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    auto find = [&](const wgqed::Configuration& c) -> Eigen::Index {
        for (Eigen::Index i = 0; i < n; ++i)
            if (cfgs[static_cast<std::size_t>(i)] == c) return i;
        return -1;
    };
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& c = cfgs[static_cast<std::size_t>(i)];
        double diag = 0.0;
        for (int x = 0; x < s.L; ++x) diag += s.nonlinearity.energy(c.photons[static_cast<std::size_t>(x)]);
        diag -= s.delta * std::popcount(c.atoms);
        h(i, i) = diag;
        // hopping a_b^+ a_a over every nearest-neighbour ordered pair
        for (int a = 0; a < s.L; ++a) {
            std::vector<int> nbrs;
            if (a + 1 < s.L) nbrs.push_back(a + 1);
            if (a - 1 >= 0) nbrs.push_back(a - 1);
            if (s.boundary == wgqed::Boundary::periodic && s.L > 2) {
                if (a == 0) nbrs.push_back(s.L - 1);
                if (a == s.L - 1) nbrs.push_back(0);
            }
            for (int b : nbrs) {
                const int na = c.photons[static_cast<std::size_t>(a)];
                const int nb = c.photons[static_cast<std::size_t>(b)];
                if (na == 0 || nb == s.n_trunc) continue;
                auto d = c;
                --d.photons[static_cast<std::size_t>(a)];
                ++d.photons[static_cast<std::size_t>(b)];
                const auto j = find(d);
                if (j >= 0) h(j, i) += -s.J * std::sqrt(double(na) * (nb + 1));
            }
        }
        // g (a sigma^+ + a^+ sigma^-)
        for (int k = 0; k < s.num_atoms(); ++k) {
            const int x = s.atom_sites[static_cast<std::size_t>(k)];
            const int nx = c.photons[static_cast<std::size_t>(x)];
            auto d = c;
            if ((c.atoms >> k) & 1u) {
                if (nx == s.n_trunc) continue;
                d.atoms &= ~(1ULL << k);
                ++d.photons[static_cast<std::size_t>(x)];
                const auto j = find(d);
                if (j >= 0) h(j, i) += s.g * std::sqrt(double(nx + 1));
            } else {
                if (nx == 0) continue;
                d.atoms |= 1ULL << k;
                --d.photons[static_cast<std::size_t>(x)];
                const auto j = find(d);
                if (j >= 0) h(j, i) += s.g * std::sqrt(double(nx));
            }
        }
    }
    return h;
}

inline Eigen::VectorXd sorted_eigenvalues(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

}  // namespace oracle
