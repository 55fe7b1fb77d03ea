#include "wgqed/effective.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "wgqed/analytics.hpp"

namespace wgqed {

int EffectiveChain::offset(int site) const {
    int x = site - impurity;
    if (boundary == Boundary::periodic) {
        x = ((x % L) + L) % L;
        if (x > L / 2) x -= L;
    }
    return x;
}

std::vector<std::vector<double>> EffectiveChain::matrix() const {
    std::vector<std::vector<double>> h(static_cast<std::size_t>(L), std::vector<double>(static_cast<std::size_t>(L), 0.0));
    h[static_cast<std::size_t>(impurity)][static_cast<std::size_t>(impurity)] = epsilon_N;
    for (auto [a, b] : lattice_bonds(L, boundary)) {
        const double t = (a == impurity || b == impurity) ? -alpha_N * J : -J;
        h[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = t;
        h[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = t;
    }
    return h;
}

EffectiveChain make_chain(int L, Boundary b, double J, double epsilon, double alpha) {
    if (L < 1) throw SpecError("chain length must be >= 1");
    EffectiveChain c;
    c.L = L;
    c.impurity = b == Boundary::periodic ? 0 : L / 2;
    c.boundary = b;
    c.J = J;
    c.epsilon_N = epsilon;
    c.alpha_N = alpha;
    return c;
}

EffectiveChain build_effective_chain(int N, const ModelSpec& spec) {
    if (spec.num_atoms() != 1) throw SpecError("effective chain needs exactly one atom");
    if (N < 1) throw SpecError("effective chain needs N >= 1");
    const auto p = alpha_epsilon(N, spec.g, spec.nonlinearity, spec.delta);
    EffectiveChain c = make_chain(spec.L, spec.boundary, spec.J, p.epsilon, p.alpha);
    c.impurity = spec.atom_sites.front();
    c.N = N;
    const double th_n = mixing_angle(N, spec.g, spec.nonlinearity, spec.delta);
    const double th_prev = mixing_angle(N - 1, spec.g, spec.nonlinearity, spec.delta);
    const auto sq = [](double v) { return v * v; };
    c.occupation_bound = N * sq(std::sin(th_n / 2)) + (N - 1) * sq(std::cos(th_n / 2));
    c.occupation_detached = (N - 1) * sq(std::sin(th_prev / 2)) + std::max(N - 2, 0) * sq(std::cos(th_prev / 2));
    return c;
}

EffectiveObservables effective_ground_observables(const EffectiveChain& chain) {
    const auto h = chain.matrix();
    const Eigen::Index n = chain.L;
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = h[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);

    EffectiveObservables out;
    out.energy = es.eigenvalues()[0];
    out.weights.resize(static_cast<std::size_t>(n));
    double x2 = 0.0;
    double occ = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double w = es.eigenvectors()(i, 0) * es.eigenvectors()(i, 0);
        out.weights[static_cast<std::size_t>(i)] = w;
        const int x = chain.offset(static_cast<int>(i));
        if (x == 0) {
            occ += w * chain.occupation_bound;
        } else {
            occ += w * chain.occupation_detached;
            x2 += w * x * x;
        }
    }
    out.impurity_occupation = occ;
    out.delta_x_ph = std::sqrt(x2);
    return out;
}

}  // namespace wgqed
