#include "wgqed/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

namespace wgqed {

namespace {

void check_coupling(double g) {
    if (!(g >= 0.0) || !std::isfinite(g)) throw SpecError("coupling g must be finite and >= 0");
}

// Largest g in (0, hi] with f(g) > 0, refined by bisection against the next
// grid point where f <= 0. nullopt when f <= 0 on the whole grid.
std::optional<double> last_positive_crossing(const std::function<double(double)>& f, double hi) {
    constexpr int kGrid = 4096;
    int last_pos = -1;
    for (int i = kGrid; i >= 1; --i) {
        if (f(hi * i / kGrid) > 0.0) {
            last_pos = i;
            break;
        }
    }
    if (last_pos < 0) return std::nullopt;
    if (last_pos == kGrid) return std::nullopt;
    double lo = hi * last_pos / kGrid;
    double up = hi * (last_pos + 1) / kGrid;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + up);
        if (mid <= lo || mid >= up) break;
        (f(mid) > 0.0 ? lo : up) = mid;
    }
    return up;
}

double grow_bracket(const std::function<double(double)>& f, double start) {
    double hi = start;
    for (int i = 0; i < 80; ++i) {
        if (f(hi) < 0.0 && f(2.0 * hi) < 0.0) return hi;
        hi *= 2.0;
    }
    return hi;
}

}  // namespace

DressedPair jc_kerr_spectrum(int n, double g, const NonlinearitySpec& nl, double delta) {
    check_coupling(g);
    if (n < 0) throw SpecError("excitation number must be >= 0");
    DressedPair p;
    if (n == 0) {
        p.minus = {0, Branch::minus, 0.0, std::numbers::pi};
        p.plus = {0, Branch::plus, 0.0, std::numbers::pi};
        return p;
    }
    const double e_photon = nl.energy(n);              // |g,n>
    const double e_atom = nl.energy(n - 1) - delta;    // |e,n-1>
    const double detuning = e_photon - e_atom;          // Delta + U(n-1) for Kerr
    const double coupling = 2.0 * g * std::sqrt(static_cast<double>(n));
    const double mean = 0.5 * (e_photon + e_atom);
    const double half_split = 0.5 * std::hypot(detuning, coupling);
    const double theta = std::atan2(coupling, detuning);
    p.plus = {n, Branch::plus, mean + half_split, theta};
    p.minus = {n, Branch::minus, mean - half_split, theta};
    return p;
}

double lower_polariton_energy(int n, double g, const NonlinearitySpec& nl, double delta) {
    return jc_kerr_spectrum(n, g, nl, delta).minus.energy;
}

double mixing_angle(int n, double g, const NonlinearitySpec& nl, double delta) {
    return jc_kerr_spectrum(n, g, nl, delta).minus.theta;
}

double strong_binding_threshold(int n, double delta, double u) {
    if (n < 2) throw SpecError("binding threshold needs n >= 2");
    if (!(u > 0.0)) throw SpecError("strong-coupling threshold requires U > 0");
    const auto nl = NonlinearitySpec::kerr(u);
    auto f = [&](double g) {
        return lower_polariton_energy(n, g, nl, delta) - lower_polariton_energy(n - 1, g, nl, delta);
    };
    const double hi = grow_bracket(f, 10.0 * std::max(u, std::abs(delta)));
    return last_positive_crossing(f, hi).value_or(0.0);
}

double weak_binding_threshold(int n, double u, double J) {
    if (n < 2) throw SpecError("binding threshold needs n >= 2");
    if (u < 0.0 || !(J > 0.0)) throw SpecError("weak-coupling threshold needs U >= 0, J > 0");
    return std::sqrt(2.0 * (n - 1) * u * J);
}

double resonant_threshold_ratio(int n) {
    if (n < 2) throw SpecError("binding threshold needs n >= 2");
    return std::sqrt(static_cast<double>((2 * n - 3) * (2 * n * (n - 2) + 1)));
}

SinglePhotonBound single_photon_bound(double g, double J) {
    check_coupling(g);
    if (!(J > 0.0)) throw SpecError("hopping J must be > 0");
    const double e = std::sqrt(2.0 * J * J + std::sqrt(4.0 * J * J * J * J + g * g * g * g));
    double lambda = std::numeric_limits<double>::infinity();
    if (g > 0.0) {
        const double ratio = e / (2.0 * J);
        // acosh(1 + x) loses precision for tiny x; use log1p form.
        const double x = ratio - 1.0;
        const double inv = std::log1p(x + std::sqrt(x * (x + 2.0)));
        if (inv > 0.0) lambda = 1.0 / inv;
    }
    return {-e, e, lambda, lambda};
}

ImpurityParameters alpha_epsilon(int N, double g, const NonlinearitySpec& nl, double delta) {
    if (N < 1) throw SpecError("alpha_epsilon needs N >= 1");
    const auto cur = jc_kerr_spectrum(N, g, nl, delta).minus;
    const auto prev = jc_kerr_spectrum(N - 1, g, nl, delta).minus;
    const double a = std::sqrt(static_cast<double>(N)) * std::sin(prev.theta / 2) * std::sin(cur.theta / 2) +
                     std::sqrt(static_cast<double>(N - 1)) * std::cos(prev.theta / 2) * std::cos(cur.theta / 2);
    return {a, cur.energy - prev.energy};
}

double lobe_critical_hopping(int n, double g, const NonlinearitySpec& nl, double delta) {
    const auto p = alpha_epsilon(n, g, nl, delta);
    if (!(p.epsilon > 0.0)) return 0.0;
    return p.epsilon / (2.0 * p.alpha);
}

std::optional<double> generalized_critical_coupling(int n, const NonlinearitySpec& table, double g_max) {
    if (n < 1) throw SpecError("critical coupling needs n >= 1");
    if (table.max_occupation() < n) throw SpecError("nonlinearity table does not cover n");
    auto f = [&](double g) {
        return lower_polariton_energy(n, g, table, 0.0) - lower_polariton_energy(n - 1, g, table, 0.0);
    };
    double scale = 0.0;
    for (int k = 0; k <= n; ++k) scale = std::max(scale, std::abs(table.energy(k)));
    if (scale == 0.0) return std::nullopt;
    const double hi = g_max > 0.0 ? g_max : grow_bracket(f, 10.0 * scale);
    return last_positive_crossing(f, hi);
}

}  // namespace wgqed
