#include "wgqed/basis.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <string>

namespace wgqed {

namespace {

using u128 = unsigned __int128;
constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t saturate(u128 v) {
    return v > static_cast<u128>(kSaturated) ? kSaturated : static_cast<std::uint64_t>(v);
}

std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    u128 r = 1;
    for (int i = 1; i <= k; ++i) r = r * static_cast<u128>(n - k + i) / static_cast<u128>(i);
    return saturate(r);
}

std::vector<std::uint64_t> composition_counts(int L, int n_max, int cap) {
    const auto w = static_cast<std::size_t>(n_max + 1);
    std::vector<std::uint64_t> c(static_cast<std::size_t>(L + 1) * w, 0);
    c[0] = 1;
    for (int k = 1; k <= L; ++k) {
        for (int m = 0; m <= n_max; ++m) {
            u128 s = 0;
            for (int v = 0; v <= std::min(cap, m); ++v)
                s += c[static_cast<std::size_t>(k - 1) * w + static_cast<std::size_t>(m - v)];
            c[static_cast<std::size_t>(k) * w + static_cast<std::size_t>(m)] = saturate(s);
        }
    }
    return c;
}

void check_capacity(const ModelSpec& spec) {
    if (spec.n_trunc > 255) throw CapacityError("n_trunc above 255 is not storable");
    if (spec.num_atoms() > 63) throw CapacityError("more than 63 atoms are not storable");
    const long long max_ex = static_cast<long long>(spec.n_trunc) * spec.L + spec.num_atoms();
    if (spec.n_ex > max_ex)
        throw CapacityError("n_ex = " + std::to_string(spec.n_ex) +
                            " exceeds the storable maximum " + std::to_string(max_ex));
}

}  // namespace

int occupation(const Configuration& c, int site) {
    if (site < 0 || site >= static_cast<int>(c.photons.size()))
        throw SpecError("site index out of range");
    return c.photons[static_cast<std::size_t>(site)];
}

bool atom_excited(const Configuration& c, int j) {
    if (j < 0 || j >= c.num_atoms) throw SpecError("atom index out of range");
    return (c.atoms >> j) & 1u;
}

int total_excitations(const Configuration& c) {
    int n = std::popcount(c.atoms);
    for (int p : c.photons) n += p;
    return n;
}

std::uint64_t SectorBasis::count(int parts, int sum) const {
    if (sum < 0 || sum > spec_.n_ex) return 0;
    return count_[static_cast<std::size_t>(parts) * static_cast<std::size_t>(spec_.n_ex + 1) +
                  static_cast<std::size_t>(sum)];
}

std::size_t SectorBasis::rank_photons(std::span<const std::uint8_t> photons, int total) const {
    const int L = spec_.L;
    const int cap = spec_.n_trunc;
    std::size_t rank = 0;
    int remaining = total;
    for (int i = 0; i < L; ++i) {
        const int p = photons[static_cast<std::size_t>(i)];
        for (int v = p + 1; v <= std::min(cap, remaining); ++v)
            rank += count(L - i - 1, remaining - v);
        remaining -= p;
    }
    return rank;
}

std::size_t SectorBasis::mask_offset(std::uint64_t mask) const {
    const int A = spec_.num_atoms();
    std::size_t offset = 0;
    int above = 0;
    for (int b = A - 1; b >= 0; --b) {
        if ((mask >> b) & 1u) {
            offset += mask_weight_[static_cast<std::size_t>(b) * static_cast<std::size_t>(A + 1) +
                                   static_cast<std::size_t>(above)];
            ++above;
        }
    }
    return offset;
}

std::optional<std::size_t> SectorBasis::find(std::span<const std::uint8_t> photons,
                                             std::uint64_t mask) const {
    const int A = spec_.num_atoms();
    if (photons.size() != static_cast<std::size_t>(spec_.L)) return std::nullopt;
    if (A < 64 && (mask >> A) != 0) return std::nullopt;
    int total = 0;
    for (auto p : photons) {
        if (p > spec_.n_trunc) return std::nullopt;
        total += p;
    }
    const int atoms = std::popcount(mask);
    if (total + atoms != spec_.n_ex) return std::nullopt;
    return mask_offset(mask) + rank_photons(photons, total);
}

std::size_t SectorBasis::index_of(const Configuration& c) const {
    if (static_cast<int>(c.photons.size()) != spec_.L || c.num_atoms != spec_.num_atoms())
        throw NotInSectorError("configuration shape does not match the basis");
    std::vector<std::uint8_t> p(c.photons.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (c.photons[i] < 0 || c.photons[i] > spec_.n_trunc)
            throw NotInSectorError("photon occupation violates truncation");
        p[i] = static_cast<std::uint8_t>(c.photons[i]);
    }
    auto idx = find(p, c.atoms);
    if (!idx) throw NotInSectorError("configuration is not in the excitation sector");
    return *idx;
}

Configuration SectorBasis::config(std::size_t i) const {
    Configuration c;
    c.photons.resize(static_cast<std::size_t>(spec_.L));
    auto p = photons(i);
    for (std::size_t x = 0; x < p.size(); ++x) c.photons[x] = p[x];
    c.atoms = masks_[i];
    c.num_atoms = spec_.num_atoms();
    return c;
}

std::uint64_t sector_dimension(const ModelSpec& spec) {
    check_capacity(spec);
    const auto c = composition_counts(spec.L, spec.n_ex, spec.n_trunc);
    const auto w = static_cast<std::size_t>(spec.n_ex + 1);
    u128 dim = 0;
    for (int k = 0; k <= std::min(spec.num_atoms(), spec.n_ex); ++k) {
        dim += static_cast<u128>(binomial(spec.num_atoms(), k)) *
               c[static_cast<std::size_t>(spec.L) * w + static_cast<std::size_t>(spec.n_ex - k)];
    }
    return saturate(dim);
}

SectorBasis enumerate_sector(const ModelSpec& spec, const BasisOptions& opts) {
    check_capacity(spec);
    spec.validate();
    const std::uint64_t dim = sector_dimension(spec);
    if (dim > opts.max_dim)
        throw ResourceError("sector dimension " + std::to_string(dim) + " exceeds limit " +
                            std::to_string(opts.max_dim));

    SectorBasis b;
    b.spec_ = spec;
    const int L = spec.L;
    const int A = spec.num_atoms();
    const int n_ex = spec.n_ex;
    const int cap = spec.n_trunc;
    b.count_ = composition_counts(L, n_ex, cap);

    b.mask_weight_.assign(static_cast<std::size_t>(A) * static_cast<std::size_t>(A + 1), 0);
    for (int bit = 0; bit < A; ++bit) {
        for (int o = 0; o <= A; ++o) {
            u128 s = 0;
            for (int k = o; k <= o + bit; ++k)
                s += static_cast<u128>(binomial(bit, k - o)) * b.count(L, n_ex - k);
            b.mask_weight_[static_cast<std::size_t>(bit) * static_cast<std::size_t>(A + 1) +
                           static_cast<std::size_t>(o)] = saturate(s);
        }
    }

    b.occ_.reserve(static_cast<std::size_t>(dim) * static_cast<std::size_t>(L));
    b.masks_.reserve(static_cast<std::size_t>(dim));

    std::vector<std::uint8_t> current(static_cast<std::size_t>(L), 0);
    auto emit_compositions = [&](auto&& self, int pos, int remaining, std::uint64_t mask) -> void {
        if (pos == L - 1) {
            if (remaining > cap) return;
            current[static_cast<std::size_t>(pos)] = static_cast<std::uint8_t>(remaining);
            b.occ_.insert(b.occ_.end(), current.begin(), current.end());
            b.masks_.push_back(mask);
            return;
        }
        const int rest_cap = cap * (L - pos - 1);
        for (int v = std::min(cap, remaining); v >= std::max(0, remaining - rest_cap); --v) {
            current[static_cast<std::size_t>(pos)] = static_cast<std::uint8_t>(v);
            self(self, pos + 1, remaining - v, mask);
        }
    };

    // Masks in ascending numeric order: branch on the highest bit first, 0 before 1.
    auto emit_masks = [&](auto&& self, int bit, std::uint64_t mask, int ones) -> void {
        if (ones > n_ex) return;
        if (bit < 0) {
            const int photons = n_ex - ones;
            if (photons <= cap * L) emit_compositions(emit_compositions, 0, photons, mask);
            return;
        }
        self(self, bit - 1, mask, ones);
        self(self, bit - 1, mask | (std::uint64_t{1} << bit), ones + 1);
    };
    emit_masks(emit_masks, A - 1, 0, 0);
    return b;
}

}  // namespace wgqed
