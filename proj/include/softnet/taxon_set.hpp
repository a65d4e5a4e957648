#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <cstddef>
#include <functional>
#include <vector>

namespace softnet {

// Fixed-capacity bit set over taxon ids. Capacity 128 covers the input cap
// of 64 taxa plus the solver's scratch ids (side meta-taxa and dummies).
class TaxonSet {
public:
    static constexpr int capacity = 128;

    constexpr TaxonSet() : w_{0, 0} {}

    static TaxonSet single(int i) {
        TaxonSet s;
        s.add(i);
        return s;
    }
    // All ids in [0, n).
    static TaxonSet full(int n) {
        TaxonSet s;
        for (int i = 0; i < n; ++i) s.add(i);
        return s;
    }

    void add(int i) { w_[i >> 6] |= (std::uint64_t{1} << (i & 63)); }
    void remove(int i) { w_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
    bool contains(int i) const { return (w_[i >> 6] >> (i & 63)) & 1; }

    bool empty() const { return (w_[0] | w_[1]) == 0; }
    int count() const { return std::popcount(w_[0]) + std::popcount(w_[1]); }

    bool intersects(const TaxonSet& o) const {
        return ((w_[0] & o.w_[0]) | (w_[1] & o.w_[1])) != 0;
    }
    bool subset_of(const TaxonSet& o) const {
        return (w_[0] & ~o.w_[0]) == 0 && (w_[1] & ~o.w_[1]) == 0;
    }

    TaxonSet operator&(const TaxonSet& o) const { return TaxonSet{w_[0] & o.w_[0], w_[1] & o.w_[1]}; }
    TaxonSet operator|(const TaxonSet& o) const { return TaxonSet{w_[0] | o.w_[0], w_[1] | o.w_[1]}; }
    TaxonSet minus(const TaxonSet& o) const { return TaxonSet{w_[0] & ~o.w_[0], w_[1] & ~o.w_[1]}; }

    TaxonSet& operator|=(const TaxonSet& o) { w_[0] |= o.w_[0]; w_[1] |= o.w_[1]; return *this; }
    TaxonSet& operator&=(const TaxonSet& o) { w_[0] &= o.w_[0]; w_[1] &= o.w_[1]; return *this; }

    bool operator==(const TaxonSet& o) const = default;
    bool operator<(const TaxonSet& o) const {
        // The set containing the lowest differing element sorts first; gives
        // a stable, human-predictable order for cluster listings.
        if (std::uint64_t d = w_[0] ^ o.w_[0]) return w_[0] & (d & (~d + 1));
        if (std::uint64_t d = w_[1] ^ o.w_[1]) return w_[1] & (d & (~d + 1));
        return false;
    }

    int lowest() const {
        if (w_[0]) return std::countr_zero(w_[0]);
        if (w_[1]) return 64 + std::countr_zero(w_[1]);
        return -1;
    }

    std::vector<int> members() const {
        std::vector<int> out;
        out.reserve(static_cast<std::size_t>(count()));
        for (int word = 0; word < 2; ++word) {
            std::uint64_t v = w_[word];
            while (v) {
                out.push_back(word * 64 + std::countr_zero(v));
                v &= v - 1;
            }
        }
        return out;
    }

    std::size_t hash() const {
        std::uint64_t h = w_[0] * 0x9e3779b97f4a7c15ull;
        h ^= (w_[1] + 0xbf58476d1ce4e5b9ull) * 0x94d049bb133111ebull;
        h ^= h >> 29;
        return static_cast<std::size_t>(h);
    }

private:
    constexpr TaxonSet(std::uint64_t a, std::uint64_t b) : w_{a, b} {}
    std::array<std::uint64_t, 2> w_;
};

struct TaxonSetHash {
    std::size_t operator()(const TaxonSet& s) const { return s.hash(); }
};

} // namespace softnet
