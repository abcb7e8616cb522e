#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dowling/rational.hpp"

namespace dowling {

/// Dense bit row over element indices.
class BitRow {
public:
    BitRow() = default;
    explicit BitRow(std::size_t bits) : words_((bits + 63) / 64, 0) {}

    void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
    bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1U; }

    BitRow& operator|=(const BitRow& o) {
        for (std::size_t w = 0; w < words_.size(); ++w) words_[w] |= o.words_[w];
        return *this;
    }
    BitRow& operator&=(const BitRow& o) {
        for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= o.words_[w];
        return *this;
    }

    std::size_t count() const {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    /// True iff every bit of this row is also set in `o`.
    bool subset_of(const BitRow& o) const {
        for (std::size_t w = 0; w < words_.size(); ++w)
            if (words_[w] & ~o.words_[w]) return false;
        return true;
    }

    template <class F>
    void for_each(F&& f) const {
        for (std::size_t w = 0; w < words_.size(); ++w) {
            std::uint64_t bits = words_[w];
            while (bits) {
                const int b = std::countr_zero(bits);
                f(w * 64 + static_cast<std::size_t>(b));
                bits &= bits - 1;
            }
        }
    }

private:
    std::vector<std::uint64_t> words_;
};

/// Finite poset given by its cover relations. Elements are dense indices
/// 0..size()-1; the order closure is kept as one bit row per element.
/// Immutable after construction.
class Poset {
public:
    using Index = std::size_t;
    using CoverList = std::vector<std::pair<Index, Index>>;

    Poset() = default;

    /// Builds the poset whose order is the reflexive-transitive closure of
    /// `covers` (pairs lower, upper). Duplicate pairs and pairs implied by
    /// transitivity are dropped. Throws on a cycle or an out-of-range index.
    static Poset from_covers(std::size_t n, std::span<const std::pair<Index, Index>> covers) {
        Poset p;
        p.n_ = n;
        p.up_.assign(n, {});
        p.down_.assign(n, {});
        for (auto [x, y] : covers) {
            if (x >= n || y >= n) throw Error("cover (" + std::to_string(x) + "," + std::to_string(y) + ") references an element outside 0.." + std::to_string(n == 0 ? 0 : n - 1));
            if (x == y) throw Error("cycle detected: element " + std::to_string(x) + " covers itself");
            p.up_[x].push_back(y);
        }
        for (auto& row : p.up_) {
            std::sort(row.begin(), row.end());
            row.erase(std::unique(row.begin(), row.end()), row.end());
        }
        p.compute_order();
        p.reduce_covers();
        p.compute_rank();
        return p;
    }

    /// Hasse diagram of a strict order given as a predicate `less(x, y)`.
    /// The predicate must describe a partial order; O(n^2) evaluations.
    static Poset from_order(std::size_t n, const std::function<bool(Index, Index)>& less) {
        std::vector<BitRow> strict_up(n, BitRow(n));
        for (Index x = 0; x < n; ++x)
            for (Index y = 0; y < n; ++y)
                if (x != y && less(x, y)) strict_up[x].set(y);
        CoverList covers;
        for (Index x = 0; x < n; ++x) {
            BitRow implied(n);
            strict_up[x].for_each([&](Index z) { implied |= strict_up[z]; });
            strict_up[x].for_each([&](Index y) {
                if (!implied.test(y)) covers.emplace_back(x, y);
            });
        }
        return from_covers(n, covers);
    }

    std::size_t size() const noexcept { return n_; }

    bool leq(Index x, Index y) const { return closure_[x].test(y); }
    bool less(Index x, Index y) const { return x != y && leq(x, y); }
    bool comparable(Index x, Index y) const { return leq(x, y) || leq(y, x); }

    std::span<const Index> upper_covers(Index x) const { return up_[x]; }
    std::span<const Index> lower_covers(Index x) const { return down_[x]; }

    /// Elements z with x <= z.
    const BitRow& up_set(Index x) const { return closure_[x]; }

    CoverList cover_pairs() const {
        CoverList out;
        for (Index x = 0; x < n_; ++x)
            for (Index y : up_[x]) out.emplace_back(x, y);
        return out;
    }

    std::size_t cover_count() const {
        std::size_t c = 0;
        for (auto& row : up_) c += row.size();
        return c;
    }

    /// A linear extension (every cover goes forward in this order).
    std::span<const Index> linear_extension() const { return topo_; }
    std::size_t position(Index x) const { return topo_pos_[x]; }

    /// Ranked means every cover raises the rank by exactly one, with all
    /// minimal elements at rank 0.
    bool is_graded() const noexcept { return graded_; }

    std::optional<unsigned> rank(Index x) const {
        if (!graded_) return std::nullopt;
        return rank_[x];
    }

    /// Length of the longest chain ending at x (equals rank when graded).
    unsigned height(Index x) const { return rank_[x]; }

    /// Length of the longest chain in the poset.
    unsigned length() const {
        unsigned h = 0;
        for (auto r : rank_) h = std::max(h, r);
        return h;
    }

    std::span<const Index> minimal_elements() const { return minimal_; }
    std::span<const Index> maximal_elements() const { return maximal_; }

    std::optional<Index> bottom() const {
        if (minimal_.size() == 1) return minimal_[0];
        return std::nullopt;
    }
    std::optional<Index> top() const {
        if (maximal_.size() == 1) return maximal_[0];
        return std::nullopt;
    }

    /// Elements of [x, y] in linear-extension order; empty when x is not <= y.
    std::vector<Index> interval(Index x, Index y) const {
        std::vector<Index> out;
        if (!leq(x, y)) return out;
        closure_[x].for_each([&](Index z) {
            if (leq(z, y)) out.push_back(z);
        });
        std::sort(out.begin(), out.end(), [&](Index a, Index b) { return topo_pos_[a] < topo_pos_[b]; });
        return out;
    }

    /// Copy with a new least element placed at index 0; old index i becomes i+1.
    Poset with_adjoined_bottom() const {
        CoverList covers;
        for (Index m : minimal_) covers.emplace_back(0, m + 1);
        for (Index x = 0; x < n_; ++x)
            for (Index y : up_[x]) covers.emplace_back(x + 1, y + 1);
        return from_covers(n_ + 1, covers);
    }

    /// Induced subposet on `members` (new index i is members[i]).
    Poset induced(std::span<const Index> members) const {
        return from_order(members.size(), [&](Index a, Index b) { return less(members[a], members[b]); });
    }

private:
    void compute_order() {
        std::vector<std::size_t> indeg(n_, 0);
        for (Index x = 0; x < n_; ++x)
            for (Index y : up_[x]) ++indeg[y];
        topo_.clear();
        topo_.reserve(n_);
        for (Index x = 0; x < n_; ++x)
            if (indeg[x] == 0) topo_.push_back(x);
        for (std::size_t head = 0; head < topo_.size(); ++head) {
            for (Index y : up_[topo_[head]])
                if (--indeg[y] == 0) topo_.push_back(y);
        }
        if (topo_.size() != n_) throw Error("cycle detected among the cover relations");
        topo_pos_.assign(n_, 0);
        for (std::size_t i = 0; i < n_; ++i) topo_pos_[topo_[i]] = i;

        closure_.assign(n_, BitRow(n_));
        for (std::size_t i = n_; i-- > 0;) {
            const Index x = topo_[i];
            closure_[x].set(x);
            for (Index y : up_[x]) closure_[x] |= closure_[y];
        }
    }

    void reduce_covers() {
        for (Index x = 0; x < n_; ++x) {
            auto& row = up_[x];
            std::vector<Index> kept;
            for (Index y : row) {
                bool implied = false;
                for (Index z : row)
                    if (z != y && closure_[z].test(y)) {
                        implied = true;
                        break;
                    }
                if (!implied) kept.push_back(y);
            }
            row = std::move(kept);
        }
        down_.assign(n_, {});
        for (Index x = 0; x < n_; ++x)
            for (Index y : up_[x]) down_[y].push_back(x);
        minimal_.clear();
        maximal_.clear();
        for (Index x = 0; x < n_; ++x) {
            if (down_[x].empty()) minimal_.push_back(x);
            if (up_[x].empty()) maximal_.push_back(x);
        }
    }

    void compute_rank() {
        rank_.assign(n_, 0);
        for (Index x : topo_)
            for (Index y : up_[x]) rank_[y] = std::max(rank_[y], rank_[x] + 1);
        graded_ = true;
        for (Index x = 0; x < n_ && graded_; ++x)
            for (Index y : up_[x])
                if (rank_[y] != rank_[x] + 1) {
                    graded_ = false;
                    break;
                }
    }

    std::size_t n_ = 0;
    std::vector<std::vector<Index>> up_;
    std::vector<std::vector<Index>> down_;
    std::vector<BitRow> closure_;
    std::vector<Index> topo_;
    std::vector<std::size_t> topo_pos_;
    std::vector<unsigned> rank_;
    std::vector<Index> minimal_;
    std::vector<Index> maximal_;
    bool graded_ = true;
};

/// Values mu(anchor, y) for all y >= anchor (or mu(y, anchor) for all
/// y <= anchor when built top-down).
class MobiusTable {
public:
    using Index = Poset::Index;

    /// mu(x, y) = -sum_{x <= z < y} mu(x, z), accumulated forward along a
    /// linear extension.
    static MobiusTable from_base(const Poset& p, Index x) {
        MobiusTable t(p.size(), x, true);
        std::vector<std::int64_t> acc(p.size(), 0);
        const BitRow& above = p.up_set(x);
        for (Index z : p.linear_extension()) {
            if (!above.test(z)) continue;
            const std::int64_t mu = (z == x) ? 1 : -acc[z];
            t.values_[z] = mu;
            t.defined_.set(z);
            if (mu == 0) continue;
            p.up_set(z).for_each([&](Index w) {
                if (w != z) acc[w] += mu;
            });
        }
        return t;
    }

    /// mu(z, y) = -sum_{z < w <= y} mu(w, y), for every z <= y.
    static MobiusTable to_top(const Poset& p, Index y) {
        MobiusTable t(p.size(), y, false);
        auto ext = p.linear_extension();
        std::vector<Index> below;
        for (Index z : ext)
            if (p.leq(z, y)) below.push_back(z);
        for (std::size_t i = below.size(); i-- > 0;) {
            const Index z = below[i];
            std::int64_t sum = 0;
            if (z != y) {
                for (std::size_t j = i + 1; j < below.size(); ++j)
                    if (p.leq(z, below[j])) sum += t.values_[below[j]];
            }
            t.values_[z] = (z == y) ? 1 : -sum;
            t.defined_.set(z);
        }
        return t;
    }

    Index anchor() const noexcept { return anchor_; }
    bool anchored_at_bottom() const noexcept { return from_base_; }

    bool defined(Index other) const { return defined_.test(other); }

    std::int64_t at(Index other) const {
        if (!defined_.test(other))
            throw Error("mobius value undefined: elements " + std::to_string(anchor_) + " and " + std::to_string(other) + " are not in order");
        return values_[other];
    }

private:
    MobiusTable(std::size_t n, Index anchor, bool from_base)
        : anchor_(anchor), from_base_(from_base), values_(n, 0), defined_(n) {}

    Index anchor_;
    bool from_base_;
    std::vector<std::int64_t> values_;
    BitRow defined_;
};

/// Per-task memo of Möbius tables keyed by base element.
class MobiusCache {
public:
    explicit MobiusCache(const Poset& p) : poset_(&p) {}

    const MobiusTable& from(Poset::Index x) {
        auto it = tables_.find(x);
        if (it == tables_.end()) it = tables_.emplace(x, MobiusTable::from_base(*poset_, x)).first;
        return it->second;
    }

    std::int64_t operator()(Poset::Index x, Poset::Index y) {
        if (!poset_->leq(x, y))
            throw Error("mobius(x, y) requires x <= y; got " + std::to_string(x) + ", " + std::to_string(y));
        return from(x).at(y);
    }

    void clear() { tables_.clear(); }
    std::size_t cached() const noexcept { return tables_.size(); }

private:
    const Poset* poset_;
    std::unordered_map<Poset::Index, MobiusTable> tables_;
};

inline std::int64_t mobius(const Poset& p, Poset::Index x, Poset::Index y) {
    if (x >= p.size() || y >= p.size()) throw Error("mobius: element index out of range");
    if (!p.leq(x, y))
        throw Error("mobius(x, y) requires x <= y; got " + std::to_string(x) + ", " + std::to_string(y));
    return MobiusTable::from_base(p, x).at(y);
}

/// mu(0^, 1^) of a bounded poset.
inline std::int64_t mobius_bottom_top(const Poset& p) {
    auto b = p.bottom();
    auto t = p.top();
    if (!b || !t) throw Error("poset needs a unique minimum and maximum");
    return mobius(p, *b, *t);
}

using Chain = std::vector<Poset::Index>;

/// Every saturated chain x = z_0 < z_1 < ... < z_k = y, in lexicographic
/// order of element indices.
inline std::vector<Chain> maximal_chains(const Poset& p, Poset::Index x, Poset::Index y) {
    if (!p.leq(x, y))
        throw Error("maximal_chains(x, y) requires x <= y; got " + std::to_string(x) + ", " + std::to_string(y));
    std::vector<Chain> out;
    Chain current{x};
    std::function<void(Poset::Index)> walk = [&](Poset::Index z) {
        if (z == y) {
            out.push_back(current);
            return;
        }
        for (Poset::Index w : p.upper_covers(z)) {
            if (!p.leq(w, y)) continue;
            current.push_back(w);
            walk(w);
            current.pop_back();
        }
    };
    walk(x);
    return out;
}

/// Number of saturated chains from x to y, by dynamic programming.
inline Integer count_maximal_chains(const Poset& p, Poset::Index x, Poset::Index y) {
    if (!p.leq(x, y)) throw Error("count_maximal_chains(x, y) requires x <= y");
    std::vector<Poset::Index> members = p.interval(x, y);
    std::unordered_map<Poset::Index, Integer> ways;
    for (auto it = members.rbegin(); it != members.rend(); ++it) {
        Integer w = (*it == y) ? Integer(1) : Integer(0);
        if (*it != y)
            for (Poset::Index c : p.upper_covers(*it)) {
                auto f = ways.find(c);
                if (f != ways.end()) w += f->second;
            }
        ways[*it] = w;
    }
    return ways[x];
}

struct ChainAxiomReport {
    bool chains_have_expected_length = false;
    bool unique_maximal = false;
    std::size_t minimal_count = 0;
    unsigned shortest_chain_elements = 0;
    unsigned longest_chain_elements = 0;

    bool passed() const { return chains_have_expected_length && unique_maximal; }
};

/// Checks that every maximal chain has `expected_length` elements and that
/// there is a unique maximal element; counts minimal elements.
inline ChainAxiomReport check_chain_axioms(const Poset& p, unsigned expected_length) {
    ChainAxiomReport r;
    r.unique_maximal = p.maximal_elements().size() == 1;
    r.minimal_count = p.minimal_elements().size();
    if (p.size() == 0) return r;
    // shortest/longest chain (in elements) from a minimal element to each z
    std::vector<unsigned> lo(p.size(), 0), hi(p.size(), 0);
    for (auto z : p.linear_extension()) {
        if (p.lower_covers(z).empty()) {
            lo[z] = hi[z] = 1;
            continue;
        }
        lo[z] = ~0U;
        for (auto w : p.lower_covers(z)) {
            lo[z] = std::min(lo[z], lo[w] + 1);
            hi[z] = std::max(hi[z], hi[w] + 1);
        }
    }
    r.shortest_chain_elements = ~0U;
    for (auto m : p.maximal_elements()) {
        r.shortest_chain_elements = std::min(r.shortest_chain_elements, lo[m]);
        r.longest_chain_elements = std::max(r.longest_chain_elements, hi[m]);
    }
    r.chains_have_expected_length =
        r.shortest_chain_elements == expected_length && r.longest_chain_elements == expected_length;
    return r;
}

struct LatticeCheck {
    bool is_lattice = false;
    std::string reason;
};

/// True iff every pair of elements has a join and a meet.
inline LatticeCheck is_lattice(const Poset& p) {
    if (p.size() == 0) return {false, "empty poset"};
    if (!p.bottom()) return {false, "no unique minimal element"};
    if (!p.top()) return {false, "no unique maximal element"};
    const std::size_t n = p.size();
    std::vector<BitRow> down(n, BitRow(n));
    for (Poset::Index x = 0; x < n; ++x) p.up_set(x).for_each([&](Poset::Index y) { down[y].set(x); });

    auto least_of = [&](const BitRow& set, bool upward) -> bool {
        // the candidate comes first (resp. last) in the linear extension
        std::optional<Poset::Index> cand;
        set.for_each([&](Poset::Index z) {
            if (!cand || (upward ? p.position(z) < p.position(*cand) : p.position(z) > p.position(*cand))) cand = z;
        });
        if (!cand) return false;
        return set.subset_of(upward ? p.up_set(*cand) : down[*cand]);
    };

    for (Poset::Index x = 0; x < n; ++x)
        for (Poset::Index y = x + 1; y < n; ++y) {
            if (p.comparable(x, y)) continue;
            BitRow upper = p.up_set(x);
            upper &= p.up_set(y);
            if (!least_of(upper, true))
                return {false, "elements " + std::to_string(x) + " and " + std::to_string(y) + " have no join"};
            BitRow lower = down[x];
            lower &= down[y];
            if (!least_of(lower, false))
                return {false, "elements " + std::to_string(x) + " and " + std::to_string(y) + " have no meet"};
        }
    return {true, ""};
}

}  // namespace dowling
