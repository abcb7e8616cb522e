#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "dowling/poset.hpp"
#include "dowling/rational.hpp"
#include "dowling/series.hpp"

namespace dowling {

/// Size limits for exhaustive constructions. Defaults are safe on a laptop;
/// every field can be raised from the command line.
struct Guards {
    unsigned max_lattice_ground = 9;       // partition-type lattices on [m]
    unsigned max_enumeration_ground = 12;  // bare set-partition listings
    unsigned max_dowling_rank = 8;         // Dowling lattices L_n
    std::size_t max_elements = 50000;      // elements of any built poset
};

inline const Guards& default_guards() {
    static const Guards g{};
    return g;
}

/// (b; a_1, ..., a_n): zero-block size and number of blocks of each size.
struct StructureType {
    unsigned b = 0;
    std::vector<unsigned> a;  // a[i-1] is a_i

    unsigned block_count() const { return std::accumulate(a.begin(), a.end(), 0U); }

    unsigned weight() const {
        unsigned w = b;
        for (std::size_t i = 0; i < a.size(); ++i) w += static_cast<unsigned>(i + 1) * a[i];
        return w;
    }

    /// a_i with a_i = 0 past the stored length.
    unsigned count(unsigned size) const { return size >= 1 && size <= a.size() ? a[size - 1] : 0; }

    friend bool operator==(const StructureType&, const StructureType&) = default;
    friend auto operator<=>(const StructureType&, const StructureType&) = default;

    std::string to_string() const {
        std::string s = "(" + std::to_string(b) + ";";
        for (std::size_t i = 0; i < a.size(); ++i) s += (i ? "," : " ") + std::to_string(a[i]);
        return s + ")";
    }
};

/// Set partition of {1, ..., ground}; blocks sorted internally and ordered
/// by their minima.
struct SetPartition {
    unsigned ground = 0;
    std::vector<std::vector<unsigned>> blocks;

    static SetPartition from_blocks(unsigned ground, std::vector<std::vector<unsigned>> blocks) {
        std::vector<bool> seen(ground + 1, false);
        unsigned total = 0;
        for (auto& b : blocks) {
            if (b.empty()) throw Error("set partition has an empty block");
            std::sort(b.begin(), b.end());
            for (unsigned e : b) {
                if (e < 1 || e > ground) throw Error("element " + std::to_string(e) + " outside 1.." + std::to_string(ground));
                if (seen[e]) throw Error("element " + std::to_string(e) + " appears twice");
                seen[e] = true;
                ++total;
            }
        }
        if (total != ground) throw Error("blocks do not cover 1.." + std::to_string(ground));
        std::sort(blocks.begin(), blocks.end());
        return {ground, std::move(blocks)};
    }

    /// Parses "16|23|459|78" (single-digit elements) or "1,6|2,3" forms.
    static SetPartition parse(const std::string& text) {
        std::vector<std::vector<unsigned>> blocks(1);
        const bool commas = text.find(',') != std::string::npos;
        std::string number;
        unsigned ground = 0;
        auto flush = [&] {
            if (number.empty()) return;
            unsigned e = static_cast<unsigned>(std::stoul(number));
            blocks.back().push_back(e);
            ground = std::max(ground, e);
            number.clear();
        };
        for (char c : text) {
            if (c == '|') {
                flush();
                blocks.emplace_back();
            } else if (c == ',') {
                flush();
            } else if (c >= '0' && c <= '9') {
                number += c;
                if (!commas) flush();
            } else if (c != ' ') {
                throw Error(std::string("unexpected character '") + c + "' in partition");
            }
        }
        flush();
        return from_blocks(ground, std::move(blocks));
    }

    std::string to_string() const {
        std::string s;
        for (std::size_t i = 0; i < blocks.size(); ++i) {
            if (i) s += '|';
            for (std::size_t j = 0; j < blocks[i].size(); ++j) {
                if (j && ground > 9) s += ',';
                s += std::to_string(blocks[i][j]);
            }
        }
        return s;
    }

    friend bool operator==(const SetPartition&, const SetPartition&) = default;
};

struct EnrichedBlock {
    std::vector<unsigned> elems;   // increasing
    std::vector<unsigned> labels;  // labels[i] belongs to elems[i]; labels[0] == 0

    friend bool operator==(const EnrichedBlock&, const EnrichedBlock&) = default;
};

/// Element (enriched partition, zero block) of a Dowling lattice over a group
/// of order s. Labels are residues mod s; each block's minimum carries 0.
struct DowlingElement {
    unsigned n = 0;
    std::vector<unsigned> zero_block;
    std::vector<EnrichedBlock> blocks;

    friend bool operator==(const DowlingElement&, const DowlingElement&) = default;

    std::string to_string() const {
        std::string out = "Z{";
        for (std::size_t i = 0; i < zero_block.size(); ++i) out += (i ? "," : "") + std::to_string(zero_block[i]);
        out += "}";
        for (const auto& b : blocks) {
            out += " {";
            for (std::size_t i = 0; i < b.elems.size(); ++i) {
                if (i) out += ",";
                out += std::to_string(b.elems[i]);
                if (b.labels[i]) out += "^" + std::to_string(b.labels[i]);
            }
            out += "}";
        }
        return out;
    }
};

/// Finite explicit subset of the naturals, meaningful up to `window`.
class IndexSet {
public:
    IndexSet() = default;
    IndexSet(std::vector<unsigned> members, unsigned window) : window_(window) {
        std::sort(members.begin(), members.end());
        members.erase(std::unique(members.begin(), members.end()), members.end());
        for (unsigned v : members)
            if (v > window) throw Error("index set member " + std::to_string(v) + " exceeds window " + std::to_string(window));
        members_ = std::move(members);
    }

    /// {start, start+step, ...} up to the window.
    static IndexSet arithmetic(unsigned start, unsigned step, unsigned window) {
        std::vector<unsigned> v;
        for (unsigned x = start; x <= window; x += step) v.push_back(x);
        return {std::move(v), window};
    }

    static IndexSet all_positive(unsigned window) { return arithmetic(1, 1, window); }

    /// Parses "2,4,6" or "all" (all positives up to the window).
    static IndexSet parse(const std::string& text, unsigned window) {
        if (text == "all") return all_positive(window);
        std::vector<unsigned> v;
        std::string cur;
        for (char c : text + ",") {
            if (c == ',') {
                if (!cur.empty()) v.push_back(static_cast<unsigned>(std::stoul(cur)));
                cur.clear();
            } else if (c >= '0' && c <= '9') {
                cur += c;
            } else if (c != ' ') {
                throw Error("bad index set '" + text + "'");
            }
        }
        return {std::move(v), window};
    }

    bool contains(unsigned v) const {
        if (v > window_) throw Error("index " + std::to_string(v) + " is outside the window " + std::to_string(window_));
        return std::binary_search(members_.begin(), members_.end(), v);
    }

    unsigned window() const noexcept { return window_; }
    const std::vector<unsigned>& members() const noexcept { return members_; }

    std::string to_string() const {
        std::string s;
        for (std::size_t i = 0; i < members_.size(); ++i) s += (i ? "," : "") + std::to_string(members_[i]);
        return s;
    }

    friend bool operator==(const IndexSet&, const IndexSet&) = default;

private:
    std::vector<unsigned> members_;
    unsigned window_ = 0;
};

enum class FamilyKind {
    partition,            // Q_n = Pi_n
    dowling,              // R_n = L_n
    r_divisible,          // Q^(r)_n: r-divisible partitions of [rn]
    dowling_rk,           // D^(r,k)_n inside L_{rn+k}
    restricted_partition, // Q_n^I
    restricted_dowling,   // R_n^{I,J}
    extended,             // Pi_m^{r,j}
};

struct FamilyDescriptor {
    FamilyKind kind = FamilyKind::partition;
    unsigned r = 1;
    unsigned k = 0;
    unsigned s = 1;
    unsigned j = 1;
    IndexSet I;
    IndexSet J;

    static FamilyDescriptor make(FamilyKind kind, unsigned r = 1, unsigned k = 0, unsigned s = 1, unsigned j = 1) {
        FamilyDescriptor f;
        f.kind = kind;
        f.r = r;
        f.k = k;
        f.s = s;
        f.j = j;
        return f;
    }

    static FamilyDescriptor partition() { return {}; }
    static FamilyDescriptor dowling(unsigned s) { return make(FamilyKind::dowling, 1, 0, s); }
    static FamilyDescriptor r_divisible(unsigned r) { return make(FamilyKind::r_divisible, r); }
    static FamilyDescriptor dowling_rk(unsigned r, unsigned k, unsigned s) { return make(FamilyKind::dowling_rk, r, k, s); }
    static FamilyDescriptor extended(unsigned r, unsigned j) { return make(FamilyKind::extended, r, 0, 1, j); }
    static FamilyDescriptor restricted_partition(IndexSet I) {
        auto f = make(FamilyKind::restricted_partition);
        f.I = std::move(I);
        return f;
    }
    static FamilyDescriptor restricted_dowling(IndexSet I, IndexSet J, unsigned s) {
        auto f = make(FamilyKind::restricted_dowling, 1, 0, s);
        f.I = std::move(I);
        f.J = std::move(J);
        return f;
    }

    bool has_zero_block() const {
        return kind == FamilyKind::dowling || kind == FamilyKind::dowling_rk || kind == FamilyKind::restricted_dowling;
    }

    void validate() const {
        if (r < 1) throw Error("family parameter r must be >= 1");
        if (s < 1) throw Error("family parameter s must be >= 1");
        if (kind == FamilyKind::extended && j < 1) throw Error("family parameter j must be >= 1");
    }

    std::string name() const {
        switch (kind) {
            case FamilyKind::partition: return "pi";
            case FamilyKind::dowling: return "dowling(s=" + std::to_string(s) + ")";
            case FamilyKind::r_divisible: return "pi-r(r=" + std::to_string(r) + ")";
            case FamilyKind::dowling_rk:
                return "d-rk(r=" + std::to_string(r) + ",k=" + std::to_string(k) + ",s=" + std::to_string(s) + ")";
            case FamilyKind::restricted_partition: return "pi-restricted(I=" + I.to_string() + ")";
            case FamilyKind::restricted_dowling:
                return "dowling-restricted(I=" + I.to_string() + ",J=" + J.to_string() + ",s=" + std::to_string(s) + ")";
            case FamilyKind::extended: return "pi-rj(r=" + std::to_string(r) + ",j=" + std::to_string(j) + ")";
        }
        return "?";
    }
};

namespace detail {

inline constexpr unsigned kMaxGround = 12;

using CodeKey = unsigned __int128;

struct CodeKeyHash {
    std::size_t operator()(CodeKey k) const noexcept {
        auto lo = static_cast<std::uint64_t>(k);
        auto hi = static_cast<std::uint64_t>(k >> 64);
        return std::hash<std::uint64_t>{}(lo ^ (hi * 0x9E3779B97F4A7C15ULL));
    }
};

/// Compact element: owner 0 is the zero block, owner t > 0 the t-th block
/// ordered by minimum. Elements are 0-based here.
struct Code {
    std::uint8_t n = 0;
    std::array<std::uint8_t, kMaxGround> owner{};
    std::array<std::uint8_t, kMaxGround> label{};

    CodeKey key() const {
        CodeKey k = n;
        for (unsigned i = 0; i < n; ++i) k = (k << 8) | static_cast<CodeKey>((owner[i] << 4) | label[i]);
        return k;
    }

    unsigned block_count() const {
        unsigned c = 0;
        for (unsigned i = 0; i < n; ++i) c = std::max<unsigned>(c, owner[i]);
        return c;
    }

    unsigned zero_size() const {
        unsigned c = 0;
        for (unsigned i = 0; i < n; ++i) c += owner[i] == 0;
        return c;
    }

    std::vector<unsigned> block_sizes() const {
        std::vector<unsigned> sizes(block_count(), 0);
        for (unsigned i = 0; i < n; ++i)
            if (owner[i]) ++sizes[owner[i] - 1];
        return sizes;
    }
};

/// Renumbers blocks by minimum and shifts each block's labels so its minimum has label 0.
inline void canonicalize(Code& c, unsigned s) {
    std::array<std::uint8_t, kMaxGround + 1> rename{};
    std::array<std::uint8_t, kMaxGround + 1> shift{};
    std::uint8_t next = 1;
    for (unsigned i = 0; i < c.n; ++i) {
        const auto o = c.owner[i];
        if (o == 0) {
            c.label[i] = 0;
            continue;
        }
        if (!rename[o]) {
            rename[o] = next++;
            shift[o] = c.label[i];
        }
        c.label[i] = static_cast<std::uint8_t>((c.label[i] + s - shift[o]) % s);
        c.owner[i] = rename[o];
    }
}

/// x <= y: the zero block grows, and each block of x lies in y's zero block
/// or inside one block of y with labels agreeing up to a common shift.
inline bool code_leq(const Code& x, const Code& y, unsigned s) {
    std::array<int, kMaxGround + 1> target{};
    std::array<int, kMaxGround + 1> offset{};
    target.fill(-1);
    for (unsigned i = 0; i < x.n; ++i) {
        const auto ox = x.owner[i];
        const auto oy = y.owner[i];
        if (ox == 0) {
            if (oy != 0) return false;
            continue;
        }
        const int diff = static_cast<int>((y.label[i] + s - x.label[i]) % s);
        if (target[ox] == -1) {
            target[ox] = oy;
            offset[ox] = diff;
        } else if (target[ox] != oy || (oy != 0 && offset[ox] != diff)) {
            return false;
        }
    }
    return true;
}

/// Calls f(code) for every element covering c in the full lattice: block
/// pairs merged with each of the s relative labelings, and (when
/// zero_merges) each block absorbed by the zero block.
template <class F>
void for_each_merge(const Code& c, unsigned s, bool zero_merges, F&& f) {
    const unsigned blocks = c.block_count();
    for (unsigned a = 1; a <= blocks; ++a) {
        for (unsigned b = a + 1; b <= blocks; ++b)
            for (unsigned alpha = 0; alpha < s; ++alpha) {
                Code m = c;
                for (unsigned i = 0; i < m.n; ++i)
                    if (m.owner[i] == b) {
                        m.owner[i] = static_cast<std::uint8_t>(a);
                        m.label[i] = static_cast<std::uint8_t>((m.label[i] + alpha) % s);
                    }
                canonicalize(m, s);
                f(m);
            }
        if (zero_merges) {
            Code m = c;
            for (unsigned i = 0; i < m.n; ++i)
                if (m.owner[i] == a) m.owner[i] = 0;
            canonicalize(m, s);
            f(m);
        }
    }
}

/// Enumerates elements of L_n (or Pi_n when !with_zero) whose underlying
/// (zero block, partition) passes `keep`, expanding all canonical labelings.
inline std::vector<Code> enumerate_codes(unsigned n, bool with_zero, unsigned s,
                                         const std::function<bool(const Code&)>& keep, std::size_t max_elements) {
    std::vector<Code> out;
    Code base;
    base.n = static_cast<std::uint8_t>(n);
    const unsigned zero_masks = with_zero ? (1U << n) : 1U;
    for (unsigned mask = 0; mask < zero_masks; ++mask) {
        std::vector<unsigned> rest;
        for (unsigned i = 0; i < n; ++i) {
            if (mask & (1U << i))
                base.owner[i] = 0;
            else
                rest.push_back(i);
        }
        // restricted growth strings over `rest`
        std::function<void(std::size_t, unsigned)> place = [&](std::size_t pos, unsigned used) {
            if (pos == rest.size()) {
                if (!keep(base)) return;
                // labelings: every non-minimum element of a block gets any label
                std::vector<unsigned> free_positions;
                std::array<bool, kMaxGround + 1> seen{};
                for (unsigned i = 0; i < n; ++i) {
                    const auto o = base.owner[i];
                    if (o == 0) continue;
                    if (seen[o])
                        free_positions.push_back(i);
                    else
                        seen[o] = true;
                }
                Code c = base;
                std::function<void(std::size_t)> label = [&](std::size_t q) {
                    if (q == free_positions.size()) {
                        if (out.size() >= max_elements)
                            throw GuardError("max_elements", static_cast<long long>(max_elements),
                                             static_cast<long long>(out.size() + 1));
                        out.push_back(c);
                        return;
                    }
                    for (unsigned v = 0; v < s; ++v) {
                        c.label[free_positions[q]] = static_cast<std::uint8_t>(v);
                        label(q + 1);
                    }
                    c.label[free_positions[q]] = 0;
                };
                label(0);
                return;
            }
            for (unsigned b = 1; b <= used + 1; ++b) {
                base.owner[rest[pos]] = static_cast<std::uint8_t>(b);
                place(pos + 1, std::max(used, b));
            }
        };
        place(0, 0);
    }
    return out;
}

inline StructureType raw_type(const Code& c) {
    StructureType t;
    t.b = c.zero_size();
    t.a.assign(c.n, 0);
    for (unsigned size : c.block_sizes()) ++t.a[size - 1];
    return t;
}

}  // namespace detail

/// A constructed poset together with its element map. When the poset has an
/// adjoined bottom, index 0 is that synthetic element and carries no code.
class BuiltPoset {
public:
    using Index = Poset::Index;

    FamilyDescriptor family;
    unsigned ground = 0;
    unsigned s = 1;
    bool has_zero_block = false;
    bool adjoined_bottom = false;
    Poset poset;

    std::size_t size() const { return poset.size(); }

    bool is_synthetic(Index i) const { return adjoined_bottom && i == 0; }

    const detail::Code& code(Index i) const {
        if (is_synthetic(i)) throw Error("the adjoined bottom has no underlying element");
        return codes_.at(adjoined_bottom ? i - 1 : i);
    }

    std::optional<Index> find(const detail::Code& c) const {
        auto it = index_.find(c.key());
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    std::optional<Index> find(const SetPartition& p) const {
        if (has_zero_block || p.ground != ground) return std::nullopt;
        detail::Code c;
        c.n = static_cast<std::uint8_t>(ground);
        for (std::size_t b = 0; b < p.blocks.size(); ++b)
            for (unsigned e : p.blocks[b]) c.owner[e - 1] = static_cast<std::uint8_t>(b + 1);
        detail::canonicalize(c, s);
        return find(c);
    }

    std::optional<Index> find(const DowlingElement& x) const {
        if (!has_zero_block || x.n != ground) return std::nullopt;
        detail::Code c;
        c.n = static_cast<std::uint8_t>(ground);
        for (std::size_t b = 0; b < x.blocks.size(); ++b)
            for (std::size_t i = 0; i < x.blocks[b].elems.size(); ++i) {
                c.owner[x.blocks[b].elems[i] - 1] = static_cast<std::uint8_t>(b + 1);
                c.label[x.blocks[b].elems[i] - 1] = static_cast<std::uint8_t>(x.blocks[b].labels[i] % s);
            }
        detail::canonicalize(c, s);
        return find(c);
    }

    SetPartition partition(Index i) const {
        const auto& c = code(i);
        if (has_zero_block) throw Error("element carries a zero block; use dowling()");
        std::vector<std::vector<unsigned>> blocks(c.block_count());
        for (unsigned e = 0; e < c.n; ++e) blocks[c.owner[e] - 1].push_back(e + 1);
        return {ground, std::move(blocks)};
    }

    DowlingElement dowling(Index i) const {
        const auto& c = code(i);
        DowlingElement x;
        x.n = ground;
        x.blocks.resize(c.block_count());
        for (unsigned e = 0; e < c.n; ++e) {
            if (c.owner[e] == 0) {
                x.zero_block.push_back(e + 1);
            } else {
                auto& b = x.blocks[c.owner[e] - 1];
                b.elems.push_back(e + 1);
                b.labels.push_back(c.label[e]);
            }
        }
        return x;
    }

    /// Raw type (b; a_1, ..., a_ground) of a non-synthetic element.
    StructureType type(Index i) const { return detail::raw_type(code(i)); }

    std::string element_string(Index i) const {
        if (is_synthetic(i)) return "0^";
        return has_zero_block ? dowling(i).to_string() : partition(i).to_string();
    }

    std::vector<Index> elements() const {
        std::vector<Index> v;
        for (Index i = adjoined_bottom ? 1 : 0; i < size(); ++i) v.push_back(i);
        return v;
    }

    /// Assembles the poset. Filter families take their covers from single
    /// merges; other families use the order predicate and transitive reduction.
    static BuiltPoset assemble(FamilyDescriptor family, unsigned ground, unsigned s, bool has_zero,
                               std::vector<detail::Code> codes, bool filter_family, bool adjoin_bottom) {
        BuiltPoset bp;
        bp.family = std::move(family);
        bp.ground = ground;
        bp.s = s;
        bp.has_zero_block = has_zero;
        bp.adjoined_bottom = adjoin_bottom;
        std::stable_sort(codes.begin(), codes.end(), [](const detail::Code& a, const detail::Code& b) {
            return a.n - a.zero_size() - a.block_count() < b.n - b.zero_size() - b.block_count() ||
                   (a.n - a.zero_size() - a.block_count() == b.n - b.zero_size() - b.block_count() &&
                    a.zero_size() < b.zero_size());
        });
        bp.codes_ = std::move(codes);
        const std::size_t shift = adjoin_bottom ? 1 : 0;
        for (std::size_t i = 0; i < bp.codes_.size(); ++i) bp.index_.emplace(bp.codes_[i].key(), i + shift);

        Poset core;
        if (filter_family) {
            Poset::CoverList covers;
            for (std::size_t i = 0; i < bp.codes_.size(); ++i) {
                detail::for_each_merge(bp.codes_[i], s, has_zero, [&](const detail::Code& m) {
                    auto it = bp.index_.find(m.key());
                    if (it != bp.index_.end()) covers.emplace_back(i, it->second - shift);
                });
            }
            core = Poset::from_covers(bp.codes_.size(), covers);
        } else {
            core = Poset::from_order(bp.codes_.size(), [&](Index a, Index b) {
                return a != b && detail::code_leq(bp.codes_[a], bp.codes_[b], s);
            });
        }
        bp.poset = adjoin_bottom ? core.with_adjoined_bottom() : std::move(core);
        return bp;
    }

private:
    std::vector<detail::Code> codes_;
    std::unordered_map<detail::CodeKey, Index, detail::CodeKeyHash> index_;
};

// ---------------------------------------------------------------------------
// Listings and builders

inline std::vector<SetPartition> enumerate_partitions(unsigned m, const Guards& g = default_guards()) {
    if (m < 1) throw Error("enumerate_partitions requires m >= 1");
    check_guard("max_enumeration_ground", g.max_enumeration_ground, m);
    check_guard("max_enumeration_ground", detail::kMaxGround, m);
    std::vector<SetPartition> out;
    std::vector<unsigned> rgs(m, 0);
    std::function<void(unsigned, unsigned)> rec = [&](unsigned pos, unsigned used) {
        if (pos == m) {
            std::vector<std::vector<unsigned>> blocks(used);
            for (unsigned i = 0; i < m; ++i) blocks[rgs[i]].push_back(i + 1);
            out.push_back({m, std::move(blocks)});
            return;
        }
        for (unsigned b = 0; b <= used && b < m; ++b) {
            rgs[pos] = b;
            rec(pos + 1, std::max(used, b + 1));
        }
    };
    rec(0, 0);
    return out;
}

inline BuiltPoset build_partition_lattice(unsigned m, const Guards& g = default_guards()) {
    if (m < 1) throw Error("partition lattice requires m >= 1");
    check_guard("max_lattice_ground", g.max_lattice_ground, m);
    auto codes = detail::enumerate_codes(m, false, 1, [](const detail::Code&) { return true; }, g.max_elements);
    return BuiltPoset::assemble(FamilyDescriptor::partition(), m, 1, false, std::move(codes), true, false);
}

inline BuiltPoset build_dowling_lattice(unsigned n, unsigned s, const Guards& g = default_guards()) {
    if (s < 1) throw Error("group order s must be >= 1");
    check_guard("max_dowling_rank", g.max_dowling_rank, n);
    check_guard("max_label_values", 16, s);
    auto codes = detail::enumerate_codes(n, true, s, [](const detail::Code&) { return true; }, g.max_elements);
    return BuiltPoset::assemble(FamilyDescriptor::dowling(s), n, s, true, std::move(codes), true, false);
}

/// Pi_m^r: r-divisible partitions of [m] with a bottom adjoined.
inline BuiltPoset build_r_divisible(unsigned m, unsigned r, const Guards& g = default_guards()) {
    if (r < 1 || m < 1) throw Error("r-divisible lattice requires m >= 1 and r >= 1");
    if (m % r != 0) throw Error("r-divisible lattice requires r | m (m=" + std::to_string(m) + ", r=" + std::to_string(r) + ")");
    check_guard("max_lattice_ground", g.max_lattice_ground, m);
    auto keep = [r](const detail::Code& c) {
        for (unsigned size : c.block_sizes())
            if (size % r) return false;
        return true;
    };
    auto codes = detail::enumerate_codes(m, false, 1, keep, g.max_elements);
    return BuiltPoset::assemble(FamilyDescriptor::r_divisible(r), m, 1, false, std::move(codes), true, true);
}

/// Pi_m^{r,j}: the block holding m has at least j elements, all other blocks
/// are r-divisible; bottom adjoined.
inline BuiltPoset build_extended(unsigned m, unsigned r, unsigned j, const Guards& g = default_guards()) {
    if (r < 1 || j < 1) throw Error("extended lattice requires r >= 1 and j >= 1");
    if (m < j || (m - j) % r != 0)
        throw Error("extended lattice requires m = j (mod r) with m >= j (m=" + std::to_string(m) + ", r=" +
                    std::to_string(r) + ", j=" + std::to_string(j) + ")");
    check_guard("max_lattice_ground", g.max_lattice_ground, m);
    auto keep = [m, r, j](const detail::Code& c) {
        const auto sizes = c.block_sizes();
        const unsigned last = c.owner[m - 1];
        for (unsigned b = 1; b <= sizes.size(); ++b) {
            if (b == last) {
                if (sizes[b - 1] < j) return false;
            } else if (sizes[b - 1] % r) {
                return false;
            }
        }
        return true;
    };
    auto codes = detail::enumerate_codes(m, false, 1, keep, g.max_elements);
    return BuiltPoset::assemble(FamilyDescriptor::extended(r, j), m, 1, false, std::move(codes), true, true);
}

/// Q_n^I (family restricted_partition) or R_n^{I,J} (restricted_dowling),
/// with a bottom adjoined.
inline BuiltPoset build_restricted(unsigned n, const FamilyDescriptor& family, const Guards& g = default_guards()) {
    family.validate();
    if (family.kind == FamilyKind::restricted_partition) {
        if (n < 1) throw Error("restricted partition poset requires n >= 1");
        check_guard("max_lattice_ground", g.max_lattice_ground, n);
        if (n > family.I.window()) throw Error("n exceeds the window of I");
        auto keep = [&](const detail::Code& c) {
            for (unsigned size : c.block_sizes())
                if (!family.I.contains(size)) return false;
            return true;
        };
        auto codes = detail::enumerate_codes(n, false, 1, keep, g.max_elements);
        return BuiltPoset::assemble(family, n, 1, false, std::move(codes), false, true);
    }
    if (family.kind == FamilyKind::restricted_dowling) {
        check_guard("max_dowling_rank", g.max_dowling_rank, n);
        if (n > family.I.window() || n > family.J.window()) throw Error("n exceeds the window of I or J");
        auto keep = [&](const detail::Code& c) {
            if (!family.J.contains(c.zero_size())) return false;
            for (unsigned size : c.block_sizes())
                if (!family.I.contains(size)) return false;
            return true;
        };
        auto codes = detail::enumerate_codes(n, true, family.s, keep, g.max_elements);
        return BuiltPoset::assemble(family, n, family.s, true, std::move(codes), false, true);
    }
    throw Error("build_restricted supports only the restricted partition and restricted Dowling families");
}

/// D_n^(r,k): elements of L_{rn+k} with b >= k, b = k (mod r) and all
/// blocks r-divisible.
inline BuiltPoset build_D_rk(unsigned n, unsigned r, unsigned k, unsigned s, bool adjoin_bottom,
                             const Guards& g = default_guards()) {
    if (r < 1 || s < 1) throw Error("D^(r,k) requires r >= 1 and s >= 1");
    const unsigned ground = r * n + k;
    check_guard("max_dowling_rank", g.max_dowling_rank, ground);
    check_guard("max_label_values", 16, s);
    auto keep = [r, k](const detail::Code& c) {
        const unsigned b = c.zero_size();
        if (b < k || (b - k) % r) return false;
        for (unsigned size : c.block_sizes())
            if (size % r) return false;
        return true;
    };
    auto codes = detail::enumerate_codes(ground, true, s, keep, g.max_elements);
    return BuiltPoset::assemble(FamilyDescriptor::dowling_rk(r, k, s), ground, s, true, std::move(codes), true,
                                adjoin_bottom);
}

// ---------------------------------------------------------------------------
// Types and counting

inline StructureType type_of(const SetPartition& p) {
    StructureType t;
    t.a.assign(p.ground, 0);
    for (const auto& b : p.blocks) ++t.a[b.size() - 1];
    return t;
}

inline StructureType type_of(const DowlingElement& x) {
    StructureType t;
    t.b = static_cast<unsigned>(x.zero_block.size());
    t.a.assign(x.n, 0);
    for (const auto& b : x.blocks) ++t.a[b.elems.size() - 1];
    return t;
}

/// Type of an element as seen by its own exponential (Dowling) structure:
/// for Q^(r) and D^(r,k) block sizes and the zero-block excess are divided by r.
inline StructureType structure_type(const BuiltPoset& bp, Poset::Index i) {
    StructureType raw = bp.type(i);
    const auto& f = bp.family;
    if (f.kind != FamilyKind::r_divisible && f.kind != FamilyKind::dowling_rk) return raw;
    StructureType t;
    t.b = f.kind == FamilyKind::dowling_rk ? (raw.b - f.k) / f.r : 0;
    t.a.assign((bp.ground - (f.kind == FamilyKind::dowling_rk ? f.k : 0)) / f.r, 0);
    for (unsigned size = 1; size <= raw.a.size(); ++size)
        if (raw.count(size)) t.a[size / f.r - 1] = raw.count(size);
    return t;
}

/// M^(r)(n) = (rn)! / (n! r!^n), the minimal-element count of Q^(r)_n over Pi.
inline Integer denominator_M_r(unsigned n, unsigned r) {
    return factorial(r * n) / (factorial(n) * power(factorial(r), n));
}

/// N^(r,k)(n) = (rn+k)! s^((r-1)n) / (k! r!^n n!), the minimal-element count of D^(r,k)_n.
inline Integer denominator_N_rk(unsigned n, unsigned r, unsigned k, unsigned s) {
    return factorial(r * n + k) * power(Integer(s), (r - 1) * n) / (factorial(k) * power(factorial(r), n) * factorial(n));
}

/// Denominator sequence of the family itself: M for exponential structures,
/// N for Dowling structures.
inline DenominatorSequence family_denominator(const FamilyDescriptor& f) {
    switch (f.kind) {
        case FamilyKind::r_divisible: {
            const unsigned r = f.r;
            return {"M^(" + std::to_string(r) + ")", [r](unsigned n) { return denominator_M_r(n, r); }};
        }
        case FamilyKind::dowling_rk: {
            const unsigned r = f.r, k = f.k, s = f.s;
            return {"N^(" + std::to_string(r) + "," + std::to_string(k) + ")",
                    [r, k, s](unsigned n) { return denominator_N_rk(n, r, k, s); }};
        }
        default:
            return DenominatorSequence::ones();
    }
}

/// Denominator sequence M of the exponential structure underlying the family.
inline DenominatorSequence associated_denominator(const FamilyDescriptor& f) {
    if (f.kind == FamilyKind::r_divisible || f.kind == FamilyKind::dowling_rk) {
        const unsigned r = f.r;
        return {"M^(" + std::to_string(r) + ")", [r](unsigned n) { return denominator_M_r(n, r); }};
    }
    return DenominatorSequence::ones();
}

/// Number of elements of the given type in the n-th poset of the family:
/// exponential structures  M(n) n! / prod (M(i) i!)^{a_i} a_i!,
/// Dowling structures      N(n) s^n n! / (N(b) s^b b! prod (M(i) s i!)^{a_i} a_i!).
inline Integer count_of_type(unsigned n, unsigned s, const StructureType& t, const FamilyDescriptor& family) {
    if (t.weight() != n)
        throw Error("inconsistent type " + t.to_string() + ": b + sum i*a_i = " + std::to_string(t.weight()) +
                    " but n = " + std::to_string(n));
    const auto M = associated_denominator(family);
    switch (family.kind) {
        case FamilyKind::partition:
        case FamilyKind::r_divisible: {
            if (t.b != 0) throw Error("exponential structures have no zero block");
            Integer num = M(n) * factorial(n);
            Integer den = 1;
            for (unsigned i = 1; i <= t.a.size(); ++i)
                den *= power(Integer(M(i) * factorial(i)), t.a[i - 1]) * factorial(t.a[i - 1]);
            return num / den;
        }
        case FamilyKind::dowling:
        case FamilyKind::dowling_rk: {
            const auto N = family_denominator(family);
            const Integer S(s);
            Integer num = N(n) * power(S, n) * factorial(n);
            Integer den = N(t.b) * power(S, t.b) * factorial(t.b);
            for (unsigned i = 1; i <= t.a.size(); ++i)
                den *= power(Integer(M(i) * S * factorial(i)), t.a[i - 1]) * factorial(t.a[i - 1]);
            return num / den;
        }
        default:
            throw Error("count_of_type is defined for the partition, r-divisible, Dowling and D^(r,k) families");
    }
}

/// Every type (b; a) with b + sum i a_i = n, b ranging over `zero_sizes`.
inline std::vector<StructureType> all_types(unsigned n, bool with_zero) {
    std::vector<StructureType> out;
    for (unsigned b = 0; b <= (with_zero ? n : 0); ++b) {
        StructureType t;
        t.b = b;
        t.a.assign(n, 0);
        std::function<void(unsigned, unsigned)> rec = [&](unsigned size, unsigned remaining) {
            if (remaining == 0) {
                out.push_back(t);
                return;
            }
            if (size > remaining) return;
            for (unsigned cnt = 0; cnt * size <= remaining; ++cnt) {
                t.a[size - 1] = cnt;
                rec(size + 1, remaining - cnt * size);
            }
            t.a[size - 1] = 0;
        };
        rec(1, n - b);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Pi_m^{r,k+1} versus D_n^(r,k) at s = 1

/// Removes m from its block and turns the rest of that block into the zero block.
inline DowlingElement extended_to_dowling(const SetPartition& p) {
    const unsigned m = p.ground;
    DowlingElement x;
    x.n = m - 1;
    for (const auto& b : p.blocks) {
        if (b.back() == m) {
            x.zero_block.assign(b.begin(), b.end() - 1);
        } else {
            x.blocks.push_back({b, std::vector<unsigned>(b.size(), 0)});
        }
    }
    std::sort(x.blocks.begin(), x.blocks.end(), [](const EnrichedBlock& a, const EnrichedBlock& b) { return a.elems < b.elems; });
    return x;
}

struct ExtendedDowlingBijection {
    BuiltPoset extended;  // Pi_m^{r,k+1}
    BuiltPoset dowling;   // D_n^(r,k) with s = 1, bottom adjoined
    std::vector<Poset::Index> forward;  // extended index -> dowling index (0 -> 0)

    /// True iff forward is a bijection preserving and reflecting the order.
    bool is_order_isomorphism() const {
        const std::size_t n = extended.size();
        if (dowling.size() != n) return false;
        std::vector<bool> hit(n, false);
        for (auto v : forward) {
            if (v >= n || hit[v]) return false;
            hit[v] = true;
        }
        for (Poset::Index a = 0; a < n; ++a)
            for (Poset::Index b = 0; b < n; ++b)
                if (extended.poset.leq(a, b) != dowling.poset.leq(forward[a], forward[b])) return false;
        return true;
    }
};

inline ExtendedDowlingBijection bijection_extended_to_dowling(unsigned m, unsigned r, unsigned k,
                                                              const Guards& g = default_guards()) {
    if (r < 1 || m < k + 1 || (m - k - 1) % r != 0)
        throw Error("bijection requires m = rn + k + 1 (m=" + std::to_string(m) + ", r=" + std::to_string(r) +
                    ", k=" + std::to_string(k) + ")");
    const unsigned n = (m - k - 1) / r;
    ExtendedDowlingBijection bij{build_extended(m, r, k + 1, g), build_D_rk(n, r, k, 1, true, g), {}};
    bij.forward.assign(bij.extended.size(), 0);
    for (Poset::Index i : bij.extended.elements()) {
        auto target = bij.dowling.find(extended_to_dowling(bij.extended.partition(i)));
        if (!target) throw Error("bijection image missing for " + bij.extended.element_string(i));
        bij.forward[i] = *target;
    }
    return bij;
}

/// Pi_m^{r,j} minus its bottom is an upper set of Pi_m.
inline bool extended_is_filter(unsigned m, unsigned r, unsigned j, const Guards& g = default_guards()) {
    const BuiltPoset ext = build_extended(m, r, j, g);
    const BuiltPoset full = build_partition_lattice(m, g);
    std::vector<bool> member(full.size(), false);
    for (auto i : ext.elements()) member[*full.find(ext.partition(i))] = true;
    for (Poset::Index x = 0; x < full.size(); ++x) {
        if (!member[x]) continue;
        bool ok = true;
        full.poset.up_set(x).for_each([&](Poset::Index y) { ok = ok && member[y]; });
        if (!ok) return false;
    }
    return true;
}

}  // namespace dowling
