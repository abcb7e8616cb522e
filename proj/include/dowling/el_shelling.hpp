#pragma once

#include <algorithm>
#include <compare>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "dowling/perm_stats.hpp"
#include "dowling/poset.hpp"
#include "dowling/structures.hpp"

namespace dowling {

/// Edge label of the extended partition lattice. Ordered
/// -m < ... < -1 < 0_1 < ... < 0_M < 1 < ... < m.
struct EdgeLabel {
    enum class Kind { negative, zero, positive };
    Kind kind = Kind::zero;
    unsigned value = 0;

    static EdgeLabel negative(unsigned v) { return {Kind::negative, v}; }
    static EdgeLabel zero(unsigned i) { return {Kind::zero, i}; }
    static EdgeLabel positive(unsigned v) { return {Kind::positive, v}; }

    friend bool operator==(const EdgeLabel&, const EdgeLabel&) = default;
    friend std::strong_ordering operator<=>(const EdgeLabel& a, const EdgeLabel& b) {
        if (a.kind != b.kind) return a.kind <=> b.kind;
        if (a.kind == Kind::negative) return b.value <=> a.value;
        return a.value <=> b.value;
    }

    std::string to_string() const {
        switch (kind) {
            case Kind::negative:
                return "-" + std::to_string(value);
            case Kind::zero:
                return "0_" + std::to_string(value);
            case Kind::positive:
                return std::to_string(value);
        }
        return "?";
    }
};

/// The permutation read off an atom: blocks by increasing minimum, each block increasing.
inline std::vector<unsigned> atom_word(const SetPartition& a) {
    auto blocks = a.blocks;
    for (auto& b : blocks) std::sort(b.begin(), b.end());
    std::sort(blocks.begin(), blocks.end(), [](const auto& x, const auto& y) { return x.front() < y.front(); });
    std::vector<unsigned> w;
    for (const auto& b : blocks) w.insert(w.end(), b.begin(), b.end());
    return w;
}

/// Label of a merge of B1 and B2 with max(B1) < max(B2).
inline EdgeLabel merge_label(const std::vector<unsigned>& B1, const std::vector<unsigned>& B2) {
    unsigned max1 = *std::max_element(B1.begin(), B1.end());
    unsigned max2 = *std::max_element(B2.begin(), B2.end());
    const std::vector<unsigned>* lo = &B1;
    const std::vector<unsigned>* hi = &B2;
    if (max1 > max2) {
        std::swap(lo, hi);
        std::swap(max1, max2);
    }
    const unsigned min2 = *std::min_element(hi->begin(), hi->end());
    return max1 > min2 ? EdgeLabel::negative(max1) : EdgeLabel::positive(max2);
}

/// The two blocks of x merged to give y; throws when y does not cover x by a single merge.
inline std::pair<std::vector<unsigned>, std::vector<unsigned>> merged_blocks(const SetPartition& x, const SetPartition& y) {
    if (x.ground != y.ground) throw Error("partitions on different grounds");
    std::vector<unsigned> owner(y.ground + 1, 0);
    for (std::size_t b = 0; b < y.blocks.size(); ++b)
        for (unsigned e : y.blocks[b]) owner[e] = static_cast<unsigned>(b);
    std::map<unsigned, std::vector<std::size_t>> groups;
    for (std::size_t b = 0; b < x.blocks.size(); ++b) groups[owner[x.blocks[b].front()]].push_back(b);
    std::vector<std::size_t> pair;
    for (const auto& [yb, xs] : groups) {
        if (xs.size() == 2 && pair.empty())
            pair = xs;
        else if (xs.size() != 1)
            throw Error("not a single merge: " + x.to_string() + " -> " + y.to_string());
    }
    if (pair.size() != 2 || x.blocks.size() != y.blocks.size() + 1)
        throw Error("not a single merge: " + x.to_string() + " -> " + y.to_string());
    return {x.blocks[pair[0]], x.blocks[pair[1]]};
}

/// The extended partition lattice Pi_m^{r,j} (bottom adjoined) with its edge labelling.
class ExtendedLabelling {
public:
    using Index = Poset::Index;

    ExtendedLabelling(unsigned m, unsigned r, unsigned j, const Guards& g = default_guards())
        : m_(m), r_(r), j_(j), lattice_(build_extended(m, r, j, g)) {
        check_guard("max_el_elements", 20000, lattice_.size());
        n_ = (m - j) / r;
        const auto& P = lattice_.poset;
        bottom_ = *P.bottom();
        // atoms ordered by their words
        std::vector<std::pair<std::vector<unsigned>, Index>> atoms;
        for (auto a : P.upper_covers(bottom_)) atoms.emplace_back(atom_word(lattice_.partition(a)), a);
        std::sort(atoms.begin(), atoms.end());
        for (auto& [w, a] : atoms) atoms_.push_back(a);
        labels_.resize(P.size());
        for (Index x = 0; x < P.size(); ++x) {
            for (auto y : P.upper_covers(x)) {
                if (x == bottom_) {
                    const auto pos = std::find(atoms_.begin(), atoms_.end(), y) - atoms_.begin();
                    labels_[x].push_back(EdgeLabel::zero(static_cast<unsigned>(pos + 1)));
                } else {
                    auto [B1, B2] = merged_blocks(lattice_.partition(x), lattice_.partition(y));
                    labels_[x].push_back(merge_label(B1, B2));
                }
            }
        }
    }

    unsigned m() const noexcept { return m_; }
    unsigned r() const noexcept { return r_; }
    unsigned j() const noexcept { return j_; }
    unsigned n() const noexcept { return n_; }
    const BuiltPoset& lattice() const noexcept { return lattice_; }
    const Poset& poset() const noexcept { return lattice_.poset; }
    Index bottom() const noexcept { return bottom_; }
    Index top() const { return *lattice_.poset.top(); }

    /// Atoms in label order (atom i carries 0_{i+1}).
    const std::vector<Index>& atoms() const noexcept { return atoms_; }

    /// (m-1)! / (n! r!^n (j-1)!).
    Integer expected_atom_count() const {
        return factorial(m_ - 1) / (factorial(n_) * power(factorial(r_), n_) * factorial(j_ - 1));
    }

    EdgeLabel label(Index x, Index y) const {
        const auto& ups = lattice_.poset.upper_covers(x);
        for (std::size_t i = 0; i < ups.size(); ++i)
            if (ups[i] == y) return labels_[x][i];
        throw Error("no cover between the given elements");
    }

    /// Labels aligned with poset().upper_covers(x).
    const std::vector<EdgeLabel>& labels_from(Index x) const { return labels_.at(x); }

    std::vector<EdgeLabel> chain_labels(const std::vector<Index>& chain) const {
        std::vector<EdgeLabel> out;
        for (std::size_t i = 0; i + 1 < chain.size(); ++i) out.push_back(label(chain[i], chain[i + 1]));
        return out;
    }

    std::string element_string(Index i) const { return lattice_.element_string(i); }

private:
    unsigned m_, r_, j_, n_ = 0;
    BuiltPoset lattice_;
    Index bottom_ = 0;
    std::vector<Index> atoms_;
    std::vector<std::vector<EdgeLabel>> labels_;
};

// The pair (lambda, -rank) is compared lexicographically. Along a chain the
// rank strictly grows, so a chain is rising exactly when lambda strictly
// increases and falling exactly when lambda weakly decreases.

inline bool is_rising(const std::vector<EdgeLabel>& ls) {
    for (std::size_t i = 0; i + 1 < ls.size(); ++i)
        if (!(ls[i] < ls[i + 1])) return false;
    return true;
}

inline bool is_falling(const std::vector<EdgeLabel>& ls) {
    for (std::size_t i = 0; i + 1 < ls.size(); ++i)
        if (ls[i] < ls[i + 1]) return false;
    return true;
}

struct RisingCensus {
    std::size_t intervals_checked = 0;
    /// Intervals whose number of rising maximal chains is not one.
    std::size_t rising_violations = 0;
    /// Intervals whose lexicographically first maximal chain is not rising.
    std::size_t lex_violations = 0;
    std::vector<std::string> examples;
};

/// Checks every interval [x, y], x < y, of the labelled poset.
inline RisingCensus rising_chain_census(const ExtendedLabelling& L, std::size_t max_examples = 5) {
    using Index = Poset::Index;
    const auto& P = L.poset();
    const auto ext = P.linear_extension();
    RisingCensus out;
    // rising[z]: first label -> number of rising chains from z to y
    std::vector<std::map<EdgeLabel, Integer>> rising(P.size());
    std::vector<std::vector<EdgeLabel>> best(P.size());
    std::vector<bool> reach(P.size());
    for (Index y = 0; y < P.size(); ++y) {
        for (Index z = 0; z < P.size(); ++z) {
            rising[z].clear();
            best[z].clear();
            reach[z] = P.leq(z, y);
        }
        for (auto it = ext.rbegin(); it != ext.rend(); ++it) {
            const Index z = *it;
            if (!reach[z] || z == y) continue;
            const auto& ups = P.upper_covers(z);
            const auto& lab = L.labels_from(z);
            bool have = false;
            for (std::size_t i = 0; i < ups.size(); ++i) {
                const Index c = ups[i];
                if (!reach[c]) continue;
                const EdgeLabel l = lab[i];
                Integer count = 0;
                if (c == y) {
                    count = 1;
                } else {
                    for (auto jt = rising[c].upper_bound(l); jt != rising[c].end(); ++jt) count += jt->second;
                }
                if (count != 0) rising[z][l] += count;
                std::vector<EdgeLabel> cand{l};
                cand.insert(cand.end(), best[c].begin(), best[c].end());
                if (!have || cand < best[z]) {
                    best[z] = std::move(cand);
                    have = true;
                }
            }
            Integer total = 0;
            for (const auto& [l, c] : rising[z]) total += c;
            ++out.intervals_checked;
            const bool bad_count = total != 1;
            const bool bad_lex = !is_rising(best[z]);
            out.rising_violations += bad_count;
            out.lex_violations += bad_lex;
            if ((bad_count || bad_lex) && out.examples.size() < max_examples)
                out.examples.push_back("[" + L.element_string(z) + ", " + L.element_string(y) + "] rising=" + to_string(total));
        }
    }
    return out;
}

/// Falling maximal chains of the whole poset, bottom to top.
inline std::vector<std::vector<Poset::Index>> falling_chains(const ExtendedLabelling& L, std::size_t limit = 1000000) {
    using Index = Poset::Index;
    const auto& P = L.poset();
    const Index top = L.top();
    std::vector<std::vector<Index>> out;
    std::vector<Index> chain{L.bottom()};
    auto dfs = [&](auto&& self, Index x, const EdgeLabel* last) -> void {
        if (x == top) {
            if (out.size() >= limit) throw GuardError("max_falling_chains", limit, out.size() + 1);
            out.push_back(chain);
            return;
        }
        const auto& ups = P.upper_covers(x);
        const auto& lab = L.labels_from(x);
        for (std::size_t i = 0; i < ups.size(); ++i) {
            if (last && *last < lab[i]) continue;
            chain.push_back(ups[i]);
            self(self, ups[i], &lab[i]);
            chain.pop_back();
        }
    };
    dfs(dfs, L.bottom(), nullptr);
    std::sort(out.begin(), out.end());
    return out;
}

/// A_m^{r,j}: descent set {r, 2r, ..., nr} and sigma(m) = m, in lexicographic order.
inline std::vector<std::vector<unsigned>> descent_class_A(unsigned m, unsigned r, unsigned j) {
    if (r < 1 || j < 1 || m < j || (m - j) % r) throw Error("A_m^{r,j} requires m = rn + j");
    check_guard("max_enumeration_ground", 10, m);
    const unsigned n = (m - j) / r;
    std::vector<std::vector<unsigned>> out;
    std::vector<unsigned> p(m);
    std::iota(p.begin(), p.end(), 1U);
    do {
        if (p[m - 1] != m) continue;
        bool ok = true;
        for (unsigned i = 1; i < m && ok; ++i) {
            const bool descent = p[i - 1] > p[i];
            ok = descent == (i % r == 0 && i / r <= n);
        }
        if (ok) out.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

/// f_sigma from the atom up: the i-block partition splits sigma at r t_1, ..., r t_{i-1}.
/// Each partition is returned as its segments of sigma, in the order they appear in sigma.
inline std::vector<std::vector<std::vector<unsigned>>> f_sigma_segments(const std::vector<unsigned>& sigma, unsigned r, unsigned j) {
    require_permutation(sigma);
    const unsigned m = static_cast<unsigned>(sigma.size());
    if (r < 1 || j < 1 || m < j || (m - j) % r) throw Error("f_sigma requires m = rn + j");
    const unsigned n = (m - j) / r;
    std::vector<unsigned> t(n);
    std::iota(t.begin(), t.end(), 1U);
    std::sort(t.begin(), t.end(), [&](unsigned a, unsigned b) { return sigma[r * a - 1] > sigma[r * b - 1]; });
    std::vector<std::vector<std::vector<unsigned>>> chain;
    for (unsigned blocks = n + 1; blocks >= 1; --blocks) {
        std::vector<unsigned> cuts(t.begin(), t.begin() + (blocks - 1));
        std::sort(cuts.begin(), cuts.end());
        std::vector<std::vector<unsigned>> parts(1);
        for (unsigned i = 0; i < m; ++i) {
            parts.back().push_back(sigma[i]);
            if ((i + 1) % r == 0 && i + 1 < m && std::binary_search(cuts.begin(), cuts.end(), (i + 1) / r))
                parts.emplace_back();
        }
        chain.push_back(std::move(parts));
    }
    return chain;
}

/// "0 < 56|24|18|379 < 56|2418|379 < 562418|379 < 562418379".
inline std::string f_sigma_string(const std::vector<unsigned>& sigma, unsigned r, unsigned j) {
    std::string out = "0";
    for (const auto& parts : f_sigma_segments(sigma, r, j)) {
        out += " < ";
        for (std::size_t b = 0; b < parts.size(); ++b) {
            if (b) out += "|";
            for (unsigned e : parts[b]) out += (sigma.size() > 9 ? "," : "") + std::to_string(e);
        }
    }
    return out;
}

/// f_sigma as a chain of poset indices starting at the adjoined bottom.
inline std::vector<Poset::Index> f_sigma(const ExtendedLabelling& L, const std::vector<unsigned>& sigma) {
    std::vector<Poset::Index> chain{L.bottom()};
    for (const auto& parts : f_sigma_segments(sigma, L.r(), L.j())) {
        auto idx = L.lattice().find(SetPartition::from_blocks(L.m(), parts));
        if (!idx) throw Error("f_sigma leaves the lattice at " + SetPartition::from_blocks(L.m(), parts).to_string());
        chain.push_back(*idx);
    }
    return chain;
}

struct ElReport {
    unsigned m = 0, r = 0, j = 0, n = 0;
    std::size_t elements = 0;
    std::size_t atoms = 0;
    Integer atoms_expected = 0;
    std::size_t intervals_checked = 0;
    std::size_t rising_violations = 0;
    std::size_t lex_violations = 0;
    std::size_t falling_count = 0;
    Integer des_expected = 0;
    std::size_t f_sigma_count = 0;
    bool f_sigma_match = false;
    Integer mu = 0;
    std::vector<std::string> examples;

    bool passed() const {
        return atoms_expected == Integer(static_cast<unsigned long>(atoms)) && rising_violations == 0 && lex_violations == 0 &&
               Integer(static_cast<unsigned long>(falling_count)) == des_expected && f_sigma_match &&
               abs(mu) == Integer(static_cast<unsigned long>(falling_count));
    }
};

inline ElReport el_verify(unsigned m, unsigned r, unsigned j, const Guards& g = default_guards()) {
    const ExtendedLabelling L(m, r, j, g);
    ElReport rep;
    rep.m = m;
    rep.r = r;
    rep.j = j;
    rep.n = L.n();
    rep.elements = L.poset().size();
    rep.atoms = L.atoms().size();
    rep.atoms_expected = L.expected_atom_count();
    const auto census = rising_chain_census(L);
    rep.intervals_checked = census.intervals_checked;
    rep.rising_violations = census.rising_violations;
    rep.lex_violations = census.lex_violations;
    rep.examples = census.examples;
    const auto falling = falling_chains(L);
    rep.falling_count = falling.size();
    rep.des_expected = j >= 2 ? des_count(DescentWord::pattern(r, L.n(), j - 2)) : Integer(0);
    std::vector<std::vector<Poset::Index>> fs;
    for (const auto& sigma : descent_class_A(m, r, j)) fs.push_back(f_sigma(L, sigma));
    rep.f_sigma_count = fs.size();
    std::sort(fs.begin(), fs.end());
    rep.f_sigma_match = fs == falling;
    rep.mu = mobius_bottom_top(L.poset());
    return rep;
}

}  // namespace dowling
