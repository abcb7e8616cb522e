#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "dowling/identities.hpp"
#include "dowling/poset.hpp"
#include "dowling/rational.hpp"
#include "dowling/series.hpp"
#include "dowling/structures.hpp"

namespace dowling {

/// Word over {a, b}; letter i is 'a' when sigma_i < sigma_{i+1}.
class DescentWord {
public:
    DescentWord() = default;

    /// Accepts letters a/b; "" and "e" denote the empty word.
    static DescentWord parse(const std::string& text) {
        DescentWord w;
        if (text == "e") return w;
        for (char c : text) {
            if (c != 'a' && c != 'b') throw Error("descent word may only contain 'a' and 'b': '" + text + "'");
            w.letters_ += c;
        }
        return w;
    }

    static DescentWord repeat(char letter, unsigned count) {
        if (letter != 'a' && letter != 'b') throw Error("bad letter");
        DescentWord w;
        w.letters_.assign(count, letter);
        return w;
    }

    /// (a^{r-1} b)^n a^tail.
    static DescentWord pattern(unsigned r, unsigned n, unsigned tail) {
        if (r < 1) throw Error("pattern requires r >= 1");
        DescentWord w;
        for (unsigned i = 0; i < n; ++i) {
            w.letters_.append(r - 1, 'a');
            w.letters_ += 'b';
        }
        w.letters_.append(tail, 'a');
        return w;
    }

    unsigned degree() const noexcept { return static_cast<unsigned>(letters_.size()); }
    /// Size of the permutations it describes.
    unsigned size() const noexcept { return degree() + 1; }
    char operator[](std::size_t i) const { return letters_.at(i); }
    const std::string& letters() const noexcept { return letters_; }

    /// 1-based positions holding b.
    std::vector<unsigned> descent_positions() const {
        std::vector<unsigned> d;
        for (std::size_t i = 0; i < letters_.size(); ++i)
            if (letters_[i] == 'b') d.push_back(static_cast<unsigned>(i + 1));
        return d;
    }

    DescentWord reverse_complement() const {
        DescentWord w;
        for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) w.letters_ += *it == 'a' ? 'b' : 'a';
        return w;
    }

    friend DescentWord operator+(DescentWord u, const DescentWord& v) {
        u.letters_ += v.letters_;
        return u;
    }
    friend DescentWord operator+(DescentWord u, char c) {
        u.letters_ += c;
        return u;
    }

    friend bool operator==(const DescentWord&, const DescentWord&) = default;
    friend auto operator<=>(const DescentWord&, const DescentWord&) = default;

    std::string to_string() const { return letters_.empty() ? "e" : letters_; }

    /// All words of the given degree in lexicographic order.
    static std::vector<DescentWord> all(unsigned degree) {
        std::vector<DescentWord> out;
        for (unsigned mask = 0; mask < (1U << degree); ++mask) {
            DescentWord w;
            for (unsigned i = 0; i < degree; ++i) w.letters_ += (mask >> (degree - 1 - i)) & 1 ? 'b' : 'a';
            out.push_back(std::move(w));
        }
        return out;
    }

private:
    std::string letters_;
};

/// Polynomial in q with integer coefficients, dense by power.
class QPolynomial {
public:
    QPolynomial() : c_{0} {}
    explicit QPolynomial(std::vector<std::int64_t> coeffs) : c_(std::move(coeffs)) {
        if (c_.empty()) c_.push_back(0);
        trim();
    }

    static QPolynomial one() { return QPolynomial({1}); }
    static QPolynomial monomial(unsigned power) {
        std::vector<std::int64_t> c(power + 1, 0);
        c[power] = 1;
        return QPolynomial(std::move(c));
    }

    unsigned degree() const { return static_cast<unsigned>(c_.size() - 1); }
    std::int64_t operator[](std::size_t i) const { return i < c_.size() ? c_[i] : 0; }
    const std::vector<std::int64_t>& coefficients() const noexcept { return c_; }

    QPolynomial& operator+=(const QPolynomial& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0);
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
        trim();
        return *this;
    }
    QPolynomial& operator-=(const QPolynomial& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0);
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
        trim();
        return *this;
    }
    friend QPolynomial operator+(QPolynomial a, const QPolynomial& b) { return a += b; }
    friend QPolynomial operator-(QPolynomial a, const QPolynomial& b) { return a -= b; }
    friend QPolynomial operator*(const QPolynomial& a, const QPolynomial& b) {
        std::vector<std::int64_t> r(a.c_.size() + b.c_.size() - 1, 0);
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            if (a.c_[i])
                for (std::size_t j = 0; j < b.c_.size(); ++j) {
                    std::int64_t prod;
                    if (__builtin_mul_overflow(a.c_[i], b.c_[j], &prod) || __builtin_add_overflow(r[i + j], prod, &r[i + j]))
                        throw Error("q-polynomial coefficient overflow");
                }
        return QPolynomial(std::move(r));
    }
    friend bool operator==(const QPolynomial&, const QPolynomial&) = default;

    Rational eval(const Rational& q) const {
        Rational acc = 0;
        for (std::size_t i = c_.size(); i-- > 0;) acc = acc * q + Rational(static_cast<long>(c_[i]));
        return acc;
    }

    Integer at_one() const {
        Integer s = 0;
        for (auto v : c_) s += static_cast<long>(v);
        return s;
    }

    /// "q + 2q^2 + q^3 + q^4".
    std::string to_string() const {
        std::string out;
        for (std::size_t i = 0; i < c_.size(); ++i) {
            const auto v = c_[i];
            if (v == 0) continue;
            std::string mag = std::to_string(v < 0 ? -v : v);
            std::string term;
            if (i == 0)
                term = mag;
            else
                term = (mag == "1" ? "" : mag) + "q" + (i > 1 ? "^" + std::to_string(i) : "");
            if (out.empty())
                out = (v < 0 ? "-" : "") + term;
            else
                out += (v < 0 ? " - " : " + ") + term;
        }
        return out.empty() ? "0" : out;
    }

private:
    void trim() {
        while (c_.size() > 1 && c_.back() == 0) c_.pop_back();
    }
    std::vector<std::int64_t> c_;
};

// ---------------------------------------------------------------------------
// Permutations

inline void require_permutation(const std::vector<unsigned>& sigma) {
    std::vector<bool> seen(sigma.size() + 1, false);
    for (unsigned v : sigma) {
        if (v < 1 || v > sigma.size() || seen[v]) throw Error("not a permutation of 1..n");
        seen[v] = true;
    }
}

inline DescentWord descent_word(const std::vector<unsigned>& sigma) {
    require_permutation(sigma);
    std::string s;
    for (std::size_t i = 0; i + 1 < sigma.size(); ++i) s += sigma[i] < sigma[i + 1] ? 'a' : 'b';
    return DescentWord::parse(s.empty() ? "e" : s);
}

inline unsigned inversions(const std::vector<unsigned>& sigma) {
    require_permutation(sigma);
    unsigned c = 0;
    for (std::size_t i = 0; i < sigma.size(); ++i)
        for (std::size_t j = i + 1; j < sigma.size(); ++j) c += sigma[i] > sigma[j];
    return c;
}

/// Parses "562418379" (single digits) or "5,6,2,...".
inline std::vector<unsigned> parse_permutation(const std::string& text) {
    std::vector<unsigned> out;
    std::string cur;
    const bool commas = text.find(',') != std::string::npos;
    for (char c : text) {
        if (c >= '0' && c <= '9') {
            if (commas)
                cur += c;
            else
                out.push_back(static_cast<unsigned>(c - '0'));
        } else if (c == ',') {
            if (!cur.empty()) out.push_back(static_cast<unsigned>(std::stoul(cur)));
            cur.clear();
        } else if (c != ' ') {
            throw Error("bad permutation '" + text + "'");
        }
    }
    if (!cur.empty()) out.push_back(static_cast<unsigned>(std::stoul(cur)));
    require_permutation(out);
    return out;
}

inline std::string permutation_string(const std::vector<unsigned>& sigma) {
    std::string s;
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        if (i && sigma.size() > 9) s += ',';
        s += std::to_string(sigma[i]);
    }
    return s;
}

// ---------------------------------------------------------------------------
// q-analogues

/// Gaussian coefficient [n choose k]_q by q-Pascal.
inline QPolynomial gaussian(unsigned n, unsigned k) {
    if (k > n) throw Error("gaussian(n, k) requires 0 <= k <= n");
    check_guard("max_gaussian_n", 40, n);
    // row[j] = [i choose j]
    std::vector<QPolynomial> row{QPolynomial::one()};
    for (unsigned i = 1; i <= n; ++i) {
        std::vector<QPolynomial> next(i + 1);
        next[0] = QPolynomial::one();
        next[i] = QPolynomial::one();
        for (unsigned j = 1; j < i; ++j) next[j] = row[j - 1] + QPolynomial::monomial(j) * row[j];
        row = std::move(next);
    }
    return row[k];
}

/// q-multinomial [n; parts]_q with sum(parts) = n.
inline QPolynomial q_multinomial(const std::vector<unsigned>& parts) {
    QPolynomial r = QPolynomial::one();
    unsigned total = 0;
    for (unsigned p : parts) {
        total += p;
        r = r * gaussian(total, p);
    }
    return r;
}

/// [n]_q = 1 + q + ... + q^{n-1} evaluated at q.
inline Rational q_integer(unsigned n, const Rational& q) {
    Rational s = 0, p = 1;
    for (unsigned i = 0; i < n; ++i) {
        s += p;
        p *= q;
    }
    return s;
}

inline Rational q_factorial(unsigned n, const Rational& q) {
    Rational f = 1;
    for (unsigned i = 1; i <= n; ++i) {
        const Rational v = q_integer(i, q);
        if (v == 0) throw Error("q-factorial [" + std::to_string(n) + "]! vanishes at q = " + to_string(q));
        f *= v;
    }
    return f;
}

/// Des_q[u] by running through all permutations of size deg(u) + 1.
inline QPolynomial des_q_enumerate(const DescentWord& u) {
    check_guard("max_enumeration_degree", 10, u.degree());
    const unsigned n = u.size();
    std::vector<unsigned> p(n);
    std::iota(p.begin(), p.end(), 1U);
    std::vector<std::int64_t> c(n * (n - 1) / 2 + 1, 0);
    const auto& w = u.letters();
    do {
        bool ok = true;
        for (unsigned i = 0; i + 1 < n && ok; ++i) ok = (p[i] < p[i + 1]) == (w[i] == 'a');
        if (!ok) continue;
        unsigned inv = 0;
        for (unsigned i = 0; i < n; ++i)
            for (unsigned j = i + 1; j < n; ++j) inv += p[i] > p[j];
        ++c[inv];
    } while (std::next_permutation(p.begin(), p.end()));
    return QPolynomial(std::move(c));
}

/// Des_q[u] by inclusion-exclusion: descent set contained in T is counted by
/// the q-multinomial of the run lengths of T.
inline QPolynomial des_q_inclusion_exclusion(const DescentWord& u) {
    check_guard("max_descent_degree", 20, u.degree());
    const auto D = u.descent_positions();
    const unsigned n = u.size();
    QPolynomial total;
    for (unsigned mask = 0; mask < (1U << D.size()); ++mask) {
        std::vector<unsigned> parts;
        unsigned prev = 0, kept = 0;
        for (std::size_t i = 0; i < D.size(); ++i)
            if (mask & (1U << i)) {
                parts.push_back(D[i] - prev);
                prev = D[i];
                ++kept;
            }
        parts.push_back(n - prev);
        const auto term = q_multinomial(parts);
        if ((D.size() - kept) % 2)
            total -= term;
        else
            total += term;
    }
    return total;
}

inline QPolynomial des_q(const DescentWord& u) {
    return u.degree() <= 7 ? des_q_enumerate(u) : des_q_inclusion_exclusion(u);
}

inline Integer des_count(const DescentWord& u) { return des_q(u).at_one(); }

/// Number of up-down permutations of size i.
inline Integer euler_number(unsigned i) {
    check_guard("max_euler_index", 11, i);
    if (i <= 9) {
        // a b a b ... is up-down: every odd position ascends
        std::string w;
        for (unsigned j = 0; j + 1 < i; ++j) w += j % 2 ? 'b' : 'a';
        return des_q_enumerate(DescentWord::parse(w.empty() ? "e" : w)).at_one();
    }
    // boustrophedon (Seidel) triangle
    std::vector<Integer> row{1};
    for (unsigned n = 1; n <= i; ++n) {
        std::vector<Integer> next(n + 1);
        next[0] = 0;
        for (unsigned k = 1; k <= n; ++k) next[k] = next[k - 1] + row[n - k];
        row = std::move(next);
    }
    return row.back();
}

// ---------------------------------------------------------------------------
// Identities on descent statistics

/// [n+m choose n] Des_q[u] Des_q[v] = Des_q[u a v] + Des_q[u b v].
inline bool multiplication_check(const DescentWord& u, const DescentWord& v) {
    check_guard("max_multiplication_size", 10, u.size() + v.size());
    const auto lhs = gaussian(u.size() + v.size(), u.size()) * des_q(u) * des_q(v);
    return lhs == des_q(u + 'a' + v) + des_q(u + 'b' + v);
}

/// Coefficientwise comparison of the multiplication identity for all word
/// pairs with n + m <= max_total.
inline IdentityReport multiplication_report(unsigned max_total) {
    auto rep = make_report("macmahon-multiplication", max_total);
    rep.param("max_total", std::to_string(max_total));
    for (unsigned n = 1; n < max_total; ++n)
        for (unsigned m = 1; n + m <= max_total; ++m)
            for (const auto& u : DescentWord::all(n - 1))
                for (const auto& v : DescentWord::all(m - 1)) {
                    const auto lhs = gaussian(n + m, n) * des_q(u) * des_q(v);
                    const auto rhs = des_q(u + 'a' + v) + des_q(u + 'b' + v);
                    const unsigned deg = std::max(lhs.degree(), rhs.degree());
                    for (unsigned j = 0; j <= deg; ++j)
                        rep.add(j, Rational(static_cast<long>(lhs[j])), Rational(static_cast<long>(rhs[j])),
                                u.to_string() + "|" + v.to_string());
                }
    return rep.finalize();
}

/// Product of two Eulerian generating functions against the merged sum, for
/// u_n = a^{n-1}, v_n = b^{n-1}, with weights c_n = n and d_n = (-1)^n.
inline IdentityReport eulerian_product_report(const std::vector<Rational>& q_values, unsigned T) {
    auto rep = make_report("eulerian-product", T);
    auto c = [](unsigned n) { return Rational(n); };
    auto d = [](unsigned n) { return Rational(n % 2 ? -1 : 1); };
    for (const auto& q : q_values) {
        std::vector<Rational> left(T + 1), right(T + 1);
        for (unsigned n = 1; n <= T; ++n) {
            const Rational qf = q_factorial(n, q);
            left[n] = c(n) * des_q(DescentWord::repeat('a', n - 1)).eval(q) / qf;
            right[n] = d(n) * des_q(DescentWord::repeat('b', n - 1)).eval(q) / qf;
        }
        const auto product = TruncatedSeries(left) * TruncatedSeries(right);
        for (unsigned n = 2; n <= T; ++n) {
            Rational sum = 0;
            for (unsigned i = 1; i < n; ++i) {
                const auto u = DescentWord::repeat('a', i - 1);
                const auto v = DescentWord::repeat('b', n - i - 1);
                sum += c(i) * d(n - i) * (des_q(u + 'a' + v) + des_q(u + 'b' + v)).eval(q);
            }
            rep.add(n, product[n] * q_factorial(n, q), sum, "q=" + to_string(q));
        }
    }
    return rep.finalize();
}

/// sum (-1)^n Des_q[(a^{r-1}b)^n w] x^{rn+k}/[rn+k]! against
/// (sum Des_q[a^{rn} w] x^{rn+k}/[rn+k]!) / (sum x^{rn}/[rn]!), at a fixed q.
inline IdentityReport divisible_word_series_check(unsigned r, const DescentWord& w, const Rational& q, unsigned T) {
    if (r < 1) throw Error("r must be >= 1");
    const unsigned k = w.size();
    check_guard("max_eulerian_order", 12, T);
    auto rep = make_report("descent-eulerian", T);
    rep.param("r", std::to_string(r));
    rep.param("w", w.to_string());
    rep.param("q", to_string(q));
    std::vector<Rational> lhs(T + 1), num(T + 1), den(T + 1);
    for (unsigned n = 0; r * n + k <= T; ++n) {
        const unsigned e = r * n + k;
        const Rational qf = q_factorial(e, q);
        lhs[e] = Rational(n % 2 ? -1 : 1) * des_q(DescentWord::pattern(r, n, 0) + w).eval(q) / qf;
        num[e] = des_q(DescentWord::repeat('a', r * n) + w).eval(q) / qf;
    }
    for (unsigned n = 0; r * n <= T; ++n) den[r * n] = Rational(1) / q_factorial(r * n, q);
    const auto rhs = divide(TruncatedSeries(num), TruncatedSeries(den));
    for (unsigned e = 0; e <= T; ++e) {
        const Rational qf = q_factorial(e, q);
        rep.add(e, lhs[e] * qf, rhs[e] * qf);
    }
    return rep.finalize();
}

// ---------------------------------------------------------------------------
// Möbius values of the extended and divisible partition lattices

/// mu(Pi_m^{r,k+1}) with m = rn + k + 1 against (-1)^n Des[(a^{r-1}b)^n a^{k-1}], n = 0..nmax.
inline IdentityReport mu_descent_check(unsigned r, unsigned k, unsigned nmax, const Guards& g = default_guards()) {
    if (r < 1 || k < 1) throw Error("r and k must be positive");
    auto rep = make_report("mobius-descents-extended", nmax);
    rep.param("r", std::to_string(r));
    rep.param("k", std::to_string(k));
    for (unsigned n = 0; n <= nmax; ++n) {
        const unsigned m = r * n + k + 1;
        const auto P = build_extended(m, r, k + 1, g);
        const Integer des = des_count(DescentWord::pattern(r, n, k - 1));
        rep.add(n, mobius_bottom_top(P.poset), Rational(n % 2 ? Integer(-des) : des), "m=" + std::to_string(m));
    }
    return rep.finalize();
}

/// mu(Pi_{rn+1}^{r,1}) = 0 for n = 1..nmax.
inline IdentityReport mu_zero_check(unsigned r, unsigned nmax, const Guards& g = default_guards()) {
    auto rep = make_report("mobius-zero-j1", nmax);
    rep.param("r", std::to_string(r));
    for (unsigned n = 1; n <= nmax; ++n) {
        const auto P = build_extended(r * n + 1, r, 1, g);
        rep.add(n, mobius_bottom_top(P.poset), 0, "m=" + std::to_string(r * n + 1));
    }
    return rep.finalize();
}

/// The join of the atoms of Pi_{rn+1}^{r,1} keeps m in a singleton block and
/// so is not the top. Rows hold 1 when both facts hold.
inline IdentityReport join_of_atoms_check(unsigned r, unsigned nmax, const Guards& g = default_guards()) {
    auto rep = make_report("join-of-atoms", nmax);
    rep.param("r", std::to_string(r));
    for (unsigned n = 1; n <= nmax; ++n) {
        const unsigned m = r * n + 1;
        const auto P = build_extended(m, r, 1, g);
        const auto& poset = P.poset;
        BitRow common(poset.size());
        bool first = true;
        for (auto a : poset.upper_covers(*poset.bottom())) {
            if (first) {
                common = poset.up_set(a);
                first = false;
            } else {
                common &= poset.up_set(a);
            }
        }
        std::optional<Poset::Index> join;
        common.for_each([&](Poset::Index z) {
            bool minimal = true;
            for (auto w : poset.lower_covers(z)) minimal = minimal && !common.test(w);
            if (minimal) join = z;
        });
        bool holds = false;
        if (join && *join != *poset.top()) {
            for (const auto& b : P.partition(*join).blocks)
                if (b.size() == 1 && b[0] == m) holds = true;
        }
        rep.add(n, holds ? 1 : 0, 1, "m=" + std::to_string(m));
    }
    return rep.finalize();
}

/// mu(Pi_{rn}^r) against (-1)^{n-1} Des[(a^{r-1}b)^{n-1} a^{r-2}], n = 1..nmax, r >= 2.
inline IdentityReport mu_divisible_check(unsigned r, unsigned nmax, const Guards& g = default_guards()) {
    if (r < 2) throw Error("the divisible lattice check needs r >= 2");
    auto rep = make_report("mobius-descents-divisible", nmax);
    rep.param("r", std::to_string(r));
    for (unsigned n = 1; n <= nmax; ++n) {
        const auto P = build_r_divisible(r * n, r, g);
        const Integer des = des_count(DescentWord::pattern(r, n - 1, r - 2));
        rep.add(n, mobius_bottom_top(P.poset), Rational(n % 2 ? des : Integer(-des)), "m=" + std::to_string(r * n));
    }
    return rep.finalize();
}

/// mu(Pi_{2n}^2) against (-1)^{n-1} E_{2n-1}.
inline IdentityReport alternating_divisible_check(unsigned nmax, const Guards& g = default_guards()) {
    auto rep = make_report("alternating-divisible", nmax);
    for (unsigned n = 1; n <= nmax; ++n) {
        const auto P = build_r_divisible(2 * n, 2, g);
        const Integer e = euler_number(2 * n - 1);
        rep.add(n, mobius_bottom_top(P.poset), Rational(n % 2 ? e : Integer(-e)), "m=" + std::to_string(2 * n));
    }
    return rep.finalize();
}

/// Odd blocks of size >= 3 around m, even blocks elsewhere: mu(Pi_{2n+1}^{2,3})
/// against (-1)^{n-1} E_{2n}, n = 1..nmax.
inline IdentityReport secant_check(unsigned nmax, const Guards& g = default_guards()) {
    auto rep = make_report("secant-extended", nmax);
    for (unsigned n = 1; n <= nmax; ++n) {
        const auto P = build_extended(2 * n + 1, 2, 3, g);
        const Integer e = euler_number(2 * n);
        rep.add(n, mobius_bottom_top(P.poset), Rational(n % 2 ? e : Integer(-e)), "m=" + std::to_string(2 * n + 1));
    }
    return rep.finalize();
}

}  // namespace dowling
