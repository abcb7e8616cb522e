#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dowling/poset.hpp"
#include "dowling/rational.hpp"
#include "dowling/series.hpp"
#include "dowling/structures.hpp"

namespace dowling {

enum class Verdict { exact, up_to_sign, mismatch };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::exact: return "exact";
        case Verdict::up_to_sign: return "exact-up-to-global-sign";
        case Verdict::mismatch: return "mismatch";
    }
    return "?";
}

struct IdentityRow {
    unsigned n = 0;
    Rational brute;
    Rational closed;
    std::string tag;  // extra coordinate such as "t=3"; empty when unused
};

/// Brute values against closed-form values, with the global sign relating them.
struct IdentityReport {
    std::string name;
    std::vector<std::pair<std::string, std::string>> params;
    unsigned T = 0;
    std::vector<IdentityRow> rows;
    int expected_epsilon = 1;
    Verdict verdict = Verdict::mismatch;
    int epsilon = 0;  // 0 when no constant sign relates the two sides
    std::string note;

    IdentityReport() = default;
    IdentityReport(std::string n, int expected, unsigned order) : name(std::move(n)), T(order), expected_epsilon(expected) {}

    void param(std::string key, std::string value) { params.emplace_back(std::move(key), std::move(value)); }
    void add(unsigned n, Rational brute, Rational closed, std::string tag = {}) {
        rows.push_back({n, std::move(brute), std::move(closed), std::move(tag)});
    }

    /// Decides the verdict. Rows where both sides vanish carry no sign
    /// information; all other rows must agree on one factor in {+1, -1}.
    IdentityReport& finalize() {
        int sign = 0;
        bool ok = true;
        for (const auto& r : rows) {
            if (r.brute == r.closed && r.brute == 0) continue;
            int here = r.brute == r.closed ? 1 : (r.brute == -r.closed ? -1 : 0);
            if (here == 0 || (sign != 0 && here != sign)) {
                ok = false;
                break;
            }
            sign = here;
        }
        if (!ok) {
            verdict = Verdict::mismatch;
            epsilon = 0;
        } else {
            epsilon = sign == 0 ? 1 : sign;
            verdict = epsilon == 1 ? Verdict::exact : Verdict::up_to_sign;
        }
        return *this;
    }

    /// True when the verdict is not a mismatch and the sign is the documented one.
    bool passed() const { return verdict != Verdict::mismatch && epsilon == expected_epsilon; }
};

/// Sign relating brute values to the closed form as printed, per identity.
/// -1 marks closed forms stated without the leading minus that the Möbius
/// generating function carries, or with the sign exponent shifted by one.
inline int documented_epsilon(std::string_view identity) {
    static const std::map<std::string_view, int> table{
        {"type-census", 1},
        {"mobius-series-exponential", 1},
        {"mobius-series-dowling", 1},
        {"compositional-exponential", 1},
        {"compositional-dowling", 1},
        {"rank-polynomial-exponential", 1},
        {"rank-polynomial-dowling", 1},
        {"restricted-mobius", 1},
        {"restricted-m-expansion", 1},
        {"restricted-mobius-dowling", 1},
        {"semigroup-exponential", 1},
        {"semigroup-dowling", 1},
        {"semigroup-vanishing", 1},
        {"drk-product-form", -1},
        {"drk-mobius-series", 1},
        {"drk-binomial", -1},
        {"drk-order-independence", 1},
        {"drk-hyperbolic", -1},
        {"drk-hyperbolic-vs-product", 1},
        {"macmahon-multiplication", 1},
        {"eulerian-product", 1},
        {"descent-eulerian", 1},
        {"mobius-descents-extended", -1},
        {"mobius-zero-j1", 1},
        {"join-of-atoms", 1},
        {"mobius-descents-divisible", -1},
        {"alternating-divisible", -1},
        {"secant-extended", -1},
        {"el-rising-unique", 1},
        {"el-falling-census", 1},
        {"el-falling-mobius", 1},
        {"el-f-sigma", 1},
    };
    auto it = table.find(identity);
    if (it == table.end()) throw Error("no documented sign for identity '" + std::string(identity) + "'");
    return it->second;
}

inline IdentityReport make_report(const std::string& name, unsigned T) {
    return IdentityReport(name, documented_epsilon(name), T);
}

namespace detail {

inline Rational rpow(const Rational& b, unsigned e) { return power(b, e); }

/// Built Q_n for the exponential families (partition or r-divisible), n >= 1.
inline BuiltPoset build_Q(unsigned n, const FamilyDescriptor& f, const Guards& g) {
    if (f.kind == FamilyKind::partition) return build_partition_lattice(n, g);
    if (f.kind == FamilyKind::r_divisible) return build_r_divisible(f.r * n, f.r, g);
    throw Error("exponential family must be the partition or r-divisible family");
}

/// Built R_n for the Dowling families, without an adjoined bottom.
inline BuiltPoset build_R(unsigned n, const FamilyDescriptor& f, const Guards& g) {
    if (f.kind == FamilyKind::dowling) return build_dowling_lattice(n, f.s, g);
    if (f.kind == FamilyKind::dowling_rk) return build_D_rk(n, f.r, f.k, f.s, false, g);
    throw Error("Dowling family must be the Dowling or D^(r,k) family");
}

inline std::int64_t mobius_with_bottom(const Poset& p, bool has_bottom_already) {
    if (has_bottom_already) return mobius_bottom_top(p);
    return mobius_bottom_top(p.with_adjoined_bottom());
}

/// Sum of mu(0^, x) over all x, the adjoined bottom included.
inline Rational mobius_row_sum(const Poset& p) {
    const auto table = MobiusTable::from_base(p, *p.bottom());
    Rational sum = 0;
    for (Poset::Index x = 0; x < p.size(); ++x) sum += table.at(x);
    return sum;
}

/// sum_{n>=start} x^n / (D(n) n!), optionally with s^n weights.
inline TruncatedSeries normalized_ones(const DenominatorSequence& d, unsigned order, unsigned start = 0,
                                       const Rational& scale = 1) {
    std::vector<Rational> c(order + 1);
    Rational p = power(scale, start);
    for (unsigned n = start; n <= order; ++n) {
        c[n] = p / Rational(d(n) * factorial(n));
        p *= scale;
    }
    return TruncatedSeries(std::move(c));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Möbius generating functions

/// -ln( sum x^n / (M(n) n!) ); coefficient n (read with M) is mu(Q_n + 0^).
inline TruncatedSeries series_mu_exponential(const FamilyDescriptor& family, unsigned T) {
    const auto M = associated_denominator(family);
    return -log(detail::normalized_ones(M, T));
}

/// -( sum x^n/(N(n) n!) ) ( sum (s x)^n/(M(n) n!) )^(-1/s); coefficient n
/// (read with N) is mu(R_n + 0^).
inline TruncatedSeries series_mu_dowling(const FamilyDescriptor& family, unsigned T) {
    const auto M = associated_denominator(family);
    const auto N = family_denominator(family);
    const unsigned s = family.s;
    auto left = detail::normalized_ones(N, T);
    auto right = pow_rational(detail::normalized_ones(M, T, 0, Rational(s)), make_rational(-1, s));
    return -(left * right);
}

inline IdentityReport mobius_series_check_exponential(const FamilyDescriptor& family, unsigned nmax,
                                                      const Guards& g = default_guards()) {
    auto rep = make_report("mobius-series-exponential", nmax);
    rep.param("family", family.name());
    const auto series = series_mu_exponential(family, nmax);
    const auto M = associated_denominator(family);
    for (unsigned n = 1; n <= nmax; ++n) {
        const auto Q = detail::build_Q(n, family, g);
        rep.add(n, detail::mobius_with_bottom(Q.poset, Q.adjoined_bottom), coeff_den(series, n, M));
    }
    return rep.finalize();
}

inline IdentityReport mobius_series_check_dowling(const FamilyDescriptor& family, unsigned nmax,
                                                  const Guards& g = default_guards()) {
    auto rep = make_report("mobius-series-dowling", nmax);
    rep.param("family", family.name());
    const auto series = series_mu_dowling(family, nmax);
    const auto N = family_denominator(family);
    for (unsigned n = 0; n <= nmax; ++n) {
        const auto R = detail::build_R(n, family, g);
        rep.add(n, detail::mobius_with_bottom(R.poset, false), coeff_den(series, n, N));
    }
    return rep.finalize();
}

// ---------------------------------------------------------------------------
// Compositional formulas

/// Integer-valued test functions; f is indexed from 1 (f[0] unused).
struct CompositionalInputs {
    std::vector<Rational> f;
    std::vector<Rational> g;
    std::vector<Rational> k;
};

/// h(n) = sum over Q_n of prod f(i)^{a_i} g(a_1+...+a_n) against G(F(x)).
inline IdentityReport compositional_check_exponential(const CompositionalInputs& in, const FamilyDescriptor& family,
                                                      unsigned nmax, const Guards& g = default_guards()) {
    if (in.f.size() < nmax + 1 || in.g.size() < nmax + 1) throw Error("compositional check needs f, g up to n_max");
    if (in.g[0] != 1) throw Error("the exponential compositional formula requires g(0) = 1");
    auto rep = make_report("compositional-exponential", nmax);
    rep.param("family", family.name());
    const auto M = associated_denominator(family);
    std::vector<Rational> fc(nmax + 1);
    for (unsigned n = 1; n <= nmax; ++n) fc[n] = in.f[n] / Rational(M(n) * factorial(n));
    std::vector<Rational> gc(nmax + 1);
    for (unsigned n = 0; n <= nmax; ++n) gc[n] = in.g[n] / Rational(factorial(n));
    const auto H = compose(TruncatedSeries(gc), TruncatedSeries(fc));
    rep.add(0, 1, coeff_den(H, 0, M));
    for (unsigned n = 1; n <= nmax; ++n) {
        const auto Q = detail::build_Q(n, family, g);
        Rational h = 0;
        for (auto x : Q.elements()) {
            const auto t = structure_type(Q, x);
            Rational term = in.g[t.block_count()];
            for (unsigned i = 1; i <= t.a.size(); ++i) term *= detail::rpow(in.f[i], t.a[i - 1]);
            h += term;
        }
        rep.add(n, h, coeff_den(H, n, M));
    }
    return rep.finalize();
}

/// h(n) = sum over R_n of k(b) prod f(i)^{a_i} g(sum a_i) against K(x) G(F(s x)/s).
inline IdentityReport compositional_check_dowling(const CompositionalInputs& in, const FamilyDescriptor& family,
                                                  unsigned nmax, const Guards& g = default_guards()) {
    if (in.f.size() < nmax + 1 || in.g.size() < nmax + 1 || in.k.size() < nmax + 1)
        throw Error("compositional check needs f, g, k up to n_max");
    auto rep = make_report("compositional-dowling", nmax);
    rep.param("family", family.name());
    const auto M = associated_denominator(family);
    const auto N = family_denominator(family);
    const Rational s(family.s);
    // F(s x)/s = sum f(n) s^{n-1} x^n / (M(n) n!)
    std::vector<Rational> fc(nmax + 1);
    for (unsigned n = 1; n <= nmax; ++n) fc[n] = in.f[n] * power(s, n - 1) / Rational(M(n) * factorial(n));
    std::vector<Rational> gc(nmax + 1), kc(nmax + 1);
    for (unsigned n = 0; n <= nmax; ++n) {
        gc[n] = in.g[n] / Rational(factorial(n));
        kc[n] = in.k[n] / Rational(N(n) * factorial(n));
    }
    const auto H = TruncatedSeries(kc) * compose(TruncatedSeries(gc), TruncatedSeries(fc));
    for (unsigned n = 0; n <= nmax; ++n) {
        const auto R = detail::build_R(n, family, g);
        Rational h = 0;
        for (auto x : R.elements()) {
            const auto t = structure_type(R, x);
            Rational term = in.k[t.b] * in.g[t.block_count()];
            for (unsigned i = 1; i <= t.a.size(); ++i) term *= detail::rpow(in.f[i], t.a[i - 1]);
            h += term;
        }
        rep.add(n, h, coeff_den(H, n, N));
    }
    return rep.finalize();
}

// ---------------------------------------------------------------------------
// Rank polynomials

namespace detail {

inline Rational corank_polynomial(const BuiltPoset& bp, const Rational& t) {
    const auto top = bp.poset.top();
    if (!top) throw Error("rank polynomial needs a unique maximal element");
    const auto top_rank = bp.poset.rank(*top);
    if (!top_rank) throw Error("rank polynomial needs a graded poset");
    Rational sum = 0;
    for (auto x : bp.elements()) sum += power(t, *top_rank - *bp.poset.rank(x));
    return sum;
}

}  // namespace detail

/// V_n(t) over Q_n. The closed form exp(sum x^n/(M(n) n!))^t weights each
/// element by t^(number of blocks), which is t^(corank + 1); it is divided
/// by t before comparison.
inline IdentityReport rank_polynomial_check_exponential(const FamilyDescriptor& family,
                                                        const std::vector<Rational>& t_values, unsigned nmax,
                                                        const Guards& g = default_guards()) {
    if (t_values.size() <= nmax) throw Error("need more sample points than the polynomial degree");
    auto rep = make_report("rank-polynomial-exponential", nmax);
    rep.param("family", family.name());
    rep.note = "closed form divided by t: the exponent there counts blocks, one more than the corank";
    const auto M = associated_denominator(family);
    std::vector<BuiltPoset> Q;
    for (unsigned n = 1; n <= nmax; ++n) Q.push_back(detail::build_Q(n, family, g));
    for (const auto& t : t_values) {
        if (t == 0) throw Error("sample point t = 0 is not allowed here");
        const auto series = exp(detail::normalized_ones(M, nmax, 1) * t);
        for (unsigned n = 1; n <= nmax; ++n)
            rep.add(n, detail::corank_polynomial(Q[n - 1], t), coeff_den(series, n, M) / t, "t=" + to_string(t));
    }
    return rep.finalize();
}

/// W_n(t) over R_n against (sum x^n/(N(n) n!)) exp(sum (s x)^n/(M(n) n!))^(t/s).
inline IdentityReport rank_polynomial_check_dowling(const FamilyDescriptor& family,
                                                    const std::vector<Rational>& t_values, unsigned nmax,
                                                    const Guards& g = default_guards()) {
    if (t_values.size() <= nmax) throw Error("need more sample points than the polynomial degree");
    auto rep = make_report("rank-polynomial-dowling", nmax);
    rep.param("family", family.name());
    const auto M = associated_denominator(family);
    const auto N = family_denominator(family);
    const Rational s(family.s);
    std::vector<BuiltPoset> R;
    for (unsigned n = 0; n <= nmax; ++n) R.push_back(detail::build_R(n, family, g));
    for (const auto& t : t_values) {
        const auto inner = detail::normalized_ones(M, nmax, 1, s);
        const auto series = detail::normalized_ones(N, nmax) * exp(inner * (t / s));
        for (unsigned n = 0; n <= nmax; ++n)
            rep.add(n, detail::corank_polynomial(R[n], t), coeff_den(series, n, N), "t=" + to_string(t));
    }
    return rep.finalize();
}

// ---------------------------------------------------------------------------
// Restricted posets

/// Brute data of Q_n^I + 0^ for n = 1..nmax (index 0 unused).
struct RestrictedData {
    std::vector<Rational> mu;  // mu_I(n), 0 for n not in I
    std::vector<Rational> m;   // m_n = sum of mu(0^, x) over Q_n^I + 0^
    std::vector<std::size_t> size;  // |Q_n^I| without the adjoined bottom
};

inline RestrictedData restricted_partition_data(const IndexSet& I, unsigned nmax, const Guards& g = default_guards()) {
    RestrictedData d;
    d.mu.assign(nmax + 1, 0);
    d.m.assign(nmax + 1, 0);
    d.size.assign(nmax + 1, 0);
    for (unsigned n = 1; n <= nmax; ++n) {
        const auto Q = build_restricted(n, FamilyDescriptor::restricted_partition(I), g);
        d.size[n] = Q.size() - 1;
        d.m[n] = detail::mobius_row_sum(Q.poset);
        if (I.contains(n)) d.mu[n] = mobius_bottom_top(Q.poset);
    }
    return d;
}

/// Brute data of R_n^{I,J} + 0^ for n = 0..nmax.
struct RestrictedDowlingData {
    std::vector<Rational> mu;  // mu_{I,J}(n), 0 for n not in J
    std::vector<Rational> p;   // p_n
    std::vector<std::size_t> size;
};

inline RestrictedDowlingData restricted_dowling_data(const IndexSet& I, const IndexSet& J, unsigned s, unsigned nmax,
                                                     const Guards& g = default_guards()) {
    RestrictedDowlingData d;
    d.mu.assign(nmax + 1, 0);
    d.p.assign(nmax + 1, 0);
    d.size.assign(nmax + 1, 0);
    for (unsigned n = 0; n <= nmax; ++n) {
        const auto R = build_restricted(n, FamilyDescriptor::restricted_dowling(I, J, s), g);
        d.size[n] = R.size() - 1;
        d.p[n] = detail::mobius_row_sum(R.poset);
        if (J.contains(n)) d.mu[n] = mobius_bottom_top(R.poset);
    }
    return d;
}

namespace detail {

/// sum_{n>=0} (c x)^n/n! - sum_{n not in I, n >= 1} m_n (c x)^n/n!.
inline TruncatedSeries restricted_base(const IndexSet& I, const std::vector<Rational>& m, unsigned nmax,
                                       const Rational& c) {
    std::vector<Rational> v(nmax + 1);
    Rational p = 1;
    for (unsigned n = 0; n <= nmax; ++n) {
        Rational coeff = 1;
        if (n >= 1 && !I.contains(n)) coeff -= m[n];
        v[n] = coeff * p / Rational(factorial(n));
        p *= c;
    }
    return TruncatedSeries(std::move(v));
}

}  // namespace detail

/// sum_{i in I} mu_I(i) x^i/i! = -ln( sum x^n/n! - sum_{n not in I} m_n x^n/n! ), partition family.
inline IdentityReport restricted_mu_check(const IndexSet& I, unsigned nmax, const Guards& g = default_guards()) {
    if (nmax > I.window()) throw Error("n_max exceeds the window of I");
    auto rep = make_report("restricted-mobius", nmax);
    rep.param("I", I.to_string());
    rep.param("window", std::to_string(I.window()));
    const auto d = restricted_partition_data(I, nmax, g);
    const auto rhs = -log(detail::restricted_base(I, d.m, nmax, 1));
    for (unsigned n = 1; n <= nmax; ++n) rep.add(n, d.mu[n], coeff_den(rhs, n, DenominatorSequence::ones()));
    return rep.finalize();
}

/// m_n for n not in I against 1 - sum over I-types of (-1)^{sum a_i} (count of type) prod mu_I(i)^{a_i}.
inline IdentityReport restricted_m_expansion_check(const IndexSet& I, unsigned nmax, const Guards& g = default_guards()) {
    if (nmax > I.window()) throw Error("n_max exceeds the window of I");
    auto rep = make_report("restricted-m-expansion", nmax);
    rep.param("I", I.to_string());
    const auto d = restricted_partition_data(I, nmax, g);
    for (unsigned n = 1; n <= nmax; ++n) {
        if (I.contains(n)) continue;
        Rational closed = 1;
        for (const auto& t : all_types(n, false)) {
            bool allowed = true;
            for (unsigned i = 1; i <= n && allowed; ++i) allowed = t.count(i) == 0 || I.contains(i);
            if (!allowed) continue;
            Rational term = count_of_type(n, 1, t, FamilyDescriptor::partition());
            for (unsigned i = 1; i <= n; ++i) term *= power(d.mu[i], t.count(i));
            closed -= (t.block_count() % 2 ? -1 : 1) * term;
        }
        rep.add(n, d.m[n], closed);
    }
    return rep.finalize();
}

/// sum_{b in J} mu_{I,J}(b) x^b/b! against the quotient with p_n and m_n, Dowling family over Pi.
inline IdentityReport restricted_mu_dowling_check(const IndexSet& I, const IndexSet& J, unsigned s, unsigned nmax,
                                                  const Guards& g = default_guards()) {
    if (nmax > I.window() || nmax > J.window()) throw Error("n_max exceeds the window of I or J");
    if (s < 1) throw Error("group order s must be >= 1");
    auto rep = make_report("restricted-mobius-dowling", nmax);
    rep.param("I", I.to_string());
    rep.param("J", J.to_string());
    rep.param("s", std::to_string(s));
    const auto dq = restricted_partition_data(I, nmax, g);
    const auto dr = restricted_dowling_data(I, J, s, nmax, g);
    std::vector<Rational> num(nmax + 1);
    for (unsigned n = 0; n <= nmax; ++n) {
        Rational c = -1;
        if (!J.contains(n)) c += dr.p[n];
        num[n] = c / Rational(factorial(n));
    }
    const auto den = detail::restricted_base(I, dq.m, nmax, Rational(s));
    const auto rhs = TruncatedSeries(num) * pow_rational(den, make_rational(-1, s));
    for (unsigned n = 0; n <= nmax; ++n) rep.add(n, dr.mu[n], coeff_den(rhs, n, DenominatorSequence::ones()));
    return rep.finalize();
}

/// Checks I + I within I and I + J within J on the window; throws naming the first violation.
inline void check_semigroup_hypotheses(const IndexSet& I, const IndexSet& J) {
    const unsigned w = std::min(I.window(), J.window());
    for (unsigned a : I.members())
        for (unsigned b : I.members())
            if (a <= b && a + b <= w && !I.contains(a + b))
                throw Error("I is not closed under addition: " + std::to_string(a) + " + " + std::to_string(b) + " = " +
                            std::to_string(a + b) + " is not in I");
    for (unsigned a : I.members())
        for (unsigned b : J.members())
            if (a + b <= w && !J.contains(a + b))
                throw Error("I + J is not contained in J: " + std::to_string(a) + " + " + std::to_string(b) + " = " +
                            std::to_string(a + b) + " is not in J");
    for (unsigned a : I.members())
        if (a == 0) throw Error("I must consist of positive integers");
}

struct SemigroupReports {
    IdentityReport exponential;  // -ln( sum_{I+0} x^n/n! )
    IdentityReport dowling;      // -( sum_J x^n/n! ) ( sum_{I+0} (s x)^n/n! )^(-1/s)
    IdentityReport vanishing;    // m_n = 1 off I and p_n = 1 off J
};

inline SemigroupReports semigroup_check(const IndexSet& I, const IndexSet& J, unsigned s, unsigned nmax,
                                        const Guards& g = default_guards()) {
    check_semigroup_hypotheses(I, J);
    if (nmax > I.window() || nmax > J.window()) throw Error("n_max exceeds the window of I or J");
    const auto dq = restricted_partition_data(I, nmax, g);
    const auto dr = restricted_dowling_data(I, J, s, nmax, g);
    auto indicator = [&](const IndexSet& S, bool with_zero, const Rational& c) {
        std::vector<Rational> v(nmax + 1);
        for (unsigned n = 0; n <= nmax; ++n)
            if ((n == 0 && with_zero) || S.contains(n)) v[n] = power(c, n) / Rational(factorial(n));
        return TruncatedSeries(std::move(v));
    };
    const auto ones = DenominatorSequence::ones();

    SemigroupReports out{make_report("semigroup-exponential", nmax), make_report("semigroup-dowling", nmax),
                         make_report("semigroup-vanishing", nmax)};
    for (auto* r : {&out.exponential, &out.dowling, &out.vanishing}) {
        r->param("I", I.to_string());
        r->param("J", J.to_string());
        r->param("s", std::to_string(s));
    }
    const auto rhs14 = -log(indicator(I, true, 1));
    for (unsigned n = 1; n <= nmax; ++n) out.exponential.add(n, dq.mu[n], coeff_den(rhs14, n, ones));
    const auto rhs15 = -(indicator(J, false, 1) * pow_rational(indicator(I, true, Rational(s)), make_rational(-1, s)));
    for (unsigned n = 0; n <= nmax; ++n) out.dowling.add(n, dr.mu[n], coeff_den(rhs15, n, ones));
    for (unsigned n = 1; n <= nmax; ++n)
        if (!I.contains(n)) out.vanishing.add(n, dq.m[n], 1, "m");
    for (unsigned n = 0; n <= nmax; ++n)
        if (!J.contains(n)) out.vanishing.add(n, dr.p[n], 1, "p");
    out.exponential.finalize();
    out.dowling.finalize();
    out.vanishing.finalize();
    return out;
}

// ---------------------------------------------------------------------------
// D^(r,k)

/// mu(D_n^(r,k) + 0^) for all n with rn + k <= ground_max.
inline std::vector<Rational> drk_mobius_values(unsigned r, unsigned k, unsigned s, unsigned ground_max,
                                               const Guards& g = default_guards()) {
    std::vector<Rational> out;
    for (unsigned n = 0; r * n + k <= ground_max; ++n)
        out.emplace_back(mobius_bottom_top(build_D_rk(n, r, k, s, true, g).poset));
    return out;
}

/// ( sum x^{rn+k}/(rn+k)! ) ( sum (s x)^{rn}/(rn)! )^(-1/s).
inline TruncatedSeries drk_product_form(unsigned r, unsigned k, unsigned s, unsigned order) {
    const auto left = exponential_terms(order, k, r);
    const auto right = pow_rational(scale_argument(exponential_terms(order, 0, r), Rational(s)), make_rational(-1, s));
    return left * right;
}

/// For r = 2: (cosh or sinh minus its first terms) times sech(s x)^(1/s).
inline TruncatedSeries drk_hyperbolic_form(unsigned k, unsigned s, unsigned order) {
    const auto kind = k % 2 ? HyperbolicKind::sinh : HyperbolicKind::cosh;
    auto head = hyperbolic(kind, 1, order);
    for (unsigned i = k % 2; i < k; i += 2) head -= TruncatedSeries::monomial(Rational(1) / Rational(factorial(i)), i, order);
    return head * hyperbolic(HyperbolicKind::sech_pow, s, order);
}

struct DrkReports {
    IdentityReport product_form;  // brute against the product form
    IdentityReport family_series; // brute against the general Dowling Möbius series with N^(r,k)
    std::optional<IdentityReport> binomial;           // r = 1, k >= 1
    std::optional<IdentityReport> hyperbolic;         // r = 2
    std::optional<IdentityReport> hyperbolic_vs_product;  // r = 2, as series
};

inline DrkReports d_rk_series_check(unsigned r, unsigned k, unsigned s, unsigned ground_max,
                                    const Guards& g = default_guards()) {
    if (r < 1 || s < 1) throw Error("D^(r,k) check requires r >= 1 and s >= 1");
    if (ground_max < k) throw Error("ground_max must be at least k");
    const auto brute = drk_mobius_values(r, k, s, ground_max, g);
    const unsigned nmax = static_cast<unsigned>(brute.size()) - 1;
    auto tag = [&](IdentityReport& rep) {
        rep.param("r", std::to_string(r));
        rep.param("k", std::to_string(k));
        rep.param("s", std::to_string(s));
    };
    DrkReports out{make_report("drk-product-form", ground_max), make_report("drk-mobius-series", nmax), {}, {}, {}};
    tag(out.product_form);
    tag(out.family_series);
    const auto prod = drk_product_form(r, k, s, ground_max);
    const auto fam = FamilyDescriptor::dowling_rk(r, k, s);
    const auto series = series_mu_dowling(fam, nmax);
    const auto N = family_denominator(fam);
    for (unsigned n = 0; n <= nmax; ++n) {
        const unsigned m = r * n + k;
        out.product_form.add(n, brute[n], prod[m] * Rational(factorial(m)));
        out.family_series.add(n, brute[n], coeff_den(series, n, N));
    }
    out.product_form.finalize();
    out.family_series.finalize();
    if (r == 1 && k >= 1) {
        auto rep = make_report("drk-binomial", nmax);
        tag(rep);
        for (unsigned n = 0; n <= nmax; ++n)
            rep.add(n, brute[n], Rational((n % 2 ? -1 : 1) * binomial(n + k - 1, k - 1)));
        out.binomial = rep.finalize();
    }
    if (r == 2) {
        auto rep = make_report("drk-hyperbolic", ground_max);
        tag(rep);
        const auto hyp = drk_hyperbolic_form(k, s, ground_max);
        for (unsigned n = 0; n <= nmax; ++n) rep.add(n, brute[n], hyp[2 * n + k] * Rational(factorial(2 * n + k)));
        out.hyperbolic = rep.finalize();
        auto cmp = make_report("drk-hyperbolic-vs-product", ground_max);
        tag(cmp);
        for (unsigned e = 0; e <= ground_max; ++e) cmp.add(e, hyp[e], prod[e]);
        out.hyperbolic_vs_product = cmp.finalize();
    }
    return out;
}

/// mu(D_n^(1,k) + 0^) computed at s = s_values[0] against every other s.
inline IdentityReport drk_order_independence(unsigned k, unsigned nmax, const std::vector<unsigned>& s_values,
                                             const Guards& g = default_guards()) {
    if (s_values.size() < 2) throw Error("need at least two group orders");
    auto rep = make_report("drk-order-independence", nmax);
    rep.param("r", "1");
    rep.param("k", std::to_string(k));
    const auto base = drk_mobius_values(1, k, s_values[0], nmax + k, g);
    for (std::size_t i = 1; i < s_values.size(); ++i) {
        const auto other = drk_mobius_values(1, k, s_values[i], nmax + k, g);
        for (unsigned n = 0; n <= nmax; ++n)
            rep.add(n, other[n], base[n], "s=" + std::to_string(s_values[i]) + " vs s=" + std::to_string(s_values[0]));
    }
    return rep.finalize();
}

// ---------------------------------------------------------------------------
// Type census

/// Per-type counts of L_n (or of the given Dowling family) against the closed formula.
inline IdentityReport type_census_check(const FamilyDescriptor& family, unsigned n, const Guards& g = default_guards()) {
    auto rep = make_report("type-census", n);
    rep.param("family", family.name());
    rep.param("n", std::to_string(n));
    const bool dowling = family.has_zero_block();
    const BuiltPoset P = dowling ? detail::build_R(n, family, g) : detail::build_Q(n, family, g);
    std::map<StructureType, Integer> tally;
    for (auto x : P.elements()) tally[structure_type(P, x)] += 1;
    unsigned row = 0;
    Integer total = 0;
    for (const auto& t : all_types(n, dowling)) {
        const Integer expected = count_of_type(n, family.s, t, family);
        rep.add(row++, Rational(tally.count(t) ? tally[t] : Integer(0)), Rational(expected), t.to_string());
        total += expected;
    }
    rep.add(row, Rational(static_cast<unsigned long>(P.elements().size())), Rational(total), "total");
    return rep.finalize();
}

}  // namespace dowling
