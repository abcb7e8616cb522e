#pragma once

#include <algorithm>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dowling/rational.hpp"

namespace dowling {

/// Positive integer sequence D(n) used to normalize generalized exponential
/// generating functions  sum h(n) x^n / (D(n) n!).
class DenominatorSequence {
public:
    DenominatorSequence(std::string name, std::function<Integer(unsigned)> eval)
        : name_(std::move(name)), eval_(std::move(eval)) {}

    static DenominatorSequence ones() {
        return {"one", [](unsigned) { return Integer(1); }};
    }

    const std::string& name() const noexcept { return name_; }

    Integer operator()(unsigned n) const {
        Integer d = eval_(n);
        if (d <= 0) throw Error("denominator sequence '" + name_ + "' is not positive at n=" + std::to_string(n));
        return d;
    }

private:
    std::string name_;
    std::function<Integer(unsigned)> eval_;
};

/// Formal power series over the rationals, truncated after x^order.
///
/// Coefficients are stored plain: index n holds [x^n]. Binary operations on
/// series of different orders truncate to the smaller one.
class TruncatedSeries {
public:
    /// The zero series of the given order.
    explicit TruncatedSeries(unsigned order) : coeffs_(order + 1) {}

    explicit TruncatedSeries(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) {
        if (coeffs_.empty()) throw Error("series needs at least a constant term");
        for (auto& c : coeffs_) c.canonicalize();
    }

    static TruncatedSeries constant(const Rational& c, unsigned order) {
        TruncatedSeries s(order);
        s.coeffs_[0] = c;
        return s;
    }

    /// c * x^power, truncated (zero when power > order).
    static TruncatedSeries monomial(const Rational& c, unsigned power, unsigned order) {
        TruncatedSeries s(order);
        if (power <= order) s.coeffs_[power] = c;
        return s;
    }

    static TruncatedSeries x(unsigned order) { return monomial(1, 1, order); }

    unsigned order() const noexcept { return static_cast<unsigned>(coeffs_.size() - 1); }

    const Rational& operator[](unsigned n) const {
        if (n > order()) throw Error("coefficient x^" + std::to_string(n) + " is beyond truncation order " + std::to_string(order()));
        return coeffs_[n];
    }

    std::span<const Rational> coefficients() const noexcept { return coeffs_; }

    TruncatedSeries truncated(unsigned order) const {
        std::vector<Rational> c(coeffs_.begin(), coeffs_.begin() + std::min<std::size_t>(order + 1, coeffs_.size()));
        c.resize(order + 1);
        return TruncatedSeries(std::move(c));
    }

    TruncatedSeries& operator+=(const TruncatedSeries& o) {
        coeffs_.resize(std::min(coeffs_.size(), o.coeffs_.size()));
        for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
        return *this;
    }

    TruncatedSeries& operator-=(const TruncatedSeries& o) {
        coeffs_.resize(std::min(coeffs_.size(), o.coeffs_.size()));
        for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
        return *this;
    }

    TruncatedSeries& operator*=(const Rational& c) {
        for (auto& a : coeffs_) a *= c;
        return *this;
    }

    friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) { return a += b; }
    friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b) { return a -= b; }
    friend TruncatedSeries operator*(TruncatedSeries a, const Rational& c) { return a *= c; }
    friend TruncatedSeries operator*(const Rational& c, TruncatedSeries a) { return a *= c; }

    friend TruncatedSeries operator-(TruncatedSeries a) {
        for (auto& c : a.coeffs_) c = -c;
        return a;
    }

    friend TruncatedSeries operator*(const TruncatedSeries& f, const TruncatedSeries& g) {
        const unsigned t = std::min(f.order(), g.order());
        TruncatedSeries r(t);
        for (unsigned i = 0; i <= t; ++i) {
            if (f.coeffs_[i] == 0) continue;
            for (unsigned j = 0; i + j <= t; ++j) r.coeffs_[i + j] += f.coeffs_[i] * g.coeffs_[j];
        }
        return r;
    }

    friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b) {
        return a.coeffs_ == b.coeffs_;
    }

    /// Formal derivative; the order drops by one (stays 0 for constants).
    TruncatedSeries derivative() const {
        if (order() == 0) return TruncatedSeries(0);
        TruncatedSeries d(order() - 1);
        for (unsigned n = 1; n <= order(); ++n) d.coeffs_[n - 1] = coeffs_[n] * n;
        return d;
    }

    /// Antiderivative with zero constant term; the order grows by one.
    TruncatedSeries integral() const {
        TruncatedSeries s(order() + 1);
        for (unsigned n = 0; n <= order(); ++n) s.coeffs_[n + 1] = coeffs_[n] / Rational(n + 1);
        return s;
    }

private:
    std::vector<Rational> coeffs_;
};

inline TruncatedSeries multiply(const TruncatedSeries& f, const TruncatedSeries& g) { return f * g; }

/// sum h(n) x^n / (D(n) n!) for n = 0..order. The table must cover every n.
inline TruncatedSeries series_from_table(std::span<const Rational> h, const DenominatorSequence& d, unsigned order) {
    if (h.size() < order + 1)
        throw Error("series_from_table: h(" + std::to_string(h.size()) + ") missing for truncation order " + std::to_string(order));
    std::vector<Rational> c(order + 1);
    for (unsigned n = 0; n <= order; ++n) c[n] = h[n] / Rational(d(n) * factorial(n));
    return TruncatedSeries(std::move(c));
}

inline TruncatedSeries series_from_table(const std::function<Rational(unsigned)>& h, const DenominatorSequence& d,
                                         unsigned order) {
    std::vector<Rational> table(order + 1);
    for (unsigned n = 0; n <= order; ++n) table[n] = h(n);
    return series_from_table(table, d, order);
}

/// Reads h(n) back from a series of the form sum h(n) x^n / (D(n) n!).
inline Rational coeff_den(const TruncatedSeries& f, unsigned n, const DenominatorSequence& d) {
    if (n > f.order())
        throw Error("coeff_den: x^" + std::to_string(n) + " is beyond truncation order " + std::to_string(f.order()));
    return f[n] * Rational(d(n) * factorial(n));
}

/// g(f(x)) by Horner's scheme. Requires f(0) = 0.
inline TruncatedSeries compose(const TruncatedSeries& g, const TruncatedSeries& f) {
    if (f[0] != 0) throw Error("composition requires f(0)=0");
    const unsigned t = std::min(g.order(), f.order());
    const TruncatedSeries inner = f.truncated(t);
    TruncatedSeries r = TruncatedSeries::constant(g[t], t);
    for (unsigned i = t; i-- > 0;) {
        r = r * inner;
        r += TruncatedSeries::constant(g[i], t);
    }
    return r;
}

/// 1/f. Requires f(0) != 0.
inline TruncatedSeries reciprocal(const TruncatedSeries& f) {
    if (f[0] == 0) throw Error("reciprocal requires a nonzero constant term");
    const unsigned t = f.order();
    std::vector<Rational> r(t + 1);
    const Rational inv0 = 1 / f[0];
    r[0] = inv0;
    for (unsigned n = 1; n <= t; ++n) {
        Rational acc = 0;
        for (unsigned k = 1; k <= n; ++k) acc += f[k] * r[n - k];
        r[n] = -acc * inv0;
    }
    return TruncatedSeries(std::move(r));
}

inline TruncatedSeries divide(const TruncatedSeries& num, const TruncatedSeries& den) {
    return num * reciprocal(den);
}

/// Natural logarithm. Requires f(0) = 1.
inline TruncatedSeries log(const TruncatedSeries& f) {
    if (f[0] != 1) throw Error("log requires constant term 1, got " + to_string(f[0]));
    const unsigned t = f.order();
    // n g_n = n f_n - sum_{k=1}^{n-1} k g_k f_{n-k}
    std::vector<Rational> g(t + 1);
    for (unsigned n = 1; n <= t; ++n) {
        Rational acc = f[n] * n;
        for (unsigned k = 1; k < n; ++k) acc -= g[k] * f[n - k] * k;
        g[n] = acc / n;
    }
    return TruncatedSeries(std::move(g));
}

/// Exponential. Requires f(0) = 0.
inline TruncatedSeries exp(const TruncatedSeries& f) {
    if (f[0] != 0) throw Error("exp requires constant term 0, got " + to_string(f[0]));
    const unsigned t = f.order();
    // n h_n = sum_{k=1}^{n} k f_k h_{n-k}
    std::vector<Rational> h(t + 1);
    h[0] = 1;
    for (unsigned n = 1; n <= t; ++n) {
        Rational acc = 0;
        for (unsigned k = 1; k <= n; ++k) acc += f[k] * h[n - k] * k;
        h[n] = acc / n;
    }
    return TruncatedSeries(std::move(h));
}

/// f^q as exp(q log f). Requires f(0) = 1.
inline TruncatedSeries pow_rational(const TruncatedSeries& f, const Rational& q) {
    if (f[0] != 1) throw Error("pow_rational requires constant term 1, got " + to_string(f[0]));
    return exp(log(f) * q);
}

/// f(c x).
inline TruncatedSeries scale_argument(const TruncatedSeries& f, const Rational& c) {
    std::vector<Rational> r(f.order() + 1);
    Rational p = 1;
    for (unsigned n = 0; n <= f.order(); ++n) {
        r[n] = f[n] * p;
        p *= c;
    }
    return TruncatedSeries(std::move(r));
}

/// sum_{n in residue class} x^n / n!, i.e. the terms of e^x with n >= start and n = start (mod step).
inline TruncatedSeries exponential_terms(unsigned order, unsigned start = 0, unsigned step = 1) {
    std::vector<Rational> c(order + 1);
    for (unsigned n = start; n <= order; n += step) c[n] = Rational(1) / Rational(factorial(n));
    return TruncatedSeries(std::move(c));
}

inline TruncatedSeries exp_series(unsigned order) { return exponential_terms(order); }

enum class HyperbolicKind { sinh, cosh, sech_pow };

/// sinh(x), cosh(x) or sech(s x)^(1/s).
inline TruncatedSeries hyperbolic(HyperbolicKind kind, unsigned s, unsigned order) {
    switch (kind) {
        case HyperbolicKind::sinh:
            return exponential_terms(order, 1, 2);
        case HyperbolicKind::cosh:
            return exponential_terms(order, 0, 2);
        case HyperbolicKind::sech_pow:
            if (s < 1) throw Error("sech_pow requires s >= 1");
            return pow_rational(scale_argument(exponential_terms(order, 0, 2), Rational(s)), make_rational(-1, s));
    }
    throw Error("unknown hyperbolic kind");
}

inline std::string to_string(const TruncatedSeries& f) {
    std::string out;
    for (unsigned n = 0; n <= f.order(); ++n) {
        if (n) out += ", ";
        out += to_string(f[n]);
    }
    return out;
}

}  // namespace dowling
