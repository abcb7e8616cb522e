#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace dowling {

using Integer = mpz_class;
using Rational = mpq_class;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A size limit was exceeded. Carries the guard name and its limit so the
/// CLI can report them verbatim.
class GuardError : public Error {
public:
    GuardError(std::string name, long long limit, long long requested)
        : Error("guard '" + name + "' exceeded: limit " + std::to_string(limit) +
                ", requested " + std::to_string(requested)),
          name_(std::move(name)), limit_(limit), requested_(requested) {}

    const std::string& name() const noexcept { return name_; }
    long long limit() const noexcept { return limit_; }
    long long requested() const noexcept { return requested_; }

private:
    std::string name_;
    long long limit_;
    long long requested_;
};

inline void check_guard(const char* name, long long limit, long long requested) {
    if (requested > limit) throw GuardError(name, limit, requested);
}

inline Rational make_rational(const Integer& num, const Integer& den) {
    if (den == 0) throw Error("rational with zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline Rational make_rational(long num, long den = 1) {
    return make_rational(Integer(num), Integer(den));
}

inline Integer factorial(unsigned n) {
    Integer r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return r;
}

inline Integer binomial(long n, long k) {
    if (k < 0 || n < 0 || k > n) return 0;
    Integer r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return r;
}

inline Integer power(const Integer& base, unsigned e) {
    Integer r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline Rational power(const Rational& base, unsigned e) {
    Rational r = 1;
    for (unsigned i = 0; i < e; ++i) r *= base;
    return r;
}

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

inline std::string to_string(const Integer& z) { return z.get_str(); }

/// "a/b" for non-integers, "a" otherwise.
inline std::string to_string(const Rational& q) { return q.get_str(); }

inline Rational parse_rational(const std::string& text) {
    Rational q;
    if (q.set_str(text, 10) != 0) throw Error("not a rational number: '" + text + "'");
    if (q.get_den() == 0) throw Error("rational with zero denominator: '" + text + "'");
    q.canonicalize();
    return q;
}

inline std::int64_t to_int64(const Integer& z) {
    if (!z.fits_slong_p()) throw Error("integer does not fit in 64 bits: " + z.get_str());
    return z.get_si();
}

}  // namespace dowling
