#include <gtest/gtest.h>

#include "dowling/series.hpp"
#include "oracles.hpp"

using namespace dowling;

TEST(Series, ExpLogRoundTrip) {
    const auto e = exp_series(10);
    const auto l = log(e);
    for (unsigned n = 0; n <= 10; ++n) EXPECT_EQ(l[n], n == 1 ? Rational(1) : Rational(0));
    EXPECT_EQ(exp(l), e);
}

TEST(Series, LogOfOnePlusX) {
    auto f = TruncatedSeries::constant(1, 8) + TruncatedSeries::x(8);
    auto g = log(f);
    for (unsigned n = 1; n <= 8; ++n) EXPECT_EQ(g[n], make_rational(n % 2 ? 1 : -1, n));
}

TEST(Series, ReciprocalAndDivide) {
    auto f = TruncatedSeries::constant(1, 6) - TruncatedSeries::x(6);
    auto r = reciprocal(f);
    for (unsigned n = 0; n <= 6; ++n) EXPECT_EQ(r[n], 1);
    EXPECT_EQ(divide(f, f), TruncatedSeries::constant(1, 6));
    EXPECT_THROW(reciprocal(TruncatedSeries::x(3)), Error);
}

TEST(Series, PowRationalSquareRoot) {
    auto f = TruncatedSeries::constant(1, 7) + TruncatedSeries::x(7);
    auto h = pow_rational(f, make_rational(1, 2));
    EXPECT_EQ(h * h, f);
    EXPECT_THROW(pow_rational(TruncatedSeries::x(3), 2), Error);
}

TEST(Series, ComposeExpMinusOne) {
    // log(1 + (e^x - 1)) = x
    auto em1 = exp_series(9) - TruncatedSeries::constant(1, 9);
    std::vector<Rational> lc(10);
    for (unsigned n = 1; n <= 9; ++n) lc[n] = make_rational(n % 2 ? 1 : -1, n);
    auto composed = compose(TruncatedSeries(lc), em1);
    EXPECT_EQ(composed, TruncatedSeries::x(9));
    EXPECT_THROW(compose(TruncatedSeries(lc), exp_series(9)), Error);
}

TEST(Series, TableNormalizationRoundTrip) {
    DenominatorSequence d("twice", [](unsigned n) { return Integer(n + 1); });
    std::vector<Rational> h{3, -1, make_rational(2, 7), 5, 0};
    auto f = series_from_table(h, d, 4);
    for (unsigned n = 0; n <= 4; ++n) EXPECT_EQ(coeff_den(f, n, d), h[n]);
    EXPECT_THROW(series_from_table(std::span<const Rational>(h.data(), 3), d, 4), Error);
    EXPECT_THROW(coeff_den(f, 5, d), Error);
}

TEST(Series, BellNumbersFromExpOfExp) {
    // exp(e^x - 1) = sum B_n x^n / n!
    auto f = exp(exp_series(12) - TruncatedSeries::constant(1, 12));
    auto bell = oracle::bell_numbers(12);
    for (unsigned n = 0; n <= 12; ++n) EXPECT_EQ(coeff_den(f, n, DenominatorSequence::ones()), Rational(bell[n]));
}

TEST(Series, SinhCoshIdentity) {
    auto s = hyperbolic(HyperbolicKind::sinh, 1, 10);
    auto c = hyperbolic(HyperbolicKind::cosh, 1, 10);
    EXPECT_EQ(c * c - s * s, TruncatedSeries::constant(1, 10));
    auto tanh = divide(s, c);
    auto oracle = oracle::tanh_coefficients(10);
    for (unsigned n = 0; n <= 10; ++n) EXPECT_EQ(tanh[n], oracle[n]) << n;
}

TEST(Series, SechPowerRaisedBack) {
    for (unsigned s : {1U, 2U, 3U}) {
        auto h = hyperbolic(HyperbolicKind::sech_pow, s, 8);
        auto back = pow_rational(h, Rational(-static_cast<long>(s)));
        EXPECT_EQ(back, scale_argument(hyperbolic(HyperbolicKind::cosh, 1, 8), Rational(s)));
    }
}

TEST(Series, DerivativeIntegral) {
    auto e = exp_series(6);
    EXPECT_EQ(e.derivative(), e.truncated(5));
    EXPECT_EQ(e.truncated(5).integral() + TruncatedSeries::constant(1, 6), e);
}

TEST(Series, MixedOrdersTruncate) {
    auto a = exp_series(3) + exp_series(5);
    EXPECT_EQ(a.order(), 3U);
    EXPECT_THROW(a[4], Error);
    EXPECT_EQ(to_string(TruncatedSeries::constant(make_rational(1, 2), 2)), "1/2, 0, 0");
}
