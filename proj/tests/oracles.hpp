#pragma once
// Independent reference values used only by the tests. Nothing here calls
// into the library.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace oracle {

/// Bell numbers from the Bell triangle.
inline std::vector<mpz_class> bell_numbers(unsigned upto) {
    std::vector<mpz_class> out{1};
    std::vector<mpz_class> row{1};
    for (unsigned n = 1; n <= upto; ++n) {
        out.push_back(row.back());
        std::vector<mpz_class> next{row.back()};
        for (auto& v : row) next.push_back(next.back() + v);
        row = std::move(next);
    }
    return out;
}

inline mpz_class stirling2(unsigned n, unsigned k) {
    std::vector<std::vector<mpz_class>> S(n + 1, std::vector<mpz_class>(n + 1, 0));
    S[0][0] = 1;
    for (unsigned i = 1; i <= n; ++i)
        for (unsigned j = 1; j <= i; ++j) S[i][j] = S[i - 1][j - 1] + j * S[i - 1][j];
    return k <= n ? S[n][k] : mpz_class(0);
}

inline mpz_class choose(unsigned n, unsigned k) {
    if (k > n) return 0;
    mpz_class r = 1;
    for (unsigned i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

inline mpz_class fact(unsigned n) {
    mpz_class r = 1;
    for (unsigned i = 2; i <= n; ++i) r *= i;
    return r;
}

/// Number of elements of the Dowling lattice of rank n over a group of order s.
inline mpz_class dowling_size(unsigned n, unsigned s) {
    mpz_class total = 0;
    for (unsigned b = 0; b <= n; ++b)
        for (unsigned k = 0; k <= n - b; ++k) {
            mpz_class p = 1;
            for (unsigned i = 0; i + b + k < n; ++i) p *= s;
            total += choose(n, b) * stirling2(n - b, k) * p;
        }
    return total;
}

/// mu of the partition lattice on [n].
inline mpz_class mu_partition(unsigned n) {
    mpz_class f = fact(n - 1);
    return n % 2 ? f : mpz_class(-f);
}

/// mu of the Dowling lattice of rank n: (-1)^n prod_{i<n} (i s + 1).
inline mpz_class mu_dowling(unsigned n, unsigned s) {
    mpz_class p = 1;
    for (unsigned i = 0; i < n; ++i) p *= i * s + 1;
    return n % 2 ? mpz_class(-p) : p;
}

/// Descent set (1-based) of a permutation.
inline std::vector<unsigned> descent_set(const std::vector<int>& p) {
    std::vector<unsigned> d;
    for (std::size_t i = 0; i + 1 < p.size(); ++i)
        if (p[i] > p[i + 1]) d.push_back(static_cast<unsigned>(i + 1));
    return d;
}

inline unsigned inversions(const std::vector<int>& p) {
    unsigned c = 0;
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = i + 1; j < p.size(); ++j) c += p[i] > p[j];
    return c;
}

/// Coefficients of sum over permutations of [n] with descent set D of q^inv.
inline std::vector<long long> descent_q_count(unsigned n, const std::vector<unsigned>& D) {
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 1);
    std::vector<long long> out(n * (n - 1) / 2 + 1, 0);
    do {
        if (descent_set(p) == D) ++out[inversions(p)];
    } while (std::next_permutation(p.begin(), p.end()));
    while (out.size() > 1 && out.back() == 0) out.pop_back();
    return out;
}

/// Alternating permutations of [n] counted by brute force (up-down).
inline long long euler_brute(unsigned n) {
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 1);
    long long c = 0;
    do {
        bool ok = true;
        for (std::size_t i = 0; i + 1 < p.size() && ok; ++i) ok = (i % 2 == 0) ? p[i] < p[i + 1] : p[i] > p[i + 1];
        c += ok;
    } while (std::next_permutation(p.begin(), p.end()));
    return c;
}

/// tanh(x) = sum T_n x^n / n!; T_{2k+1} = (-1)^k tangent number.
inline std::vector<mpq_class> tanh_coefficients(unsigned order) {
    // tanh' = 1 - tanh^2
    std::vector<mpq_class> t(order + 1, 0);
    if (order >= 1) t[1] = 1;
    for (unsigned n = 1; n < order; ++n) {
        mpq_class sq = 0;
        for (unsigned i = 0; i <= n; ++i) sq += t[i] * t[n - i];
        t[n + 1] = ((n == 0 ? mpq_class(1) : mpq_class(0)) - sq) / (n + 1);
    }
    return t;
}

}  // namespace oracle
