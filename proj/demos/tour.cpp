// Möbius values of a few lattices next to the generating functions that predict them.
#include <iostream>

#include "dowling.hpp"

using namespace dowling;

int main() {
    std::cout << "n  |Pi_n|  mu(Pi_n)\n";
    for (unsigned n = 1; n <= 6; ++n) {
        const auto P = build_partition_lattice(n);
        std::cout << n << "  " << P.size() << "  " << mobius_bottom_top(P.poset) << "\n";
    }

    const unsigned T = 6;
    const auto family = FamilyDescriptor::dowling(2);
    const auto series = series_mu_dowling(family, T);
    const auto N = family_denominator(family);
    std::cout << "\nDowling lattices over Z_2 with a new bottom adjoined, brute force against the series\n";
    for (unsigned n = 0; n <= 4; ++n) {
        const auto L = build_dowling_lattice(n, 2);
        std::cout << "L_" << n << ": " << L.size() << " elements, mu(L_n) = " << mobius_bottom_top(L.poset)
                  << ", mu(L_n + 0) = " << detail::mobius_with_bottom(L.poset, false)
                  << ", coefficient " << to_string(coeff_den(series, n, N)) << "\n";
    }

    std::cout << "\nextended lattices and descent counts\n";
    for (auto [m, r, j] : {std::tuple{4u, 2u, 2u}, {6u, 2u, 2u}, {7u, 2u, 3u}, {8u, 3u, 2u}}) {
        const auto w = DescentWord::pattern(r, (m - j) / r, j - 2);
        std::cout << "Pi_" << m << "^{" << r << "," << j << "}: mu = " << mobius_bottom_top(build_extended(m, r, j).poset)
                  << ", Des(" << w.to_string() << ") = " << des_count(w) << "\n";
    }

    std::cout << "\nDes_q(abab) = " << des_q(DescentWord::parse("abab")).to_string() << "\n";
}
