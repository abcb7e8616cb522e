// Falling chains of an extended lattice, printed as permutations.
#include <cstdlib>
#include <iostream>

#include "dowling.hpp"

using namespace dowling;

int main(int argc, char** argv) {
    const unsigned m = argc > 1 ? std::atoi(argv[1]) : 7;
    const unsigned r = argc > 2 ? std::atoi(argv[2]) : 2;
    const unsigned j = argc > 3 ? std::atoi(argv[3]) : 3;
    try {
        const auto rep = el_verify(m, r, j);
        std::cout << "m=" << m << " r=" << r << " j=" << j << ": " << rep.elements << " elements, " << rep.intervals_checked
                  << " intervals, " << rep.falling_count << " falling chains, mu = " << rep.mu << "\n";
        for (const auto& sigma : descent_class_A(m, r, j)) std::cout << "  " << f_sigma_string(sigma, r, j) << "\n";
        return rep.passed() ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
