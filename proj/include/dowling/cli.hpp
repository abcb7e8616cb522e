#pragma once

#include <array>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "dowling/el_shelling.hpp"
#include "dowling/identities.hpp"
#include "dowling/perm_stats.hpp"
#include "dowling/serialize.hpp"
#include "dowling/structures.hpp"

namespace dowling::cli {

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"lemma2.1", "prop3.2", "thm3.2",   "thm3.3", "ex3.5",  "cor3.4", "thm4.1",
                                                "thm4.2",   "cor4.3",  "prop4.5",  "cor4.7", "cor4.8", "lemma5.1",
                                                "prop5.3",  "thm5.4",  "thm5.5",   "cor5.6", "thm6.1", "cor6.4", "cor6.5"};
    return names;
}

struct RunConfig {
    std::string command;
    std::string suite;
    std::string family;
    std::optional<unsigned> m, r, j, k, s, n, nmax, T, window;
    std::optional<std::string> I, J, word, sigma, name, action;
    std::vector<std::string> q_values, t_values;
    std::string format = "text";
    std::string method = "auto";
    unsigned jobs = 1;
    unsigned seed = 2024;
    bool q_poly = false;
    bool adjoin_bottom = false;
    bool egf = false;
    std::string cache_dir;
    std::string out_dir;
    Guards guards;

    /// The resolved configuration as embedded in reports. Execution settings
    /// (jobs, cache and output locations) are left out so that reports do not
    /// depend on how they were produced.
    Json to_json() const {
        Json j{{"command", command}};
        auto opt = [&](const char* key, const auto& v) {
            if (v) j[key] = *v;
        };
        if (!suite.empty()) j["suite"] = suite;
        if (!family.empty()) j["family"] = family;
        opt("m", m);
        opt("r", r);
        opt("j", this->j);
        opt("k", k);
        opt("s", s);
        opt("n", n);
        opt("nmax", nmax);
        opt("T", T);
        opt("window", window);
        opt("I", I);
        opt("J", J);
        opt("word", word);
        opt("sigma", sigma);
        opt("name", name);
        if (!q_values.empty()) j["q"] = q_values;
        if (!t_values.empty()) j["t"] = t_values;
        if (command == "verify") j["seed"] = seed;
        j["format"] = format;
        j["guards"] = Json{{"max_lattice_ground", guards.max_lattice_ground},
                           {"max_enumeration_ground", guards.max_enumeration_ground},
                           {"max_dowling_rank", guards.max_dowling_rank},
                           {"max_elements", guards.max_elements}};
        return j;
    }
};

namespace detail {

inline unsigned get(const std::optional<unsigned>& v, unsigned fallback) { return v ? *v : fallback; }

inline std::vector<unsigned> list(const std::optional<unsigned>& v, std::vector<unsigned> fallback) {
    return v ? std::vector<unsigned>{*v} : fallback;
}

inline std::vector<Rational> rationals(const std::vector<std::string>& v, std::vector<Rational> fallback) {
    if (v.empty()) return fallback;
    std::vector<Rational> out;
    for (const auto& s : v) out.push_back(parse_rational(s));
    return out;
}

inline std::string join(const std::vector<unsigned>& v) {
    std::string s;
    for (auto x : v) s += (s.empty() ? "" : ",") + std::to_string(x);
    return s;
}

inline std::string join(const std::vector<Rational>& v) {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : ",") + to_string(x);
    return s;
}

/// Parameters must be present and consistent before anything is built.
inline unsigned require(const std::optional<unsigned>& v, const char* flag, const std::string& what) {
    if (!v) throw Error(what + " requires --" + flag);
    return *v;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Verification suites

struct Cell {
    std::string key;
    std::function<std::vector<IdentityReport>(const Guards&)> run;
};

inline CompositionalInputs random_inputs(unsigned seed, unsigned length) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> d(-3, 3);
    CompositionalInputs in;
    for (unsigned i = 0; i < length; ++i) {
        in.f.push_back(d(rng));
        in.g.push_back(d(rng));
        in.k.push_back(d(rng));
    }
    return in;
}

inline std::vector<Cell> suite_cells(const std::string& suite, const RunConfig& c) {
    using detail::get;
    using detail::list;
    std::vector<Cell> cells;
    auto add = [&](std::string key, std::function<std::vector<IdentityReport>(const Guards&)> f) {
        cells.push_back({suite + "|" + key, std::move(f)});
    };

    if (suite == "lemma2.1") {
        const unsigned nmax = get(c.nmax, 4);
        for (unsigned s : list(c.s, {1, 2, 3}))
            add("s=" + std::to_string(s) + "|nmax=" + std::to_string(nmax), [=](const Guards& g) {
                std::vector<IdentityReport> out;
                for (unsigned n = 0; n <= nmax; ++n) out.push_back(type_census_check(FamilyDescriptor::dowling(s), n, g));
                return out;
            });
    } else if (suite == "prop3.2") {
        const unsigned r = get(c.r, 2), k = get(c.k, 1);
        add("pi|nmax=" + std::to_string(get(c.nmax, 5)), [nmax = get(c.nmax, 5)](const Guards& g) {
            std::vector<IdentityReport> out;
            for (unsigned n = 1; n <= nmax; ++n) out.push_back(type_census_check(FamilyDescriptor::partition(), n, g));
            return out;
        });
        add("pi-r|r=" + std::to_string(r), [r, nmax = get(c.nmax, 8 / r)](const Guards& g) {
            std::vector<IdentityReport> out;
            for (unsigned n = 1; n <= nmax; ++n) out.push_back(type_census_check(FamilyDescriptor::r_divisible(r), n, g));
            return out;
        });
        for (unsigned s : list(c.s, {1, 2})) {
            const unsigned nmax = get(c.nmax, (7 - std::min(k, 7U)) / r);
            add("d-rk|r=" + std::to_string(r) + "|k=" + std::to_string(k) + "|s=" + std::to_string(s) + "|nmax=" +
                    std::to_string(nmax),
                [=](const Guards& g) {
                    std::vector<IdentityReport> out;
                    for (unsigned n = 0; n <= nmax; ++n)
                        out.push_back(type_census_check(FamilyDescriptor::dowling_rk(r, k, s), n, g));
                    return out;
                });
        }
    } else if (suite == "thm3.2") {
        const unsigned nmax = get(c.nmax, 6);
        const auto family = c.r ? FamilyDescriptor::r_divisible(*c.r) : FamilyDescriptor::partition();
        for (unsigned t = 0; t < 5; ++t)
            add(family.name() + "|triple=" + std::to_string(t) + "|seed=" + std::to_string(c.seed) + "|nmax=" + std::to_string(nmax),
                [=, seed = c.seed](const Guards& g) {
                    auto in = random_inputs(seed + t, nmax + 1);
                    in.g[0] = 1;
                    auto rep = compositional_check_exponential(in, family, nmax, g);
                    rep.param("triple", std::to_string(t));
                    return std::vector<IdentityReport>{rep};
                });
    } else if (suite == "thm3.3") {
        const unsigned nmax = get(c.nmax, 4);
        for (unsigned s : list(c.s, {1, 2}))
            for (unsigned t = 0; t < 5; ++t)
                add("s=" + std::to_string(s) + "|triple=" + std::to_string(t) + "|seed=" + std::to_string(c.seed) + "|nmax=" +
                        std::to_string(nmax),
                    [=, seed = c.seed](const Guards& g) {
                        const auto in = random_inputs(seed + t, nmax + 1);
                        auto rep = compositional_check_dowling(in, FamilyDescriptor::dowling(s), nmax, g);
                        rep.param("triple", std::to_string(t));
                        return std::vector<IdentityReport>{rep};
                    });
    } else if (suite == "ex3.5") {
        // exact certification needs more sample points than the degree
        auto samples = [&](unsigned nmax) {
            std::vector<Rational> d{make_rational(-1, 2)};
            for (unsigned t = 2; t <= nmax + 2; ++t) d.emplace_back(t);
            return detail::rationals(c.t_values, d);
        };
        const unsigned np = get(c.nmax, 6), nd = get(c.nmax, 4);
        const auto tp = samples(np), td = samples(nd);
        add("pi|t=" + detail::join(tp) + "|nmax=" + std::to_string(np), [tp, np](const Guards& g) {
            return std::vector<IdentityReport>{rank_polynomial_check_exponential(FamilyDescriptor::partition(), tp, np, g)};
        });
        for (unsigned s : list(c.s, {1, 2, 3}))
            add("dowling|s=" + std::to_string(s) + "|t=" + detail::join(td) + "|nmax=" + std::to_string(nd), [td, s, nd](const Guards& g) {
                return std::vector<IdentityReport>{rank_polynomial_check_dowling(FamilyDescriptor::dowling(s), td, nd, g)};
            });
    } else if (suite == "cor3.4") {
        add("pi|nmax=" + std::to_string(get(c.nmax, 7)), [nmax = get(c.nmax, 7)](const Guards& g) {
            return std::vector<IdentityReport>{mobius_series_check_exponential(FamilyDescriptor::partition(), nmax, g)};
        });
        for (unsigned r : list(c.r, {2, 3, 4})) {
            if (r < 2) continue;
            // default r values stay within rn <= 8; an explicit --r takes --nmax as given
            const unsigned nmax = c.r ? get(c.nmax, 8 / r) : std::min(get(c.nmax, 8 / r), 8 / r);
            add("pi-r|r=" + std::to_string(r) + "|nmax=" + std::to_string(nmax), [r, nmax](const Guards& g) {
                return std::vector<IdentityReport>{mobius_series_check_exponential(FamilyDescriptor::r_divisible(r), nmax, g)};
            });
        }
        for (unsigned s : list(c.s, {1, 2, 3}))
            add("dowling|s=" + std::to_string(s) + "|nmax=" + std::to_string(get(c.nmax, 4)), [s, nmax = get(c.nmax, 4)](const Guards& g) {
                return std::vector<IdentityReport>{mobius_series_check_dowling(FamilyDescriptor::dowling(s), nmax, g)};
            });
    } else if (suite == "thm4.1") {
        const unsigned window = get(c.window, 8);
        const auto I = IndexSet::parse(c.I.value_or("2"), window);
        const unsigned nmax = get(c.nmax, window);
        add("I=" + I.to_string() + "|window=" + std::to_string(window) + "|nmax=" + std::to_string(nmax), [=](const Guards& g) {
            return std::vector<IdentityReport>{restricted_mu_check(I, nmax, g), restricted_m_expansion_check(I, nmax, g)};
        });
    } else if (suite == "thm4.2") {
        const unsigned window = get(c.window, 8);
        const auto I = IndexSet::parse(c.I.value_or("2"), window);
        const auto J = IndexSet::parse(c.J.value_or("1"), window);
        const unsigned nmax = get(c.nmax, window);
        for (unsigned s : list(c.s, {1}))
            add("I=" + I.to_string() + "|J=" + J.to_string() + "|s=" + std::to_string(s) + "|nmax=" + std::to_string(nmax),
                [=](const Guards& g) { return std::vector<IdentityReport>{restricted_mu_dowling_check(I, J, s, nmax, g)}; });
    } else if (suite == "cor4.3") {
        const unsigned window = get(c.window, 8);
        const auto I = IndexSet::parse(c.I.value_or("2,4,6,8"), window);
        const auto J = IndexSet::parse(c.J.value_or("1,3,5,7"), window);
        check_semigroup_hypotheses(I, J);
        const unsigned nmax = get(c.nmax, window);
        for (unsigned s : list(c.s, {1}))
            add("I=" + I.to_string() + "|J=" + J.to_string() + "|s=" + std::to_string(s) + "|nmax=" + std::to_string(nmax),
                [=](const Guards& g) {
                    auto rs = semigroup_check(I, J, s, nmax, g);
                    return std::vector<IdentityReport>{rs.exponential, rs.dowling, rs.vanishing};
                });
    } else if (suite == "prop4.5" || suite == "cor4.7" || suite == "cor4.8") {
        std::vector<std::pair<unsigned, unsigned>> rk;
        if (c.r && c.k)
            rk = {{*c.r, *c.k}};
        else if (suite == "prop4.5")
            rk = {{1, 1}, {1, 2}, {2, 0}, {2, 1}, {2, 2}};
        else if (suite == "cor4.7")
            for (unsigned k : list(c.k, {1, 2})) rk.emplace_back(1, k);
        else
            for (unsigned k : list(c.k, {0, 1, 2})) rk.emplace_back(2, k);
        const unsigned ground = get(c.T, 6);
        for (auto [r, k] : rk)
            for (unsigned s : list(c.s, {1, 2})) {
                if (suite == "cor4.7" && (r != 1 || k < 1)) throw Error("cor4.7 needs r = 1 and k >= 1");
                if (suite == "cor4.8" && r != 2) throw Error("cor4.8 needs r = 2");
                add("r=" + std::to_string(r) + "|k=" + std::to_string(k) + "|s=" + std::to_string(s) + "|T=" + std::to_string(ground),
                    [=](const Guards& g) {
                        auto rs = d_rk_series_check(r, k, s, ground, g);
                        if (suite == "prop4.5") return std::vector<IdentityReport>{rs.product_form, rs.family_series};
                        if (suite == "cor4.7") return std::vector<IdentityReport>{*rs.binomial};
                        return std::vector<IdentityReport>{*rs.hyperbolic, *rs.hyperbolic_vs_product};
                    });
            }
        if (suite == "cor4.7" || (suite == "prop4.5" && !(c.r && c.k)))
            for (unsigned k : list(c.k, {1, 2}))
                add("order-independence|k=" + std::to_string(k) + "|nmax=" + std::to_string(get(c.nmax, 4)),
                    [k, nmax = get(c.nmax, 4)](const Guards& g) {
                        return std::vector<IdentityReport>{drk_order_independence(k, nmax, {1, 2, 3}, g)};
                    });
    } else if (suite == "lemma5.1") {
        const unsigned total = get(c.nmax, 6);
        const auto qs = detail::rationals(c.q_values, {Rational(1), Rational(2)});
        add("multiplication|max_total=" + std::to_string(total),
            [total](const Guards&) { return std::vector<IdentityReport>{multiplication_report(total)}; });
        add("eulerian-product|q=" + detail::join(qs) + "|T=" + std::to_string(get(c.T, 8)),
            [qs, T = get(c.T, 8)](const Guards&) { return std::vector<IdentityReport>{eulerian_product_report(qs, T)}; });
    } else if (suite == "prop5.3") {
        std::vector<std::pair<unsigned, std::string>> rw;
        if (c.r || c.word)
            rw = {{get(c.r, 2), c.word.value_or("a")}};
        else
            rw = {{2, "a"}, {2, "aa"}, {3, "aa"}};
        const auto qs = detail::rationals(c.q_values, {Rational(1), Rational(2)});
        const unsigned T = get(c.T, 9);
        for (const auto& [r, w] : rw) {
            const auto word = DescentWord::parse(w);
            for (const auto& q : qs)
                add("r=" + std::to_string(r) + "|w=" + word.to_string() + "|q=" + to_string(q) + "|T=" + std::to_string(T),
                    [=](const Guards&) { return std::vector<IdentityReport>{divisible_word_series_check(r, word, q, T)}; });
        }
    } else if (suite == "thm5.4") {
        std::vector<std::pair<unsigned, unsigned>> rk;
        if (c.r || c.k)
            rk = {{get(c.r, 2), get(c.k, 1)}};
        else
            rk = {{1, 1}, {1, 2}, {2, 1}, {2, 2}, {3, 1}};
        for (auto [r, k] : rk) {
            if (r < 1 || k < 1) throw Error("thm5.4 needs r >= 1 and k >= 1");
            const unsigned nmax = get(c.n, k + 1 <= 8 ? (8 - k - 1) / r : 0);
            add("r=" + std::to_string(r) + "|k=" + std::to_string(k) + "|n=" + std::to_string(nmax),
                [=](const Guards& g) { return std::vector<IdentityReport>{mu_descent_check(r, k, nmax, g)}; });
        }
    } else if (suite == "thm5.5") {
        std::vector<std::pair<unsigned, unsigned>> rn;
        if (c.r || c.n)
            rn = {{get(c.r, 2), get(c.n, 2)}};
        else
            rn = {{2, 2}, {3, 1}};
        for (auto [r, n] : rn)
            add("r=" + std::to_string(r) + "|n=" + std::to_string(n), [=](const Guards& g) {
                return std::vector<IdentityReport>{mu_zero_check(r, n, g), join_of_atoms_check(r, n, g)};
            });
    } else if (suite == "cor5.6") {
        for (unsigned r : list(c.r, {2, 3})) {
            const unsigned nmax = get(c.n, 8 / std::max(r, 1U));
            add("divisible|r=" + std::to_string(r) + "|n=" + std::to_string(nmax),
                [=](const Guards& g) { return std::vector<IdentityReport>{mu_divisible_check(r, nmax, g)}; });
        }
        if (!c.r) {
            add("alternating|n=" + std::to_string(get(c.n, 4)), [n = get(c.n, 4)](const Guards& g) {
                return std::vector<IdentityReport>{alternating_divisible_check(n, g)};
            });
            add("secant|n=" + std::to_string(get(c.n, 3)),
                [n = get(c.n, 3)](const Guards& g) { return std::vector<IdentityReport>{secant_check(n, g)}; });
        }
    } else if (suite == "thm6.1" || suite == "cor6.4" || suite == "cor6.5") {
        std::vector<std::array<unsigned, 3>> mrj;
        if (c.m || c.r || c.j)
            mrj = {{detail::require(c.m, "m", suite), detail::require(c.r, "r", suite), detail::require(c.j, "j", suite)}};
        else if (suite == "thm6.1")
            mrj = {{3, 2, 1}, {4, 2, 2}, {5, 2, 3}, {6, 2, 2}, {7, 3, 4}};
        else if (suite == "cor6.4")
            mrj = {{3, 2, 1}, {5, 2, 1}, {7, 2, 1}, {7, 3, 1}, {4, 1, 1}};
        else
            mrj = {{4, 2, 2}, {5, 2, 3}, {6, 2, 2}, {7, 3, 4}, {7, 2, 3}, {8, 3, 2}};
        for (auto [m, r, j] : mrj) {
            if (suite == "cor6.4" && j != 1) throw Error("cor6.4 concerns j = 1");
            if (suite == "cor6.5" && j < 2) throw Error("cor6.5 concerns j >= 2");
            add("m=" + std::to_string(m) + "|r=" + std::to_string(r) + "|j=" + std::to_string(j),
                [=](const Guards& g) { return el_identity_reports(el_verify(m, r, j, g)); });
        }
    } else {
        throw Error("unknown suite '" + suite + "'");
    }
    return cells;
}

/// Runs cells on a pool of `jobs` threads; results come back in cell order.
/// Cached results are reused when the cache is enabled.
inline std::vector<std::vector<IdentityReport>> run_cells(const std::vector<Cell>& cells, unsigned jobs, const Guards& guards,
                                                          const Cache& cache) {
    std::vector<std::vector<IdentityReport>> results(cells.size());
    std::vector<std::exception_ptr> errors(cells.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) {
            try {
                const std::string key = "verify|" + cells[i].key;
                if (auto hit = cache.get(key)) {
                    for (const auto& j : Json::parse(*hit)) results[i].push_back(report_from_json(j));
                    continue;
                }
                results[i] = cells[i].run(guards);
                Json arr = Json::array();
                for (const auto& r : results[i]) arr.push_back(report_to_json(r));
                cache.put(key, arr.dump());
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (cache.enabled()) std::filesystem::create_directories(cache.dir());
    const unsigned n = std::max(1U, std::min<unsigned>(jobs, static_cast<unsigned>(cells.size())));
    if (n == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return results;
}

// ---------------------------------------------------------------------------
// Families for lattice / mobius

inline BuiltPoset build_family(const RunConfig& c, std::optional<unsigned> n_override = std::nullopt) {
    using detail::require;
    const auto& f = c.family;
    const auto n = n_override ? n_override : c.n;
    if (f == "pi") return build_partition_lattice(require(n, "n", f), c.guards);
    if (f == "dowling") return build_dowling_lattice(require(n, "n", f), require(c.s, "s", f), c.guards);
    if (f == "pi-r") {
        const unsigned r = require(c.r, "r", f);
        const unsigned m = n_override ? r * *n_override : require(c.m, "m", f);
        if (r < 1 || m % r) throw Error("pi-r requires r | m");
        return build_r_divisible(m, r, c.guards);
    }
    if (f == "pi-rj") {
        const unsigned r = require(c.r, "r", f), j = require(c.j, "j", f);
        const unsigned m = n_override ? r * *n_override + j : require(c.m, "m", f);
        if (r < 1 || j < 1 || m < j || (m - j) % r) throw Error("pi-rj requires m = j (mod r) with m >= j >= 1");
        return build_extended(m, r, j, c.guards);
    }
    if (f == "d-rk")
        return build_D_rk(require(n, "n", f), require(c.r, "r", f), detail::get(c.k, 0), require(c.s, "s", f), true, c.guards);
    if (f == "q-I") {
        const unsigned window = require(c.window, "window", f);
        return build_restricted(require(n, "n", f), FamilyDescriptor::restricted_partition(IndexSet::parse(*c.I, window)),
                                c.guards);
    }
    if (f == "r-IJ") {
        const unsigned window = require(c.window, "window", f);
        if (!c.I || !c.J) throw Error("r-IJ requires --I and --J");
        return build_restricted(require(n, "n", f),
                                FamilyDescriptor::restricted_dowling(IndexSet::parse(*c.I, window), IndexSet::parse(*c.J, window),
                                                                     require(c.s, "s", f)),
                                c.guards);
    }
    throw Error("unknown family '" + f + "' (expected pi, dowling, pi-r, pi-rj, d-rk, q-I, r-IJ)");
}

inline std::int64_t family_mobius(const BuiltPoset& bp, bool adjoin_bottom) {
    if (adjoin_bottom && !bp.adjoined_bottom) return dowling::detail::mobius_with_bottom(bp.poset, false);
    return mobius_bottom_top(bp.poset);
}

// ---------------------------------------------------------------------------
// Named closed-form series

inline TruncatedSeries named_series(const RunConfig& c, unsigned T) {
    const std::string& name = *c.name;
    if (name == "cor3.4-exponential") {
        const auto fam = c.r && *c.r > 1 ? FamilyDescriptor::r_divisible(*c.r) : FamilyDescriptor::partition();
        return series_mu_exponential(fam, T);
    }
    if (name == "cor3.4-dowling") {
        const unsigned s = detail::get(c.s, 1);
        if (c.r || c.k) return series_mu_dowling(FamilyDescriptor::dowling_rk(detail::get(c.r, 1), detail::get(c.k, 0), s), T);
        return series_mu_dowling(FamilyDescriptor::dowling(s), T);
    }
    if (name == "prop4.5") return drk_product_form(detail::get(c.r, 1), detail::get(c.k, 0), detail::get(c.s, 1), T);
    if (name == "cor4.8") return drk_hyperbolic_form(detail::get(c.k, 0), detail::get(c.s, 1), T);
    if (name == "exp") return exp_series(T);
    if (name == "sinh") return hyperbolic(HyperbolicKind::sinh, 1, T);
    if (name == "cosh") return hyperbolic(HyperbolicKind::cosh, 1, T);
    if (name == "sech") return hyperbolic(HyperbolicKind::sech_pow, detail::get(c.s, 1), T);
    throw Error("unknown series '" + name + "' (expected cor3.4-exponential, cor3.4-dowling, prop4.5, cor4.8, exp, sinh, cosh, sech)");
}

// ---------------------------------------------------------------------------
// Commands

inline int cmd_verify(const RunConfig& c, std::ostream& out) {
    std::vector<std::string> suites;
    if (c.suite == "all")
        suites = suite_names();
    else if (std::find(suite_names().begin(), suite_names().end(), c.suite) != suite_names().end())
        suites = {c.suite};
    else
        throw Error("unknown suite '" + c.suite + "'");

    std::vector<Cell> cells;
    for (const auto& s : suites) {
        auto more = suite_cells(s, c);
        cells.insert(cells.end(), more.begin(), more.end());
    }
    const auto results = run_cells(cells, c.jobs, c.guards, Cache(c.cache_dir));

    bool ok = true;
    Json reports = Json::array();
    std::string csv = csv_header();
    std::string text;
    for (std::size_t i = 0; i < cells.size(); ++i)
        for (const auto& r : results[i]) {
            ok = ok && r.passed();
            Json j = report_to_json(r);
            j["cell"] = cells[i].key;
            reports.push_back(std::move(j));
            csv += report_to_csv_rows(r);
            text += std::string(r.passed() ? "PASS" : "FAIL") + "  " + r.name + "  [" + params_string(r) + "]  verdict=" +
                    to_string(r.verdict) + " epsilon=" + (r.epsilon > 0 ? "+" : "") + std::to_string(r.epsilon) +
                    " documented=" + (r.expected_epsilon > 0 ? "+" : "") + std::to_string(r.expected_epsilon) +
                    " rows=" + std::to_string(r.rows.size()) + "\n";
        }
    const Json doc{{"config", c.to_json()}, {"passed", ok}, {"reports", std::move(reports)}};
    if (c.format == "json")
        out << doc.dump(2) << "\n";
    else if (c.format == "csv")
        out << csv;
    else
        out << text << (ok ? "all checks passed" : "some checks FAILED") << "\n";
    if (!c.out_dir.empty()) {
        std::filesystem::create_directories(c.out_dir);
        std::ofstream(std::filesystem::path(c.out_dir) / (c.suite + ".json")) << doc.dump(2) << "\n";
        std::ofstream(std::filesystem::path(c.out_dir) / (c.suite + ".csv")) << csv;
    }
    return ok ? 0 : 1;
}

inline int cmd_lattice(const RunConfig& c, std::ostream& out) {
    const Cache cache(c.cache_dir);
    const std::string key = "lattice|" + c.to_json().dump();
    std::string text;
    if (auto hit = cache.get(key)) {
        text = *hit;
    } else {
        Json doc = lattice_to_json(build_family(c));
        doc["config"] = c.to_json();
        text = doc.dump(c.format == "compact" ? -1 : 2) + "\n";
        cache.put(key, text);
    }
    if (!c.out_dir.empty()) {
        std::filesystem::create_directories(c.out_dir);
        std::ofstream(std::filesystem::path(c.out_dir) / "lattice.json") << text;
    } else {
        out << text;
    }
    return 0;
}

inline int cmd_mobius(const RunConfig& c, std::ostream& out) {
    const bool adjoin = c.adjoin_bottom;
    if (!c.nmax) {
        const auto value = family_mobius(build_family(c), adjoin);
        if (c.format == "json")
            out << Json{{"config", c.to_json()}, {"mu", value}}.dump(2) << "\n";
        else
            out << value << "\n";
        return 0;
    }
    const unsigned start = (c.family == "pi" || c.family == "q-I" || c.family == "r-IJ") ? 1 : 0;
    Json rows = Json::array();
    std::string csv = "n,mu\n";
    for (unsigned n = start; n <= *c.nmax; ++n) {
        if (c.family == "pi-r" && n == 0) continue;
        const auto value = family_mobius(build_family(c, n), adjoin);
        rows.push_back(Json{{"n", n}, {"mu", value}});
        csv += std::to_string(n) + "," + std::to_string(value) + "\n";
    }
    if (c.format == "json")
        out << Json{{"config", c.to_json()}, {"values", rows}}.dump(2) << "\n";
    else
        out << csv;
    return 0;
}

inline int cmd_series(const RunConfig& c, std::ostream& out) {
    if (!c.name) throw Error("series requires --name");
    const unsigned T = detail::get(c.T, 8);
    auto f = named_series(c, T);
    std::vector<Rational> coeffs;
    for (unsigned n = 0; n <= T; ++n) coeffs.push_back(c.egf ? f[n] * Rational(factorial(n)) : f[n]);
    if (c.format == "json") {
        Json arr = Json::array();
        for (const auto& x : coeffs) arr.push_back(to_string(x));
        out << Json{{"config", c.to_json()}, {"coefficients", arr}}.dump(2) << "\n";
    } else {
        out << to_string(TruncatedSeries(coeffs)) << "\n";
    }
    return 0;
}

inline QPolynomial des_q_by(const std::string& method, const DescentWord& w) {
    if (method == "enumerate") return des_q_enumerate(w);
    if (method == "inclusion-exclusion") return des_q_inclusion_exclusion(w);
    if (method == "auto") return des_q(w);
    throw Error("unknown method '" + method + "' (expected auto, enumerate, inclusion-exclusion)");
}

inline int cmd_descents(const RunConfig& c, std::ostream& out) {
    std::vector<DescentWord> words;
    if (c.word)
        words.push_back(DescentWord::parse(*c.word));
    else if (c.n && *c.n >= 1)
        words = DescentWord::all(*c.n - 1);
    else
        throw Error("descents requires --word or --n >= 1");
    if (c.word && c.format == "text") {
        const auto p = des_q_by(c.method, words[0]);
        out << (c.q_poly ? p.to_string() : to_string(p.at_one())) << "\n";
        return 0;
    }
    Json rows = Json::array();
    std::string csv = "word,des,des_q\n";
    for (const auto& w : words) {
        const auto p = des_q_by(c.method, w);
        rows.push_back(Json{{"word", w.to_string()}, {"des", integer_to_json(p.at_one())}, {"des_q", p.coefficients()}, {"des_q_string", p.to_string()}});
        csv += w.to_string() + "," + to_string(p.at_one()) + "," + csv_field(p.to_string()) + "\n";
    }
    if (c.format == "json")
        out << Json{{"config", c.to_json()}, {"rows", rows}}.dump(2) << "\n";
    else
        out << csv;
    return 0;
}

inline int cmd_el_check(const RunConfig& c, std::ostream& out) {
    const unsigned r = detail::require(c.r, "r", "el-check"), j = detail::require(c.j, "j", "el-check");
    if (c.sigma) {
        const auto sigma = parse_permutation(*c.sigma);
        if (c.m && *c.m != sigma.size()) throw Error("--sigma has length " + std::to_string(sigma.size()) + " but --m is " + std::to_string(*c.m));
        const ExtendedLabelling L(static_cast<unsigned>(sigma.size()), r, j, c.guards);
        const auto chain = f_sigma(L, sigma);
        const auto labels = L.chain_labels(chain);
        const auto A = descent_class_A(L.m(), r, j);
        const bool member = std::find(A.begin(), A.end(), sigma) != A.end();
        if (c.format == "json") {
            Json ls = Json::array();
            for (const auto& l : labels) ls.push_back(l.to_string());
            out << Json{{"config", c.to_json()}, {"chain", f_sigma_string(sigma, r, j)}, {"labels", ls}, {"in_A", member}, {"falling", is_falling(labels)}}.dump(2)
                << "\n";
        } else {
            out << f_sigma_string(sigma, r, j) << "\n";
        }
        return member && is_falling(labels) ? 0 : 1;
    }
    const unsigned m = detail::require(c.m, "m", "el-check");
    const auto rep = el_verify(m, r, j, c.guards);
    if (c.format == "text") {
        out << (rep.passed() ? "PASS" : "FAIL") << "  m=" << m << " r=" << r << " j=" << j << "  intervals=" << rep.intervals_checked
            << " rising_violations=" << rep.rising_violations << " lex_violations=" << rep.lex_violations
            << " falling=" << rep.falling_count << " des=" << rep.des_expected << " f_sigma_match=" << (rep.f_sigma_match ? "yes" : "no")
            << " mu=" << rep.mu << "\n";
    } else {
        Json doc = el_report_to_json(rep);
        doc["config"] = c.to_json();
        out << doc.dump(2) << "\n";
    }
    return rep.passed() ? 0 : 1;
}

inline int cmd_cache(const RunConfig& c, std::ostream& out) {
    const Cache cache(c.cache_dir);
    const std::string action = c.action.value_or("path");
    if (!cache.enabled()) throw Error("no cache directory (use --cache-dir or DOWLING_CACHE_DIR)");
    if (action == "path") {
        out << cache.dir().string() << "\n";
    } else if (action == "list") {
        for (const auto& k : cache.keys()) out << k << "\n";
    } else if (action == "clear") {
        out << "removed " << cache.clear() << " entries\n";
    } else {
        throw Error("unknown cache action '" + action + "' (expected path, list, clear)");
    }
    return 0;
}

// ---------------------------------------------------------------------------
// Entry point

/// Exit codes: 0 all checks pass, 1 a mismatch, 2 bad input or a guard.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig c;
    CLI::App app{"Exact engine for exponential structures, Dowling lattices and their Möbius functions", "dowling"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "dowling 1.0.0");

    auto common = [&](CLI::App* sub) {
        sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"text", "json", "csv", "compact"}));
        sub->add_option("--cache-dir", c.cache_dir, "Cache directory")->envname("DOWLING_CACHE_DIR");
        sub->add_option("--out", c.out_dir, "Directory for report files");
        sub->add_option("--max-lattice-ground", c.guards.max_lattice_ground, "Guard: ground set size of partition-type lattices");
        sub->add_option("--max-elements", c.guards.max_elements, "Guard: elements of any constructed poset");
        sub->add_option("--max-dowling-rank", c.guards.max_dowling_rank, "Guard: rank of Dowling lattices");
        sub->add_option("--max-enumeration-ground", c.guards.max_enumeration_ground, "Guard: ground size for bare enumerations");
    };
    auto params = [&](CLI::App* sub) {
        sub->add_option("--family", c.family, "pi, dowling, pi-r, pi-rj, d-rk, q-I, r-IJ");
        sub->add_option("--m", c.m, "Ground set size");
        sub->add_option("--r", c.r, "Block size modulus r");
        sub->add_option("--j", c.j, "Minimum size of the block holding m");
        sub->add_option("--k", c.k, "Parameter k");
        sub->add_option("--s", c.s, "Group order s");
        sub->add_option("--n", c.n, "Index n");
        sub->add_option("--nmax", c.nmax, "Largest n");
        sub->add_option("--T", c.T, "Truncation order");
        sub->add_option("--I", c.I, "Index set I, e.g. 2,4,6 or all");
        sub->add_option("--J", c.J, "Index set J");
        sub->add_option("--window", c.window, "Upper bound for I and J");
    };

    auto* verify = app.add_subcommand("verify", "Run a named verification suite");
    verify->add_option("suite", c.suite, "Suite name or 'all'")->required();
    params(verify);
    common(verify);
    verify->add_option("--q", c.q_values, "Sample values of q")->delimiter(',');
    verify->add_option("--t", c.t_values, "Sample values of t")->delimiter(',');
    verify->add_option("--word", c.word, "Descent word w");
    verify->add_option("--jobs", c.jobs, "Worker threads")->check(CLI::Range(1U, 256U));
    verify->add_option("--seed", c.seed, "Seed for the pseudo-random triples");

    auto* lattice = app.add_subcommand("lattice", "Build a poset and print it as JSON");
    params(lattice);
    common(lattice);

    auto* mobius = app.add_subcommand("mobius", "Möbius value from bottom to top");
    params(mobius);
    common(mobius);
    mobius->add_flag("--adjoin-bottom", c.adjoin_bottom, "Adjoin a new minimum first (pi, dowling)");

    auto* series = app.add_subcommand("series", "Coefficients of a named closed form");
    params(series);
    common(series);
    series->add_option("--name", c.name, "Series name")->required();
    series->add_flag("--egf", c.egf, "Print n! times each coefficient");

    auto* descents = app.add_subcommand("descents", "Des and Des_q of descent words");
    descents->add_option("--word", c.word, "Descent word over a, b");
    descents->add_option("--n", c.n, "Tabulate all words for permutations of size n");
    descents->add_flag("--q", c.q_poly, "Print Des_q instead of Des");
    descents->add_option("--method", c.method, "auto, enumerate or inclusion-exclusion");
    common(descents);

    auto* el = app.add_subcommand("el-check", "Check the EL-labelling of the extended partition lattice");
    el->add_option("--m", c.m, "Ground set size");
    el->add_option("--r", c.r, "Block size modulus r");
    el->add_option("--j", c.j, "Minimum size of the block holding m");
    el->add_option("--sigma", c.sigma, "Print the chain f_sigma for this permutation");
    common(el);

    auto* cache = app.add_subcommand("cache", "Inspect or clear the cache");
    cache->add_option("action", c.action, "path, list or clear");
    common(cache);

    try {
        std::vector<std::string> args;
        for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
        app.parse(std::move(args));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        for (auto* sub : app.get_subcommands()) {
            c.command = sub->get_name();
            if (c.command == "el-check" && c.format == "text" && sub->count("--format") == 0 && !c.sigma) c.format = "json";
            if (c.command == "verify") return cmd_verify(c, out);
            if (c.command == "lattice") return cmd_lattice(c, out);
            if (c.command == "mobius") return cmd_mobius(c, out);
            if (c.command == "series") return cmd_series(c, out);
            if (c.command == "descents") return cmd_descents(c, out);
            if (c.command == "el-check") return cmd_el_check(c, out);
            if (c.command == "cache") return cmd_cache(c, out);
        }
    } catch (const GuardError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

}  // namespace dowling::cli
