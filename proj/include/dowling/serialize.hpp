#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dowling/el_shelling.hpp"
#include "dowling/identities.hpp"
#include "dowling/poset.hpp"
#include "dowling/structures.hpp"

namespace dowling {

using Json = nlohmann::ordered_json;

/// Integers that fit in 64 bits become JSON numbers, larger ones strings.
inline Json integer_to_json(const Integer& z) {
    if (z.fits_slong_p()) return static_cast<std::int64_t>(z.get_si());
    return z.get_str();
}

// ---------------------------------------------------------------------------
// Posets and element maps

/// {n, covers: [[x, y], ...], ranks: [...] or null}.
inline Json poset_to_json(const Poset& p) {
    Json covers = Json::array();
    for (const auto& [x, y] : p.cover_pairs()) covers.push_back({x, y});
    Json ranks = p.is_graded() ? Json::array() : Json(nullptr);
    if (p.is_graded())
        for (Poset::Index x = 0; x < p.size(); ++x) ranks.push_back(*p.rank(x));
    return Json{{"n", p.size()}, {"covers", std::move(covers)}, {"ranks", std::move(ranks)}};
}

inline Poset poset_from_json(const Json& j) {
    const std::size_t n = j.at("n").get<std::size_t>();
    std::vector<std::pair<Poset::Index, Poset::Index>> covers;
    for (const auto& c : j.at("covers")) {
        if (!c.is_array() || c.size() != 2) throw Error("poset JSON: each cover must be a pair");
        covers.emplace_back(c[0].get<Poset::Index>(), c[1].get<Poset::Index>());
    }
    return Poset::from_covers(n, covers);
}

/// Partitions as block lists; Dowling elements as
/// {"zero_block": [...], "blocks": [{"elems": [...], "labels": [...]}]};
/// the adjoined bottom as null.
inline Json element_to_json(const BuiltPoset& bp, Poset::Index i) {
    if (bp.is_synthetic(i)) return nullptr;
    if (!bp.has_zero_block) return bp.partition(i).blocks;
    const auto x = bp.dowling(i);
    Json blocks = Json::array();
    for (const auto& b : x.blocks) blocks.push_back(Json{{"elems", b.elems}, {"labels", b.labels}});
    return Json{{"zero_block", x.zero_block}, {"blocks", std::move(blocks)}};
}

inline Json lattice_to_json(const BuiltPoset& bp) {
    Json elements = Json::array();
    for (Poset::Index i = 0; i < bp.size(); ++i) elements.push_back(element_to_json(bp, i));
    return Json{{"family", bp.family.name()},
                {"ground", bp.ground},
                {"adjoined_bottom", bp.adjoined_bottom},
                {"poset", poset_to_json(bp.poset)},
                {"elements", std::move(elements)}};
}

// ---------------------------------------------------------------------------
// Identity reports

inline Json report_to_json(const IdentityReport& r) {
    Json params = Json::object();
    for (const auto& [k, v] : r.params) params[k] = v;
    Json rows = Json::array();
    for (const auto& row : r.rows) {
        Json j{{"n", row.n}, {"brute", to_string(row.brute)}, {"closed_form", to_string(row.closed)}};
        if (!row.tag.empty()) j["tag"] = row.tag;
        rows.push_back(std::move(j));
    }
    Json out{{"identity", r.name},
             {"params", std::move(params)},
             {"T", r.T},
             {"verdict", to_string(r.verdict)},
             {"epsilon", r.epsilon},
             {"expected_epsilon", r.expected_epsilon},
             {"passed", r.passed()},
             {"rows", std::move(rows)}};
    if (!r.note.empty()) out["note"] = r.note;
    return out;
}

inline Verdict verdict_from_string(const std::string& s) {
    for (auto v : {Verdict::exact, Verdict::up_to_sign, Verdict::mismatch})
        if (s == to_string(v)) return v;
    throw Error("unknown verdict '" + s + "'");
}

inline IdentityReport report_from_json(const Json& j) {
    IdentityReport r(j.at("identity").get<std::string>(), j.at("expected_epsilon").get<int>(), j.at("T").get<unsigned>());
    for (const auto& [k, v] : j.at("params").items()) r.param(k, v.get<std::string>());
    for (const auto& row : j.at("rows"))
        r.add(row.at("n").get<unsigned>(), parse_rational(row.at("brute").get<std::string>()),
              parse_rational(row.at("closed_form").get<std::string>()), row.value("tag", std::string()));
    r.verdict = verdict_from_string(j.at("verdict").get<std::string>());
    r.epsilon = j.at("epsilon").get<int>();
    r.note = j.value("note", std::string());
    return r;
}

inline std::string params_string(const IdentityReport& r) {
    std::string s;
    for (const auto& [k, v] : r.params) s += (s.empty() ? "" : " ") + k + "=" + v;
    return s;
}

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

inline std::string csv_header() { return "identity,params,tag,n,brute,closed_form,ratio\n"; }

/// One CSV line per row; ratio is brute / closed_form, empty when the closed form vanishes.
inline std::string report_to_csv_rows(const IdentityReport& r) {
    std::string out;
    const std::string params = csv_field(params_string(r));
    for (const auto& row : r.rows) {
        out += csv_field(r.name) + "," + params + "," + csv_field(row.tag) + "," + std::to_string(row.n) + "," +
               to_string(row.brute) + "," + to_string(row.closed) + ",";
        if (row.closed != 0) out += to_string(Rational(row.brute / row.closed));
        out += "\n";
    }
    return out;
}

inline std::string report_to_csv(const IdentityReport& r) { return csv_header() + report_to_csv_rows(r); }

// ---------------------------------------------------------------------------
// EL reports

inline Json el_report_to_json(const ElReport& r) {
    Json examples = Json::array();
    for (const auto& e : r.examples) examples.push_back(e);
    return Json{{"m", r.m},
                {"r", r.r},
                {"j", r.j},
                {"n", r.n},
                {"elements", r.elements},
                {"atoms", r.atoms},
                {"atoms_expected", integer_to_json(r.atoms_expected)},
                {"intervals_checked", r.intervals_checked},
                {"rising_violations", r.rising_violations},
                {"lex_violations", r.lex_violations},
                {"falling_count", r.falling_count},
                {"des_expected", integer_to_json(r.des_expected)},
                {"f_sigma_count", r.f_sigma_count},
                {"f_sigma_match", r.f_sigma_match},
                {"mu", integer_to_json(r.mu)},
                {"passed", r.passed()},
                {"violation_examples", std::move(examples)}};
}

/// The EL checks phrased as identity reports so they share the verdict machinery.
inline std::vector<IdentityReport> el_identity_reports(const ElReport& e) {
    auto tag = [&](IdentityReport& rep) {
        rep.param("m", std::to_string(e.m));
        rep.param("r", std::to_string(e.r));
        rep.param("j", std::to_string(e.j));
    };
    auto count = [](std::size_t v) { return Rational(static_cast<unsigned long>(v)); };
    auto rising = make_report("el-rising-unique", e.m);
    tag(rising);
    rising.add(0, count(e.rising_violations), 0, "intervals with rising count != 1");
    rising.add(0, count(e.lex_violations), 0, "intervals whose lex-first chain is not rising");
    rising.add(0, count(e.atoms), Rational(e.atoms_expected), "atoms");
    auto census = make_report("el-falling-census", e.m);
    tag(census);
    census.add(e.n, count(e.falling_count), Rational(e.des_expected), "falling chains");
    auto mob = make_report("el-falling-mobius", e.m);
    tag(mob);
    mob.add(e.n, Rational(Integer(abs(e.mu))), count(e.falling_count), "|mu|");
    auto fs = make_report("el-f-sigma", e.m);
    tag(fs);
    fs.add(e.n, e.f_sigma_match ? 1 : 0, 1, "falling set equals f_sigma set");
    fs.add(e.n, count(e.f_sigma_count), count(e.falling_count), "size of A");
    return {rising.finalize(), census.finalize(), mob.finalize(), fs.finalize()};
}

// ---------------------------------------------------------------------------
// On-disk cache

/// Text blobs keyed by a string; one file per key. Disabled when constructed
/// with an empty directory.
class Cache {
public:
    Cache() = default;
    explicit Cache(std::filesystem::path dir) : dir_(std::move(dir)) {}

    bool enabled() const { return !dir_.empty(); }
    const std::filesystem::path& dir() const { return dir_; }

    static std::string file_name(const std::string& key) {
        std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
        for (unsigned char c : key) {
            h ^= c;
            h *= 1099511628211ULL;
        }
        std::string stem;
        for (char c : key) stem += (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-') ? c : '_';
        if (stem.size() > 80) stem.resize(80);
        std::ostringstream os;
        os << stem << "-" << std::hex << h << ".cache";
        return os.str();
    }

    std::optional<std::string> get(const std::string& key) const {
        if (!enabled()) return std::nullopt;
        std::ifstream in(dir_ / file_name(key), std::ios::binary);
        if (!in) return std::nullopt;
        std::ostringstream ss;
        ss << in.rdbuf();
        const std::string text = ss.str();
        // first line holds the key itself; guards against hash collisions
        const auto nl = text.find('\n');
        if (nl == std::string::npos || text.substr(0, nl) != key) return std::nullopt;
        return text.substr(nl + 1);
    }

    void put(const std::string& key, const std::string& value) const {
        if (!enabled()) return;
        std::filesystem::create_directories(dir_);
        const auto target = dir_ / file_name(key);
        auto tmp = target;
        tmp += ".tmp";
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out) throw Error("cannot write cache file " + tmp.string());
            out << key << '\n' << value;
        }
        std::filesystem::rename(tmp, target);
    }

    std::vector<std::string> keys() const {
        std::vector<std::string> out;
        if (!enabled() || !std::filesystem::exists(dir_)) return out;
        for (const auto& entry : std::filesystem::directory_iterator(dir_)) {
            if (entry.path().extension() != ".cache") continue;
            std::ifstream in(entry.path());
            std::string first;
            if (std::getline(in, first)) out.push_back(first);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    /// Removes the cache's own files; returns how many.
    std::size_t clear() const {
        std::size_t removed = 0;
        if (!enabled() || !std::filesystem::exists(dir_)) return 0;
        for (const auto& entry : std::filesystem::directory_iterator(dir_))
            if (entry.path().extension() == ".cache" || entry.path().extension() == ".tmp")
                removed += std::filesystem::remove(entry.path());
        return removed;
    }

private:
    std::filesystem::path dir_;
};

}  // namespace dowling
