#pragma once

#include "nilinv/catalog_data.hpp" // generated from data/jmaps/*.json
#include "nilinv/heisenberg.hpp"
#include "nilinv/jmap.hpp"

#include <json.hpp>

#include <map>
#include <string>
#include <vector>

namespace nilinv {

/// One registered j-map with its isospectral partner (when one exists) and
/// the table of exact expected values the regression suite re-derives.
struct CatalogEntry {
    std::string id;
    std::string description;
    JMap j;
    std::string partner; // empty when none
    nlohmann::ordered_json expected_facts;
};

/// Raw JSON text of the file-backed entries (the printed matrix pairs).
inline const std::map<std::string, const char*>& catalog_embedded_json() {
    static const std::map<std::string, const char*> files = {
        {"fourthree", embedded::fourthree_json},
        {"fourthree-prime", embedded::fourthree_prime_json},
        {"fivethree", embedded::fivethree_json},
        {"fivethree-prime", embedded::fivethree_prime_json},
        {"sixtwo", embedded::sixtwo_json},
        {"sixtwo-prime", embedded::sixtwo_prime_json},
    };
    return files;
}

inline const std::vector<std::string>& catalog_ids() {
    static const std::vector<std::string> ids = {
        "fourthree", "fourthree-prime", "fivethree", "fivethree-prime", "sixtwo", "sixtwo-prime",
        "heis3-1-0", "heis3-0-1", "heis3-2-0", "heis3-1-1", "heis3-0-2",
        "heis3-3-0", "heis3-2-1", "heis3-1-2", "heis3-0-3",
        "heis7-1-0", "heis7-0-1", "heis7-2-0", "heis7-1-1", "heis7-0-2"};
    return ids;
}

/// Named isospectral pairs usable with --pair.
struct CatalogPair {
    std::string id, left, right;
};
inline const std::vector<CatalogPair>& catalog_pairs() {
    static const std::vector<CatalogPair> pairs = {
        {"fourthree", "fourthree", "fourthree-prime"},
        {"fivethree", "fivethree", "fivethree-prime"},
        {"sixtwo", "sixtwo", "sixtwo-prime"},
        {"heis3", "heis3-2-0", "heis3-1-1"},
        {"heis7", "heis7-2-0", "heis7-1-1"},
    };
    return pairs;
}

namespace detail {

inline bool parse_heis_id(const std::string& id, std::size_t& r, std::size_t& a, std::size_t& b) {
    // heis<r>-<a>-<b>
    if (id.rfind("heis", 0) != 0) return false;
    const std::size_t d1 = id.find('-');
    const std::size_t d2 = d1 == std::string::npos ? std::string::npos : id.find('-', d1 + 1);
    if (d1 == std::string::npos || d2 == std::string::npos) return false;
    try {
        r = std::stoul(id.substr(4, d1 - 4));
        a = std::stoul(id.substr(d1 + 1, d2 - d1 - 1));
        b = std::stoul(id.substr(d2 + 1));
    } catch (...) {
        return false;
    }
    return true;
}

} // namespace detail

/// Looks up a catalog entry; throws std::out_of_range on unknown ids.
inline CatalogEntry catalog_get(const std::string& id) {
    CatalogEntry e;
    e.id = id;
    const auto fact = [](std::initializer_list<std::pair<const char*, nlohmann::ordered_json>> kv) {
        nlohmann::ordered_json f;
        for (const auto& [k, v] : kv) f[k] = v;
        return f;
    };
    const auto& files = catalog_embedded_json();
    if (auto it = files.find(id); it != files.end()) {
        e.j = jmap_from_json_text(it->second);
        if (id == "fourthree") {
            e.partner = "fourthree-prime";
            e.description = "m=4, r=3 member of the printed pair; eigenvalues of j_Z are "
                            "{+-i|Z|, +-2i|Z|}";
            e.expected_facts = fact({{"TrJ", "-24"},
                                     {"TrJ3", "-2376"},
                                     {"J_diag", nlohmann::ordered_json::array({"-12", "-6", "-6", "-6"})}});
        } else if (id == "fourthree-prime") {
            e.partner = "fourthree";
            e.description = "partner of fourthree";
            e.expected_facts = fact({{"TrJ", "-24"},
                                     {"TrJ3", "-2214"},
                                     {"J_diag", nlohmann::ordered_json::array({"-3", "-9", "-9", "-9"})}});
        } else if (id == "fivethree") {
            e.partner = "fivethree-prime";
            e.description = "m=5, r=3 member of the printed pair used for the gradient-of-Ricci "
                            "invariants";
            e.expected_facts = fact({{"TrJ", "-8"},
                                     {"TrJ2", "14"},
                                     {"I_aabccb", "-24"},
                                     {"J_diag", nlohmann::ordered_json::array({"-2", "-2", "-1", "-1", "-2"})}});
        } else if (id == "fivethree-prime") {
            e.partner = "fivethree";
            e.description = "partner of fivethree";
            e.expected_facts = fact({{"TrJ", "-8"},
                                     {"TrJ2", "14"},
                                     {"I_aabccb", "-26"},
                                     {"J_diag", nlohmann::ordered_json::array({"-1", "-1", "-2", "-2", "-2"})}});
        } else if (id == "sixtwo") {
            e.partner = "sixtwo-prime";
            e.description = "m=6, r=2 member of the printed pair separating |ric|^2 and |R|^2";
            e.expected_facts = fact({{"TrJ2", "630"}});
        } else {
            e.partner = "sixtwo";
            e.description = "partner of sixtwo";
            e.expected_facts = fact({{"TrJ2", "598"}});
        }
        return e;
    }
    std::size_t r = 0, a = 0, b = 0;
    if (detail::parse_heis_id(id, r, a, b)) {
        const bool supported = (r == 3 && a + b >= 1 && a + b <= 3) ||
                               (r == 7 && a + b >= 1 && a + b <= 2);
        if (supported) {
            e.j = build_clifford_j(r, a, b);
            const long long d = static_cast<long long>(CliffordModuleSpec::simple_module_dim(r));
            const long long diff = static_cast<long long>(a) - static_cast<long long>(b);
            e.description = "Heisenberg-type map of the Clifford module with multiplicities (" +
                            std::to_string(a) + "," + std::to_string(b) + "), center dimension " +
                            std::to_string(r);
            if (a == 2 && b == 0)
                e.partner = "heis" + std::to_string(r) + "-1-1";
            else if (a == 1 && b == 1)
                e.partner = "heis" + std::to_string(r) + "-2-0";
            e.expected_facts = fact({{"heisenberg", true},
                                     {"omega_trace_sq", Rational(diff * d * diff * d).str()},
                                     {"ric_v", Rational(-static_cast<long long>(r), 2).str()},
                                     {"ric_z", Rational(static_cast<long long>(e.j.m), 4).str()}});
            return e;
        }
    }
    throw std::out_of_range("unknown catalog id '" + id + "'");
}

/// Re-derives every expected fact of an entry through the computational
/// modules; each fact becomes one pass/fail check.
inline std::vector<IdentityCheck> verify_catalog_facts(const CatalogEntry& e) {
    std::vector<IdentityCheck> out;
    const auto check = [&](const std::string& key, const Rational& recomputed,
                           const Rational& expected) {
        out.push_back({"fact:" + key, recomputed == expected, recomputed, expected});
    };
    const Mat J = e.j.big_j();
    for (const auto& [key, value] : e.expected_facts.items()) {
        if (key == "TrJ") {
            check(key, J.trace(), Rational::parse(value.get<std::string>()));
        } else if (key == "TrJ2") {
            check(key, trace_product({J, J}), Rational::parse(value.get<std::string>()));
        } else if (key == "TrJ3") {
            check(key, trace_product({J, J, J}), Rational::parse(value.get<std::string>()));
        } else if (key == "J_diag") {
            for (std::size_t i = 0; i < value.size(); ++i)
                check(key + "[" + std::to_string(i) + "]", J.at(i, i),
                      Rational::parse(value.at(i).get<std::string>()));
        } else if (key == "I_aabccb") {
            check(key, eval_trace_invariant("aabccb", e.j),
                  Rational::parse(value.get<std::string>()));
        } else if (key == "heisenberg") {
            check(key, Rational(is_heisenberg_type(e.j).ok ? 1 : 0),
                  Rational(value.get<bool>() ? 1 : 0));
        } else if (key == "omega_trace_sq") {
            check(key, omega_trace_squared(e.j), Rational::parse(value.get<std::string>()));
        } else if (key == "ric_v" || key == "ric_z") {
            const Rational c = Rational::parse(value.get<std::string>());
            const FrameTensor ric = ricci(build_algebra(e.j));
            const int m = static_cast<int>(e.j.m), n = static_cast<int>(e.j.total_dim());
            const int lo = key == "ric_v" ? 0 : m;
            const int hi = key == "ric_v" ? m : n;
            Rational deviation;
            for (int i = lo; i < hi; ++i)
                for (int k = lo; k < hi; ++k) {
                    const Rational d = ric.get({i, k}) - (i == k ? c : Rational(0));
                    deviation += d * d;
                }
            check(key, deviation, Rational(0));
        } else {
            out.push_back({"fact:" + key + ":unknown-key", false, Rational(0), Rational(1)});
        }
    }
    return out;
}

} // namespace nilinv
