#pragma once

#include "nilinv/matrix.hpp"

#include <json.hpp>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace nilinv {

/// The defining datum of a metric two-step nilpotent Lie algebra:
/// r skew-symmetric rational m x m matrices, one per central basis vector.
struct JMap {
    std::size_t m = 0; // dim of the horizontal space
    std::size_t r = 0; // dim of the center
    std::vector<Mat> mats;

    std::size_t total_dim() const { return m + r; }

    /// Throws std::invalid_argument naming the offending matrix/entry
    /// if some mats[alpha] is not skew-symmetric m x m.
    void validate() const {
        if (mats.size() != r) throw std::invalid_argument("JMap: expected r matrices");
        for (std::size_t a = 0; a < r; ++a) {
            const Mat& j = mats[a];
            if (j.rows() != m || j.cols() != m)
                throw std::invalid_argument("JMap: matrix " + std::to_string(a + 1) +
                                            " is not m x m");
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t k = 0; k <= i; ++k)
                    if (j.at(i, k) != -j.at(k, i))
                        throw std::invalid_argument(
                            "JMap: matrix " + std::to_string(a + 1) + " not skew at entry (" +
                            std::to_string(i + 1) + "," + std::to_string(k + 1) + ")");
        }
    }

    /// j_Z for Z = sum_alpha z[alpha] Z_alpha.
    Mat at(std::span<const Rational> z) const {
        if (z.size() != r) throw std::invalid_argument("JMap::at: wrong center vector size");
        Mat s(m, m);
        for (std::size_t a = 0; a < r; ++a)
            if (!z[a].is_zero()) s += mats[a] * z[a];
        return s;
    }
    Mat at_int(std::span<const long long> z) const {
        std::vector<Rational> q(z.begin(), z.end());
        return at(q);
    }

    /// J = sum_alpha j_alpha^2 (symmetric, negative semidefinite).
    Mat big_j() const {
        Mat s(m, m);
        for (const Mat& j : mats) s += mat_mul(j, j);
        return s;
    }

    bool all_entries_integral() const {
        for (const Mat& j : mats)
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t k = 0; k < m; ++k)
                    if (!j.at(i, k).is_integer()) return false;
        return true;
    }

    friend bool operator==(const JMap& a, const JMap& b) {
        return a.m == b.m && a.r == b.r && a.mats == b.mats;
    }
};

/// Shared j-map wire format:
///   {"m": int, "r": int, "mats": [[["p/q", ...], ...], ...]}
/// rationals as strings, matrices row-major. Plain JSON integers are
/// accepted on input; output always uses strings.
inline JMap jmap_from_json(const nlohmann::json& doc) {
    if (!doc.is_object() || !doc.contains("m") || !doc.contains("r") || !doc.contains("mats"))
        throw std::invalid_argument("jmap: expected object with m, r, mats");
    JMap j;
    j.m = doc.at("m").get<std::size_t>();
    j.r = doc.at("r").get<std::size_t>();
    const auto& mats = doc.at("mats");
    if (!mats.is_array() || mats.size() != j.r)
        throw std::invalid_argument("jmap: mats must be an array of r matrices");
    for (const auto& mj : mats) {
        if (!mj.is_array() || mj.size() != j.m)
            throw std::invalid_argument("jmap: each matrix must have m rows");
        Mat mat(j.m, j.m);
        for (std::size_t i = 0; i < j.m; ++i) {
            const auto& row = mj.at(i);
            if (!row.is_array() || row.size() != j.m)
                throw std::invalid_argument("jmap: each row must have m entries");
            for (std::size_t k = 0; k < j.m; ++k) {
                const auto& cell = row.at(k);
                if (cell.is_string())
                    mat.at(i, k) = Rational::parse(cell.get<std::string>());
                else if (cell.is_number_integer())
                    mat.at(i, k) = Rational(cell.get<long long>());
                else
                    throw std::invalid_argument("jmap: entries must be rational strings");
            }
        }
        j.mats.push_back(std::move(mat));
    }
    j.validate();
    return j;
}

inline JMap jmap_from_json_text(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("jmap: JSON parse error: ") + e.what());
    }
    return jmap_from_json(doc);
}

inline nlohmann::ordered_json jmap_to_json(const JMap& j) {
    nlohmann::ordered_json doc;
    doc["m"] = j.m;
    doc["r"] = j.r;
    auto mats = nlohmann::ordered_json::array();
    for (const Mat& mat : j.mats) {
        auto mj = nlohmann::ordered_json::array();
        for (std::size_t i = 0; i < j.m; ++i) {
            auto row = nlohmann::ordered_json::array();
            for (std::size_t k = 0; k < j.m; ++k) row.push_back(mat.at(i, k).str());
            mj.push_back(std::move(row));
        }
        mats.push_back(std::move(mj));
    }
    doc["mats"] = std::move(mats);
    return doc;
}

} // namespace nilinv
