#pragma once

#include <json.hpp>

#include <ostream>
#include <string>

namespace nilinv {

using Json = nlohmann::ordered_json;

inline Json report_skeleton(const std::string& command) {
    Json doc;
    doc["schema"] = "nilinv-report/1";
    doc["command"] = command;
    return doc;
}

namespace detail {

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    q += '"';
    return q;
}

inline std::string csv_scalar(const Json& v) {
    if (v.is_string()) return csv_escape(v.get<std::string>());
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_null()) return "";
    return v.dump(); // integers; rationals are always strings already
}

inline void csv_walk(std::ostream& os, const Json& v, const std::string& path) {
    if (v.is_object()) {
        for (const auto& [k, sub] : v.items())
            csv_walk(os, sub, path.empty() ? k : path + "." + k);
    } else if (v.is_array()) {
        std::size_t i = 0;
        for (const auto& sub : v) csv_walk(os, sub, path + "[" + std::to_string(i++) + "]");
    } else {
        os << csv_escape(path) << "," << csv_scalar(v) << "\n";
    }
}

} // namespace detail

/// Flat key,value rendering of a report; rational strings appear exactly as
/// in the JSON encoding.
inline void write_csv(std::ostream& os, const Json& doc) {
    os << "key,value\n";
    detail::csv_walk(os, doc, "");
}

inline void write_report(std::ostream& os, const Json& doc, const std::string& format) {
    if (format == "csv")
        write_csv(os, doc);
    else
        os << doc.dump(2) << "\n";
}

} // namespace nilinv
