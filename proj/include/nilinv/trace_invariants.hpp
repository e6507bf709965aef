#pragma once

#include "nilinv/errors.hpp"
#include "nilinv/jmap.hpp"

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace nilinv {

/// A parsed partition word such as "aabccb" or "ab|ab": groups of index
/// letters, '|'-separated, with every letter occurring exactly twice across
/// the whole spec. Each group denotes one trace factor; letters are summed
/// over the central frame.
struct TraceSpec {
    std::vector<std::string> groups;
    std::string letters; // distinct letters in order of first appearance

    int q() const { return static_cast<int>(letters.size()); }
    std::string str() const {
        std::string s;
        for (std::size_t i = 0; i < groups.size(); ++i) {
            if (i) s += '|';
            s += groups[i];
        }
        return s;
    }
};

/// Grammar: WORD := [A-Za-z]+ ; SPEC := WORD ('|' WORD)*.
/// Throws ParseError with a 0-based character position on malformed input.
inline TraceSpec parse_spec(std::string_view s) {
    TraceSpec spec;
    std::string current;
    std::size_t group_start = 0;
    std::map<char, int> count;
    std::map<char, std::size_t> first_pos;
    const auto close_group = [&](std::size_t pos) {
        if (current.empty())
            throw ParseError("empty group in trace spec", group_start);
        spec.groups.push_back(current);
        current.clear();
        group_start = pos + 1;
    };
    for (std::size_t i = 0; i < s.size(); ++i) {
        const char c = s[i];
        if (c == '|') {
            close_group(i);
        } else if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z')) {
            current += c;
            if (count.find(c) == count.end()) {
                spec.letters += c;
                first_pos[c] = i;
            }
            ++count[c];
        } else {
            throw ParseError(std::string("illegal character '") + c + "' in trace spec", i);
        }
    }
    close_group(s.size());
    for (char c : spec.letters)
        if (count[c] != 2)
            throw ParseError(std::string("letter '") + c + "' occurs " +
                                 std::to_string(count[c]) + " times, expected exactly 2",
                             first_pos[c]);
    return spec;
}

namespace detail {

// Trace of the word product for every assignment of the group's letters,
// sharing prefix products along the enumeration. Key packs letter values of
// the group's own distinct letters (first-appearance order) in base r.
inline void group_traces_rec(const std::string& word, std::size_t pos, const JMap& j,
                             const std::string& group_letters, std::vector<int>& assign,
                             const Mat* prefix, std::map<std::vector<int>, Rational>& out) {
    if (pos == word.size()) {
        out.emplace(assign, prefix ? prefix->trace() : Rational(static_cast<long long>(j.m)));
        return;
    }
    const char c = word[pos];
    const std::size_t li = group_letters.find(c);
    const auto step = [&](int val) {
        const Mat& jz = j.mats[static_cast<std::size_t>(val)];
        Mat next = prefix ? mat_mul(*prefix, jz) : jz;
        group_traces_rec(word, pos + 1, j, group_letters, assign, &next, out);
    };
    if (assign[li] >= 0) {
        step(assign[li]);
    } else {
        for (int v = 0; v < static_cast<int>(j.r); ++v) {
            assign[li] = v;
            step(v);
        }
        assign[li] = -1;
    }
}

} // namespace detail

/// Evaluates I_{k1..|..|..k2q}(j): the sum over one central index per letter
/// of the product over groups of Tr(j_{Z_.} ... j_{Z_.}). Exactly r^q
/// summands. Per-group partial products are memoized per call.
inline Rational eval_trace_invariant(const TraceSpec& spec, const JMap& j) {
    j.validate();
    if (j.r == 0) return Rational(0);

    // Per group: distinct letters (first-appearance order) and the table of
    // trace values per assignment of those letters.
    struct GroupEval {
        std::string letters;
        std::map<std::vector<int>, Rational> traces;
    };
    std::vector<GroupEval> evals;
    for (const std::string& word : spec.groups) {
        GroupEval g;
        for (char c : word)
            if (g.letters.find(c) == std::string::npos) g.letters += c;
        std::vector<int> assign(g.letters.size(), -1);
        detail::group_traces_rec(word, 0, j, g.letters, assign, nullptr, g.traces);
        evals.push_back(std::move(g));
    }

    // Sum over all assignments of the global letters.
    const int q = spec.q();
    std::vector<int> value(static_cast<std::size_t>(q), 0);
    Rational total;
    std::vector<int> key;
    const auto term = [&]() {
        Rational prod(1);
        for (const GroupEval& g : evals) {
            key.clear();
            for (char c : g.letters)
                key.push_back(value[spec.letters.find(c)]);
            const Rational& t = g.traces.at(key);
            if (t.is_zero()) return;
            prod *= t;
        }
        total += prod;
    };
    const auto rec = [&](auto&& self, int li) -> void {
        if (li == q) {
            term();
            return;
        }
        for (int v = 0; v < static_cast<int>(j.r); ++v) {
            value[static_cast<std::size_t>(li)] = v;
            self(self, li + 1);
        }
    };
    rec(rec, 0);
    return total;
}

inline Rational eval_trace_invariant(std::string_view spec, const JMap& j) {
    return eval_trace_invariant(parse_spec(spec), j);
}

/// The named low-order invariants that the closed curvature formulas are
/// built from, as an ordered (name, value) list.
inline std::vector<std::pair<std::string, Rational>> eval_named_basics(const JMap& j) {
    static const char* specs[] = {"aa",     "aa|bb",   "aabb",  "ab|ab",
                                  "abab",   "aabccb",  "aabcbc", "aabc|bc",
                                  "ac|bc|ab", "abc|abc", "acbc|ab"};
    std::vector<std::pair<std::string, Rational>> out;
    out.reserve(std::size(specs));
    for (const char* s : specs)
        out.emplace_back(std::string("I_") + s, eval_trace_invariant(s, j));
    return out;
}

} // namespace nilinv
