#pragma once

#include "nilinv/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace nilinv {

/// Multi-index array of exact rationals over a fixed orthonormal frame.
/// Indices run 0..dim-1 in every slot; lookup is total (absent = 0).
/// Stored sparse as a sorted vector of (packed index, value); zero
/// components are never stored. Immutable after construction.
class FrameTensor {
public:
    using Key = std::uint64_t;
    static constexpr int kBitsPerSlot = 6;
    static constexpr int kMaxDim = (1 << kBitsPerSlot) - 1;
    static constexpr int kMaxArity = 10;

    FrameTensor() : arity_(0), dim_(0) {}
    FrameTensor(int arity, int dim) : arity_(arity), dim_(dim) { check_shape(arity, dim); }

    int arity() const { return arity_; }
    int dim() const { return dim_; }
    std::size_t nnz() const { return entries_.size(); }
    bool is_zero() const { return entries_.empty(); }

    static Key pack(std::span<const int> idx) {
        Key k = 0;
        for (std::size_t i = 0; i < idx.size(); ++i)
            k |= static_cast<Key>(idx[i]) << (kBitsPerSlot * i);
        return k;
    }
    static int slot_of(Key k, int slot) {
        return static_cast<int>((k >> (kBitsPerSlot * slot)) & kMaxDim);
    }
    static Key with_slot(Key k, int slot, int value) {
        const Key mask = static_cast<Key>(kMaxDim) << (kBitsPerSlot * slot);
        return (k & ~mask) | (static_cast<Key>(value) << (kBitsPerSlot * slot));
    }

    const Rational& get(std::span<const int> idx) const {
        if (static_cast<int>(idx.size()) != arity_)
            throw std::invalid_argument("FrameTensor::get: wrong index count");
        for (int v : idx)
            if (v < 0 || v >= dim_) throw std::out_of_range("FrameTensor::get: index out of range");
        return get_key(pack(idx));
    }
    const Rational& get(std::initializer_list<int> idx) const {
        return get(std::span<const int>(idx.begin(), idx.size()));
    }
    const Rational& get_key(Key k) const {
        auto it = std::lower_bound(entries_.begin(), entries_.end(), k,
                                   [](const Entry& e, Key key) { return e.first < key; });
        if (it != entries_.end() && it->first == k) return it->second;
        static const Rational zero;
        return zero;
    }

    using Entry = std::pair<Key, Rational>;
    const std::vector<Entry>& entries() const { return entries_; }

    FrameTensor scaled(const Rational& c) const {
        FrameTensor t(arity_, dim_);
        if (c.is_zero()) return t;
        t.entries_ = entries_;
        for (auto& e : t.entries_) e.second *= c;
        return t;
    }

    friend bool operator==(const FrameTensor& a, const FrameTensor& b) {
        return a.arity_ == b.arity_ && a.dim_ == b.dim_ && a.entries_ == b.entries_;
    }
    friend bool operator!=(const FrameTensor& a, const FrameTensor& b) { return !(a == b); }

    class Builder;

private:
    static void check_shape(int arity, int dim) {
        if (arity < 0 || arity > kMaxArity) throw std::invalid_argument("FrameTensor: bad arity");
        if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("FrameTensor: bad dim");
    }

    int arity_, dim_;
    std::vector<Entry> entries_;
};

/// Accumulating builder: repeated add() on the same index tuple sums;
/// build() sorts, merges and drops exact zeros.
class FrameTensor::Builder {
public:
    Builder(int arity, int dim) : arity_(arity), dim_(dim) { FrameTensor::check_shape(arity, dim); }

    void add(std::span<const int> idx, const Rational& v) {
        if (v.is_zero()) return;
        raw_.emplace_back(FrameTensor::pack(idx), v);
    }
    void add(std::initializer_list<int> idx, const Rational& v) {
        add(std::span<const int>(idx.begin(), idx.size()), v);
    }
    void add_key(Key k, const Rational& v) {
        if (v.is_zero()) return;
        raw_.emplace_back(k, v);
    }

    FrameTensor build() {
        std::sort(raw_.begin(), raw_.end(),
                  [](const Entry& a, const Entry& b) { return a.first < b.first; });
        FrameTensor t(arity_, dim_);
        t.entries_.reserve(raw_.size());
        std::size_t i = 0;
        while (i < raw_.size()) {
            Key k = raw_[i].first;
            Rational sum = std::move(raw_[i].second);
            ++i;
            while (i < raw_.size() && raw_[i].first == k) {
                sum += raw_[i].second;
                ++i;
            }
            if (!sum.is_zero()) t.entries_.emplace_back(k, std::move(sum));
        }
        raw_.clear();
        raw_.shrink_to_fit();
        return t;
    }

private:
    int arity_, dim_;
    std::vector<Entry> raw_;
};

/// A perfect matching on 2N contraction slots: each slot appears in
/// exactly one pair; paired slots carry equal frame indices in the sum.
struct Pairing {
    int slots = 0;
    std::vector<std::pair<int, int>> pairs;

    void validate() const {
        if (slots % 2 != 0) throw std::invalid_argument("Pairing: odd slot count");
        if (static_cast<int>(pairs.size()) * 2 != slots)
            throw std::invalid_argument("Pairing: pairs do not cover slots");
        std::vector<int> seen(slots, 0);
        for (auto [a, b] : pairs) {
            if (a < 0 || b < 0 || a >= slots || b >= slots || a == b)
                throw std::invalid_argument("Pairing: bad slot pair");
            ++seen[a];
            ++seen[b];
        }
        for (int c : seen)
            if (c != 1) throw std::invalid_argument("Pairing: slot not covered exactly once");
    }
};

/// Builds a Pairing from index words in Einstein notation, one word per
/// tensor, e.g. {"ijkl","klpq","pqij"}; every letter must occur exactly twice.
inline Pairing make_pairing(std::span<const std::string_view> words) {
    Pairing p;
    std::unordered_map<char, std::vector<int>> where;
    int slot = 0;
    for (auto w : words)
        for (char c : w) where[c].push_back(slot++);
    p.slots = slot;
    std::vector<std::pair<int, int>> pairs;
    for (auto& [c, v] : where) {
        if (v.size() != 2)
            throw std::invalid_argument(std::string("make_pairing: letter '") + c +
                                        "' does not occur exactly twice");
        pairs.emplace_back(v[0], v[1]);
    }
    std::sort(pairs.begin(), pairs.end());
    p.pairs = std::move(pairs);
    p.validate();
    return p;
}
inline Pairing make_pairing(std::initializer_list<std::string_view> words) {
    return make_pairing(std::span<const std::string_view>(words.begin(), words.size()));
}

/// Complete trace of a tensor product with respect to a pairing: the sum,
/// over all assignments of one frame index per pair, of the product of the
/// tensors' components. Evaluates by sparse recursive enumeration; tensor
/// products are never materialized.
inline Rational complete_trace(std::span<const FrameTensor* const> tensors, const Pairing& pairing) {
    pairing.validate();
    int total_slots = 0;
    int dim = 0;
    for (const FrameTensor* t : tensors) {
        total_slots += t->arity();
        if (dim == 0) dim = t->dim();
        else if (t->dim() != dim) throw std::invalid_argument("complete_trace: dim mismatch");
    }
    if (total_slots != pairing.slots)
        throw std::invalid_argument("complete_trace: slot count does not match pairing");
    const int ntens = static_cast<int>(tensors.size());
    if (ntens == 0) return Rational(0);

    // Map global slots to (tensor, local slot).
    std::vector<int> tensor_of(total_slots), local_of(total_slots), offset(ntens);
    {
        int s = 0;
        for (int t = 0; t < ntens; ++t) {
            offset[t] = s;
            for (int l = 0; l < tensors[t]->arity(); ++l, ++s) {
                tensor_of[s] = t;
                local_of[s] = l;
            }
        }
    }

    const int nlabels = static_cast<int>(pairing.pairs.size());
    struct SlotInfo {
        std::vector<std::pair<int, int>> internal;   // (local_a, local_b), both in this tensor
        std::vector<std::pair<int, int>> bound;      // (local, label), partner in earlier tensor
        std::vector<std::pair<int, int>> defines;    // (local, label), partner in later tensor
    };
    std::vector<SlotInfo> info(ntens);
    for (int lab = 0; lab < nlabels; ++lab) {
        auto [a, b] = pairing.pairs[lab];
        int ta = tensor_of[a], tb = tensor_of[b];
        if (ta == tb) {
            info[ta].internal.emplace_back(local_of[a], local_of[b]);
        } else {
            if (ta > tb) { std::swap(a, b); std::swap(ta, tb); }
            info[ta].defines.emplace_back(local_of[a], lab);
            info[tb].bound.emplace_back(local_of[b], lab);
        }
    }
    for (auto& si : info) {
        std::sort(si.bound.begin(), si.bound.end());
        std::sort(si.defines.begin(), si.defines.end());
    }

    // Per tensor: entries filtered by internal-pair equality, grouped by the
    // packed values of the bound slots.
    auto signature_of_entry = [](FrameTensor::Key k, const std::vector<std::pair<int, int>>& bound) {
        FrameTensor::Key sig = 0;
        for (std::size_t i = 0; i < bound.size(); ++i)
            sig |= static_cast<FrameTensor::Key>(FrameTensor::slot_of(k, bound[i].first))
                   << (FrameTensor::kBitsPerSlot * i);
        return sig;
    };
    using Bucket = std::vector<const FrameTensor::Entry*>;
    std::vector<std::unordered_map<FrameTensor::Key, Bucket>> groups(ntens);
    for (int t = 0; t < ntens; ++t) {
        auto& g = groups[t];
        for (const auto& e : tensors[t]->entries()) {
            bool ok = true;
            for (auto [la, lb] : info[t].internal)
                if (FrameTensor::slot_of(e.first, la) != FrameTensor::slot_of(e.first, lb)) {
                    ok = false;
                    break;
                }
            if (ok) g[signature_of_entry(e.first, info[t].bound)].push_back(&e);
        }
    }

    Rational total;
    std::vector<int> labelval(nlabels, -1);
    // Depth-first over tensors; zero products are pruned by sparsity.
    auto dfs = [&](auto&& self, int t, const Rational& product) -> void {
        if (t == ntens) {
            total += product;
            return;
        }
        FrameTensor::Key sig = 0;
        for (std::size_t i = 0; i < info[t].bound.size(); ++i)
            sig |= static_cast<FrameTensor::Key>(labelval[info[t].bound[i].second])
                   << (FrameTensor::kBitsPerSlot * i);
        auto it = groups[t].find(sig);
        if (it == groups[t].end()) return;
        for (const FrameTensor::Entry* e : it->second) {
            for (auto [local, lab] : info[t].defines)
                labelval[lab] = FrameTensor::slot_of(e->first, local);
            self(self, t + 1, product * e->second);
        }
    };
    dfs(dfs, 0, Rational(1));
    return total;
}

inline Rational complete_trace(std::initializer_list<const FrameTensor*> tensors,
                               const Pairing& pairing) {
    return complete_trace(std::span<const FrameTensor* const>(tensors.begin(), tensors.size()),
                          pairing);
}

/// Einstein-notation front end: trace_expr({&R,&R}, {"ijkl","ijkl"}) = |R|^2.
inline Rational trace_expr(std::initializer_list<const FrameTensor*> tensors,
                           std::initializer_list<std::string_view> words) {
    return complete_trace(tensors, make_pairing(words));
}

/// Contraction of two slots of one tensor (sum over equal indices there).
inline FrameTensor contract(const FrameTensor& t, int slot_a, int slot_b) {
    if (slot_a == slot_b || slot_a < 0 || slot_b < 0 || slot_a >= t.arity() || slot_b >= t.arity())
        throw std::invalid_argument("contract: bad slots");
    if (slot_a > slot_b) std::swap(slot_a, slot_b);
    FrameTensor::Builder b(t.arity() - 2, t.dim());
    std::vector<int> idx(t.arity());
    std::vector<int> out(t.arity() - 2);
    for (const auto& e : t.entries()) {
        if (FrameTensor::slot_of(e.first, slot_a) != FrameTensor::slot_of(e.first, slot_b)) continue;
        int o = 0;
        for (int s = 0; s < t.arity(); ++s)
            if (s != slot_a && s != slot_b) out[o++] = FrameTensor::slot_of(e.first, s);
        b.add(out, e.second);
    }
    return b.build();
}

/// Sum of squared components, |T|^2, exact.
inline Rational norm_sq(const FrameTensor& t) {
    Rational s;
    for (const auto& e : t.entries()) s += e.second * e.second;
    return s;
}

/// |A - B|^2 without materializing the difference; both sorted entry lists
/// are merged in one pass.
inline Rational norm_sq_diff(const FrameTensor& a, const FrameTensor& b) {
    if (a.arity() != b.arity() || a.dim() != b.dim())
        throw std::invalid_argument("norm_sq_diff: shape mismatch");
    Rational s;
    const auto& ea = a.entries();
    const auto& eb = b.entries();
    std::size_t i = 0, j = 0;
    while (i < ea.size() || j < eb.size()) {
        if (j == eb.size() || (i < ea.size() && ea[i].first < eb[j].first)) {
            s += ea[i].second * ea[i].second;
            ++i;
        } else if (i == ea.size() || eb[j].first < ea[i].first) {
            s += eb[j].second * eb[j].second;
            ++j;
        } else {
            const Rational d = ea[i].second - eb[j].second;
            s += d * d;
            ++i;
            ++j;
        }
    }
    return s;
}

} // namespace nilinv
