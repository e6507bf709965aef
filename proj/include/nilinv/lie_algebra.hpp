#pragma once

#include "nilinv/errors.hpp"
#include "nilinv/frame_tensor.hpp"
#include "nilinv/jmap.hpp"

#include <cstddef>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace nilinv {

/// Christoffel data of the left-invariant connection in the orthonormal
/// frame: gamma(a,b,c) is the e_c-coefficient of the derivative of e_b in
/// direction e_a. Also keeps an index by output coefficient, which is what
/// covariant differentiation consumes.
struct ConnectionCoefficients {
    FrameTensor gamma; // arity 3
    // by_output[c] lists (a, b, gamma(a,b,c)) over all nonzero coefficients.
    std::vector<std::vector<std::tuple<int, int, Rational>>> by_output;

    static ConnectionCoefficients from_tensor(FrameTensor g) {
        ConnectionCoefficients c;
        c.by_output.resize(g.dim());
        for (const auto& e : g.entries()) {
            const int a = FrameTensor::slot_of(e.first, 0);
            const int b = FrameTensor::slot_of(e.first, 1);
            const int out = FrameTensor::slot_of(e.first, 2);
            c.by_output[out].emplace_back(a, b, e.second);
        }
        c.gamma = std::move(g);
        return c;
    }
};

/// The metric two-step nilpotent Lie algebra attached to a j-map, with its
/// bracket tensor, the operator J = sum j_alpha^2, and the connection.
/// Frame convention: indices 0..m-1 are the horizontal frame vectors,
/// indices m..m+r-1 the central ones. Immutable; safe to share.
struct MetricLieAlgebra {
    JMap j;
    FrameTensor bracket; // arity 3: [e_a, e_b] = sum_c bracket(a,b,c) e_c
    Mat big_j;           // m x m
    ConnectionCoefficients conn;

    int m() const { return static_cast<int>(j.m); }
    int r() const { return static_cast<int>(j.r); }
    int dim() const { return m() + r(); }
    bool is_central(int idx) const { return idx >= m(); }
};

/// Builds the algebra from a validated j-map. The bracket has
/// bracket(k,l,m+alpha) = <j_alpha X_k, X_l>; all other blocks vanish.
inline MetricLieAlgebra build_algebra(const JMap& jm) {
    jm.validate();
    MetricLieAlgebra alg;
    alg.j = jm;
    const int m = alg.m(), r = alg.r(), n = m + r;

    FrameTensor::Builder br(3, n);
    FrameTensor::Builder ga(3, n);
    const Rational half(1, 2), neg_half(-1, 2);
    for (int a = 0; a < r; ++a) {
        const Mat& ja = jm.mats[static_cast<std::size_t>(a)];
        for (int l = 0; l < m; ++l)
            for (int k = 0; k < m; ++k) {
                const Rational& c = ja.at(static_cast<std::size_t>(l), static_cast<std::size_t>(k));
                if (c.is_zero()) continue;
                // [X_k, X_l] has Z_alpha coefficient <j_alpha X_k, X_l> = (j_alpha)_{l,k}
                br.add({k, l, m + a}, c);
                // nabla_X Y = [X,Y]/2; nabla_X Z = nabla_Z X = -j_Z X / 2
                ga.add({k, l, m + a}, half * c);
                ga.add({k, m + a, l}, neg_half * c);
                ga.add({m + a, k, l}, neg_half * c);
            }
    }
    alg.bracket = br.build();
    alg.big_j = jm.big_j();
    alg.conn = ConnectionCoefficients::from_tensor(ga.build());
    return alg;
}

namespace detail {

// Canonical curvature component <R(e_a,e_b)e_c,e_d> from the closed block
// formulas; the only nonzero patterns have an even, positive number of
// horizontal indices.
inline Rational curvature_component(const MetricLieAlgebra& alg, int a, int b, int c, int d) {
    const int m = alg.m();
    const bool va = a < m, vb = b < m, vc = c < m, vd = d < m;
    const int nv = int(va) + int(vb) + int(vc) + int(vd);
    if (nv == 0 || nv % 2 != 0) return Rational(0);

    int sign = 1;
    if (!va && vb) { std::swap(a, b); sign = -sign; }
    if (!vc && vd) { std::swap(c, d); sign = -sign; }
    const bool a_is_v = a < m, c_is_v = c < m;
    const auto jmat = [&](int central) -> const Mat& {
        return alg.j.mats[static_cast<std::size_t>(central - m)];
    };
    Rational v;
    if (nv == 4) {
        for (const Mat& jm : alg.j.mats) {
            const auto e = [&](int row, int col) -> const Rational& {
                return jm.at(static_cast<std::size_t>(row), static_cast<std::size_t>(col));
            };
            v += Rational(1, 4) * e(c, b) * e(d, a) - Rational(1, 4) * e(c, a) * e(d, b) -
                 Rational(1, 2) * e(b, a) * e(d, c);
        }
    } else if (a_is_v && !c_is_v) {
        // <R(X_a, X_b) Z_c, Z_d> = -<[j_c, j_d] X_a, X_b>/4
        const Mat& jc = jmat(c);
        const Mat& jd = jmat(d);
        Rational comm; // ([j_c, j_d])_{b,a}
        for (int t = 0; t < m; ++t)
            comm += jc.at(static_cast<std::size_t>(b), static_cast<std::size_t>(t)) *
                        jd.at(static_cast<std::size_t>(t), static_cast<std::size_t>(a)) -
                    jd.at(static_cast<std::size_t>(b), static_cast<std::size_t>(t)) *
                        jc.at(static_cast<std::size_t>(t), static_cast<std::size_t>(a));
        v = Rational(-1, 4) * comm;
    } else if (!a_is_v && c_is_v) {
        // central first pair, horizontal second: <R(Z,W)X,Y> = <R(X,Y)Z,W>
        return Rational(sign) * curvature_component(alg, c, d, a, b);
    } else {
        // <R(X_a, Z_b) X_c, Z_d> = <j_d X_a, j_b X_c>/4
        const Mat& jb = jmat(b);
        const Mat& jd = jmat(d);
        for (int t = 0; t < m; ++t)
            v += jd.at(static_cast<std::size_t>(t), static_cast<std::size_t>(a)) *
                 jb.at(static_cast<std::size_t>(t), static_cast<std::size_t>(c));
        v *= Rational(1, 4);
    }
    return Rational(sign) * v;
}

} // namespace detail

/// Curvature tensor R(a,b,c,d) = <R(e_a,e_b)e_c,e_d> from the connection
/// alone, with the sign convention R(X,Y) = nabla_[X,Y] - [nabla_X, nabla_Y].
/// Serves as the independent route against the closed block formulas.
inline FrameTensor curvature_from_connection(const MetricLieAlgebra& alg) {
    const int n = alg.dim();
    // densify bracket and gamma for O(1) lookups
    std::vector<Rational> B(static_cast<std::size_t>(n) * n * n), G(B.size());
    const auto id3 = [n](int a, int b, int c) {
        return (static_cast<std::size_t>(a) * n + b) * n + c;
    };
    for (const auto& e : alg.bracket.entries())
        B[id3(FrameTensor::slot_of(e.first, 0), FrameTensor::slot_of(e.first, 1),
              FrameTensor::slot_of(e.first, 2))] = e.second;
    for (const auto& e : alg.conn.gamma.entries())
        G[id3(FrameTensor::slot_of(e.first, 0), FrameTensor::slot_of(e.first, 1),
              FrameTensor::slot_of(e.first, 2))] = e.second;
    // nonzero output lists for the inner sums
    std::vector<std::vector<int>> bnz(static_cast<std::size_t>(n) * n), gnz(bnz.size());
    const auto id2 = [n](int a, int b) { return static_cast<std::size_t>(a) * n + b; };
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int s = 0; s < n; ++s) {
                if (!B[id3(a, b, s)].is_zero()) bnz[id2(a, b)].push_back(s);
                if (!G[id3(a, b, s)].is_zero()) gnz[id2(a, b)].push_back(s);
            }

    FrameTensor::Builder out(4, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (a == b) continue;
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d) {
                    Rational v;
                    for (int s : bnz[id2(a, b)]) v += B[id3(a, b, s)] * G[id3(s, c, d)];
                    for (int s : gnz[id2(b, c)]) v -= G[id3(b, c, s)] * G[id3(a, s, d)];
                    for (int s : gnz[id2(a, c)]) v += G[id3(a, c, s)] * G[id3(b, s, d)];
                    if (!v.is_zero()) out.add({a, b, c, d}, v);
                }
        }
    return out.build();
}

/// Curvature tensor from the closed block formulas. Always cross-checked
/// against the connection route; exact disagreement is a hard error, since
/// a silent sign slip here would poison every downstream invariant.
inline FrameTensor curvature_tensor(const MetricLieAlgebra& alg) {
    const int n = alg.dim();
    FrameTensor::Builder out(4, n);
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = c + 1; d < n; ++d) {
                    if (std::make_pair(a, b) > std::make_pair(c, d)) continue;
                    const Rational v = detail::curvature_component(alg, a, b, c, d);
                    if (v.is_zero()) continue;
                    const Rational nv = -v;
                    out.add({a, b, c, d}, v);
                    out.add({b, a, c, d}, nv);
                    out.add({a, b, d, c}, nv);
                    out.add({b, a, d, c}, v);
                    if (a != c || b != d) {
                        out.add({c, d, a, b}, v);
                        out.add({d, c, a, b}, nv);
                        out.add({c, d, b, a}, nv);
                        out.add({d, c, b, a}, v);
                    }
                }
    FrameTensor R = out.build();
    if (R != curvature_from_connection(alg))
        throw std::logic_error("curvature_tensor: block formulas disagree with connection route");
    return R;
}

/// Ricci tensor from the closed blocks: horizontal block J/2, central block
/// -Tr(j_a j_b)/4, mixed block zero.
inline FrameTensor ricci(const MetricLieAlgebra& alg) {
    const int m = alg.m(), r = alg.r(), n = alg.dim();
    FrameTensor::Builder out(2, n);
    const Rational half(1, 2), neg_quarter(-1, 4);
    for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
            const Rational& v = alg.big_j.at(static_cast<std::size_t>(k), static_cast<std::size_t>(l));
            if (!v.is_zero()) out.add({k, l}, half * v);
        }
    for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b) {
            const Rational t = trace_product({alg.j.mats[static_cast<std::size_t>(a)],
                                              alg.j.mats[static_cast<std::size_t>(b)]});
            if (!t.is_zero()) out.add({m + a, m + b}, neg_quarter * t);
        }
    return out.build();
}

/// Covariant derivative of a constant-component frame tensor; the new
/// derivative-direction slot comes first. Iterating yields any nabla^p.
/// Throws ResourceLimitError if the predicted work exceeds max_contributions.
inline FrameTensor covariant_derivative(const FrameTensor& t, const ConnectionCoefficients& conn,
                                        std::size_t max_contributions = static_cast<std::size_t>(-1)) {
    if (t.arity() > 0 && t.dim() != conn.gamma.dim())
        throw std::invalid_argument("covariant_derivative: dimension mismatch");
    const int k = t.arity();
    const int dim = conn.gamma.dim();
    if (k == 0) return FrameTensor(1, dim); // frame components are constant

    std::size_t predicted = 0;
    for (const auto& e : t.entries())
        for (int i = 0; i < k; ++i)
            predicted += conn.by_output[static_cast<std::size_t>(FrameTensor::slot_of(e.first, i))].size();
    if (predicted > max_contributions)
        throw ResourceLimitError("covariant_derivative: predicted " + std::to_string(predicted) +
                                 " contributions exceeds budget of " +
                                 std::to_string(max_contributions));

    FrameTensor::Builder out(k + 1, dim);
    std::vector<int> idx(static_cast<std::size_t>(k) + 1);
    for (const auto& e : t.entries()) {
        for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i) + 1] = FrameTensor::slot_of(e.first, i);
        for (int i = 0; i < k; ++i) {
            const int s = idx[static_cast<std::size_t>(i) + 1];
            for (const auto& [dir, repl, g] : conn.by_output[static_cast<std::size_t>(s)]) {
                idx[0] = dir;
                idx[static_cast<std::size_t>(i) + 1] = repl;
                out.add(idx, -(g * e.second));
                idx[static_cast<std::size_t>(i) + 1] = s;
            }
        }
    }
    return out.build();
}

/// True iff all bracket coefficients of standard-basis pairs are integers,
/// i.e. the standard lattice generates a discrete cocompact subgroup.
inline bool gamma_lattice_closure_check(const MetricLieAlgebra& alg) {
    for (const auto& e : alg.bracket.entries())
        if (!e.second.is_integer()) return false;
    return true;
}

} // namespace nilinv
