#pragma once

#include "nilinv/curvature_invariants.hpp"
#include "nilinv/heisenberg_type.hpp"

#include <array>
#include <string>
#include <vector>

namespace nilinv {

/// Selects the Clifford module (m_+)^a + (m_-)^b over the rank-r Clifford
/// algebra. Supported center dimensions: 3 (quaternionic, d=4) and
/// 7 (octonionic, d=8).
struct CliffordModuleSpec {
    std::size_t r = 3;
    std::size_t a = 1;
    std::size_t b = 0;

    static std::size_t simple_module_dim(std::size_t r) {
        if (r == 3) return 4;
        if (r == 7) return 8;
        throw std::invalid_argument("CliffordModuleSpec: unsupported center dimension r=" +
                                    std::to_string(r) + " (supported: 3, 7)");
    }
    std::size_t d() const { return simple_module_dim(r); }
    std::size_t m() const { return (a + b) * d(); }
    void validate() const {
        simple_module_dim(r);
        if (a + b < 1) throw std::invalid_argument("CliffordModuleSpec: a + b must be >= 1");
    }
};

namespace detail {

// Left multiplication by the imaginary quaternion units on basis (1,i,j,k).
inline std::vector<Mat> quaternion_generators() {
    return {
        Mat::from_rows({{0, -1, 0, 0}, {1, 0, 0, 0}, {0, 0, 0, -1}, {0, 0, 1, 0}}),
        Mat::from_rows({{0, 0, -1, 0}, {0, 0, 0, 1}, {1, 0, 0, 0}, {0, -1, 0, 0}}),
        Mat::from_rows({{0, 0, 0, -1}, {0, 0, -1, 0}, {0, 1, 0, 0}, {1, 0, 0, 0}}),
    };
}

// Left multiplication by the imaginary octonion units e_1..e_7 on basis
// (e_0..e_7), with products fixed by the Fano triples
// (1,2,3),(1,4,5),(1,6,7),(2,4,6),(2,5,7),(3,4,7),(3,5,6) and cyclic signs.
inline std::vector<Mat> octonion_generators() {
    static const int triples[7][3] = {{1, 2, 3}, {1, 4, 5}, {1, 6, 7}, {2, 4, 6},
                                      {2, 5, 7}, {3, 4, 7}, {3, 5, 6}};
    int prod[8][8] = {};  // signed result index of e_a e_b; 0 entries filled below
    int sgn[8][8] = {};
    for (int a = 0; a < 8; ++a) {
        prod[0][a] = prod[a][0] = a;
        sgn[0][a] = sgn[a][0] = 1;
    }
    for (int a = 1; a < 8; ++a) {
        prod[a][a] = 0;
        sgn[a][a] = -1;
    }
    for (const auto& t : triples)
        for (int i = 0; i < 3; ++i) {
            const int p = t[i], q = t[(i + 1) % 3], s = t[(i + 2) % 3];
            prod[p][q] = s;
            sgn[p][q] = 1;
            prod[q][p] = s;
            sgn[q][p] = -1;
        }
    std::vector<Mat> gens;
    for (int a = 1; a < 8; ++a) {
        Mat L(8, 8);
        for (int u = 0; u < 8; ++u)
            L.at(static_cast<std::size_t>(prod[a][u]), static_cast<std::size_t>(u)) = sgn[a][u];
        gens.push_back(std::move(L));
    }
    return gens;
}

// Generators of the simple module on which the (ordered) product of all
// generators acts as +Id; the table product is computed and the generators
// are globally negated when it comes out as -Id.
inline std::vector<Mat> plus_module_generators(std::size_t r) {
    std::vector<Mat> gens = (r == 3) ? quaternion_generators() : octonion_generators();
    Mat omega = gens[0];
    for (std::size_t i = 1; i < gens.size(); ++i) omega = mat_mul(omega, gens[i]);
    const Mat id = Mat::identity(gens[0].rows());
    if (omega == -id) {
        if (r % 2 == 0) throw std::logic_error("plus_module_generators: cannot flip omega sign");
        for (Mat& g : gens) g = -g;
    } else if (omega != id) {
        throw std::logic_error("plus_module_generators: omega is not +-Id");
    }
    return gens;
}

} // namespace detail

/// The Heisenberg-type j-map of the module (m_+)^a + (m_-)^b: r skew block
/// matrices with entries in {-1,0,1}; the minus blocks carry the negated
/// generators.
inline JMap build_clifford_j(const CliffordModuleSpec& spec) {
    spec.validate();
    const std::size_t d = spec.d(), m = spec.m();
    const std::vector<Mat> plus = detail::plus_module_generators(spec.r);
    JMap j;
    j.m = m;
    j.r = spec.r;
    for (std::size_t alpha = 0; alpha < spec.r; ++alpha) {
        Mat big(m, m);
        for (std::size_t blk = 0; blk < spec.a + spec.b; ++blk) {
            const bool minus = blk >= spec.a;
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t k = 0; k < d; ++k) {
                    const Rational& v = plus[alpha].at(i, k);
                    if (!v.is_zero()) big.at(blk * d + i, blk * d + k) = minus ? -v : v;
                }
        }
        j.mats.push_back(std::move(big));
    }
    j.validate();
    return j;
}

inline JMap build_clifford_j(std::size_t r, std::size_t a, std::size_t b) {
    return build_clifford_j(CliffordModuleSpec{r, a, b});
}

/// (Tr(j_1 ... j_r))^2, the square of the volume-element trace. Requires a
/// Heisenberg-type map; the square makes the plus/minus naming convention
/// unobservable.
inline Rational omega_trace_squared(const JMap& j) {
    if (!is_heisenberg_type(j))
        throw std::invalid_argument("omega_trace_squared: map is not Heisenberg type");
    const Rational t = trace_product(std::span<const Mat>(j.mats));
    return t * t;
}

/// The curvature operator restricted and projected to the wedge square of
/// the horizontal space, on the ordered orthonormal basis
/// {X_k ^ X_l : k < l} (lexicographic). Symmetric.
struct WedgeOperator {
    std::size_t m = 0;
    std::vector<std::pair<int, int>> basis;
    Mat matrix;
};

inline WedgeOperator wedge_operator(TensorCache& tc) {
    WedgeOperator w;
    const int m = tc.alg().m();
    w.m = static_cast<std::size_t>(m);
    for (int k = 0; k < m; ++k)
        for (int l = k + 1; l < m; ++l) w.basis.emplace_back(k, l);
    const std::size_t n = w.basis.size();
    const FrameTensor& R = tc.R();
    w.matrix = Mat(n, n);
    for (std::size_t col = 0; col < n; ++col) {
        const auto [k, l] = w.basis[col];
        for (std::size_t row = 0; row < n; ++row) {
            const auto [p, q] = w.basis[row];
            w.matrix.at(row, col) = R.get({k, l, p, q});
        }
    }
    return w;
}

/// Power traces Tr(W^q) for q = 1..qmax, exact.
inline std::vector<Rational> wedge_power_traces(const WedgeOperator& w, int qmax) {
    std::vector<Rational> out;
    Mat p = w.matrix;
    for (int q = 1; q <= qmax; ++q) {
        if (q > 1) p = mat_mul(p, w.matrix);
        out.push_back(p.trace());
    }
    return out;
}

/// Closed form for Tr((R^{v^v})^q) in the Heisenberg-type case:
///   (-1/4)^q ( I_{w|w}/2 - I_{ww}/2 + r(2-r+m)^q - r(2-r)^q ),
/// where w is a word of q distinct letters.
inline Rational wedge_trace_closed_form(const JMap& j, int q) {
    if (!is_heisenberg_type(j))
        throw std::invalid_argument("wedge_trace_closed_form: map is not Heisenberg type");
    if (q < 1 || q > 26) throw std::invalid_argument("wedge_trace_closed_form: bad power");
    std::string w;
    for (int i = 0; i < q; ++i) w += static_cast<char>('a' + i);
    const Rational i_split = eval_trace_invariant(w + "|" + w, j);
    const Rational i_joined = eval_trace_invariant(w + w, j);
    const Rational m(static_cast<long long>(j.m)), r(static_cast<long long>(j.r));
    const Rational base_in = Rational(2) - r + m, base_out = Rational(2) - r;
    return Rational(-1, 4).pow(static_cast<unsigned>(q)) *
           (i_split / Rational(2) - i_joined / Rational(2) + r * base_in.pow(static_cast<unsigned>(q)) -
            r * base_out.pow(static_cast<unsigned>(q)));
}

/// Necessary-condition fingerprint for curvature equivalence: the exact
/// characteristic polynomial of the Ricci operator (an exact encoding of
/// its eigenvalue multiset), the rational eigenvalues when the polynomial
/// splits over Q, and the wedge power traces up to qmax.
struct CurvatureFingerprint {
    std::vector<Rational> ricci_char_poly; // descending powers, monic
    bool ricci_spectrum_rational = false;
    std::vector<Rational> ricci_eigenvalues; // ascending, with multiplicity, when rational
    std::vector<Rational> wedge_traces;      // q = 1..qmax

    friend bool operator==(const CurvatureFingerprint& x, const CurvatureFingerprint& y) {
        return x.ricci_char_poly == y.ricci_char_poly && x.wedge_traces == y.wedge_traces;
    }
    friend bool operator!=(const CurvatureFingerprint& x, const CurvatureFingerprint& y) {
        return !(x == y);
    }
};

namespace detail {

// Rational roots of a monic rational polynomial (descending coefficients)
// within [-bound, bound], by exhaustive exact evaluation of the finitely
// many candidates p/q with q | lcm of denominators. Returns all roots with
// multiplicity via deflation; ok=false if the candidate range is too large.
inline bool rational_roots(std::vector<Rational> poly, const Rational& bound,
                           std::vector<Rational>& roots) {
    roots.clear();
    BigInt den = 1;
    for (const Rational& c : poly) den = boost::multiprecision::lcm(den, c.denominator());
    // substitute lambda = t/den: integer roots t of the rescaled polynomial
    const Rational tb = bound * Rational(den) + Rational(1);
    if (tb > Rational(2'000'000)) return false;
    const long long tmax = static_cast<long long>(tb.to_double());
    const auto eval = [&](const std::vector<Rational>& p, const Rational& x) {
        Rational acc;
        for (const Rational& c : p) acc = acc * x + c;
        return acc;
    };
    const auto deflate = [&](std::vector<Rational>& p, const Rational& root) {
        // synthetic division by (lambda - root); assumes exact root
        std::vector<Rational> q(p.size() - 1);
        Rational carry;
        for (std::size_t i = 0; i + 1 < p.size(); ++i) {
            carry = p[i] + carry * root;
            q[i] = carry;
        }
        p = std::move(q);
    };
    for (long long t = -tmax; t <= tmax && poly.size() > 1; ++t) {
        const Rational cand(t, 1);
        const Rational lambda = cand / Rational(den);
        while (poly.size() > 1 && eval(poly, lambda).is_zero()) {
            roots.push_back(lambda);
            deflate(poly, lambda);
        }
    }
    std::sort(roots.begin(), roots.end());
    return poly.size() == 1; // fully split
}

} // namespace detail

inline CurvatureFingerprint curvature_fingerprint(TensorCache& tc, int qmax) {
    CurvatureFingerprint fp;
    const FrameTensor& ric = tc.ric();
    const int n = tc.dim();
    Mat ric_op(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
    for (const auto& e : ric.entries())
        ric_op.at(static_cast<std::size_t>(FrameTensor::slot_of(e.first, 0)),
                  static_cast<std::size_t>(FrameTensor::slot_of(e.first, 1))) = e.second;
    fp.ricci_char_poly = char_poly(ric_op);
    // Gershgorin bound on the spectrum
    Rational bound;
    for (int i = 0; i < n; ++i) {
        Rational row;
        for (int k = 0; k < n; ++k)
            row += ric_op.at(static_cast<std::size_t>(i), static_cast<std::size_t>(k)).abs();
        if (row > bound) bound = row;
    }
    fp.ricci_spectrum_rational =
        detail::rational_roots(fp.ricci_char_poly, bound, fp.ricci_eigenvalues);
    const WedgeOperator w = wedge_operator(tc);
    fp.wedge_traces = wedge_power_traces(w, qmax);
    return fp;
}

/// Runs the full invariant battery on a Heisenberg-type pair with equal
/// (m, r) and reports per-invariant equality, capped at the given order.
struct OrderEqualityScan {
    std::vector<std::string> ids;
    std::vector<bool> equal;
    InvariantReport left, right;

    std::vector<std::string> differing() const {
        std::vector<std::string> d;
        for (std::size_t i = 0; i < ids.size(); ++i)
            if (!equal[i]) d.push_back(ids[i]);
        return d;
    }
};

inline OrderEqualityScan heisenberg_order_equality_scan(TensorCache& a, TensorCache& b,
                                                        int max_order = 6,
                                                        const InvariantOptions& opt = {}) {
    const JMap& ja = a.alg().j;
    const JMap& jb = b.alg().j;
    if (!is_heisenberg_type(ja) || !is_heisenberg_type(jb))
        throw std::invalid_argument("heisenberg_order_equality_scan: maps must be Heisenberg type");
    if (ja.m != jb.m || ja.r != jb.r)
        throw std::invalid_argument("heisenberg_order_equality_scan: (m, r) mismatch");
    OrderEqualityScan scan;
    scan.left = oracle_invariants(a, opt);
    scan.right = oracle_invariants(b, opt);
    for (const std::string& id : invariant_ids()) {
        if (invariant_order(id) > max_order) continue;
        if (!scan.left.has(id) || !scan.right.has(id)) continue;
        scan.ids.push_back(id);
        scan.equal.push_back(scan.left.get(id) == scan.right.get(id));
    }
    return scan;
}

} // namespace nilinv
