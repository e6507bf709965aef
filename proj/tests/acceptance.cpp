// Acceptance suite: one criterion per number, one final pass/fail line per
// criterion. Run with no arguments for all criteria, or pass the numbers to
// run, e.g. `acceptance 1 5 7`. Exits nonzero if any selected criterion
// fails. Everything is exact rational arithmetic; there are no tolerances.

#include "nilinv/catalog.hpp"
#include "nilinv/cli.hpp"
#include "nilinv/curvature_invariants.hpp"
#include "nilinv/heisenberg.hpp"
#include "nilinv/isospec.hpp"

#include "test_support.hpp"

#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <set>
#include <string>

using namespace nilinv;

namespace {

struct Criterion {
    int number;
    std::string label;
    std::size_t checks = 0, failures = 0;

    void check(bool ok, const std::string& what) {
        ++checks;
        if (!ok) {
            ++failures;
            std::cout << "    FAIL " << what << "\n";
        }
    }
    void check_eq(const Rational& lhs, const Rational& rhs, const std::string& what) {
        check(lhs == rhs, what + ": " + lhs.str() + " != " + rhs.str());
    }
    bool finish() const {
        std::cout << "criterion-" << number << ": " << (failures == 0 ? "PASS" : "FAIL") << " ("
                  << (checks - failures) << "/" << checks << " checks) - " << label << "\n";
        return failures == 0;
    }
};

TensorCache& cache(const std::string& id) {
    static std::map<std::string, std::unique_ptr<TensorCache>> caches;
    auto it = caches.find(id);
    if (it == caches.end())
        it = caches.emplace(id, std::make_unique<TensorCache>(build_algebra(catalog_get(id).j)))
                 .first;
    return *it->second;
}

Rational tr_pow(const Mat& j, int p) {
    std::vector<Mat> ms(static_cast<std::size_t>(p), j);
    return trace_product(std::span<const Mat>(ms));
}

bool criterion1() {
    Criterion c{1, "golden exact values of the printed examples"};
    const Mat j4 = catalog_get("fourthree").j.big_j();
    const Mat j4p = catalog_get("fourthree-prime").j.big_j();
    c.check_eq(tr_pow(j4, 3), Rational(-2376), "fourthree Tr(J^3)");
    c.check_eq(tr_pow(j4p, 3), Rational(-2214), "fourthree-prime Tr(J^3)");
    const long long d4[] = {-12, -6, -6, -6}, d4p[] = {-3, -9, -9, -9};
    for (std::size_t i = 0; i < 4; ++i) {
        c.check_eq(j4.at(i, i), Rational(d4[i]), "fourthree J diagonal");
        c.check_eq(j4p.at(i, i), Rational(d4p[i]), "fourthree-prime J diagonal");
    }
    const JMap f5 = catalog_get("fivethree").j;
    const JMap f5p = catalog_get("fivethree-prime").j;
    const Mat j5 = f5.big_j(), j5p = f5p.big_j();
    const long long d5[] = {-2, -2, -1, -1, -2}, d5p[] = {-1, -1, -2, -2, -2};
    for (std::size_t i = 0; i < 5; ++i) {
        c.check_eq(j5.at(i, i), Rational(d5[i]), "fivethree J diagonal");
        c.check_eq(j5p.at(i, i), Rational(d5p[i]), "fivethree-prime J diagonal");
    }
    c.check_eq(eval_trace_invariant("aabccb", f5), Rational(-24), "fivethree I_aabccb");
    c.check_eq(eval_trace_invariant("aabccb", f5p), Rational(-26), "fivethree-prime I_aabccb");
    c.check_eq(j5.trace(), Rational(-8), "fivethree Tr(J)");
    c.check_eq(j5p.trace(), Rational(-8), "fivethree-prime Tr(J)");
    c.check_eq(tr_pow(j5, 2), Rational(14), "fivethree Tr(J^2)");
    c.check_eq(tr_pow(j5p, 2), Rational(14), "fivethree-prime Tr(J^2)");
    const JMap s6 = catalog_get("sixtwo").j;
    const JMap s6p = catalog_get("sixtwo-prime").j;
    c.check_eq(tr_pow(s6.big_j(), 2), Rational(630), "sixtwo Tr(J^2)");
    c.check_eq(tr_pow(s6p.big_j(), 2), Rational(598), "sixtwo-prime Tr(J^2)");
    // printed characteristic polynomial of both sixtwo maps, decided on a grid
    for (long long c1 = -3; c1 <= 3; ++c1)
        for (long long c2 = -3; c2 <= 3; ++c2) {
            const long long z[] = {c1, c2};
            const Rational a(2 * c1 * c1 + 21 * c2 * c2), b(c1 * c1 + 9 * c2 * c2),
                e(c1 * c1 + 8 * c2 * c2);
            const std::vector<Rational> expect = {Rational(1), Rational(0), a,          Rational(0),
                                                  b * b,       Rational(0), Rational(c2 * c2) * e * e};
            c.check(char_poly(s6.at_int(z)) == expect, "sixtwo char poly at grid point");
            c.check(char_poly(s6p.at_int(z)) == expect, "sixtwo-prime char poly at grid point");
        }
    return c.finish();
}

bool criterion2() {
    Criterion c{2, "closed-form lemma values equal the tensor oracle on every catalog algebra"};
    for (const std::string& id : catalog_ids())
        for (const IdentityCheck& chk : verify_lemma_formulas(cache(id)))
            c.check(chk.pass,
                    id + " " + chk.id + ": " + chk.lhs.str() + " != " + chk.rhs.str());
    return c.finish();
}

bool criterion3() {
    Criterion c{3, "homogeneous integral identities hold pointwise (dimension <= 12)"};
    for (const std::string& id : catalog_ids()) {
        TensorCache& tc = cache(id);
        if (tc.dim() > 12) continue;
        const InvariantReport rep = oracle_invariants(tc);
        c.check_eq(rep.get("lap_ric_ric"), rep.get("grad_ric2"), id + " <Delta ric, ric>");
        c.check_eq(rep.get("lap_R_R"), rep.get("grad_R2"), id + " <Delta R, R>");
        c.check_eq(rep.get("threestar"), -rep.get("trRic3") + rep.get("star"),
                   id + " threestar identity");
        c.check_eq(rep.get("Rcirc"),
                   -rep.get("grad_ric2") + rep.get("grad_R2") / Rational(4) - rep.get("trRic3") +
                       rep.get("star") + rep.get("starstar") / Rational(2) -
                       rep.get("Rhat") / Rational(4),
                   id + " Rcirc identity");
    }
    return c.finish();
}

bool criterion4() {
    Criterion c{4, "a2 and a3 integrands agree exactly within every isospectral pair"};
    for (const CatalogPair& p : catalog_pairs()) {
        const InvariantReport l = oracle_invariants(cache(p.left));
        const InvariantReport r = oracle_invariants(cache(p.right));
        c.check_eq(l.get("a2"), r.get("a2"), p.id + " a2");
        c.check_eq(l.get("a3"), r.get("a3"), p.id + " a3");
    }
    return c.finish();
}

bool criterion5() {
    Criterion c{5, "inaudibility witnesses separate each pair in the predicted invariants"};
    {
        const InvariantReport l = oracle_invariants(cache("fourthree"));
        const InvariantReport r = oracle_invariants(cache("fourthree-prime"));
        c.check_eq(l.get("trRic3") - r.get("trRic3"), Rational(-81, 4), "fourthree Tr(Ric^3) delta");
    }
    {
        const InvariantReport l = oracle_invariants(cache("fivethree"));
        const InvariantReport r = oracle_invariants(cache("fivethree-prime"));
        for (const char* id : {"star", "starstar", "threestar", "grad_ric2"})
            c.check(l.get(id) != r.get(id), std::string("fivethree must differ in ") + id);
        for (const char* id : {"ric2", "R2"})
            c.check_eq(l.get(id), r.get(id), std::string("fivethree must agree in ") + id);
    }
    {
        const InvariantReport l = oracle_invariants(cache("sixtwo"));
        const InvariantReport r = oracle_invariants(cache("sixtwo-prime"));
        c.check(l.get("ric2") != r.get("ric2"), "sixtwo must differ in |ric|^2");
        c.check(l.get("R2") != r.get("R2"), "sixtwo must differ in |R|^2");
    }
    {
        NablaRStructureReport rep = nablar_structure_check(cache("heis3-2-0"), cache("heis3-1-1"));
        c.check_eq(rep.delta_I, Rational(384), "heis3 delta of I_abc|abc");
        c.check_eq(rep.delta_grad_R2, Rational(-3, 2) * Rational(384), "heis3 |grad R|^2 delta");
        c.check_eq(rep.delta_Rhat, Rational(-7, 16) * Rational(384), "heis3 Rhat delta");
        c.check_eq(rep.delta_Rcirc, Rational(-17, 64) * Rational(384), "heis3 Rcirc delta");
        c.check(rep.all_ok(), "heis3 structure relations");
    }
    return c.finish();
}

bool criterion6() {
    Criterion c{6, "Heisenberg structure: Clifford identity, wedge-trace formula, fingerprints"};
    for (const std::string& id : catalog_ids()) {
        if (id.rfind("heis", 0) != 0) continue;
        c.check(is_heisenberg_type(catalog_get(id).j).ok, id + " Clifford identity");
    }
    for (const std::string& id : {"heis3-1-0", "heis3-2-0", "heis3-1-1"}) {
        TensorCache& tc = cache(id);
        const WedgeOperator w = wedge_operator(tc);
        const std::vector<Rational> traces = wedge_power_traces(w, 4);
        for (int q = 1; q <= 4; ++q)
            c.check_eq(traces[static_cast<std::size_t>(q - 1)],
                       wedge_trace_closed_form(tc.alg().j, q),
                       id + " wedge trace formula at q=" + std::to_string(q));
    }
    const CurvatureFingerprint f20 = curvature_fingerprint(cache("heis3-2-0"), 4);
    const CurvatureFingerprint f11 = curvature_fingerprint(cache("heis3-1-1"), 4);
    const CurvatureFingerprint f02 = curvature_fingerprint(cache("heis3-0-2"), 4);
    c.check(f20.ricci_char_poly == f11.ricci_char_poly, "(2,0)/(1,1) equal Ricci spectra");
    c.check(f20.wedge_traces[0] == f11.wedge_traces[0], "(2,0)/(1,1) equal at q=1");
    c.check(f20.wedge_traces[1] == f11.wedge_traces[1], "(2,0)/(1,1) equal at q=2");
    c.check(f20.wedge_traces[2] != f11.wedge_traces[2], "(2,0)/(1,1) differ at q=3");
    c.check(f20 == f02, "(2,0)/(0,2) fingerprints coincide");
    return c.finish();
}

bool criterion7() {
    Criterion c{7, "center dimension 7: no sixth-order invariant separates (2,0) from (1,1)"};
    OrderEqualityScan scan = heisenberg_order_equality_scan(cache("heis7-2-0"), cache("heis7-1-1"));
    c.check(!scan.ids.empty(), "scan covers invariants");
    for (std::size_t i = 0; i < scan.ids.size(); ++i)
        c.check(scan.equal[i], "heis7 invariants must agree in " + scan.ids[i] + ": " +
                                   scan.left.get(scan.ids[i]).str() + " vs " +
                                   scan.right.get(scan.ids[i]).str());
    bool covered = false;
    for (const std::string& id : scan.ids) covered |= id == "grad_R2";
    c.check(covered, "|grad R|^2 included at dimension 23");
    return c.finish();
}

bool criterion8() {
    Criterion c{8, "Gordon-Wilson hypothesis checks pass on the printed pairs"};
    for (const char* pair : {"fourthree", "fivethree", "sixtwo"}) {
        const CatalogPair* p = nullptr;
        for (const CatalogPair& q : catalog_pairs())
            if (q.id == pair) p = &q;
        const GordonWilsonReport rep =
            gordon_wilson_check(catalog_get(p->left).j, catalog_get(p->right).j);
        c.check(rep.isospectral, std::string(pair) + " similarity of j-maps");
        c.check(rep.closure_left && rep.closure_right, std::string(pair) + " lattice closure");
        c.check(rep.kernels_match, std::string(pair) + " kernel-lattice spectra");
        c.check(rep.all_pass(), std::string(pair) + " overall");
    }
    return c.finish();
}

bool criterion9() {
    Criterion c{9, "property suites: symmetries, Bianchi, parity, equivalence, trace pairings"};
    for (const std::string& id : {"fourthree", "fivethree", "sixtwo"}) {
        TensorCache& tc = cache(id);
        const FrameTensor& R = tc.R();
        const MetricLieAlgebra& alg = tc.alg();
        const int n = alg.dim();
        bool sym = true, bianchi = true, torsion = true, metric = true;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int cc = 0; cc < n; ++cc) {
                    metric &= alg.conn.gamma.get({a, b, cc}) == -alg.conn.gamma.get({a, cc, b});
                    torsion &= alg.conn.gamma.get({a, b, cc}) - alg.conn.gamma.get({b, a, cc}) ==
                               alg.bracket.get({a, b, cc});
                    for (int d = 0; d < n; ++d) {
                        const Rational v = R.get({a, b, cc, d});
                        sym &= v == -R.get({b, a, cc, d}) && v == -R.get({a, b, d, cc}) &&
                               v == R.get({cc, d, a, b});
                        bianchi &= v + R.get({b, cc, a, d}) + R.get({cc, a, b, d}) == Rational(0);
                    }
                }
        c.check(sym, id + " curvature symmetries");
        c.check(bianchi, id + " first Bianchi identity");
        c.check(torsion, id + " torsion-free connection");
        c.check(metric, id + " metric compatibility");
    }
    {
        TensorCache& tc = cache("fourthree");
        const FrameTensor nr = covariant_derivative(tc.R(), tc.alg().conn);
        const int n = tc.dim(), m = tc.alg().m();
        bool parity = true, bianchi2 = true;
        std::vector<int> idx(5);
        const auto rec = [&](auto&& self, int s, int vcount) -> void {
            if (s == 5) {
                if (vcount % 2 != 0) parity &= nr.get(idx).is_zero();
                bianchi2 &= nr.get({idx[0], idx[1], idx[2], idx[3], idx[4]}) +
                                nr.get({idx[1], idx[2], idx[0], idx[3], idx[4]}) +
                                nr.get({idx[2], idx[0], idx[1], idx[3], idx[4]}) ==
                            Rational(0);
                return;
            }
            for (int v = 0; v < n; ++v) {
                idx[static_cast<std::size_t>(s)] = v;
                self(self, s + 1, vcount + (v < m ? 1 : 0));
            }
        };
        rec(rec, 0, 0);
        c.check(parity, "fourthree derivative parity vanishing (exhaustive)");
        c.check(bianchi2, "fourthree second Bianchi identity (exhaustive)");
    }
    {
        bool cyclic = true;
        for (int trial = 0; trial < 25; ++trial) {
            const Mat a = niltest::random_int_matrix(5), b = niltest::random_int_matrix(5),
                      e = niltest::random_int_matrix(5);
            cyclic &= trace_product({a, b, e}) == trace_product({b, e, a});
            cyclic &= trace_product({a, b}) == trace_product({b, a});
        }
        c.check(cyclic, "trace cyclicity on random matrices");
    }
    {
        const JMap j = catalog_get("fourthree").j;
        bool inv = true;
        for (int trial = 0; trial < 2; ++trial) {
            const Mat a = niltest::rational_orthogonal(j.m);
            const Mat b = niltest::rational_orthogonal(j.r);
            const JMap jt = niltest::apply_equivalence(j, a, b);
            const auto lhs = eval_named_basics(j), rhs = eval_named_basics(jt);
            for (std::size_t i = 0; i < lhs.size(); ++i) inv &= lhs[i].second == rhs[i].second;
        }
        c.check(inv, "equivalence invariance of the named trace invariants");
    }
    for (const CatalogPair& p : catalog_pairs()) {
        const JMap l = catalog_get(p.left).j, r = catalog_get(p.right).j;
        bool jzjw = true;
        for (std::size_t a = 0; a < l.r; ++a)
            for (std::size_t b = 0; b < l.r; ++b)
                jzjw &= trace_product({l.mats[a], l.mats[b]}) ==
                        trace_product({r.mats[a], r.mats[b]});
        c.check(jzjw, p.id + " pairwise trace products agree");
    }
    return c.finish();
}

} // namespace

int main(int argc, char** argv) {
    const std::map<int, std::function<bool()>> criteria = {
        {1, criterion1}, {2, criterion2}, {3, criterion3}, {4, criterion4}, {5, criterion5},
        {6, criterion6}, {7, criterion7}, {8, criterion8}, {9, criterion9}};
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
    if (selected.empty())
        for (const auto& [num, fn] : criteria) selected.insert(num);
    int failures = 0;
    for (int num : selected) {
        const auto it = criteria.find(num);
        if (it == criteria.end()) {
            std::cerr << "unknown criterion " << num << "\n";
            return 2;
        }
        try {
            if (!it->second()) ++failures;
        } catch (const std::exception& e) {
            std::cout << "criterion-" << num << ": FAIL (exception: " << e.what() << ")\n";
            ++failures;
        }
    }
    if (selected.size() > 1)
        std::cout << (failures == 0 ? "ALL SELECTED CRITERIA PASS" : "FAILURES PRESENT") << "\n";
    return failures == 0 ? 0 : 1;
}
