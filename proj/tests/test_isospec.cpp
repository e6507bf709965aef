#include "nilinv/isospec.hpp"

#include "nilinv/catalog.hpp"
#include "test_support.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace nilinv;

namespace {

std::vector<Rational> poly_fourthree(long long c1, long long c2, long long c3) {
    // (x^2 + |Z|^2)(x^2 + 4|Z|^2) = x^4 + 5|Z|^2 x^2 + 4|Z|^4
    const Rational z2(c1 * c1 + c2 * c2 + c3 * c3);
    return {Rational(1), Rational(0), Rational(5) * z2, Rational(0), Rational(4) * z2 * z2};
}

std::vector<Rational> poly_sixtwo(long long c1, long long c2) {
    // x^6 + (2c1^2 + 21c2^2) x^4 + (c1^2 + 9c2^2)^2 x^2 + c2^2 (c1^2 + 8c2^2)^2
    const Rational a(2 * c1 * c1 + 21 * c2 * c2);
    const Rational b(c1 * c1 + 9 * c2 * c2);
    const Rational c(c1 * c1 + 8 * c2 * c2);
    return {Rational(1), Rational(0), a,           Rational(0),
            b * b,       Rational(0), Rational(c2 * c2) * c * c};
}

} // namespace

TEST_CASE("characteristic polynomials match the printed spectra", "[isospec]") {
    const JMap j4 = catalog_get("fourthree").j;
    const JMap j4p = catalog_get("fourthree-prime").j;
    for (long long c1 = -2; c1 <= 2; ++c1)
        for (long long c2 = -2; c2 <= 2; ++c2)
            for (long long c3 = -2; c3 <= 2; ++c3) {
                const long long z[] = {c1, c2, c3};
                const auto expect = poly_fourthree(c1, c2, c3);
                CHECK(char_poly(j4.at_int(z)) == expect);
                CHECK(char_poly(j4p.at_int(z)) == expect);
            }

    const JMap j6 = catalog_get("sixtwo").j;
    const JMap j6p = catalog_get("sixtwo-prime").j;
    for (long long c1 = -3; c1 <= 3; ++c1)
        for (long long c2 = -3; c2 <= 3; ++c2) {
            const long long z[] = {c1, c2};
            const auto expect = poly_sixtwo(c1, c2);
            INFO("Z=(" << c1 << "," << c2 << ")");
            CHECK(char_poly(j6.at_int(z)) == expect);
            CHECK(char_poly(j6p.at_int(z)) == expect);
        }
}

TEST_CASE("pointwise similarity holds for the catalog pairs", "[isospec]") {
    for (const char* pair : {"fourthree", "fivethree", "sixtwo", "heis3"}) {
        const CatalogPair* p = nullptr;
        for (const CatalogPair& q : catalog_pairs())
            if (q.id == pair) p = &q;
        REQUIRE(p != nullptr);
        const IsospectralResult res =
            jmap_isospectral(catalog_get(p->left).j, catalog_get(p->right).j);
        INFO(pair);
        CHECK(res.ok);
        CHECK(res.rationale.find("polynomial") != std::string::npos);
    }
}

TEST_CASE("scaling breaks similarity with a concrete witness", "[isospec]") {
    const JMap j = catalog_get("fourthree").j;
    JMap doubled = j;
    for (Mat& m : doubled.mats) m *= Rational(2);
    const IsospectralResult res = jmap_isospectral(j, doubled);
    CHECK_FALSE(res.ok);
    REQUIRE(res.witness_z.size() == 3);
    CHECK(res.poly_left != res.poly_right);
    // the witness is genuine
    CHECK(char_poly(j.at_int(res.witness_z)) == res.poly_left);
    CHECK(char_poly(doubled.at_int(res.witness_z)) == res.poly_right);
}

TEST_CASE("kernel lattices of the printed maps", "[isospec]") {
    const JMap j6 = catalog_get("sixtwo").j;
    const long long z10[] = {1, 0};
    const LatticeBasis k = kernel_lattice(j6, z10);
    REQUIRE(k.rank() == 2);
    // span{e_2, e_5} in Hermite normal form
    CHECK(k.rows[0] == std::vector<BigInt>{0, 1, 0, 0, 0, 0});
    CHECK(k.rows[1] == std::vector<BigInt>{0, 0, 0, 0, 1, 0});
    const JMap j6p = catalog_get("sixtwo-prime").j;
    CHECK(kernel_lattice(j6p, z10) == k);

    const JMap j4 = catalog_get("fourthree").j;
    const long long z100[] = {1, 0, 0};
    CHECK(kernel_lattice(j4, z100).rank() == 0);

    const long long zero3[] = {0, 0, 0};
    const LatticeBasis full = kernel_lattice(j4, zero3);
    REQUIRE(full.rank() == 4);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t t = 0; t < 4; ++t)
            CHECK(full.rows[i][t] == (i == t ? 1 : 0));
}

TEST_CASE("kernels are invariant under negating Z", "[isospec]") {
    const JMap j5 = catalog_get("fivethree").j;
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<long long> z(3);
        for (auto& v : z) v = niltest::rand_int(-4, 4);
        std::vector<long long> neg = {-z[0], -z[1], -z[2]};
        CHECK(kernel_lattice(j5, z) == kernel_lattice(j5, neg));
    }
}

TEST_CASE("length spectrum of the standard plane lattice", "[isospec]") {
    LatticeBasis z2;
    z2.ambient_dim = 2;
    z2.rows = {{1, 0}, {0, 1}};
    const LengthSpectrum s = length_spectrum(z2, Rational(2));
    REQUIRE(s.entries.size() == 3);
    CHECK(s.entries[0] == std::pair<Rational, std::size_t>(Rational(0), 1));
    CHECK(s.entries[1] == std::pair<Rational, std::size_t>(Rational(1), 4));
    CHECK(s.entries[2] == std::pair<Rational, std::size_t>(Rational(2), 4));

    // brute-force box oracle
    std::map<long long, std::size_t> brute;
    for (long long x = -5; x <= 5; ++x)
        for (long long y = -5; y <= 5; ++y)
            if (x * x + y * y <= 25) ++brute[x * x + y * y];
    const LengthSpectrum s25 = length_spectrum(z2, Rational(25));
    REQUIRE(s25.entries.size() == brute.size());
    std::size_t i = 0;
    for (const auto& [len, mult] : brute) {
        CHECK(s25.entries[i].first == Rational(len));
        CHECK(s25.entries[i].second == mult);
        ++i;
    }

    LatticeBasis empty;
    empty.ambient_dim = 6;
    const LengthSpectrum se = length_spectrum(empty, Rational(9));
    REQUIRE(se.entries.size() == 1);
    CHECK(se.entries[0] == std::pair<Rational, std::size_t>(Rational(0), 1));

    // the sixtwo kernel lattice is isometric to the standard plane lattice
    const long long z10[] = {1, 0};
    const LatticeBasis k = kernel_lattice(catalog_get("sixtwo").j, z10);
    CHECK(length_spectrum(k, Rational(25)) == s25);
}

TEST_CASE("length spectrum is a lattice invariant, not a basis artifact", "[isospec]") {
    LatticeBasis a;
    a.ambient_dim = 3;
    a.rows = {{1, 2, 0}, {0, 3, 1}};
    LatticeBasis b = a; // same lattice, sheared basis
    for (std::size_t t = 0; t < 3; ++t) b.rows[0][t] += 5 * b.rows[1][t];
    std::swap(b.rows[0], b.rows[1]);
    for (auto& v : b.rows[1]) v = -v;
    CHECK(length_spectrum(a, Rational(40)) == length_spectrum(b, Rational(40)));
}

TEST_CASE("degenerate inputs are rejected", "[isospec]") {
    LatticeBasis dep;
    dep.ambient_dim = 2;
    dep.rows = {{1, 1}, {2, 2}};
    CHECK_THROWS_AS(length_spectrum(dep, Rational(4)), std::invalid_argument);
    LatticeBasis ok;
    ok.ambient_dim = 1;
    ok.rows = {{1}};
    CHECK_THROWS_AS(length_spectrum(ok, Rational(0)), std::invalid_argument);
}

TEST_CASE("isospectral maps share pairwise products of traces", "[isospec]") {
    for (const CatalogPair& p : catalog_pairs()) {
        const JMap l = catalog_get(p.left).j;
        const JMap r = catalog_get(p.right).j;
        for (std::size_t a = 0; a < l.r; ++a)
            for (std::size_t b = 0; b < l.r; ++b)
                CHECK(trace_product({l.mats[a], l.mats[b]}) ==
                      trace_product({r.mats[a], r.mats[b]}));
    }
}

TEST_CASE("hypothesis checklist passes on the printed pairs", "[isospec]") {
    for (const char* pair : {"fourthree", "fivethree", "sixtwo"}) {
        const CatalogPair* p = nullptr;
        for (const CatalogPair& q : catalog_pairs())
            if (q.id == pair) p = &q;
        REQUIRE(p != nullptr);
        const GordonWilsonReport rep =
            gordon_wilson_check(catalog_get(p->left).j, catalog_get(p->right).j);
        INFO(pair);
        CHECK(rep.all_pass());
        CHECK(rep.kernel_method == "grid");
        CHECK(rep.z_points_checked > 0);
        CHECK_FALSE(rep.caveat.empty());
    }
}

TEST_CASE("Heisenberg pairs are certified structurally and by grid alike", "[isospec]") {
    const JMap l = catalog_get("heis3-2-0").j;
    const JMap r = catalog_get("heis3-1-1").j;
    const GordonWilsonReport cert = gordon_wilson_check(l, r);
    CHECK(cert.all_pass());
    CHECK(cert.kernel_method == "heisenberg-certificate");

    GordonWilsonOptions opt;
    opt.allow_heisenberg_certificate = false;
    opt.zbox = 1;
    const GordonWilsonReport grid = gordon_wilson_check(l, r, opt);
    CHECK(grid.kernel_method == "grid");
    CHECK(grid.closure_left);
    CHECK(grid.closure_right);
    CHECK(grid.kernels_match);

    const GordonWilsonReport heis7 =
        gordon_wilson_check(catalog_get("heis7-2-0").j, catalog_get("heis7-1-1").j);
    CHECK(heis7.all_pass());
}

TEST_CASE("a self-pair passes trivially", "[isospec]") {
    const JMap j = catalog_get("fivethree").j;
    CHECK(gordon_wilson_check(j, j).all_pass());
}
