#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "sigforge/errors.hpp"
#include "sigforge/fpsearch.hpp"
#include "sigforge/quaternary.hpp"
#include "test_util.hpp"

using namespace sigforge;
using namespace sigforge::quaternary;

namespace {

model::SinrForm form_from(const ComplexMatrix& q) {
    model::SinrForm f;
    f.q = q;
    f.q_real = linalg::real_part(q);
    return f;
}

ComplexMatrix rank1_h(const std::vector<cplx>& v) {
    const int n = static_cast<int>(v.size());
    ComplexMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            m(i, j) = v[static_cast<size_t>(i)] * std::conj(v[static_cast<size_t>(j)]);
    return m;
}

bool same_orbit(const QuaternarySignature& a, const QuaternarySignature& b) {
    if (a.entries.size() != b.entries.size()) return false;
    for (cplx unit : {cplx(1, 0), cplx(0, 1), cplx(-1, 0), cplx(0, -1)}) {
        bool all = true;
        for (size_t i = 0; i < a.entries.size(); ++i)
            if (std::abs(a.entries[i] * unit - b.entries[i]) > 1e-12) {
                all = false;
                break;
            }
        if (all) return true;
    }
    return false;
}

// Depth-first recursion over the 4^L alphabet; independent of the library's
// digit-counter enumeration.
void recurse_best(const ComplexMatrix& q, std::vector<cplx>& s, size_t k,
                  double& best, std::vector<cplx>& argbest) {
    static const cplx units[4] = {cplx(1, 0), cplx(0, 1), cplx(-1, 0), cplx(0, -1)};
    if (k == s.size()) {
        const double obj = testutil::naive_quad_complex(q, s);
        if (obj > best + 1e-12) {
            best = obj;
            argbest = s;
        }
        return;
    }
    for (const cplx& u : units) {
        s[k] = u;
        recurse_best(q, s, k + 1, best, argbest);
    }
}

}  // namespace

TEST_CASE("quaternary_to_c: transform examples and round trip") {
    QuaternarySignature s1;
    s1.entries = {cplx(1, 0)};
    auto [r1, i1] = quaternary_to_c(s1);
    CHECK(r1.entries == std::vector<int>{1});
    CHECK(i1.entries == std::vector<int>{1});

    QuaternarySignature sj;
    sj.entries = {cplx(0, 1)};
    auto [rj, ij] = quaternary_to_c(sj);
    CHECK(rj.entries == std::vector<int>{-1});
    CHECK(ij.entries == std::vector<int>{1});

    QuaternarySignature s2;
    s2.entries = {cplx(-1, 0), cplx(0, -1)};
    auto [r2, i2] = quaternary_to_c(s2);
    // Oracle: c = (1+j) * s entrywise.
    for (size_t k = 0; k < 2; ++k) {
        const cplx c = cplx(1, 1) * s2.entries[k];
        CHECK(r2.entries[k] == static_cast<int>(c.real()));
        CHECK(i2.entries[k] == static_cast<int>(c.imag()));
    }
    CHECK(r2.entries == std::vector<int>{-1, 1});
    CHECK(i2.entries == std::vector<int>{-1, -1});

    RngStream rng(201);
    for (int rep = 0; rep < 200; ++rep) {
        const QuaternarySignature s = testutil::random_quaternary(rng, 9);
        auto [cr, ci] = quaternary_to_c(s);
        CHECK(cr.valid());
        CHECK(ci.valid());
        const QuaternarySignature back = c_to_quaternary(cr, ci);
        for (size_t k = 0; k < s.entries.size(); ++k)
            CHECK(back.entries[k] == s.entries[k]);
    }
}

TEST_CASE("build_equivalent_binary: identity and 1x1 hand checks") {
    const auto eq = build_equivalent_binary(form_from(ComplexMatrix::identity(3)));
    REQUIRE(eq.q_bar.rows == 6);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            CHECK(eq.q_bar(i, j) == doctest::Approx(i == j ? 0.5 : 0.0).epsilon(1e-10));

    ComplexMatrix d(1, 1);
    d(0, 0) = cplx(2, 0);
    const auto eq1 = build_equivalent_binary(form_from(d));
    CHECK(eq1.q_bar(0, 0) == doctest::Approx(1.0));
    CHECK(eq1.q_bar(1, 1) == doctest::Approx(1.0));
    // s = [j], c_bar = [-1, 1]: both sides equal 2.
    std::vector<int> cbar = {-1, 1};
    CHECK(testutil::naive_quad(eq1.q_bar, cbar) == doctest::Approx(2.0));
}

TEST_CASE("build_equivalent_binary: transform identity over random pairs") {
    RngStream rng(211);
    for (int rep = 0; rep < 100; ++rep) {
        const int L = 2 + static_cast<int>(rng.uniform() * 7.0);
        const model::SinrForm f = testutil::random_form(rng, L, 3, 3, true);
        const auto eq = build_equivalent_binary(f);
        const QuaternarySignature s = testutil::random_quaternary(rng, L);
        auto [cr, ci] = quaternary_to_c(s);
        std::vector<int> cbar = cr.entries;
        cbar.insert(cbar.end(), ci.entries.begin(), ci.entries.end());
        const double lhs = testutil::naive_quad_complex(f.q, s.entries);
        const double rhs = testutil::naive_quad(eq.q_bar, cbar);
        CHECK(rhs == doctest::Approx(lhs).epsilon(1e-9));
        // q_bar symmetric.
        for (int i = 0; i < eq.q_bar.rows; ++i)
            for (int j = 0; j < i; ++j)
                CHECK(eq.q_bar(i, j) == doctest::Approx(eq.q_bar(j, i)).epsilon(1e-12));
    }
}

TEST_CASE("fp_search_quaternary: rank-1 and constant objective") {
    std::vector<cplx> v = {cplx(1, 0), cplx(0, 1), cplx(-1, 0), cplx(0, -1)};
    const auto [s, stats] = fp_search_quaternary(form_from(rank1_h(v)));
    QuaternarySignature want;
    want.entries = v;
    CHECK(same_orbit(s, want));
    CHECK(objective(rank1_h(v), s) == doctest::Approx(16.0));
    CHECK(stats.candidates_found >= 1);

    const auto [sid, st2] = fp_search_quaternary(form_from(ComplexMatrix::identity(4)));
    CHECK(sid.valid());
    CHECK(objective(ComplexMatrix::identity(4), sid) == doctest::Approx(4.0));
}

TEST_CASE("fp_search_quaternary: matches exhaustive over 100 random instances") {
    RngStream rng(221);
    for (int rep = 0; rep < 100; ++rep) {
        const int L = 2 + static_cast<int>(rng.uniform() * 5.0);
        const model::SinrForm f = testutil::random_form(rng, L, 3, 3, true);
        const auto [sf, stats] = fp_search_quaternary(f);
        const auto [se, best] = exhaustive_quaternary(f);
        CHECK(objective(f.q, sf) == doctest::Approx(best).epsilon(1e-10));
        CHECK(sf.entries[0] == cplx(1, 0));
        CHECK(se.entries[0] == cplx(1, 0));
    }
}

TEST_CASE("exhaustive_quaternary: recursive second enumerator at L=5") {
    RngStream rng(231);
    for (int rep = 0; rep < 10; ++rep) {
        const model::SinrForm f = testutil::random_form(rng, 5, 3, 3, true);
        const auto [se, val] = exhaustive_quaternary(f);
        std::vector<cplx> work(5), argbest;
        double best = -1e300;
        recurse_best(f.q, work, 0, best, argbest);
        CHECK(val == doctest::Approx(best).epsilon(1e-10));
        QuaternarySignature rb;
        rb.entries = argbest;
        CHECK(testutil::naive_quad_complex(f.q, se.entries) ==
              doctest::Approx(best).epsilon(1e-10));
    }

    ComplexMatrix big = ComplexMatrix::identity(13);
    CHECK_THROWS_AS(exhaustive_quaternary(form_from(big)), TooLarge);
}

TEST_CASE("quantize_quaternary: eigenvector cases and fp dominance") {
    // Real positive eigenvector: all ones.
    std::vector<cplx> vpos = {cplx(0.9, 0), cplx(0.3, 0), cplx(0.6, 0)};
    const QuaternarySignature spos = quantize_quaternary(form_from(rank1_h(vpos)));
    for (cplx c : spos.entries) CHECK(c == cplx(1, 0));

    // Unit multiple of a quaternary vector: recovers its orbit.
    std::vector<cplx> vq = {cplx(1, 0), cplx(0, -1), cplx(-1, 0)};
    std::vector<cplx> scaled = vq;
    const cplx phase = std::polar(0.7, 0.3);
    for (cplx& c : scaled) c *= phase;
    const QuaternarySignature sq = quantize_quaternary(form_from(rank1_h(scaled)));
    QuaternarySignature want;
    want.entries = vq;
    CHECK(same_orbit(sq, want));

    RngStream rng(241);
    for (int rep = 0; rep < 50; ++rep) {
        const model::SinrForm f = testutil::random_form(rng, 6, 3, 3, true);
        const QuaternarySignature q = quantize_quaternary(f);
        const auto [s, stats] = fp_search_quaternary(f);
        CHECK(objective(f.q, s) >= objective(f.q, q) - 1e-12);
    }
}

TEST_CASE("objective: orbit invariance and binary-subset bound") {
    RngStream rng(251);
    for (int rep = 0; rep < 50; ++rep) {
        const int L = 2 + static_cast<int>(rng.uniform() * 5.0);
        const model::SinrForm f = testutil::random_form(rng, L, 3, 3, true);
        const QuaternarySignature s = testutil::random_quaternary(rng, L);
        const double base = objective(f.q, s);
        for (cplx unit : {cplx(0, 1), cplx(-1, 0), cplx(0, -1)}) {
            QuaternarySignature rot = s;
            for (cplx& c : rot.entries) c *= unit;
            CHECK(objective(f.q, rot) == doctest::Approx(base).epsilon(1e-10));
        }
        // Binary alphabet is a subset of quaternary.
        const auto [sq, vq] = exhaustive_quaternary(f);
        const auto [sb, vb] = fpsearch::exhaustive_binary(f);
        CHECK(vq >= vb - 1e-10);
    }
}

TEST_CASE("canonicalize_orbit: first entry forced to one") {
    RngStream rng(261);
    for (int rep = 0; rep < 100; ++rep) {
        QuaternarySignature s = testutil::random_quaternary(rng, 7);
        QuaternarySignature c = s;
        canonicalize_orbit(c);
        CHECK(c.entries[0] == cplx(1, 0));
        CHECK(same_orbit(c, s));
    }
}
