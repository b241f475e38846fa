#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "sigforge/errors.hpp"
#include "sigforge/linalg.hpp"
#include "sigforge/model.hpp"
#include "test_util.hpp"

using namespace sigforge;
using namespace sigforge::model;
using sigforge::testutil::gauss_jordan_inverse;

TEST_CASE("build_channel_matrix: flat channel is identity") {
    ChannelTaps taps{{cplx(1, 0)}};
    const ComplexMatrix h = build_channel_matrix(taps, 4);
    REQUIRE(h.rows == 4);
    REQUIRE(h.cols == 4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            CHECK(h(i, j) == (i == j ? cplx(1, 0) : cplx(0, 0)));
}

TEST_CASE("build_channel_matrix: two taps, L=3") {
    ChannelTaps taps{{cplx(1, 0), cplx(0.5, 0)}};
    const ComplexMatrix h = build_channel_matrix(taps, 3);
    REQUIRE(h.rows == 4);
    REQUIRE(h.cols == 3);
    const double want[4][3] = {
        {1, 0, 0}, {0.5, 1, 0}, {0, 0.5, 1}, {0, 0, 0.5}};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 3; ++j) {
            CHECK(h(i, j).real() == doctest::Approx(want[i][j]));
            CHECK(h(i, j).imag() == 0.0);
        }
}

TEST_CASE("build_channel_matrix: L=16 N=3 banded shape") {
    RngStream rng(11);
    const ChannelTaps taps = sample_taps(rng, 3);
    const ComplexMatrix h = build_channel_matrix(taps, 16);
    REQUIRE(h.rows == 18);
    REQUIRE(h.cols == 16);
    for (int j = 0; j < 16; ++j)
        for (int i = 0; i < 18; ++i) {
            const int off = i - j;
            if (off >= 0 && off < 3)
                CHECK(h(i, j) == taps.taps[static_cast<size_t>(off)]);
            else
                CHECK(h(i, j) == cplx(0, 0));
        }
}

TEST_CASE("disturbance_covariance: noise only") {
    const ComplexMatrix r = disturbance_covariance({}, 1.0, 4, 1);
    REQUIRE(r.rows == 4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            CHECK(r(i, j) == (i == j ? cplx(1, 0) : cplx(0, 0)));
}

TEST_CASE("disturbance_covariance: one flat interferer at 0 dB") {
    UserState u;
    u.taps = ChannelTaps{{cplx(1, 0)}};
    u.energy_db = 0.0;
    BinarySignature s;
    s.entries = {1, 1};
    u.signature = s;
    const ComplexMatrix r = disturbance_covariance({u}, 1.0, 2, 1);
    CHECK(r(0, 0).real() == doctest::Approx(2.0));
    CHECK(r(0, 1).real() == doctest::Approx(1.0));
    CHECK(r(1, 0).real() == doctest::Approx(1.0));
    CHECK(r(1, 1).real() == doctest::Approx(2.0));
}

TEST_CASE("disturbance_covariance: seven interferers, min eigenvalue >= sigma2") {
    RngStream rng(21);
    std::vector<UserState> others(7);
    for (int i = 0; i < 7; ++i) {
        others[static_cast<size_t>(i)].taps = sample_taps(rng, 3);
        others[static_cast<size_t>(i)].energy_db = 8.0 + 3.0 * i / 6.0;
        others[static_cast<size_t>(i)].signature = testutil::random_binary(rng, 16);
    }
    const ComplexMatrix r = disturbance_covariance(others, 1.0, 16, 3);
    REQUIRE(r.rows == 18);
    // Hermitian, and all eigenvalues at least the noise floor.
    for (int i = 0; i < 18; ++i)
        for (int j = 0; j < 18; ++j)
            CHECK(std::abs(r(i, j) - std::conj(r(j, i))) < 1e-10);
    RealMatrix embed(36, 36);
    for (int i = 0; i < 18; ++i)
        for (int j = 0; j < 18; ++j) {
            embed(i, j) = r(i, j).real();
            embed(i, j + 18) = -r(i, j).imag();
            embed(i + 18, j) = r(i, j).imag();
            embed(i + 18, j + 18) = r(i, j).real();
        }
    const auto ed = linalg::jacobi_eigen(embed);
    CHECK(ed.values.front() >= 1.0 - 1e-9);
}

TEST_CASE("sinr_form: identity examples") {
    const ComplexMatrix i4 = ComplexMatrix::identity(4);
    const SinrForm f = sinr_form(i4, i4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            CHECK(std::abs(f.q(i, j) - (i == j ? cplx(1, 0) : cplx(0, 0))) < 1e-12);
            CHECK(f.q_real(i, j) == doctest::Approx(i == j ? 1.0 : 0.0));
        }

    ComplexMatrix r2 = ComplexMatrix::identity(2);
    for (cplx& v : r2.a) v *= 2.0;
    const SinrForm f2 = sinr_form(ComplexMatrix::identity(2), r2);
    CHECK(f2.q(0, 0).real() == doctest::Approx(0.5));
    CHECK(f2.q(1, 1).real() == doctest::Approx(0.5));
    CHECK(std::abs(f2.q(0, 1)) < 1e-12);
}

TEST_CASE("sinr_form: matches explicit inverse oracle") {
    RngStream rng(31);
    for (int rep = 0; rep < 50; ++rep) {
        const int L = 4, N = 2;
        const ChannelTaps taps = sample_taps(rng, N);
        const ComplexMatrix h = build_channel_matrix(taps, L);
        std::vector<UserState> others(2);
        for (auto& u : others) {
            u.taps = sample_taps(rng, N);
            u.energy_db = 9.0;
            u.signature = testutil::random_binary(rng, L);
        }
        const ComplexMatrix r = disturbance_covariance(others, 1.0, L, N);
        const SinrForm f = sinr_form(h, r);

        const ComplexMatrix rinv = gauss_jordan_inverse(r);
        const ComplexMatrix q_direct =
            linalg::multiply(linalg::adjoint(h), linalg::multiply(rinv, h));
        for (int i = 0; i < L; ++i)
            for (int j = 0; j < L; ++j)
                CHECK(std::abs(f.q(i, j) - q_direct(i, j)) < 1e-9);
    }
}

TEST_CASE("sinr_form: Hermitian PSD invariant over generated instances") {
    RngStream rng(41);
    for (int rep = 0; rep < 30; ++rep) {
        const int L = 6, N = 3;
        const SinrForm f = testutil::random_form(rng, L, N, 3);
        for (int i = 0; i < L; ++i)
            for (int j = 0; j < L; ++j) {
                CHECK(std::abs(f.q(i, j) - std::conj(f.q(j, i))) < 1e-10);
                CHECK(f.q_real(i, j) == doctest::Approx(f.q(i, j).real()));
            }
        RealMatrix embed(2 * L, 2 * L);
        for (int i = 0; i < L; ++i)
            for (int j = 0; j < L; ++j) {
                embed(i, j) = f.q(i, j).real();
                embed(i, j + L) = -f.q(i, j).imag();
                embed(i + L, j) = f.q(i, j).imag();
                embed(i + L, j + L) = f.q(i, j).real();
            }
        const auto ed = linalg::jacobi_eigen(embed);
        CHECK(ed.values.front() >= -1e-9 * std::max(1.0, ed.values.back()));
    }
}

TEST_CASE("sinr: identity and rank-1 examples") {
    SinrForm f;
    f.q = ComplexMatrix::identity(5);
    f.q_real = RealMatrix::identity(5);
    BinarySignature s;
    s.entries = {1, -1, 1, 1, -1};
    CHECK(sinr(s, f, 0.0) == doctest::Approx(5.0));

    BinarySignature v;
    v.entries = {1, -1, 1, -1};
    SinrForm r1;
    r1.q = ComplexMatrix(4, 4);
    r1.q_real = RealMatrix(4, 4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            r1.q_real(i, j) = v.entries[static_cast<size_t>(i)] *
                              v.entries[static_cast<size_t>(j)];
            r1.q(i, j) = cplx(r1.q_real(i, j), 0);
        }
    CHECK(sinr(v, r1, 0.0) == doctest::Approx(16.0));
}

TEST_CASE("sinr: naive double-loop oracle, energy scaling, sign flips") {
    RngStream rng(51);
    for (int rep = 0; rep < 50; ++rep) {
        const int L = 8;
        const SinrForm f = testutil::random_form(rng, L, 3, 4);
        const BinarySignature s = testutil::random_binary(rng, L);
        std::vector<int> e = s.entries;
        const double oracle = testutil::naive_quad(f.q_real, e);
        CHECK(sinr(s, f, 0.0) == doctest::Approx(oracle).epsilon(1e-12));
        CHECK(sinr(s, f, 10.0) == doctest::Approx(10.0 * oracle).epsilon(1e-12));

        BinarySignature neg = s;
        for (int& x : neg.entries) x = -x;
        CHECK(sinr(neg, f, 3.0) == doctest::Approx(sinr(s, f, 3.0)));

        const QuaternarySignature qs = testutil::random_quaternary(rng, L);
        const double base = sinr(qs, f, 0.0);
        CHECK(base == doctest::Approx(testutil::naive_quad_complex(f.q, qs.entries))
                          .epsilon(1e-12));
        for (cplx unit : {cplx(0, 1), cplx(-1, 0), cplx(0, -1)}) {
            QuaternarySignature rot = qs;
            for (cplx& c : rot.entries) c *= unit;
            CHECK(sinr(rot, f, 0.0) == doctest::Approx(base).epsilon(1e-10));
        }
    }
}

TEST_CASE("mmse_filter: hand examples and residual oracle") {
    const ComplexMatrix i2 = ComplexMatrix::identity(2);
    auto w = mmse_filter(i2, i2, {cplx(1, 0), cplx(1, 0)});
    CHECK(std::abs(w[0] - cplx(1, 0)) < 1e-12);
    CHECK(std::abs(w[1] - cplx(1, 0)) < 1e-12);

    ComplexMatrix r2 = i2;
    for (cplx& v : r2.a) v *= 2.0;
    w = mmse_filter(r2, i2, {cplx(1, 0), cplx(-1, 0)});
    CHECK(std::abs(w[0] - cplx(0.5, 0)) < 1e-12);
    CHECK(std::abs(w[1] - cplx(-0.5, 0)) < 1e-12);

    RngStream rng(61);
    for (int rep = 0; rep < 30; ++rep) {
        const int L = 6, N = 2;
        const ComplexMatrix h = build_channel_matrix(sample_taps(rng, N), L);
        std::vector<UserState> others(2);
        for (auto& u : others) {
            u.taps = sample_taps(rng, N);
            u.energy_db = 10.0;
            u.signature = testutil::random_binary(rng, L);
        }
        const ComplexMatrix r = disturbance_covariance(others, 1.0, L, N);
        std::vector<cplx> s(static_cast<size_t>(L));
        for (cplx& c : s) c = cplx(rng.binary_chip(), 0);
        const auto wf = mmse_filter(r, h, s);
        // Residual R w - H s should vanish.
        std::vector<cplx> hs(static_cast<size_t>(h.rows), cplx(0, 0));
        for (int i = 0; i < h.rows; ++i)
            for (int j = 0; j < L; ++j) hs[static_cast<size_t>(i)] += h(i, j) * s[static_cast<size_t>(j)];
        for (int i = 0; i < r.rows; ++i) {
            cplx acc(0, 0);
            for (int j = 0; j < r.cols; ++j) acc += r(i, j) * wf[static_cast<size_t>(j)];
            CHECK(std::abs(acc - hs[static_cast<size_t>(i)]) < 1e-9);
        }
    }
}

TEST_CASE("sample_taps: determinism and moments") {
    RngStream a(77), b(77);
    const ChannelTaps t1 = sample_taps(a, 1);
    const ChannelTaps t2 = sample_taps(b, 1);
    REQUIRE(t1.paths() == 1);
    CHECK(t1.taps[0] == t2.taps[0]);

    RngStream rng(78);
    const int draws = 100000;
    double per_tap = 0.0, total = 0.0;
    for (int i = 0; i < draws; ++i) {
        const ChannelTaps t = sample_taps(rng, 3);
        double p = 0.0;
        for (cplx c : t.taps) p += std::norm(c);
        per_tap += std::norm(t.taps[0]);
        total += p;
    }
    CHECK(per_tap / draws == doctest::Approx(1.0 / 3.0).epsilon(0.05));
    CHECK(total / draws == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("binary sinr: real and complex paths agree") {
    RngStream rng(91);
    for (int rep = 0; rep < 30; ++rep) {
        const int L = 8;
        const SinrForm f = testutil::random_form(rng, L, 3, 4);
        const BinarySignature s = testutil::random_binary(rng, L);
        std::vector<cplx> sc(static_cast<size_t>(L));
        for (int i = 0; i < L; ++i) sc[static_cast<size_t>(i)] = cplx(s.entries[static_cast<size_t>(i)], 0);
        CHECK(sinr(s, f, 0.0) ==
              doctest::Approx(sinr(sc, f, 0.0)).epsilon(1e-12));
    }
}

TEST_CASE("SystemConfig validation") {
    SystemConfig cfg;
    cfg.L = 4;
    cfg.N = 2;
    cfg.K = 2;
    cfg.energies = {10.0, 9.0};
    CHECK_NOTHROW(cfg.validate());
    cfg.energies = {10.0};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.energies = {10.0, 9.0};
    cfg.noise_variance = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.noise_variance = 1.0;
    cfg.L = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
