#include "sigforge/quaternary.hpp"

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "sigforge/errors.hpp"
#include "sigforge/linalg.hpp"

namespace sigforge::quaternary {

namespace {

// Alphabet listed counterclockwise from angle 0.
constexpr int kUnitCount = 4;
const cplx kUnits[kUnitCount] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

// Map the sign pair (c_R, c_I) to the unit (1-j)(c_R + j c_I)/2. This is the
// angle-nearest unit to (c_R + j c_I)/sqrt(2), ties resolved to the smaller
// angle.
cplx unit_from_signs(int cr, int ci) {
    if (cr == 1) return ci == 1 ? cplx(1, 0) : cplx(0, -1);
    return ci == 1 ? cplx(0, 1) : cplx(-1, 0);
}

int unit_index(const cplx& u) {
    for (int i = 0; i < kUnitCount; ++i)
        if (u == kUnits[i]) return i;
    throw DimensionMismatch("unit_index: entry is not a quaternary unit");
}

std::vector<int> digits_of(const QuaternarySignature& s) {
    std::vector<int> d(s.entries.size());
    for (size_t i = 0; i < s.entries.size(); ++i) d[i] = unit_index(s.entries[i]);
    return d;
}

}  // namespace

std::pair<BinarySignature, BinarySignature> quaternary_to_c(const QuaternarySignature& s) {
    if (!s.valid()) throw DimensionMismatch("quaternary_to_c: invalid signature");
    BinarySignature cr, ci;
    cr.entries.resize(s.entries.size());
    ci.entries.resize(s.entries.size());
    const cplx one_plus_j(1, 1);
    for (size_t i = 0; i < s.entries.size(); ++i) {
        const cplx c = one_plus_j * s.entries[i];
        cr.entries[i] = c.real() > 0 ? 1 : -1;
        ci.entries[i] = c.imag() > 0 ? 1 : -1;
    }
    return {cr, ci};
}

QuaternarySignature c_to_quaternary(const BinarySignature& c_r, const BinarySignature& c_i) {
    if (c_r.length() != c_i.length())
        throw DimensionMismatch("c_to_quaternary: part lengths differ");
    QuaternarySignature s;
    s.entries.resize(c_r.entries.size());
    for (size_t i = 0; i < s.entries.size(); ++i)
        s.entries[i] = unit_from_signs(c_r.entries[i], c_i.entries[i]);
    return s;
}

EquivalentBinaryProblem build_equivalent_binary(const model::SinrForm& form) {
    const int L = form.length();
    double trace = 0.0;
    for (int i = 0; i < L; ++i) trace += form.q(i, i).real();

    ComplexMatrix u;
    double jitter = 0.0;
    bool done = false;
    for (int attempt = 0; attempt < 4 && !done; ++attempt) {
        ComplexMatrix q = form.q;
        for (int i = 0; i < L; ++i) q(i, i) += jitter;
        try {
            u = linalg::cholesky_upper_hermitian(q);
            done = true;
        } catch (const NotPositiveDefinite&) {
            jitter = (jitter == 0.0) ? 1e-10 * std::max(trace / L, 1e-300) : jitter * 10.0;
        }
    }
    if (!done)
        throw NotPositiveDefinite("build_equivalent_binary: Q_k semidefinite after jitter escalation");

    // M = [[U_R, -U_I], [U_I, U_R]], Q_bar = M^T M / 2.
    RealMatrix m(2 * L, 2 * L);
    for (int i = 0; i < L; ++i)
        for (int j = 0; j < L; ++j) {
            m(i, j) = u(i, j).real();
            m(i, j + L) = -u(i, j).imag();
            m(i + L, j) = u(i, j).imag();
            m(i + L, j + L) = u(i, j).real();
        }
    EquivalentBinaryProblem out;
    out.q_bar = linalg::multiply(linalg::transpose(m), m);
    for (double& v : out.q_bar.a) v *= 0.5;
    return out;
}

void canonicalize_orbit(QuaternarySignature& s) {
    if (s.entries.empty()) return;
    const cplx u = std::conj(s.entries.front());  // 1/s_0 on the unit circle
    if (u == cplx(1, 0)) return;
    for (cplx& v : s.entries) {
        const cplx p = u * v;
        // Products of exact units stay exact; flush any -0 component.
        v = cplx(p.real() == 0.0 ? 0.0 : p.real(), p.imag() == 0.0 ? 0.0 : p.imag());
    }
}

double objective(const ComplexMatrix& q, const QuaternarySignature& s) {
    cplx acc(0, 0);
    for (int i = 0; i < q.rows; ++i) {
        cplx row(0, 0);
        for (int j = 0; j < q.cols; ++j) row += q(i, j) * s.entries[j];
        acc += std::conj(s.entries[i]) * row;
    }
    return acc.real();
}

std::pair<QuaternarySignature, fpsearch::SearchStats> fp_search_quaternary(
    const model::SinrForm& form, const fpsearch::FpConfig& cfg) {
    const int L = form.length();
    const EquivalentBinaryProblem eq = build_equivalent_binary(form);

    fpsearch::FpConfig bar_cfg = cfg;
    if (cfg.radius_init == fpsearch::RadiusInit::ProvidedSignature && cfg.provided_init &&
        cfg.provided_init->length() != 2 * L)
        throw DimensionMismatch("fp_search_quaternary: initializer must have length 2L");

    auto [c_bar, stats] = fpsearch::fp_search_binary(eq.q_bar, bar_cfg);

    BinarySignature cr, ci;
    cr.entries.assign(c_bar.entries.begin(), c_bar.entries.begin() + L);
    ci.entries.assign(c_bar.entries.begin() + L, c_bar.entries.end());
    QuaternarySignature s = c_to_quaternary(cr, ci);
    canonicalize_orbit(s);
    return {s, stats};
}

std::pair<QuaternarySignature, double> exhaustive_quaternary(const model::SinrForm& form) {
    const int L = form.length();
    if (L > 12) throw TooLarge("exhaustive_quaternary: L > 12 (4^L candidates)");
    if (L < 1) throw DimensionMismatch("exhaustive_quaternary: empty problem");

    QuaternarySignature best;
    std::vector<int> best_digits;
    double best_obj = 0.0;
    QuaternarySignature s;
    s.entries.resize(L);

    const uint64_t total = uint64_t{1} << (2 * L);
    for (uint64_t u = 0; u < total; ++u) {
        for (int i = 0; i < L; ++i) s.entries[i] = kUnits[(u >> (2 * i)) & 3u];
        const double obj = objective(form.q, s);
        if (best.entries.empty() || obj > best_obj) {
            best = s;
            canonicalize_orbit(best);
            best_digits = digits_of(best);
            best_obj = obj;
        } else if (obj == best_obj) {
            QuaternarySignature cand = s;
            canonicalize_orbit(cand);
            std::vector<int> d = digits_of(cand);
            if (d < best_digits) {
                best = cand;
                best_digits = std::move(d);
            }
        }
    }
    return {best, best_obj};
}

QuaternarySignature quantize_quaternary(const model::SinrForm& form) {
    const linalg::ComplexEigenPair p = linalg::max_eigenpair_hermitian(form.q);
    QuaternarySignature s;
    s.entries.resize(p.vector.size());
    for (size_t i = 0; i < p.vector.size(); ++i) {
        const int cr = p.vector[i].real() < 0.0 ? -1 : 1;  // sign(0) -> +1
        const int ci = p.vector[i].imag() < 0.0 ? -1 : 1;
        s.entries[i] = unit_from_signs(cr, ci);
    }
    return s;
}

}  // namespace sigforge::quaternary
