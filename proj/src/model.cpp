#include "sigforge/model.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

#include "sigforge/errors.hpp"
#include "sigforge/linalg.hpp"

namespace sigforge::model {

void SystemConfig::validate() const {
    if (L < 1 || N < 1 || K < 1)
        throw DimensionMismatch("SystemConfig: L, N, K must all be >= 1");
    if (static_cast<int>(energies.size()) != K)
        throw DimensionMismatch("SystemConfig: energies length must equal K");
    if (noise_variance <= 0.0)
        throw DimensionMismatch("SystemConfig: noise variance must be positive");
}

std::vector<cplx> signature_chips(const Signature& s) {
    if (const auto* b = std::get_if<BinarySignature>(&s)) {
        std::vector<cplx> out(b->entries.size());
        for (size_t i = 0; i < b->entries.size(); ++i)
            out[i] = cplx(static_cast<double>(b->entries[i]), 0.0);
        return out;
    }
    return std::get<QuaternarySignature>(s).entries;
}

int signature_length(const Signature& s) {
    if (const auto* b = std::get_if<BinarySignature>(&s)) return b->length();
    return std::get<QuaternarySignature>(s).length();
}

ComplexMatrix build_channel_matrix(const ChannelTaps& taps, int L) {
    const int N = taps.paths();
    if (N < 1 || L < 1)
        throw DimensionMismatch("build_channel_matrix: need N >= 1 and L >= 1");
    ComplexMatrix h(L + N - 1, L);
    for (int j = 0; j < L; ++j)
        for (int n = 0; n < N; ++n) h(j + n, j) = taps.taps[n];
    return h;
}

ComplexMatrix disturbance_covariance(const std::vector<UserState>& interferers,
                                     double sigma2, int L, int N) {
    const int m = L + N - 1;
    ComplexMatrix r(m, m);
    for (int i = 0; i < m; ++i) r(i, i) = sigma2;

    for (const UserState& u : interferers) {
        if (signature_length(u.signature) != L)
            throw DimensionMismatch("disturbance_covariance: signature length != L");
        if (u.taps.paths() != N)
            throw DimensionMismatch("disturbance_covariance: tap count != N");
        const ComplexMatrix h = build_channel_matrix(u.taps, L);
        const std::vector<cplx> v = linalg::multiply(h, signature_chips(u.signature));
        const double e = db_to_linear(u.energy_db);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) r(i, j) += e * v[i] * std::conj(v[j]);
    }
    return r;
}

ComplexMatrix isi_covariance(const UserState& user, int L, int N) {
    if (user.taps.paths() != N)
        throw DimensionMismatch("isi_covariance: tap count != N");
    return isi_covariance(user.taps, user.energy_db, signature_chips(user.signature), L);
}

ComplexMatrix isi_covariance(const ChannelTaps& taps, double energy_db,
                             const std::vector<cplx>& chips, int L) {
    const int N = taps.paths();
    const int m = L + N - 1;
    const ComplexMatrix h = build_channel_matrix(taps, L);
    const std::vector<cplx> v = linalg::multiply(h, chips);
    const double e = db_to_linear(energy_db);

    // One-symbol shifted self-images: the tail of the previous symbol and the
    // head of the next one, each landing on N-1 chips of the current window.
    std::vector<cplx> pre(m, cplx(0, 0)), post(m, cplx(0, 0));
    for (int i = 0; i + L < m; ++i) pre[i] = v[i + L];
    for (int i = L; i < m; ++i) post[i] = v[i - L];

    ComplexMatrix r(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            r(i, j) = e * (pre[i] * std::conj(pre[j]) + post[i] * std::conj(post[j]));
    return r;
}

SinrForm sinr_form(const ComplexMatrix& h, const ComplexMatrix& r) {
    const ComplexMatrix rinv_h = linalg::hermitian_solve(r, h);
    const ComplexMatrix q_raw = linalg::multiply(linalg::adjoint(h), rinv_h);
    SinrForm form;
    form.q = linalg::hermitianize(q_raw);
    form.q_real = linalg::real_part(form.q);
    return form;
}

double sinr(const std::vector<cplx>& s, const SinrForm& form, double energy_db) {
    const int L = form.length();
    if (static_cast<int>(s.size()) != L)
        throw DimensionMismatch("sinr: signature length != L");
    cplx acc(0, 0);
    for (int i = 0; i < L; ++i) {
        cplx row(0, 0);
        for (int j = 0; j < L; ++j) row += form.q(i, j) * s[j];
        acc += std::conj(s[i]) * row;
    }
    return db_to_linear(energy_db) * acc.real();
}

double sinr(const BinarySignature& s, const SinrForm& form, double energy_db) {
    const int L = form.length();
    if (s.length() != L) throw DimensionMismatch("sinr: signature length != L");
    double acc = 0.0;
    for (int i = 0; i < L; ++i) {
        double row = 0.0;
        for (int j = 0; j < L; ++j) row += form.q_real(i, j) * s.entries[j];
        acc += s.entries[i] * row;
    }
    const double value = db_to_linear(energy_db) * acc;
    // For real signatures the complex form must agree with the real part.
    assert(std::abs(value - sinr(signature_chips(Signature(s)), form, energy_db)) <=
           1e-12 * std::max(1.0, std::abs(value)));
    return value;
}

double sinr(const QuaternarySignature& s, const SinrForm& form, double energy_db) {
    return sinr(s.entries, form, energy_db);
}

std::vector<cplx> mmse_filter(const ComplexMatrix& r, const ComplexMatrix& h,
                              const std::vector<cplx>& s) {
    if (h.cols != static_cast<int>(s.size()))
        throw DimensionMismatch("mmse_filter: signature length != H columns");
    ComplexMatrix hs(h.rows, 1);
    const std::vector<cplx> v = linalg::multiply(h, s);
    for (int i = 0; i < h.rows; ++i) hs(i, 0) = v[i];
    const ComplexMatrix w = linalg::hermitian_solve(r, hs);
    return w.a;
}

ChannelTaps sample_taps(RngStream& rng, int N) {
    if (N < 1) throw DimensionMismatch("sample_taps: N must be >= 1");
    ChannelTaps t;
    t.taps.resize(N);
    for (int n = 0; n < N; ++n) t.taps[n] = rng.complex_gaussian(1.0 / N);
    return t;
}

}  // namespace sigforge::model
