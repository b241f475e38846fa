#include "sigforge/fpsearch.hpp"

#include <cassert>
#include <cmath>
#include <string>
#include <vector>

#include "sigforge/errors.hpp"
#include "sigforge/linalg.hpp"

namespace sigforge::fpsearch {

namespace {

void canonicalize(BinarySignature& s) {
    if (!s.entries.empty() && s.entries.front() < 0)
        for (int& v : s.entries) v = -v;
}

// Lexicographic order with -1 < +1, on canonicalized signatures.
bool lex_less(const BinarySignature& a, const BinarySignature& b) {
    return a.entries < b.entries;
}

}  // namespace

double quad_form(const RealMatrix& m, std::span<const int> s) {
    double acc = 0.0;
    for (int i = 0; i < m.rows; ++i) {
        double row = 0.0;
        for (int j = 0; j < m.cols; ++j) row += m(i, j) * s[j];
        acc += s[i] * row;
    }
    return acc;
}

BinarySignature quantize_rank1(const RealMatrix& q_real) {
    linalg::EigenPair p = linalg::max_eigenpair(q_real);
    BinarySignature s;
    s.entries.resize(p.vector.size());
    for (size_t i = 0; i < p.vector.size(); ++i)
        s.entries[i] = (p.vector[i] < 0.0) ? -1 : 1;  // sign(0) -> +1
    return s;
}

BinarySignature quantize_rank1(const model::SinrForm& form) {
    return quantize_rank1(form.q_real);
}

WeightedForm build_w(const RealMatrix& q_real, const FpConfig& cfg) {
    const int L = q_real.rows;
    const double lambda_max = linalg::max_eigenpair(q_real).value;
    double delta = cfg.alpha_delta >= 0.0 ? cfg.alpha_delta
                                          : 1e-6 * std::max(1.0, lambda_max);

    for (int attempt = 0; attempt < 2; ++attempt) {
        const double alpha = cfg.alpha_beta * lambda_max + delta;
        if (alpha - lambda_max > 0.0) {
            WeightedForm wf;
            wf.alpha = alpha;
            wf.w = RealMatrix(L, L);
            for (int i = 0; i < L; ++i)
                for (int j = 0; j < L; ++j)
                    wf.w(i, j) = (i == j ? alpha : 0.0) - q_real(i, j);
            try {
                linalg::cholesky_upper(wf.w);
                return wf;
            } catch (const NotPositiveDefinite&) {
                // fall through to the escalated retry
            }
        }
        delta += 1e-6 * std::max(1.0, std::abs(lambda_max));
    }
    throw NotPositiveDefinite("build_w: W singular even after jitter escalation");
}

WeightedForm build_w(const model::SinrForm& form, const FpConfig& cfg) {
    return build_w(form.q_real, cfg);
}

double initial_radius(const RealMatrix& w, const BinarySignature& s_init, double eps) {
    if (!s_init.valid() || s_init.length() != w.rows)
        throw DimensionMismatch("initial_radius: initializer is not a valid +/-1 vector");
    return (1.0 + eps) * quad_form(w, s_init.entries);
}

std::pair<BinarySignature, SearchStats> fp_search_binary(const RealMatrix& q_real,
                                                         const FpConfig& cfg,
                                                         const CandidateHook& hook) {
    const int L = q_real.rows;
    if (L < 1) throw DimensionMismatch("fp_search_binary: empty problem");

    const WeightedForm wf = build_w(q_real, cfg);
    const RealMatrix& w = wf.w;

    BinarySignature s_init;
    if (cfg.radius_init == RadiusInit::ProvidedSignature) {
        if (!cfg.provided_init || cfg.provided_init->length() != L)
            throw DimensionMismatch("fp_search_binary: provided initializer missing or wrong length");
        s_init = *cfg.provided_init;
    } else {
        s_init = quantize_rank1(q_real);
    }

    const double radius = initial_radius(w, s_init, cfg.radius_inflation);

    const RealMatrix b = linalg::cholesky_upper(w);
    // g_ii = b_ii^2, g_ij = b_ij / b_ii for j > i.
    RealMatrix g(L, L);
    for (int i = 0; i < L; ++i) {
        g(i, i) = b(i, i) * b(i, i);
        for (int j = i + 1; j < L; ++j) g(i, j) = b(i, j) / b(i, i);
    }

    SearchStats stats;
    BinarySignature best = s_init;
    double best_metric = quad_form(w, s_init.entries);

    // Depth-first enumeration, levels L-1 (outermost entry s_L) down to 0.
    std::vector<double> delta(L, 0.0), ck(L, 0.0);
    std::vector<int> s(L, 0), ub(L, 0);

    auto set_bounds = [&](int k) {
        if (ck[k] < 0.0) {  // partial metric already exceeds the radius
            ub[k] = -2;
            s[k] = -2;
            return;
        }
        const double r = std::sqrt(ck[k] / g(k, k));
        ub[k] = static_cast<int>(std::min(std::floor(r - delta[k]), 1.0));
        s[k] = static_cast<int>(std::max(std::ceil(-r - delta[k]), -1.0)) - 1;
    };

    int k = L - 1;
    delta[k] = 0.0;
    ck[k] = radius;
    set_bounds(k);

    while (true) {
        ++s[k];
        if (s[k] == 0) s[k] = 1;
        if (s[k] > ub[k]) {
            if (k == L - 1) break;  // level L exhausted: search complete
            ++k;
            continue;
        }
        ++stats.nodes_visited;
        if (k > 0) {
            --k;
            double d = 0.0;
            for (int j = k + 1; j < L; ++j) d += g(k, j) * s[j];
            delta[k] = d;
            ck[k] = ck[k + 1] - g(k + 1, k + 1) * (delta[k + 1] + s[k + 1]) * (delta[k + 1] + s[k + 1]);
            assert(ck[k] <= ck[k + 1] + 1e-9 * std::abs(radius));
            set_bounds(k);
            continue;
        }
        // Complete candidate inside the sphere.
        ++stats.candidates_found;
        const double metric = quad_form(w, s);
        if (hook) hook(std::span<const int>(s), metric);
        if (metric <= best_metric) {
            best_metric = metric;
            best.entries = s;
        }
    }

    if (stats.candidates_found < 1)
        throw InternalInvariantViolation(
            "fp_search_binary: no candidate found; the radius construction "
            "guarantees at least the initializer");

    canonicalize(best);
    stats.best_metric = quad_form(w, best.entries);
    return {best, stats};
}

std::pair<BinarySignature, SearchStats> fp_search_binary(const model::SinrForm& form,
                                                         const FpConfig& cfg,
                                                         const CandidateHook& hook) {
    return fp_search_binary(form.q_real, cfg, hook);
}

std::pair<BinarySignature, double> exhaustive_binary(const RealMatrix& q_real) {
    const int L = q_real.rows;
    if (L > 24) throw TooLarge("exhaustive_binary: L > 24 (2^L candidates)");
    if (L < 1) throw DimensionMismatch("exhaustive_binary: empty problem");

    BinarySignature best;
    double best_obj = 0.0;
    std::vector<int> s(L, 0);
    const uint64_t total = uint64_t{1} << L;
    for (uint64_t u = 0; u < total; ++u) {
        for (int i = 0; i < L; ++i) s[i] = ((u >> i) & 1u) ? -1 : 1;
        const double obj = quad_form(q_real, s);
        if (best.entries.empty() || obj > best_obj) {
            best.entries = s;
            canonicalize(best);
            best_obj = obj;
        } else if (obj == best_obj) {
            BinarySignature cand(s);
            canonicalize(cand);
            if (lex_less(cand, best)) best = cand;
        }
    }
    return {best, best_obj};
}

std::pair<BinarySignature, double> exhaustive_binary(const model::SinrForm& form) {
    return exhaustive_binary(form.q_real);
}

}  // namespace sigforge::fpsearch
