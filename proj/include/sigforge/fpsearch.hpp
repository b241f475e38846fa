#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>

#include "sigforge/model.hpp"
#include "sigforge/types.hpp"

namespace sigforge::fpsearch {

enum class RadiusInit { Rank1Quantized, ProvidedSignature };

struct FpConfig {
    // alpha = alpha_beta * lambda_max + delta, delta defaulting to
    // 1e-6 * max(1, lambda_max) when left negative.
    double alpha_beta = 1.01;
    double alpha_delta = -1.0;
    RadiusInit radius_init = RadiusInit::Rank1Quantized;
    std::optional<BinarySignature> provided_init;
    double radius_inflation = 1e-9;
};

struct SearchStats {
    long candidates_found = 0;  // complete vectors satisfying every bound
    long nodes_visited = 0;     // accepted partial assignments
    double best_metric = 0.0;   // s_opt^T W s_opt
};

// Hook exercised once per complete candidate, with its s^T W s metric.
using CandidateHook = std::function<void(std::span<const int>, double)>;

// s^T M s evaluated row-by-row in a fixed order; shared by the search and the
// exhaustive oracle so equal signatures give bit-equal objectives.
double quad_form(const RealMatrix& m, std::span<const int> s);

// Sign pattern of the canonicalized max eigenvector of Q_kR (sign(0) -> +1).
BinarySignature quantize_rank1(const model::SinrForm& form);
BinarySignature quantize_rank1(const RealMatrix& q_real);

// W = alpha I - Q_kR with alpha just above the top eigenvalue, so W is PD.
struct WeightedForm {
    RealMatrix w;
    double alpha = 0.0;
};
WeightedForm build_w(const RealMatrix& q_real, const FpConfig& cfg);
WeightedForm build_w(const model::SinrForm& form, const FpConfig& cfg);

// Fixed squared radius C = (1 + eps) * s_init^T W s_init.
double initial_radius(const RealMatrix& w, const BinarySignature& s_init, double eps);

// Fixed-radius modified Fincke-Pohst enumeration over {-1,+1}^L minimizing
// s^T W s (equivalently maximizing s^T Q_kR s). The returned signature is
// canonicalized so its first entry is +1.
std::pair<BinarySignature, SearchStats> fp_search_binary(
    const RealMatrix& q_real, const FpConfig& cfg = {},
    const CandidateHook& hook = nullptr);
std::pair<BinarySignature, SearchStats> fp_search_binary(
    const model::SinrForm& form, const FpConfig& cfg = {},
    const CandidateHook& hook = nullptr);

// Brute force over all 2^L sign vectors; guard L <= 24. Ties broken by the
// lexicographically smallest canonicalized signature.
std::pair<BinarySignature, double> exhaustive_binary(const RealMatrix& q_real);
std::pair<BinarySignature, double> exhaustive_binary(const model::SinrForm& form);

}  // namespace sigforge::fpsearch
