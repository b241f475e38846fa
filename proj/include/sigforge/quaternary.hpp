#pragma once

#include <utility>

#include "sigforge/fpsearch.hpp"
#include "sigforge/model.hpp"
#include "sigforge/types.hpp"

namespace sigforge::quaternary {

// Real symmetric 2L x 2L quadratic form equivalent to s^H Q_k s over the
// quaternary alphabet, acting on c_bar = [c_R; c_I] with c = (1+j) s.
struct EquivalentBinaryProblem {
    RealMatrix q_bar;
};

// c = (1+j) s entrywise; both parts are antipodal binary vectors.
std::pair<BinarySignature, BinarySignature> quaternary_to_c(const QuaternarySignature& s);

// Inverse map s = (1-j)(c_R + j c_I)/2, exact on the unit alphabet.
QuaternarySignature c_to_quaternary(const BinarySignature& c_r, const BinarySignature& c_i);

// Q_bar = [[U_R, -U_I],[U_I, U_R]]^T [[U_R, -U_I],[U_I, U_R]] / 2 from the
// Cholesky factor Q_k = U^H U, with escalating PSD jitter when Q_k is
// numerically semidefinite.
EquivalentBinaryProblem build_equivalent_binary(const model::SinrForm& form);

// Quaternary optimizer: binary FP search on the length-2L equivalent problem,
// then reassembly. Output canonicalized so the first entry equals 1.
std::pair<QuaternarySignature, fpsearch::SearchStats> fp_search_quaternary(
    const model::SinrForm& form, const fpsearch::FpConfig& cfg = {});

// Brute force over all 4^L unit vectors; guard L <= 12.
std::pair<QuaternarySignature, double> exhaustive_quaternary(const model::SinrForm& form);

// Sign operator on real and imaginary parts of the complex max eigenvector of
// Q_k, each quantized entry mapped to the nearest alphabet unit by angle
// (ties to the smaller angle index).
QuaternarySignature quantize_quaternary(const model::SinrForm& form);

// Multiply by the unit making the first entry 1; exact on the alphabet.
void canonicalize_orbit(QuaternarySignature& s);

// Re part of s^H Q s, fixed evaluation order.
double objective(const ComplexMatrix& q, const QuaternarySignature& s);

}  // namespace sigforge::quaternary
