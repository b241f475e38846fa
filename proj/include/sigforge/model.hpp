#pragma once

#include <variant>
#include <vector>

#include "sigforge/rng.hpp"
#include "sigforge/types.hpp"

namespace sigforge::model {

struct SystemConfig {
    int L = 16;                    // spreading gain (chips)
    int N = 3;                     // resolvable fading paths
    int K = 1;                     // users
    std::vector<double> energies;  // per-user energy, dB
    double noise_variance = 1.0;   // sigma^2, linear

    void validate() const;
};

struct ChannelTaps {
    std::vector<cplx> taps;

    int paths() const { return static_cast<int>(taps.size()); }
};

using Signature = std::variant<BinarySignature, QuaternarySignature>;

struct UserState {
    ChannelTaps taps;
    double energy_db = 0.0;
    Signature signature;
};

// Hermitian PSD quadratic form of the SINR objective, plus its real part.
struct SinrForm {
    ComplexMatrix q;
    RealMatrix q_real;

    int length() const { return q.rows; }
};

std::vector<cplx> signature_chips(const Signature& s);
int signature_length(const Signature& s);

// Banded (L+N-1) x L convolution matrix: column j carries the taps in rows
// j .. j+N-1.
ComplexMatrix build_channel_matrix(const ChannelTaps& taps, int L);

// sigma^2 I + sum_i E_i (H_i s_i)(H_i s_i)^H over the interferers, energies
// converted from dB.
ComplexMatrix disturbance_covariance(const std::vector<UserState>& interferers,
                                     double sigma2, int L, int N);

// Single-symbol ISI approximation for a user's own multipath echoes: the
// +/- one-symbol shifted self-images of H s, weighted by the user's energy.
// Used only for evaluation-time covariance when explicitly requested.
ComplexMatrix isi_covariance(const UserState& user, int L, int N);
ComplexMatrix isi_covariance(const ChannelTaps& taps, double energy_db,
                             const std::vector<cplx>& chips, int L);

// Q = H^H R^{-1} H, symmetrized to kill round-off asymmetry.
SinrForm sinr_form(const ComplexMatrix& h, const ComplexMatrix& r);

// Linear output SINR 10^(E_dB/10) * s^H Q s.
double sinr(const BinarySignature& s, const SinrForm& form, double energy_db);
double sinr(const QuaternarySignature& s, const SinrForm& form, double energy_db);
double sinr(const std::vector<cplx>& s, const SinrForm& form, double energy_db);

// Max-SINR filter w = R^{-1} H s (unit scale; the detector is scale-invariant).
std::vector<cplx> mmse_filter(const ComplexMatrix& r, const ComplexMatrix& h,
                              const std::vector<cplx>& s);

// N i.i.d. circular complex Gaussian taps, per-tap variance 1/N so total
// channel power is normalized to one.
ChannelTaps sample_taps(RngStream& rng, int N);

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

}  // namespace sigforge::model
