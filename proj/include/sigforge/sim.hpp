#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sigforge/fpsearch.hpp"
#include "sigforge/model.hpp"
#include "sigforge/quaternary.hpp"

namespace sigforge::sim {

enum class Scenario { SingleUserSweep, MultiuserAdaptation, ComplexityTable };
enum class Alphabet { Binary, Quaternary };
enum class Algorithm { RealMaxEV, ComplexMaxEV, Exhaustive, Quantized, FpSearch };

std::string to_string(Scenario s);
std::string to_string(Alphabet a);
std::string to_string(Algorithm a);

struct ExperimentConfig {
    Scenario scenario = Scenario::SingleUserSweep;
    int L = 16;
    int N = 3;
    int K = 8;  // total users (adaptation scenario)
    double noise_variance = 1.0;
    Alphabet alphabet = Alphabet::Binary;
    std::vector<Algorithm> algorithms{Algorithm::Quantized, Algorithm::FpSearch};
    int trials = 1000;
    uint64_t seed = 42;
    std::vector<int> sweep;  // interferer counts (sweep) or user counts (complexity)
    int cycles = 5;          // adaptation passes
    double user_energy_db = 10.0;
    double interferer_low_db = 8.0;
    double interferer_high_db = 11.0;
    bool include_isi = false;
    fpsearch::FpConfig fp;
    int threads = 1;

    void validate() const;
};

struct TrialRecord {
    Scenario scenario;
    Alphabet alphabet;
    Algorithm algorithm;
    int sweep_point = 0;  // interferer count, adaptation cycle, or K
    int trial = 0;
    double sinr_linear = 0.0;
    double sinr_db = 0.0;
    double loss_db = 0.0;
    std::optional<long> candidates;
    std::optional<long> nodes;
};

struct AggregateRecord {
    Scenario scenario;
    Alphabet alphabet;
    Algorithm algorithm;
    int sweep_point = 0;
    long n = 0;
    double mean_loss_db = 0.0;
    double var_loss_db = 0.0;  // sample variance (n-1); 0 when n == 1
    bool var_defined = false;  // false for singleton groups
    double mean_sinr_db = 0.0;
    std::optional<double> mean_candidates;
    std::optional<double> mean_nodes;
};

// Per-interferer-count SINR-loss benchmark: fresh channels, interferer
// signatures, and energies every trial; losses measured against the
// energy-normalized (sqrt(L)-scaled) eigenvector benchmark of the alphabet.
std::vector<TrialRecord> run_single_user_sweep(const ExperimentConfig& cfg);

struct AdaptationOutput {
    std::vector<TrialRecord> records;  // user-1 loss after each full cycle
    // Updates where a user's SINR dropped below its previous signature's
    // SINR under the same covariance (argmax algorithms must keep this 0).
    long monotonicity_violations = 0;
};

// Sequential user-after-user re-optimization over a static channel set.
AdaptationOutput run_multiuser_adaptation(const ExperimentConfig& cfg);

// Average FP candidate counts per user count K, rank-1 radius.
std::vector<TrialRecord> run_complexity_table(const ExperimentConfig& cfg);

struct ComplexityRow {
    int users = 0;
    long trials = 0;
    double mean_candidates = 0.0;
    double mean_nodes = 0.0;
    long exhaustive_count = 0;  // 2^L, the brute-force cardinality
};
std::vector<ComplexityRow> complexity_summary(const std::vector<TrialRecord>& records, int L);

// Sample mean/variance per (algorithm, sweep point), reduced in record order.
std::vector<AggregateRecord> aggregate(const std::vector<TrialRecord>& records);

}  // namespace sigforge::sim
