#pragma once

#include <string>
#include <vector>

#include "sigforge/sim.hpp"
#include "sigforge/types.hpp"

namespace sigforge::cli {

struct UsageError : std::runtime_error {
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

struct CliInvocation {
    enum class Command { Sweep, Adapt, Complexity, Solve };
    Command command = Command::Sweep;
    sim::ExperimentConfig experiment;
    std::string out_path;     // CSV scenarios
    std::string matrix_path;  // solve
    std::string init_spec = "rank1";
};

// Parse and fully validate argv (program name excluded). Throws UsageError on
// any invalid flag or combination; no computation happens before this returns.
CliInvocation parse_args(const std::vector<std::string>& args);

// One `a+bi` literal; spaces around the sign are tolerated.
cplx parse_complex_literal(const std::string& text);

// Square complex CSV matrix of `a+bi` literals.
ComplexMatrix load_complex_csv(const std::string& path);

// Per-trial rows plus an `_agg` companion file with group statistics.
// UTF-8, LF line endings, 9 significant digits; absent fields stay empty.
void emit_csv(const std::vector<sim::TrialRecord>& records, const std::string& path);

// One-shot optimization of a user-provided Hermitian matrix.
int solve_single(const std::string& matrix_path, sim::Alphabet alphabet,
                 const fpsearch::FpConfig& fp);

// Full front end. Exit codes: 0 success, 2 usage, 3 numerical failure, 4 I/O.
int run_cli(int argc, const char* const* argv);

}  // namespace sigforge::cli
