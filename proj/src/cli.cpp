#include "sigforge/cli.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "sigforge/errors.hpp"
#include "sigforge/fpsearch.hpp"
#include "sigforge/linalg.hpp"
#include "sigforge/quaternary.hpp"

namespace sigforge::cli {

namespace {

struct HelpRequested {
    std::string text;
};

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::string normalize(std::string s) {
    std::string out;
    for (char c : s)
        if (c != '_' && c != '-') out.push_back(static_cast<char>(std::tolower(c)));
    return out;
}

sim::Algorithm algorithm_from_name(const std::string& name) {
    const std::string n = normalize(name);
    if (n == "realmaxev") return sim::Algorithm::RealMaxEV;
    if (n == "complexmaxev") return sim::Algorithm::ComplexMaxEV;
    if (n == "exhaustive") return sim::Algorithm::Exhaustive;
    if (n == "quantized") return sim::Algorithm::Quantized;
    if (n == "fp" || n == "fpsearch") return sim::Algorithm::FpSearch;
    throw UsageError("--algorithms: unknown algorithm '" + name + "'");
}

int default_threads() {
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (n < 1) n = 1;
    if (const char* env = std::getenv("SIGFORGE_THREADS")) {
        try {
            const int cap = std::stoi(env);
            if (cap >= 1) n = std::min(n, cap);
        } catch (const std::exception&) {
            throw UsageError("SIGFORGE_THREADS: not a positive integer");
        }
    }
    return n;
}

std::string agg_path(const std::string& path) {
    const size_t slash = path.find_last_of('/');
    const size_t dot = path.find_last_of('.');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return path + "_agg";
    return path.substr(0, dot) + "_agg" + path.substr(dot);
}

BinarySignature load_init_signature(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open initializer file: " + path);
    BinarySignature s;
    std::string tok;
    while (std::getline(in, tok, ',')) {
        std::istringstream cell(tok);
        int v = 0;
        while (cell >> v) {
            if (v != 1 && v != -1)
                throw ParseError("initializer file: entries must be +1 or -1");
            s.entries.push_back(v);
        }
    }
    if (s.entries.empty()) throw ParseError("initializer file: no entries");
    return s;
}

void apply_init_spec(CliInvocation& inv) {
    if (inv.init_spec == "rank1") {
        inv.experiment.fp.radius_init = fpsearch::RadiusInit::Rank1Quantized;
        return;
    }
    if (inv.init_spec.rfind("file:", 0) == 0) {
        inv.experiment.fp.radius_init = fpsearch::RadiusInit::ProvidedSignature;
        inv.experiment.fp.provided_init = load_init_signature(inv.init_spec.substr(5));
        return;
    }
    throw UsageError("--init: expected 'rank1' or 'file:<path>'");
}

void print_aggregates(const std::vector<sim::AggregateRecord>& aggs) {
    std::printf("%-12s %-11s %6s %8s %14s %14s %14s\n", "algorithm", "alphabet",
                "point", "n", "mean_loss_db", "mean_sinr_db", "mean_cands");
    for (const auto& a : aggs)
        std::printf("%-12s %-11s %6d %8ld %14s %14s %14s\n",
                    sim::to_string(a.algorithm).c_str(), sim::to_string(a.alphabet).c_str(),
                    a.sweep_point, a.n, fmt(a.mean_loss_db).c_str(),
                    fmt(a.mean_sinr_db).c_str(),
                    a.mean_candidates ? fmt(*a.mean_candidates).c_str() : "-");
}

}  // namespace

CliInvocation parse_args(const std::vector<std::string>& args) {
    CliInvocation inv;
    sim::ExperimentConfig& exp = inv.experiment;

    CLI::App app{"SINR-optimal binary/quaternary spreading signature design"};
    app.require_subcommand(1);

    int kmin = 4, kmax = 20, kstep = 2;
    std::string alphabet = "binary";
    std::string algorithms = "quantized,fp";

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--L", exp.L, "signature length (chips)")->check(CLI::PositiveNumber);
        sub->add_option("--N", exp.N, "resolvable paths")->check(CLI::PositiveNumber);
        sub->add_option("--trials", exp.trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
        sub->add_option("--seed", exp.seed, "master RNG seed");
        sub->add_option("--alphabet", alphabet, "binary|quaternary")
            ->check(CLI::IsMember({"binary", "quaternary"}));
        sub->add_option("--init", inv.init_spec, "radius initializer: rank1|file:<path>");
        sub->add_option("--alpha-beta", exp.fp.alpha_beta, "alpha multiplier (>= 1)")
            ->check(CLI::Range(1.0, 1e9));
        sub->add_option("--alpha-delta", exp.fp.alpha_delta, "alpha absolute jitter");
        sub->add_flag("--include-isi", exp.include_isi,
                      "add one-symbol self-ISI to the evaluation covariance");
        sub->add_option("--out", inv.out_path, "output CSV path");
    };

    CLI::App* sweep = app.add_subcommand("sweep", "SINR loss vs interferer count");
    add_common(sweep);
    sweep->add_option("--kmin", kmin, "smallest interferer count")->check(CLI::NonNegativeNumber);
    sweep->add_option("--kmax", kmax, "largest interferer count")->check(CLI::NonNegativeNumber);
    sweep->add_option("--kstep", kstep, "interferer count step")->check(CLI::PositiveNumber);
    sweep->add_option("--algorithms", algorithms, "comma list of algorithms");

    CLI::App* adapt = app.add_subcommand("adapt", "sequential multiuser adaptation");
    add_common(adapt);
    adapt->add_option("--K", exp.K, "total users")->check(CLI::PositiveNumber);
    adapt->add_option("--cycles", exp.cycles, "adaptation cycles")->check(CLI::PositiveNumber);
    adapt->add_option("--algorithms", algorithms, "comma list of algorithms");

    CLI::App* complexity = app.add_subcommand("complexity", "FP candidate count table");
    add_common(complexity);
    complexity->add_option("--kmin", kmin, "smallest user count")->check(CLI::PositiveNumber);
    complexity->add_option("--kmax", kmax, "largest user count")->check(CLI::PositiveNumber);
    complexity->add_option("--kstep", kstep, "user count step")->check(CLI::PositiveNumber);

    CLI::App* solve = app.add_subcommand("solve", "optimize one user-provided Q matrix");
    solve->add_option("--matrix", inv.matrix_path, "CSV file of a+bi entries")->required();
    solve->add_option("--alphabet", alphabet, "binary|quaternary")
        ->check(CLI::IsMember({"binary", "quaternary"}));
    solve->add_option("--init", inv.init_spec, "radius initializer: rank1|file:<path>");
    solve->add_option("--alpha-beta", exp.fp.alpha_beta, "alpha multiplier (>= 1)")
        ->check(CLI::Range(1.0, 1e9));
    solve->add_option("--alpha-delta", exp.fp.alpha_delta, "alpha absolute jitter");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        std::ostringstream help;
        help << app.help();
        throw HelpRequested{help.str()};
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    exp.alphabet = alphabet == "binary" ? sim::Alphabet::Binary : sim::Alphabet::Quaternary;
    exp.threads = default_threads();

    std::vector<sim::Algorithm> algs;
    std::stringstream list(algorithms);
    std::string name;
    while (std::getline(list, name, ','))
        if (!name.empty()) algs.push_back(algorithm_from_name(name));
    if (algs.empty()) throw UsageError("--algorithms: empty list");
    exp.algorithms = algs;

    if (kmin > kmax) throw UsageError("--kmin exceeds --kmax");
    std::vector<int> points;
    for (int k = kmin; k <= kmax; k += kstep) points.push_back(k);

    if (sweep->parsed()) {
        inv.command = CliInvocation::Command::Sweep;
        exp.scenario = sim::Scenario::SingleUserSweep;
        exp.sweep = points;
        if (inv.out_path.empty()) inv.out_path = "sweep.csv";
    } else if (adapt->parsed()) {
        inv.command = CliInvocation::Command::Adapt;
        exp.scenario = sim::Scenario::MultiuserAdaptation;
        if (inv.out_path.empty()) inv.out_path = "adapt.csv";
    } else if (complexity->parsed()) {
        inv.command = CliInvocation::Command::Complexity;
        exp.scenario = sim::Scenario::ComplexityTable;
        exp.alphabet = sim::Alphabet::Binary;
        exp.algorithms = {sim::Algorithm::FpSearch};
        exp.sweep = points;
        if (exp.trials == 1000 && !complexity->count("--trials")) exp.trials = 200;
        if (inv.out_path.empty()) inv.out_path = "complexity.csv";
    } else {
        inv.command = CliInvocation::Command::Solve;
        return inv;  // no experiment validation for one-shot solves
    }

    try {
        exp.validate();
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
    return inv;
}

cplx parse_complex_literal(const std::string& text) {
    std::string t;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(c);
    if (t.empty()) throw ParseError("empty complex literal");

    const bool has_i = t.back() == 'i' || t.back() == 'j';
    if (!has_i) {
        try {
            size_t used = 0;
            const double re = std::stod(t, &used);
            if (used != t.size()) throw ParseError("trailing characters in '" + text + "'");
            return {re, 0.0};
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception&) {
            throw ParseError("bad real literal '" + text + "'");
        }
    }

    t.pop_back();  // strip the i
    // Split at the sign that separates real and imaginary parts: the last
    // '+'/'-' not in position 0 and not part of an exponent.
    size_t split = std::string::npos;
    for (size_t i = t.size(); i-- > 1;) {
        if ((t[i] == '+' || t[i] == '-') && t[i - 1] != 'e' && t[i - 1] != 'E') {
            split = i;
            break;
        }
    }
    try {
        if (split == std::string::npos) {
            // Pure imaginary: "bi", "+i", "-i".
            if (t.empty() || t == "+") return {0.0, 1.0};
            if (t == "-") return {0.0, -1.0};
            return {0.0, std::stod(t)};
        }
        const double re = std::stod(t.substr(0, split));
        std::string im = t.substr(split);
        if (im == "+") im = "1";
        if (im == "-") im = "-1";
        return {re, std::stod(im)};
    } catch (const std::exception&) {
        throw ParseError("bad complex literal '" + text + "'");
    }
}

ComplexMatrix load_complex_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open matrix file: " + path);
    std::vector<std::vector<cplx>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        std::vector<cplx> row;
        std::stringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) row.push_back(parse_complex_literal(cell));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError("matrix file is empty: " + path);
    const size_t n = rows.size();
    for (const auto& r : rows)
        if (r.size() != n) throw ParseError("matrix file is not square: " + path);
    ComplexMatrix m(static_cast<int>(n), static_cast<int>(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) m(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
    return m;
}

void emit_csv(const std::vector<sim::TrialRecord>& records, const std::string& path) {
    if (records.empty()) throw DimensionMismatch("emit_csv: no records");

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write: " + path);
    out << "scenario,alphabet,algorithm,sweep_point,trial,sinr_db,loss_db,candidates,nodes\n";
    for (const sim::TrialRecord& r : records) {
        out << sim::to_string(r.scenario) << ',' << sim::to_string(r.alphabet) << ','
            << sim::to_string(r.algorithm) << ',' << r.sweep_point << ',' << r.trial << ','
            << fmt(r.sinr_db) << ',' << fmt(r.loss_db) << ','
            << (r.candidates ? std::to_string(*r.candidates) : "") << ','
            << (r.nodes ? std::to_string(*r.nodes) : "") << '\n';
    }
    if (!out) throw IoError("write failed: " + path);
    out.close();

    const std::vector<sim::AggregateRecord> aggs = sim::aggregate(records);
    std::ofstream agg(agg_path(path), std::ios::binary);
    if (!agg) throw IoError("cannot write: " + agg_path(path));
    agg << "scenario,alphabet,algorithm,sweep_point,n,mean_loss_db,var_loss_db,"
           "mean_sinr_db,mean_candidates,mean_nodes\n";
    for (const sim::AggregateRecord& a : aggs) {
        agg << sim::to_string(a.scenario) << ',' << sim::to_string(a.alphabet) << ','
            << sim::to_string(a.algorithm) << ',' << a.sweep_point << ',' << a.n << ','
            << fmt(a.mean_loss_db) << ',' << (a.var_defined ? fmt(a.var_loss_db) : "") << ','
            << fmt(a.mean_sinr_db) << ','
            << (a.mean_candidates ? fmt(*a.mean_candidates) : "") << ','
            << (a.mean_nodes ? fmt(*a.mean_nodes) : "") << '\n';
    }
    if (!agg) throw IoError("write failed: " + agg_path(path));
}

int solve_single(const std::string& matrix_path, sim::Alphabet alphabet,
                 const fpsearch::FpConfig& fp) {
    const ComplexMatrix raw = load_complex_csv(matrix_path);

    double scale = 0.0, asym = 0.0;
    for (int i = 0; i < raw.rows; ++i)
        for (int j = 0; j < raw.cols; ++j) {
            scale = std::max(scale, std::abs(raw(i, j)));
            asym = std::max(asym, std::abs(raw(i, j) - std::conj(raw(j, i))));
        }
    if (asym > 1e-8 * std::max(scale, 1e-14))
        throw NotHermitian("matrix asymmetry " + fmt(asym) + " exceeds 1e-8 relative");

    model::SinrForm form;
    form.q = linalg::hermitianize(raw);
    form.q_real = linalg::real_part(form.q);

    if (alphabet == sim::Alphabet::Binary) {
        auto [s, stats] = fpsearch::fp_search_binary(form, fp);
        std::printf("signature:");
        for (int v : s.entries) std::printf(" %+d", v);
        std::printf("\nobjective: %s\ncandidates: %ld\nnodes: %ld\n",
                    fmt(fpsearch::quad_form(form.q_real, s.entries)).c_str(),
                    stats.candidates_found, stats.nodes_visited);
    } else {
        auto [s, stats] = quaternary::fp_search_quaternary(form, fp);
        std::printf("signature:");
        for (const cplx& v : s.entries) {
            if (v == cplx(1, 0)) std::printf(" +1");
            else if (v == cplx(-1, 0)) std::printf(" -1");
            else if (v == cplx(0, 1)) std::printf(" +i");
            else std::printf(" -i");
        }
        std::printf("\nobjective: %s\ncandidates: %ld\nnodes: %ld\n",
                    fmt(quaternary::objective(form.q, s)).c_str(),
                    stats.candidates_found, stats.nodes_visited);
    }
    return 0;
}

int run_cli(int argc, const char* const* argv) {
    CliInvocation inv;
    try {
        std::vector<std::string> args(argv + 1, argv + argc);
        inv = parse_args(args);
    } catch (const HelpRequested& h) {
        std::cout << h.text;
        return 0;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    }

    try {
        apply_init_spec(inv);
        switch (inv.command) {
            case CliInvocation::Command::Sweep: {
                const auto records = sim::run_single_user_sweep(inv.experiment);
                emit_csv(records, inv.out_path);
                print_aggregates(sim::aggregate(records));
                break;
            }
            case CliInvocation::Command::Adapt: {
                const auto out = sim::run_multiuser_adaptation(inv.experiment);
                emit_csv(out.records, inv.out_path);
                print_aggregates(sim::aggregate(out.records));
                std::printf("monotonicity violations: %ld\n", out.monotonicity_violations);
                break;
            }
            case CliInvocation::Command::Complexity: {
                const auto records = sim::run_complexity_table(inv.experiment);
                emit_csv(records, inv.out_path);
                std::printf("%6s %8s %16s %14s %12s\n", "K", "trials", "avg_candidates",
                            "avg_nodes", "exhaustive");
                for (const auto& row : sim::complexity_summary(records, inv.experiment.L))
                    std::printf("%6d %8ld %16.2f %14.2f %12ld\n", row.users, row.trials,
                                row.mean_candidates, row.mean_nodes, row.exhaustive_count);
                break;
            }
            case CliInvocation::Command::Solve:
                return solve_single(inv.matrix_path, inv.experiment.alphabet,
                                    inv.experiment.fp);
        }
        return 0;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 4;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace sigforge::cli
