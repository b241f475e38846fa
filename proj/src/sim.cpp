#include "sigforge/sim.hpp"

#include <atomic>
#include <cmath>
#include <map>
#include <thread>

#include "sigforge/errors.hpp"
#include "sigforge/linalg.hpp"

namespace sigforge::sim {

namespace {

using model::ChannelTaps;
using model::SinrForm;
using model::UserState;

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
    if (threads <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    const int workers = std::min(threads, n);
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        });
    for (auto& t : pool) t.join();
}

std::vector<double> interferer_energies(int count, double low_db, double high_db) {
    std::vector<double> e(count);
    for (int i = 0; i < count; ++i)
        e[i] = count == 1 ? low_db : low_db + (high_db - low_db) * i / (count - 1);
    return e;
}

model::Signature random_signature(RngStream& rng, int L, Alphabet alphabet) {
    if (alphabet == Alphabet::Binary) {
        BinarySignature s;
        s.entries.resize(L);
        for (int i = 0; i < L; ++i) s.entries[i] = rng.binary_chip();
        return s;
    }
    QuaternarySignature s;
    s.entries.resize(L);
    for (int i = 0; i < L; ++i) s.entries[i] = rng.quaternary_chip();
    return s;
}

struct Instance {
    ChannelTaps taps;     // user of interest
    ComplexMatrix h;      // its channel matrix
    ComplexMatrix r;      // design-time disturbance covariance
    SinrForm form;
};

Instance draw_instance(RngStream& rng, const ExperimentConfig& cfg, int interferers) {
    Instance inst;
    inst.taps = model::sample_taps(rng, cfg.N);
    const std::vector<double> energies =
        interferer_energies(interferers, cfg.interferer_low_db, cfg.interferer_high_db);
    std::vector<UserState> others(interferers);
    for (int i = 0; i < interferers; ++i) {
        others[i].taps = model::sample_taps(rng, cfg.N);
        others[i].energy_db = energies[i];
        others[i].signature = random_signature(rng, cfg.L, cfg.alphabet);
    }
    inst.r = model::disturbance_covariance(others, cfg.noise_variance, cfg.L, cfg.N);
    inst.h = model::build_channel_matrix(inst.taps, cfg.L);
    inst.form = model::sinr_form(inst.h, inst.r);
    return inst;
}

// Linear SINR of a chip vector, optionally re-deriving the evaluation
// covariance with the vector's own one-symbol ISI images.
double evaluate_chips(const ExperimentConfig& cfg, const Instance& inst,
                      const std::vector<cplx>& chips) {
    if (!cfg.include_isi)
        return model::sinr(chips, inst.form, cfg.user_energy_db);
    ComplexMatrix r_eval = inst.r;
    const ComplexMatrix isi =
        model::isi_covariance(inst.taps, cfg.user_energy_db, chips, cfg.L);
    for (size_t i = 0; i < r_eval.a.size(); ++i) r_eval.a[i] += isi.a[i];
    const SinrForm eval_form = model::sinr_form(inst.h, r_eval);
    return model::sinr(chips, eval_form, cfg.user_energy_db);
}

std::vector<cplx> benchmark_chips(const SinrForm& form, Alphabet alphabet) {
    const int L = form.length();
    const double scale = std::sqrt(static_cast<double>(L));
    std::vector<cplx> chips(L);
    if (alphabet == Alphabet::Binary) {
        const linalg::EigenPair p = linalg::max_eigenpair(form.q_real);
        for (int i = 0; i < L; ++i) chips[i] = scale * p.vector[i];
    } else {
        const linalg::ComplexEigenPair p = linalg::max_eigenpair_hermitian(form.q);
        for (int i = 0; i < L; ++i) chips[i] = scale * p.vector[i];
    }
    return chips;
}

struct AlgorithmResult {
    model::Signature signature;
    double sinr_linear = 0.0;
    std::optional<long> candidates;
    std::optional<long> nodes;
};

AlgorithmResult run_algorithm(Algorithm alg, const ExperimentConfig& cfg,
                              const Instance& inst) {
    AlgorithmResult out;
    switch (alg) {
        case Algorithm::RealMaxEV:
        case Algorithm::ComplexMaxEV: {
            const Alphabet field =
                alg == Algorithm::RealMaxEV ? Alphabet::Binary : Alphabet::Quaternary;
            out.sinr_linear = evaluate_chips(cfg, inst, benchmark_chips(inst.form, field));
            return out;
        }
        case Algorithm::Quantized:
            if (cfg.alphabet == Alphabet::Binary)
                out.signature = fpsearch::quantize_rank1(inst.form);
            else
                out.signature = quaternary::quantize_quaternary(inst.form);
            break;
        case Algorithm::FpSearch:
            if (cfg.alphabet == Alphabet::Binary) {
                auto [s, stats] = fpsearch::fp_search_binary(inst.form, cfg.fp);
                out.signature = s;
                out.candidates = stats.candidates_found;
                out.nodes = stats.nodes_visited;
            } else {
                auto [s, stats] = quaternary::fp_search_quaternary(inst.form, cfg.fp);
                out.signature = s;
                out.candidates = stats.candidates_found;
                out.nodes = stats.nodes_visited;
            }
            break;
        case Algorithm::Exhaustive:
            if (cfg.alphabet == Alphabet::Binary)
                out.signature = fpsearch::exhaustive_binary(inst.form).first;
            else
                out.signature = quaternary::exhaustive_quaternary(inst.form).first;
            break;
    }
    out.sinr_linear = evaluate_chips(cfg, inst, model::signature_chips(out.signature));
    return out;
}

TrialRecord make_record(const ExperimentConfig& cfg, Algorithm alg, int point,
                        int trial, double sinr_linear, double bench_db,
                        std::optional<long> candidates, std::optional<long> nodes) {
    TrialRecord rec;
    rec.scenario = cfg.scenario;
    rec.alphabet = cfg.alphabet;
    rec.algorithm = alg;
    rec.sweep_point = point;
    rec.trial = trial;
    rec.sinr_linear = sinr_linear;
    rec.sinr_db = model::linear_to_db(sinr_linear);
    rec.loss_db = bench_db - rec.sinr_db;
    rec.candidates = candidates;
    rec.nodes = nodes;
    return rec;
}

bool alphabet_algorithm(Algorithm a) {
    return a == Algorithm::Quantized || a == Algorithm::FpSearch ||
           a == Algorithm::Exhaustive;
}

}  // namespace

std::string to_string(Scenario s) {
    switch (s) {
        case Scenario::SingleUserSweep: return "sweep";
        case Scenario::MultiuserAdaptation: return "adapt";
        case Scenario::ComplexityTable: return "complexity";
    }
    return "?";
}

std::string to_string(Alphabet a) {
    return a == Alphabet::Binary ? "binary" : "quaternary";
}

std::string to_string(Algorithm a) {
    switch (a) {
        case Algorithm::RealMaxEV: return "real_max_ev";
        case Algorithm::ComplexMaxEV: return "complex_max_ev";
        case Algorithm::Exhaustive: return "exhaustive";
        case Algorithm::Quantized: return "quantized";
        case Algorithm::FpSearch: return "fp";
    }
    return "?";
}

void ExperimentConfig::validate() const {
    if (L < 1 || N < 1) throw DimensionMismatch("experiment: L and N must be >= 1");
    if (trials < 1) throw DimensionMismatch("experiment: trials must be >= 1");
    if (noise_variance <= 0.0) throw DimensionMismatch("experiment: noise variance must be positive");
    if (algorithms.empty()) throw DimensionMismatch("experiment: no algorithms selected");
    for (Algorithm a : algorithms) {
        if (a == Algorithm::Exhaustive) {
            const int guard = alphabet == Alphabet::Binary ? 24 : 12;
            if (L > guard)
                throw TooLarge("experiment: exhaustive search not allowed for L > " +
                               std::to_string(guard));
        }
        if (scenario == Scenario::MultiuserAdaptation && !alphabet_algorithm(a))
            throw DimensionMismatch(
                "experiment: adaptation requires alphabet-valued algorithms");
    }
    if (scenario == Scenario::MultiuserAdaptation) {
        if (K < 1) throw DimensionMismatch("experiment: K must be >= 1");
        if (cycles < 1) throw DimensionMismatch("experiment: cycles must be >= 1");
    } else {
        if (sweep.empty()) throw DimensionMismatch("experiment: empty sweep");
        for (int v : sweep) {
            if (scenario == Scenario::SingleUserSweep && v < 0)
                throw DimensionMismatch("experiment: negative interferer count");
            if (scenario == Scenario::ComplexityTable && v < 1)
                throw DimensionMismatch("experiment: user count must be >= 1");
        }
    }
    if (scenario == Scenario::ComplexityTable && alphabet != Alphabet::Binary)
        throw DimensionMismatch("experiment: complexity table is a binary-alphabet scenario");
}

std::vector<TrialRecord> run_single_user_sweep(const ExperimentConfig& cfg) {
    cfg.validate();
    const int points = static_cast<int>(cfg.sweep.size());
    const int algs = static_cast<int>(cfg.algorithms.size());
    std::vector<TrialRecord> records(static_cast<size_t>(points) * cfg.trials * algs);

    for (int p = 0; p < points; ++p) {
        const int interferers = cfg.sweep[p];
        parallel_for(cfg.trials, cfg.threads, [&, p, interferers](int t) {
            RngStream rng = RngStream::derive(cfg.seed, static_cast<uint64_t>(interferers), t);
            const Instance inst = draw_instance(rng, cfg, interferers);
            const double bench_db = model::linear_to_db(
                evaluate_chips(cfg, inst, benchmark_chips(inst.form, cfg.alphabet)));
            for (int a = 0; a < algs; ++a) {
                const AlgorithmResult res = run_algorithm(cfg.algorithms[a], cfg, inst);
                records[(static_cast<size_t>(p) * cfg.trials + t) * algs + a] =
                    make_record(cfg, cfg.algorithms[a], interferers, t, res.sinr_linear,
                                bench_db, res.candidates, res.nodes);
            }
        });
    }
    return records;
}

AdaptationOutput run_multiuser_adaptation(const ExperimentConfig& cfg) {
    cfg.validate();
    const int algs = static_cast<int>(cfg.algorithms.size());
    AdaptationOutput out;
    out.records.resize(static_cast<size_t>(cfg.trials) * algs * cfg.cycles);
    std::vector<long> violations(cfg.trials, 0);

    parallel_for(cfg.trials, cfg.threads, [&](int t) {
        RngStream rng = RngStream::derive(cfg.seed, 0, t);

        // Static environment for the whole trial: channels and energies fixed,
        // only signatures evolve.
        std::vector<ChannelTaps> taps(cfg.K);
        for (int k = 0; k < cfg.K; ++k) taps[k] = model::sample_taps(rng, cfg.N);
        std::vector<double> energies(cfg.K, cfg.user_energy_db);
        if (cfg.K > 1) {
            const std::vector<double> rest =
                interferer_energies(cfg.K - 1, cfg.interferer_low_db, cfg.interferer_high_db);
            for (int k = 1; k < cfg.K; ++k) energies[k] = rest[k - 1];
        }
        std::vector<model::Signature> initial(cfg.K);
        for (int k = 0; k < cfg.K; ++k)
            initial[k] = random_signature(rng, cfg.L, cfg.alphabet);

        for (int a = 0; a < algs; ++a) {
            const Algorithm alg = cfg.algorithms[a];
            std::vector<model::Signature> sigs = initial;

            auto form_for = [&](int k) {
                std::vector<UserState> others;
                others.reserve(cfg.K - 1);
                for (int i = 0; i < cfg.K; ++i)
                    if (i != k) others.push_back({taps[i], energies[i], sigs[i]});
                const ComplexMatrix r =
                    model::disturbance_covariance(others, cfg.noise_variance, cfg.L, cfg.N);
                const ComplexMatrix h = model::build_channel_matrix(taps[k], cfg.L);
                return model::sinr_form(h, r);
            };

            for (int cycle = 0; cycle < cfg.cycles; ++cycle) {
                for (int k = 0; k < cfg.K; ++k) {
                    const SinrForm form = form_for(k);
                    const double pre =
                        model::sinr(model::signature_chips(sigs[k]), form, energies[k]);

                    model::Signature updated;
                    if (alg == Algorithm::Quantized) {
                        if (cfg.alphabet == Alphabet::Binary)
                            updated = fpsearch::quantize_rank1(form);
                        else
                            updated = quaternary::quantize_quaternary(form);
                    } else if (alg == Algorithm::FpSearch) {
                        if (cfg.alphabet == Alphabet::Binary)
                            updated = fpsearch::fp_search_binary(form, cfg.fp).first;
                        else
                            updated = quaternary::fp_search_quaternary(form, cfg.fp).first;
                    } else {
                        if (cfg.alphabet == Alphabet::Binary)
                            updated = fpsearch::exhaustive_binary(form).first;
                        else
                            updated = quaternary::exhaustive_quaternary(form).first;
                    }

                    const double post =
                        model::sinr(model::signature_chips(updated), form, energies[k]);
                    if (alg != Algorithm::Quantized &&
                        post + 1e-9 * std::max(1.0, pre) < pre)
                        ++violations[t];
                    sigs[k] = updated;
                }

                // End-of-cycle user-1 bookkeeping against the eigenvector bound.
                const SinrForm form1 = form_for(0);
                const double sinr1 =
                    model::sinr(model::signature_chips(sigs[0]), form1, energies[0]);
                const double bench_db = model::linear_to_db(model::sinr(
                    benchmark_chips(form1, cfg.alphabet), form1, energies[0]));
                out.records[(static_cast<size_t>(t) * algs + a) * cfg.cycles + cycle] =
                    make_record(cfg, alg, cycle + 1, t, sinr1, bench_db, std::nullopt,
                                std::nullopt);
            }
        }
    });

    for (long v : violations) out.monotonicity_violations += v;
    return out;
}

std::vector<TrialRecord> run_complexity_table(const ExperimentConfig& cfg) {
    cfg.validate();
    const int points = static_cast<int>(cfg.sweep.size());
    std::vector<TrialRecord> records(static_cast<size_t>(points) * cfg.trials);

    for (int p = 0; p < points; ++p) {
        const int users = cfg.sweep[p];
        parallel_for(cfg.trials, cfg.threads, [&, p, users](int t) {
            RngStream rng = RngStream::derive(cfg.seed, static_cast<uint64_t>(users), t);
            const Instance inst = draw_instance(rng, cfg, users - 1);
            auto [s, stats] = fpsearch::fp_search_binary(inst.form, cfg.fp);
            const double sinr_lin =
                evaluate_chips(cfg, inst, model::signature_chips(model::Signature(s)));
            const double bench_db = model::linear_to_db(
                evaluate_chips(cfg, inst, benchmark_chips(inst.form, cfg.alphabet)));
            records[static_cast<size_t>(p) * cfg.trials + t] =
                make_record(cfg, Algorithm::FpSearch, users, t, sinr_lin, bench_db,
                            stats.candidates_found, stats.nodes_visited);
        });
    }
    return records;
}

std::vector<ComplexityRow> complexity_summary(const std::vector<TrialRecord>& records, int L) {
    std::vector<ComplexityRow> rows;
    for (const TrialRecord& rec : records) {
        ComplexityRow* row = nullptr;
        for (ComplexityRow& r : rows)
            if (r.users == rec.sweep_point) row = &r;
        if (!row) {
            rows.push_back(ComplexityRow{rec.sweep_point, 0, 0.0, 0.0, 1L << L});
            row = &rows.back();
        }
        ++row->trials;
        row->mean_candidates += static_cast<double>(rec.candidates.value_or(0));
        row->mean_nodes += static_cast<double>(rec.nodes.value_or(0));
    }
    for (ComplexityRow& r : rows) {
        r.mean_candidates /= static_cast<double>(r.trials);
        r.mean_nodes /= static_cast<double>(r.trials);
    }
    return rows;
}

std::vector<AggregateRecord> aggregate(const std::vector<TrialRecord>& records) {
    struct Group {
        AggregateRecord agg;
        std::vector<double> losses;
        double sinr_db_sum = 0.0;
        double cand_sum = 0.0;
        long cand_n = 0;
        double node_sum = 0.0;
        long node_n = 0;
    };
    std::vector<Group> groups;

    for (const TrialRecord& rec : records) {
        Group* g = nullptr;
        for (Group& cand : groups)
            if (cand.agg.algorithm == rec.algorithm && cand.agg.sweep_point == rec.sweep_point &&
                cand.agg.scenario == rec.scenario && cand.agg.alphabet == rec.alphabet)
                g = &cand;
        if (!g) {
            groups.emplace_back();
            g = &groups.back();
            g->agg.scenario = rec.scenario;
            g->agg.alphabet = rec.alphabet;
            g->agg.algorithm = rec.algorithm;
            g->agg.sweep_point = rec.sweep_point;
        }
        g->losses.push_back(rec.loss_db);
        g->sinr_db_sum += rec.sinr_db;
        if (rec.candidates) {
            g->cand_sum += static_cast<double>(*rec.candidates);
            ++g->cand_n;
        }
        if (rec.nodes) {
            g->node_sum += static_cast<double>(*rec.nodes);
            ++g->node_n;
        }
    }

    std::vector<AggregateRecord> out;
    out.reserve(groups.size());
    for (Group& g : groups) {
        const long n = static_cast<long>(g.losses.size());
        g.agg.n = n;
        double mean = 0.0;
        for (double v : g.losses) mean += v;
        mean /= static_cast<double>(n);
        g.agg.mean_loss_db = mean;
        if (n > 1) {
            double ss = 0.0;
            for (double v : g.losses) ss += (v - mean) * (v - mean);
            g.agg.var_loss_db = ss / static_cast<double>(n - 1);
            g.agg.var_defined = true;
        }
        g.agg.mean_sinr_db = g.sinr_db_sum / static_cast<double>(n);
        if (g.cand_n > 0) g.agg.mean_candidates = g.cand_sum / static_cast<double>(g.cand_n);
        if (g.node_n > 0) g.agg.mean_nodes = g.node_sum / static_cast<double>(g.node_n);
        out.push_back(g.agg);
    }
    return out;
}

}  // namespace sigforge::sim
