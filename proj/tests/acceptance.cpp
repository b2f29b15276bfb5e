// Acceptance suite: one [PASS]/[FAIL] line per criterion, non-zero exit when
// anything fails. The directional-reproduction criterion (6) runs the full
// two-pipeline comparison at production scale; it reads the corpus named by
// SVDSTACK_CORPUS when set and otherwise generates the bundled synthetic
// corpus, reporting which one it used.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include <Eigen/Dense>

#include "demo_corpus.hpp"
#include "svdstack/cli.hpp"
#include "svdstack/diagnostics.hpp"
#include "svdstack/persist.hpp"

using namespace svdstack;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& name, bool ok, const std::string& detail) {
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << "criterion " << criterion << ": " << name;
    if (!detail.empty()) std::cout << " (" << detail << ")";
    std::cout << std::endl;
    if (!ok) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Eigen::MatrixXd gaussian(Eigen::Index n, Eigen::Index d, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Eigen::MatrixXd m(n, d);
    for (Eigen::Index j = 0; j < d; ++j)
        for (Eigen::Index i = 0; i < n; ++i) m(i, j) = g(rng);
    return m;
}

double orthogonality_residual(const Eigen::MatrixXd& q) {
    return (q.transpose() * q - Eigen::MatrixXd::Identity(q.cols(), q.cols()))
        .cwiseAbs()
        .maxCoeff();
}

// --- criterion 1: singular values against a dense reference decomposition ---

void criterion_svd_oracle() {
    const auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(1001);
    double worst_rel = 0.0;
    double worst_orth = 0.0;
    bool ok = true;

    for (int trial = 0; trial < 100; ++trial) {
        const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng() % 59);
        const Eigen::Index d = 2 + static_cast<Eigen::Index>(rng() % 59);
        Eigen::MatrixXd c;
        switch (trial % 3) {
            case 0:  // full rank
                c = gaussian(n, d, rng);
                break;
            case 1: {  // low rank
                const Eigen::Index r = 1 + static_cast<Eigen::Index>(rng() % 5);
                c = gaussian(n, r, rng) * gaussian(r, d, rng);
                break;
            }
            default: {  // rank-deficient via duplicated columns
                c = gaussian(n, d, rng);
                for (Eigen::Index j = 1; j < d; j += 2) c.col(j) = c.col(j - 1);
                break;
            }
        }
        const Eigen::Index k = 1 + static_cast<Eigen::Index>(rng() % std::min(n, d));

        const SvdFactors f = truncated_svd(c, k, SvdOptions{.seed = rng()});
        const Eigen::VectorXd ref = Eigen::JacobiSVD<Eigen::MatrixXd>(c).singularValues();
        const double scale = std::max(ref(0), 1.0);
        for (Eigen::Index i = 0; i < k; ++i)
            worst_rel = std::max(worst_rel, std::abs(f.S(i) - ref(i)) / scale);
        worst_orth = std::max({worst_orth, orthogonality_residual(f.U),
                               orthogonality_residual(f.V)});
        for (Eigen::Index i = 0; i + 1 < k; ++i) ok = ok && f.S(i) >= f.S(i + 1);
    }

    const double elapsed = seconds_since(start);
    ok = ok && worst_rel < 1e-8 && worst_orth < 1e-10 && elapsed < 10.0;
    std::ostringstream detail;
    detail << "100 matrices, max rel err " << worst_rel << ", max orth residual "
           << worst_orth << ", " << elapsed << " s";
    report(1, "singular values match the dense reference within 1e-8", ok, detail.str());
}

// --- criterion 2: rotation preserves the row Gram matrix ---

void criterion_rotation_invariants() {
    const auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(2002);
    double worst_gram = 0.0;
    double worst_norm = 0.0;

    for (int trial = 0; trial < 50; ++trial) {
        const Eigen::Index n = 10 + static_cast<Eigen::Index>(rng() % 491);
        const Eigen::Index k = 2 + static_cast<Eigen::Index>(rng() % 49);
        Representation rep;
        rep.matrix = gaussian(n, k, rng);
        normalize_rows_in_place(rep.matrix);

        // pre-normalization factors: same decomposition svd2_rotate applies
        const SvdFactors f = canonicalize_signs(truncated_svd(rep.matrix, k));
        const Eigen::MatrixXd rotated = f.U * f.S.asDiagonal();
        worst_gram = std::max(worst_gram,
                              (rep.matrix * rep.matrix.transpose() -
                               rotated * rotated.transpose())
                                  .cwiseAbs()
                                  .maxCoeff());

        const Representation out = svd2_rotate(rep);
        for (Eigen::Index i = 0; i < out.rows(); ++i) {
            const double norm = out.matrix.row(i).norm();
            if (norm != 0.0) worst_norm = std::max(worst_norm, std::abs(norm - 1.0));
        }
    }

    const double elapsed = seconds_since(start);
    const bool ok = worst_gram < 1e-8 && worst_norm < 1e-10 && elapsed < 10.0;
    std::ostringstream detail;
    detail << "50 matrices, max gram drift " << worst_gram << ", max norm error "
           << worst_norm << ", " << elapsed << " s";
    report(2, "svd2 rotation preserves row Gram and unit norms", ok, detail.str());
}

// --- criterion 3: decision-threshold search against brute force ---

std::int64_t recount(const std::vector<double>& values, const std::vector<bool>& labels,
                     const ThresholdRule& rule) {
    std::int64_t correct = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const bool hit = rule.direction == Direction::Greater ? values[i] > rule.theta
                                                              : values[i] < rule.theta;
        if (hit == labels[i]) ++correct;
    }
    return correct;
}

ThresholdRule oracle_best_threshold(const std::vector<double>& values,
                                    const std::vector<bool>& labels) {
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<double> candidates;
    candidates.push_back(sorted.front() - 1.0);
    for (std::size_t i = 1; i < sorted.size(); ++i)
        candidates.push_back(0.5 * (sorted[i - 1] + sorted[i]));
    candidates.push_back(sorted.back() + 1.0);

    ThresholdRule best;
    best.total = static_cast<std::int64_t>(values.size());
    best.correct = -1;
    for (double theta : candidates) {
        for (Direction dir : {Direction::Greater, Direction::Less}) {
            ThresholdRule rule;
            rule.theta = theta;
            rule.direction = dir;
            rule.total = best.total;
            rule.correct = recount(values, labels, rule);
            if (rule.correct > best.correct) best = rule;
        }
    }
    return best;
}

void criterion_threshold_oracle() {
    const auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(3003);
    bool ok = true;
    int checked = 0;

    while (checked < 1000) {
        const std::size_t n = 2 + rng() % 199;
        std::vector<double> values(n);
        std::vector<bool> labels(n);
        const bool heavy_ties = rng() % 2 == 0;
        std::normal_distribution<double> g;
        bool has_true = false, has_false = false;
        for (std::size_t i = 0; i < n; ++i) {
            values[i] = heavy_ties ? double(rng() % 9) / 3.0 : g(rng);
            labels[i] = rng() % 2 == 0;
            (labels[i] ? has_true : has_false) = true;
        }
        if (!has_true || !has_false) continue;
        ++checked;

        const ThresholdRule fast = best_threshold(values, labels);
        const ThresholdRule slow = oracle_best_threshold(values, labels);
        ok = ok && fast.correct == slow.correct && fast.theta == slow.theta &&
             fast.direction == slow.direction &&
             recount(values, labels, fast) == fast.correct;
        if (!ok) break;
    }

    const double elapsed = seconds_since(start);
    ok = ok && elapsed < 10.0;
    std::ostringstream detail;
    detail << checked << " instances, " << elapsed << " s";
    report(3, "best_threshold equals the brute-force oracle exactly", ok, detail.str());
}

// --- criterion 4: focality against exhaustive subset enumeration ---

std::int64_t eval_conjunction(const Eigen::MatrixXd& m, const std::vector<bool>& labels,
                              const ConjunctiveRule& rule) {
    std::int64_t correct = 0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        bool conj = true;
        for (std::size_t p = 0; p < rule.dims.size(); ++p) {
            const double v = m(i, rule.dims[p]);
            const bool hit = rule.directions[p] == Direction::Greater ? v > rule.thetas[p]
                                                                      : v < rule.thetas[p];
            if (!hit) {
                conj = false;
                break;
            }
        }
        if ((conj == rule.predicts_first) == labels[static_cast<std::size_t>(i)]) ++correct;
    }
    return correct;
}

std::optional<Eigen::Index> oracle_focality(const Eigen::MatrixXd& m,
                                            const std::vector<bool>& labels, double theta,
                                            Eigen::Index max_subset) {
    const auto total = static_cast<std::int64_t>(m.rows());
    std::vector<std::vector<double>> cands(static_cast<std::size_t>(m.cols()));
    for (Eigen::Index d = 0; d < m.cols(); ++d) {
        auto& c = cands[static_cast<std::size_t>(d)];
        for (Eigen::Index i = 0; i < m.rows(); ++i) c.push_back(m(i, d));
        std::sort(c.begin(), c.end());
        c.erase(std::unique(c.begin(), c.end()), c.end());
        c.push_back(c.back() + 1.0);
        c.insert(c.begin(), c.front() - 2.0);
    }

    auto try_subset = [&](const std::vector<Eigen::Index>& dims) {
        ConjunctiveRule rule;
        rule.dims = dims;
        rule.thetas.resize(dims.size());
        rule.directions.resize(dims.size());
        std::vector<std::size_t> idx(dims.size(), 0);
        std::vector<int> dir(dims.size(), 0);
        while (true) {
            for (std::size_t p = 0; p < dims.size(); ++p) {
                rule.thetas[p] = cands[static_cast<std::size_t>(dims[p])][idx[p]];
                rule.directions[p] = dir[p] == 0 ? Direction::Greater : Direction::Less;
            }
            for (bool first : {true, false}) {
                rule.predicts_first = first;
                if (double(eval_conjunction(m, labels, rule)) / double(total) >= theta)
                    return true;
            }
            std::size_t p = 0;
            while (p < dims.size()) {
                if (dir[p] == 0) {
                    dir[p] = 1;
                    break;
                }
                dir[p] = 0;
                if (++idx[p] < cands[static_cast<std::size_t>(dims[p])].size()) break;
                idx[p] = 0;
                ++p;
            }
            if (p == dims.size()) return false;
        }
    };

    for (Eigen::Index size = 1; size <= max_subset; ++size) {
        std::vector<Eigen::Index> dims(static_cast<std::size_t>(size));
        std::function<bool(Eigen::Index, std::size_t)> rec = [&](Eigen::Index first,
                                                                 std::size_t depth) -> bool {
            if (depth == dims.size()) return try_subset(dims);
            for (Eigen::Index d = first; d < m.cols(); ++d) {
                dims[depth] = d;
                if (rec(d + 1, depth + 1)) return true;
            }
            return false;
        };
        if (rec(0, 0)) return size;
    }
    return std::nullopt;
}

void criterion_focality_oracle() {
    const auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(4004);
    bool ok = true;

    TrigramSample sample;
    for (int i = 0; i < 15; ++i) sample.trigrams.push_back({"l", "alpha", "r"});
    for (int i = 0; i < 15; ++i) sample.trigrams.push_back({"l", "beta", "r"});
    std::vector<bool> labels(30);
    for (std::size_t i = 0; i < 30; ++i) labels[i] = i < 15;

    for (int trial = 0; trial < 10 && ok; ++trial) {
        Representation rep;
        rep.matrix.resize(30, 6);
        for (Eigen::Index j = 0; j < 6; ++j)
            for (Eigen::Index i = 0; i < 30; ++i)
                rep.matrix(i, j) = double(int(rng() % 9)) / 4.0 - 1.0;

        Eigen::Index prev_kstar = 0;
        bool prev_present = true;
        for (double theta : {0.6, 0.75, 0.9, 1.0}) {
            const FocalityResult fast =
                focality_measure(rep, sample, {"alpha", "beta"}, theta, 2);
            const auto slow = oracle_focality(rep.matrix, labels, theta, 2);
            ok = ok && fast.k_star == slow;
            if (fast.k_star) {
                ok = ok && fast.witness.has_value() &&
                     eval_conjunction(rep.matrix, labels, *fast.witness) ==
                         fast.witness->correct &&
                     double(fast.witness->correct) / 30.0 >= theta;
                // monotone: a higher theta never needs fewer dimensions
                ok = ok && (!prev_present || *fast.k_star >= prev_kstar);
                prev_kstar = *fast.k_star;
            } else {
                prev_present = false;
            }
        }
    }

    const double elapsed = seconds_since(start);
    ok = ok && elapsed < 60.0;
    std::ostringstream detail;
    detail << "10 instances x 4 thresholds, " << elapsed << " s";
    report(4, "focality_measure equals exhaustive subset enumeration", ok, detail.str());
}

// --- criterion 5: exact sign test values ---

void criterion_sign_test() {
    const double p50 = sign_test(5, 0);
    const double p33 = sign_test(3, 3);
    const double p_paper = sign_test(64, 18);
    const bool ok = p50 == 0.0625 && p33 == 1.0 && p_paper < 0.01;
    std::ostringstream detail;
    detail << "sign_test(5,0)=" << p50 << ", sign_test(3,3)=" << p33
           << ", sign_test(64,18)=" << p_paper;
    report(5, "exact binomial sign test", ok, detail.str());
}

// --- criterion 6: directional reproduction on a full-scale corpus ---

std::filesystem::path ensure_corpus(const std::filesystem::path& dir, std::string& label) {
    if (const char* env = std::getenv("SVDSTACK_CORPUS")) {
        label = std::string("external corpus ") + env;
        return env;
    }
    label = "synthetic corpus (set SVDSTACK_CORPUS to use a real one)";
    const auto path = dir / "synthetic_corpus.txt";
    std::ofstream out(path, std::ios::binary);
    demo::write_demo_corpus(out, 60000, 1);
    return path;
}

void criterion_directional(const std::filesystem::path& work_dir) {
    const auto start = std::chrono::steady_clock::now();
    std::string corpus_label;
    const auto corpus_path = ensure_corpus(work_dir, corpus_label);

    try {
        const TokenizedCorpus corpus = tokenize_file(corpus_path);

        PipelineParams params;
        params.n_trigrams = 100000;
        params.context_dim = 250;
        params.k = 100;
        params.seed = 1;

        std::cout << "  [criterion 6] 1layer pipeline on " << corpus_label << "..."
                  << std::endl;
        const PipelineResult one = pipeline_1layer(corpus, params);
        std::cout << "  [criterion 6] 1layer done at " << seconds_since(start) << " s"
                  << std::endl;
        const PipelineResult two = pipeline_2layer(corpus, params);
        std::cout << "  [criterion 6] 2layer done at " << seconds_since(start) << " s"
                  << std::endl;

        // (a) correlation histograms: the rotated columns decorrelate
        const CorrelationSummary hist_svd1 =
            log_abs_histogram(column_correlations(one.svd1), 0.1, 1e-12, true);
        const CorrelationSummary hist_svd2 =
            log_abs_histogram(column_correlations(one.svd2), 0.1, 1e-12, true);
        const double shift = histogram_shift(hist_svd1, hist_svd2);
        report(6, "(a) svd2 log10|c| mean sits >= 0.2 left of svd1", shift >= 0.2,
               "shift " + std::to_string(shift) + ", " + corpus_label);

        // (b) svd2 wins at least as often as svd1 on 100 word pairs
        const WordPairSet pairs =
            sample_word_pairs(one.vocab, one.trigrams, 100, 25, 250, 2,
                              mix_seed(params.seed, kSeedWordPairs));
        const DiscriminationReport svd2_vs_svd1 =
            compare_representations(one.svd2, one.svd1, one.trigrams, pairs);
        std::ostringstream wb;
        wb << "wins " << svd2_vs_svd1.wins_a << ", ties " << svd2_vs_svd1.ties
           << ", losses " << svd2_vs_svd1.wins_b << ", mean diff "
           << 100.0 * svd2_vs_svd1.mean_accuracy_diff << "%";
        report(6, "(b) svd2 wins >= losses against svd1 over 100 pairs",
               svd2_vs_svd1.wins_a >= svd2_vs_svd1.wins_b, wb.str());

        // (c) the stacked representation beats the flat one
        const DiscriminationReport two_vs_one =
            compare_representations(two.svd2, one.svd2, one.trigrams, pairs);
        std::ostringstream wc;
        wc << "wins " << two_vs_one.wins_a << ", ties " << two_vs_one.ties << ", losses "
           << two_vs_one.wins_b << ", p " << two_vs_one.p_value;
        report(6, "(c) 2layer-svd2 beats 1layer-svd2 at p < 0.05",
               two_vs_one.wins_a > two_vs_one.wins_b && two_vs_one.p_value < 0.05,
               wc.str());

        const double elapsed = seconds_since(start);
        report(6, "(d) both pipelines complete in under 15 minutes", elapsed < 900.0,
               std::to_string(elapsed) + " s");
    } catch (const std::exception& e) {
        report(6, "directional reproduction", false, std::string("exception: ") + e.what());
    }
}

// --- criterion 7: byte-identical artifacts on re-run ---

std::vector<char> slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void criterion_determinism(const std::filesystem::path& work_dir) {
    const auto start = std::chrono::steady_clock::now();
    try {
        const auto corpus_path = work_dir / "determinism_corpus.txt";
        {
            std::ofstream out(corpus_path, std::ios::binary);
            demo::write_demo_corpus(out, 10000, 2);
        }

        RunConfig config;
        config.corpus_path = corpus_path;
        config.context_dims = 50;
        config.k = 20;
        config.n_trigrams = 20000;
        config.n_pairs = 20;
        config.freq_lo = 5;
        config.freq_hi = 500;
        config.min_occurrences = 1;
        config.seed = 77;

        RunConfig run_a = config;
        run_a.output_dir = work_dir / "det_a";
        RunConfig run_b = config;
        run_b.output_dir = work_dir / "det_b";
        cmd_embed(run_a);
        cmd_embed(run_b);

        bool ok = true;
        for (const char* name :
             {"svd1.mat", "svd2.mat", "vocab.tsv", "trigrams.tsv", "manifest.json"})
            ok = ok && slurp(run_a.output_dir / name) == slurp(run_b.output_dir / name);

        RunConfig run_c = config;
        run_c.output_dir = work_dir / "det_c";
        cmd_discriminate(run_a, run_a.output_dir / "svd2.mat",
                         run_a.output_dir / "svd1.mat", run_a.output_dir / "vocab.tsv",
                         run_a.output_dir / "trigrams.tsv");
        cmd_discriminate(run_c, run_a.output_dir / "svd2.mat",
                         run_a.output_dir / "svd1.mat", run_a.output_dir / "vocab.tsv",
                         run_a.output_dir / "trigrams.tsv");
        ok = ok && slurp(run_a.output_dir / "discrimination.json") ==
                       slurp(run_c.output_dir / "discrimination.json");

        report(7, "re-running embed + discriminate is byte-identical", ok,
               std::to_string(seconds_since(start)) + " s");
    } catch (const std::exception& e) {
        report(7, "re-running embed + discriminate is byte-identical", false,
               std::string("exception: ") + e.what());
    }
}

// --- criterion 8: per-row scale invariance of the normalized input ---

void criterion_scale_invariance() {
    std::mt19937_64 rng(8008);
    bool ok = true;
    double worst = 0.0;

    for (int trial = 0; trial < 20; ++trial) {
        Eigen::MatrixXd raw = gaussian(12, 9, rng).cwiseAbs();
        raw = (raw.array() * 3.0).floor();  // integer-like counts with zeros
        raw.row(3).setZero();               // keep a degenerate row in play

        CountMatrix base;
        base.values = raw;
        const CountMatrix ref = normalize_rows(apply_tfidf(base));

        for (double scale : {0.5, 2.0, 10.0}) {
            CountMatrix scaled;
            scaled.values = raw;
            scaled.values.row(5) *= scale;
            const CountMatrix out = normalize_rows(apply_tfidf(scaled));
            const double diff = (out.values - ref.values).cwiseAbs().maxCoeff();
            worst = std::max(worst, diff);
            ok = ok && diff <= 1e-12;
            if (scale != 10.0)  // powers of two commute with rounding exactly
                ok = ok && out.values == ref.values;
        }
    }

    std::ostringstream detail;
    detail << "max drift " << worst << " (bitwise for powers of two)";
    report(8, "row scaling never changes the normalized pipeline input", ok, detail.str());
}

}  // namespace

int main() {
    const auto work_dir = std::filesystem::temp_directory_path() / "svdstack_acceptance";
    std::filesystem::remove_all(work_dir);
    std::filesystem::create_directories(work_dir);

    criterion_svd_oracle();
    criterion_rotation_invariants();
    criterion_threshold_oracle();
    criterion_focality_oracle();
    criterion_sign_test();
    criterion_directional(work_dir);
    criterion_determinism(work_dir);
    criterion_scale_invariance();

    std::filesystem::remove_all(work_dir);
    if (g_failures > 0) {
        std::cout << g_failures << " criterion check(s) failed" << std::endl;
        return 1;
    }
    std::cout << "all acceptance criteria passed" << std::endl;
    return 0;
}
