#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "svdstack/corpus.hpp"
#include "svdstack/pipeline.hpp"

namespace svdstack {

/// Pearson correlations of representation columns. Constant (zero-variance)
/// columns cannot carry a coefficient; their entries are set to 0 and the
/// column indices reported.
struct CorrelationMatrix {
    Eigen::MatrixXd corr;  // k x k, symmetric, entries in [-1, 1]
    std::vector<Eigen::Index> degenerate_columns;
};

CorrelationMatrix column_correlations(const Representation& rep);

struct HistogramBin {
    double low = 0.0;
    double high = 0.0;
    std::size_t count = 0;
};

/// Histogram of log10|c| over the correlation coefficients, plus the summary
/// statistics the histogram is read for. Coefficients with |c| < floor_abs
/// (including the zeroed entries of degenerate columns) are tallied in
/// excluded_zero rather than binned.
struct CorrelationSummary {
    std::vector<HistogramBin> histogram;
    std::size_t excluded_zero = 0;
    bool include_diagonal = true;
    double bin_width = 0.1;
    double floor_abs = 1e-12;
    std::size_t total_coefficients = 0;   // binned + excluded
    double mean_log10_offdiag = 0.0;      // over off-diagonal |c| >= floor
    std::size_t offdiag_counted = 0;
    std::size_t degenerate_columns = 0;
};

CorrelationSummary log_abs_histogram(const CorrelationMatrix& corr, double bin_width,
                                     double floor_abs, bool include_diagonal);

/// Difference a - b of the mean off-diagonal log10|c|; positive means b's
/// correlations are smaller (its histogram sits left of a's).
double histogram_shift(const CorrelationSummary& a, const CorrelationSummary& b);

enum class Direction { Greater, Less };

std::string to_string(Direction d);

/// Single-dimension threshold classifier: predict class 1 iff v > theta
/// (direction Greater) or v < theta (direction Less). Accuracy is kept as an
/// exact count ratio so rules over the same rows compare exactly.
struct ThresholdRule {
    Eigen::Index dimension = -1;
    double theta = 0.0;
    Direction direction = Direction::Greater;
    std::int64_t correct = 0;
    std::int64_t total = 0;

    double accuracy() const { return total ? double(correct) / double(total) : 0.0; }
};

/// Exhaustive scan over candidate thresholds (midpoints between consecutive
/// distinct values plus one sentinel below the minimum and one above the
/// maximum) and both directions. Ties resolve to the smallest theta, with
/// direction Greater preferred at equal theta. labels[i] == true means class 1.
ThresholdRule best_threshold(std::span<const double> values,
                             const std::vector<bool>& labels);

/// Best single-dimension rule over the rows whose central word is pair.a
/// (class 1) or pair.b (class 2); ties resolve to the lowest dimension.
ThresholdRule pair_accuracy(const Representation& rep, const TrigramSample& trigrams,
                            const WordPair& pair);

struct PairOutcome {
    WordPair pair;
    ThresholdRule rule_a;
    ThresholdRule rule_b;
};

struct DiscriminationReport {
    std::vector<PairOutcome> per_pair;
    std::size_t wins_a = 0;
    std::size_t ties = 0;
    std::size_t wins_b = 0;
    double mean_accuracy_diff = 0.0;      // mean of (acc_a - acc_b), absolute
    double mean_relative_diff = 0.0;      // mean of (acc_a - acc_b) / acc_b
    double p_value = 1.0;                 // two-sided sign test over non-ties
};

DiscriminationReport compare_representations(const Representation& rep_a,
                                             const Representation& rep_b,
                                             const TrigramSample& trigrams,
                                             const WordPairSet& pairs);

enum class SignTestSides { Two, One };

/// Exact binomial sign test for wins vs losses under a fair coin, computed by
/// direct pmf summation. Two-sided: min(1, 2 * P[X >= max(w, l)]).
/// One-sided: P[X >= max(w, l)]. Zero trials give p = 1.
double sign_test(std::int64_t wins, std::int64_t losses,
                 SignTestSides sides = SignTestSides::Two);

/// Conjunction of per-dimension threshold predicates; predicts class 1 iff
/// every predicate holds (or class 2, when predicts_first is false).
struct ConjunctiveRule {
    std::vector<Eigen::Index> dims;
    std::vector<double> thetas;
    std::vector<Direction> directions;
    bool predicts_first = true;
    std::int64_t correct = 0;
    std::int64_t total = 0;

    double accuracy() const { return total ? double(correct) / double(total) : 0.0; }
};

struct FocalityResult {
    double theta = 0.0;
    Eigen::Index max_subset = 0;
    std::optional<Eigen::Index> k_star;       // smallest subset size reaching theta
    std::optional<ConjunctiveRule> witness;
};

/// Smallest dimension-subset size whose best conjunctive rule reaches
/// accuracy >= theta, searched exhaustively for sizes 1..max_subset.
/// The search is exponential in the subset size; max_subset is capped at 3.
FocalityResult focality_measure(const Representation& rep, const TrigramSample& trigrams,
                                const WordPair& pair, double theta,
                                Eigen::Index max_subset);

/// CSV rows `bin_low,bin_high,count` plus a trailing `#excluded_zero=N` line.
void write_histogram_csv(const CorrelationSummary& summary,
                         const std::filesystem::path& path);

}  // namespace svdstack
