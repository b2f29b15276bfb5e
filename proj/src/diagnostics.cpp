#include "svdstack/diagnostics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <thread>

#include "json.hpp"

namespace svdstack {

std::string to_string(Direction d) { return d == Direction::Greater ? "greater" : "less"; }

CorrelationMatrix column_correlations(const Representation& rep) {
    const Eigen::MatrixXd& x = rep.matrix;
    if (x.rows() < 2) throw DataError("column correlations need at least 2 rows");

    const Eigen::Index n = x.rows();
    const Eigen::Index k = x.cols();
    Eigen::MatrixXd centered = x.rowwise() - x.colwise().mean();
    Eigen::VectorXd ss = centered.colwise().squaredNorm();

    CorrelationMatrix out;
    out.corr = Eigen::MatrixXd::Zero(k, k);

    // A constant column has no variance to correlate. Exactly-zero columns
    // (rank-deficient factorizations) land here; near-constant columns are
    // caught by a scale-relative floor on the centered sum of squares.
    std::vector<bool> degenerate(k, false);
    for (Eigen::Index j = 0; j < k; ++j) {
        const double scale = x.col(j).cwiseAbs().maxCoeff();
        if (ss(j) <= double(n) * std::pow(scale * 1e-13, 2)) {
            degenerate[j] = true;
            out.degenerate_columns.push_back(j);
        }
    }

    const Eigen::MatrixXd gram = centered.transpose() * centered;
    for (Eigen::Index i = 0; i < k; ++i) {
        if (degenerate[i]) continue;
        out.corr(i, i) = 1.0;
        for (Eigen::Index j = i + 1; j < k; ++j) {
            if (degenerate[j]) continue;
            double c = gram(i, j) / std::sqrt(ss(i) * ss(j));
            c = std::clamp(c, -1.0, 1.0);
            out.corr(i, j) = c;
            out.corr(j, i) = c;
        }
    }
    return out;
}

CorrelationSummary log_abs_histogram(const CorrelationMatrix& corr, double bin_width,
                                     double floor_abs, bool include_diagonal) {
    if (bin_width <= 0.0) throw UsageError("bin width must be positive");
    if (floor_abs <= 0.0) throw UsageError("histogram floor must be positive");

    const Eigen::Index k = corr.corr.rows();
    const double lo = std::log10(floor_abs);
    const auto n_bins = static_cast<std::size_t>(std::ceil(-lo / bin_width));

    CorrelationSummary s;
    s.bin_width = bin_width;
    s.floor_abs = floor_abs;
    s.include_diagonal = include_diagonal;
    s.degenerate_columns = corr.degenerate_columns.size();
    s.histogram.resize(n_bins);
    for (std::size_t b = 0; b < n_bins; ++b) {
        s.histogram[b].low = lo + double(b) * bin_width;
        s.histogram[b].high = lo + double(b + 1) * bin_width;
    }

    double offdiag_sum = 0.0;
    for (Eigen::Index i = 0; i < k; ++i) {
        for (Eigen::Index j = 0; j < k; ++j) {
            if (i == j && !include_diagonal) continue;
            ++s.total_coefficients;
            const double a = std::abs(corr.corr(i, j));
            if (a < floor_abs) {
                ++s.excluded_zero;
                continue;
            }
            const double v = std::min(std::log10(a), 0.0);
            auto b = static_cast<std::size_t>((v - lo) / bin_width);
            if (b >= n_bins) b = n_bins - 1;  // v == 0 lands in the last bin
            ++s.histogram[b].count;
            if (i != j) {
                offdiag_sum += v;
                ++s.offdiag_counted;
            }
        }
    }
    if (s.offdiag_counted > 0) s.mean_log10_offdiag = offdiag_sum / double(s.offdiag_counted);
    return s;
}

double histogram_shift(const CorrelationSummary& a, const CorrelationSummary& b) {
    if (a.bin_width != b.bin_width || a.floor_abs != b.floor_abs)
        throw DataError("histogram binning parameters differ");
    if (a.offdiag_counted == 0 || b.offdiag_counted == 0)
        throw DataError("no off-diagonal coefficients above the floor");
    return a.mean_log10_offdiag - b.mean_log10_offdiag;
}

namespace {

struct SortedValues {
    std::vector<double> values;  // ascending
    std::vector<bool> labels;    // reordered alongside
};

SortedValues sort_by_value(std::span<const double> values, const std::vector<bool>& labels) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    SortedValues s;
    s.values.reserve(values.size());
    s.labels.reserve(values.size());
    for (std::size_t i : order) {
        s.values.push_back(values[i]);
        s.labels.push_back(labels[i]);
    }
    return s;
}

}  // namespace

ThresholdRule best_threshold(std::span<const double> values,
                             const std::vector<bool>& labels) {
    if (values.size() != labels.size())
        throw DataError("values and labels differ in length");
    const auto n = static_cast<std::int64_t>(values.size());
    const std::int64_t c1 = std::count(labels.begin(), labels.end(), true);
    const std::int64_t c2 = n - c1;
    if (c1 == 0 || c2 == 0) throw DataError("both classes must be non-empty");

    const SortedValues s = sort_by_value(values, labels);

    ThresholdRule best;
    best.total = n;
    best.correct = -1;

    // Boundary i splits sorted points into below = [0, i) and above = [i, n).
    // Candidate boundaries: 0 (theta below the minimum), each change of
    // value, and n (theta above the maximum).
    std::int64_t below1 = 0;  // class-1 points in [0, i)
    for (std::int64_t i = 0; i <= n; ++i) {
        const bool is_boundary = i == 0 || i == n || s.values[i - 1] < s.values[i];
        if (is_boundary) {
            double theta;
            if (i == 0)
                theta = s.values.front() - 1.0;
            else if (i == n)
                theta = s.values.back() + 1.0;
            else
                theta = 0.5 * (s.values[i - 1] + s.values[i]);

            const std::int64_t below2 = i - below1;
            const std::int64_t correct_greater = (c1 - below1) + below2;
            const std::int64_t correct_less = below1 + (c2 - below2);
            if (correct_greater > best.correct) {
                best.correct = correct_greater;
                best.theta = theta;
                best.direction = Direction::Greater;
            }
            if (correct_less > best.correct) {
                best.correct = correct_less;
                best.theta = theta;
                best.direction = Direction::Less;
            }
        }
        if (i < n && s.labels[i]) ++below1;
    }
    return best;
}

namespace {

struct PairRows {
    std::vector<std::size_t> rows;  // rows of word a, then rows of word b
    std::vector<bool> labels;       // true = class 1 (word a)
};

PairRows collect_pair_rows(const Representation& rep, const TrigramSample& trigrams,
                           const WordPair& pair) {
    if (rep.rows() != static_cast<Eigen::Index>(trigrams.size()))
        throw DataError("representation does not cover the trigram sample (" +
                        std::to_string(rep.rows()) + " rows vs " +
                        std::to_string(trigrams.size()) + " trigrams)");
    PairRows pr;
    const auto rows_a = central_word_rows(trigrams, pair.a);
    const auto rows_b = central_word_rows(trigrams, pair.b);
    if (rows_a.empty())
        throw DataError("word '" + pair.a + "' is not the central word of any trigram");
    if (rows_b.empty())
        throw DataError("word '" + pair.b + "' is not the central word of any trigram");
    pr.rows = rows_a;
    pr.rows.insert(pr.rows.end(), rows_b.begin(), rows_b.end());
    pr.labels.assign(rows_a.size(), true);
    pr.labels.resize(pr.rows.size(), false);
    return pr;
}

}  // namespace

ThresholdRule pair_accuracy(const Representation& rep, const TrigramSample& trigrams,
                            const WordPair& pair) {
    const PairRows pr = collect_pair_rows(rep, trigrams, pair);

    std::vector<double> column(pr.rows.size());
    ThresholdRule best;
    best.correct = -1;
    for (Eigen::Index d = 0; d < rep.k(); ++d) {
        for (std::size_t i = 0; i < pr.rows.size(); ++i)
            column[i] = rep.matrix(static_cast<Eigen::Index>(pr.rows[i]), d);
        ThresholdRule rule = best_threshold(column, pr.labels);
        rule.dimension = d;
        if (rule.correct > best.correct) best = rule;  // strict: lowest dimension wins
    }
    return best;
}

DiscriminationReport compare_representations(const Representation& rep_a,
                                             const Representation& rep_b,
                                             const TrigramSample& trigrams,
                                             const WordPairSet& pairs) {
    DiscriminationReport report;
    report.per_pair.resize(pairs.pairs.size());

    const std::size_t n_pairs = pairs.pairs.size();
    const unsigned n_threads =
        std::max(1u, std::min<unsigned>(effective_thread_count(),
                                        static_cast<unsigned>(n_pairs)));
    auto work = [&](unsigned t) {
        for (std::size_t i = t; i < n_pairs; i += n_threads) {
            PairOutcome& out = report.per_pair[i];
            out.pair = pairs.pairs[i];
            out.rule_a = pair_accuracy(rep_a, trigrams, out.pair);
            out.rule_b = pair_accuracy(rep_b, trigrams, out.pair);
        }
    };
    if (n_threads == 1) {
        work(0);
    } else {
        std::vector<std::thread> threads;
        for (unsigned t = 0; t < n_threads; ++t) threads.emplace_back(work, t);
        for (auto& th : threads) th.join();
    }

    double diff_sum = 0.0;
    double rel_sum = 0.0;
    for (const PairOutcome& out : report.per_pair) {
        // Same rows, hence the same denominator: compare counts exactly.
        if (out.rule_a.correct > out.rule_b.correct)
            ++report.wins_a;
        else if (out.rule_a.correct < out.rule_b.correct)
            ++report.wins_b;
        else
            ++report.ties;
        const double acc_a = out.rule_a.accuracy();
        const double acc_b = out.rule_b.accuracy();
        diff_sum += acc_a - acc_b;
        rel_sum += (acc_a - acc_b) / acc_b;
    }
    if (!report.per_pair.empty()) {
        diff_sum /= double(report.per_pair.size());
        rel_sum /= double(report.per_pair.size());
    }
    report.mean_accuracy_diff = diff_sum;
    report.mean_relative_diff = rel_sum;
    report.p_value = sign_test(static_cast<std::int64_t>(report.wins_a),
                               static_cast<std::int64_t>(report.wins_b));
    return report;
}

double sign_test(std::int64_t wins, std::int64_t losses, SignTestSides sides) {
    if (wins < 0 || losses < 0) throw DataError("negative win/loss counts");
    const std::int64_t n = wins + losses;
    if (n == 0) return 1.0;
    const std::int64_t m = std::max(wins, losses);

    // Tail P[X >= m] for X ~ Binomial(n, 1/2) by direct pmf summation,
    // descending from pmf(n) = 2^-n so that small cases stay exact dyadics.
    long double tail = 0.0L;
    if (n <= 16000) {
        long double pmf = std::pow(0.5L, static_cast<int>(n));
        for (std::int64_t j = n; j > m; --j) {
            tail += pmf;
            pmf = pmf * static_cast<long double>(j) / static_cast<long double>(n - j + 1);
        }
        tail += pmf;
    } else {
        const long double ln2 = std::log(2.0L);
        for (std::int64_t j = m; j <= n; ++j) {
            const long double lp = std::lgamma(static_cast<long double>(n + 1)) -
                                   std::lgamma(static_cast<long double>(j + 1)) -
                                   std::lgamma(static_cast<long double>(n - j + 1)) -
                                   static_cast<long double>(n) * ln2;
            tail += std::exp(lp);
        }
    }

    const long double p =
        sides == SignTestSides::Two ? std::min(1.0L, 2.0L * tail) : tail;
    return static_cast<double>(p);
}

namespace {

// Fixed-size-free bitset over the restricted row set.
struct Mask {
    std::vector<std::uint64_t> words;

    static Mask zeros(std::size_t bits) {
        Mask m;
        m.words.assign((bits + 63) / 64, 0);
        return m;
    }
    void set(std::size_t i) { words[i / 64] |= (std::uint64_t{1} << (i % 64)); }
    std::size_t count_and(const Mask& other) const {
        std::size_t c = 0;
        for (std::size_t w = 0; w < words.size(); ++w)
            c += static_cast<std::size_t>(std::popcount(words[w] & other.words[w]));
        return c;
    }
    std::size_t count() const {
        std::size_t c = 0;
        for (auto w : words) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }
    Mask and_with(const Mask& other) const {
        Mask m = *this;
        for (std::size_t w = 0; w < words.size(); ++w) m.words[w] &= other.words[w];
        return m;
    }
    Mask complement(std::size_t bits) const {
        Mask m = *this;
        for (auto& w : m.words) w = ~w;
        const std::size_t spare = m.words.size() * 64 - bits;
        if (spare > 0 && !m.words.empty()) m.words.back() &= ~std::uint64_t{0} >> spare;
        return m;
    }
};

struct DimCandidates {
    std::vector<double> thetas;
    std::vector<Mask> greater;  // rows with value > theta, per candidate
};

// Candidate thresholds mirror best_threshold: one sentinel below the minimum,
// midpoints at every change of value, one sentinel above the maximum. No data
// point ever equals a candidate, so the "less" mask is the exact complement.
DimCandidates dimension_candidates(const Eigen::MatrixXd& matrix,
                                   const std::vector<std::size_t>& rows,
                                   Eigen::Index dim) {
    const std::size_t m = rows.size();
    std::vector<std::pair<double, std::size_t>> sorted(m);  // (value, position)
    for (std::size_t i = 0; i < m; ++i)
        sorted[i] = {matrix(static_cast<Eigen::Index>(rows[i]), dim), i};
    std::sort(sorted.begin(), sorted.end());

    DimCandidates dc;
    Mask above = Mask::zeros(m);
    for (std::size_t i = 0; i < m; ++i) above.set(sorted[i].second);

    for (std::size_t i = 0; i <= m; ++i) {
        const bool is_boundary =
            i == 0 || i == m || sorted[i - 1].first < sorted[i].first;
        if (is_boundary) {
            double theta;
            if (i == 0)
                theta = sorted.front().first - 1.0;
            else if (i == m)
                theta = sorted.back().first + 1.0;
            else
                theta = 0.5 * (sorted[i - 1].first + sorted[i].first);
            dc.thetas.push_back(theta);
            dc.greater.push_back(above);
        }
        if (i < m) above.words[sorted[i].second / 64] &=
            ~(std::uint64_t{1} << (sorted[i].second % 64));
    }
    return dc;
}

struct FocalitySearch {
    const std::vector<DimCandidates>& candidates;
    const Mask& class1;
    std::size_t m;
    std::int64_t n1, n2;
    double theta;

    std::vector<Eigen::Index> dims;
    std::vector<double> thetas;
    std::vector<Direction> directions;

    std::optional<ConjunctiveRule> found;

    // Depth-first over the chosen subset's predicate grid, in deterministic
    // order: candidate thetas ascending, Greater before Less, the
    // "conjunction predicts class 1" assignment before its mirror.
    void descend(std::size_t depth, const Mask& conj) {
        if (found) return;
        if (depth == dims.size()) {
            const auto p1 = static_cast<std::int64_t>(conj.count_and(class1));
            const auto pc = static_cast<std::int64_t>(conj.count());
            const std::int64_t p2 = pc - p1;
            const auto total = static_cast<std::int64_t>(m);
            const std::int64_t correct_first = p1 + (n2 - p2);
            const std::int64_t correct_second = p2 + (n1 - p1);
            for (bool predicts_first : {true, false}) {
                const std::int64_t correct = predicts_first ? correct_first : correct_second;
                if (double(correct) / double(total) >= theta) {
                    ConjunctiveRule rule;
                    rule.dims = dims;
                    rule.thetas = thetas;
                    rule.directions = directions;
                    rule.predicts_first = predicts_first;
                    rule.correct = correct;
                    rule.total = total;
                    found = rule;
                    return;
                }
            }
            return;
        }
        const DimCandidates& dc = candidates[static_cast<std::size_t>(dims[depth])];
        for (std::size_t c = 0; c < dc.thetas.size() && !found; ++c) {
            for (Direction dir : {Direction::Greater, Direction::Less}) {
                const Mask pred = dir == Direction::Greater ? dc.greater[c]
                                                            : dc.greater[c].complement(m);
                thetas[depth] = dc.thetas[c];
                directions[depth] = dir;
                descend(depth + 1, conj.and_with(pred));
                if (found) return;
            }
        }
    }

    // Lexicographic enumeration of dimension subsets of the given size.
    bool subsets(std::size_t size, std::size_t first_dim, std::size_t depth) {
        if (depth == size) {
            Mask full = Mask::zeros(m).complement(m);
            thetas.assign(size, 0.0);
            directions.assign(size, Direction::Greater);
            descend(0, full);
            return found.has_value();
        }
        for (std::size_t d = first_dim; d < candidates.size(); ++d) {
            dims[depth] = static_cast<Eigen::Index>(d);
            if (subsets(size, d + 1, depth + 1)) return true;
        }
        return false;
    }
};

}  // namespace

FocalityResult focality_measure(const Representation& rep, const TrigramSample& trigrams,
                                const WordPair& pair, double theta,
                                Eigen::Index max_subset) {
    if (max_subset < 1 || max_subset > 3)
        throw UsageError("max_subset must lie in [1, 3]; the subset search is "
                         "exponential in the subset size");

    const PairRows pr = collect_pair_rows(rep, trigrams, pair);
    const std::size_t m = pr.rows.size();

    Mask class1 = Mask::zeros(m);
    std::int64_t n1 = 0;
    for (std::size_t i = 0; i < m; ++i) {
        if (pr.labels[i]) {
            class1.set(i);
            ++n1;
        }
    }

    std::vector<DimCandidates> candidates;
    candidates.reserve(static_cast<std::size_t>(rep.k()));
    for (Eigen::Index d = 0; d < rep.k(); ++d)
        candidates.push_back(dimension_candidates(rep.matrix, pr.rows, d));

    FocalityResult result;
    result.theta = theta;
    result.max_subset = max_subset;

    for (Eigen::Index size = 1; size <= max_subset; ++size) {
        FocalitySearch search{candidates, class1, m, n1,
                              static_cast<std::int64_t>(m) - n1, theta,
                              {},         {},     {},           std::nullopt};
        search.dims.assign(static_cast<std::size_t>(size), 0);
        if (search.subsets(static_cast<std::size_t>(size), 0, 0)) {
            result.k_star = size;
            result.witness = std::move(search.found);
            break;
        }
    }
    return result;
}

void write_histogram_csv(const CorrelationSummary& summary,
                         const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out << std::setprecision(12);
    out << "bin_low,bin_high,count\n";
    for (const HistogramBin& bin : summary.histogram)
        out << bin.low << ',' << bin.high << ',' << bin.count << '\n';
    out << "#excluded_zero=" << summary.excluded_zero << '\n';
    if (!out) throw DataError("write failed: " + path.string());
}

}  // namespace svdstack
