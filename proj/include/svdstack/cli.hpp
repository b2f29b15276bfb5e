#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "svdstack/pipeline.hpp"

namespace svdstack {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitNumeric = 3;

struct RunConfig {
    std::filesystem::path corpus_path;
    Eigen::Index context_dims = 250;
    Eigen::Index k = 100;
    std::size_t n_trigrams = 100000;
    std::size_t n_pairs = 100;
    std::int64_t freq_lo = 25;
    std::int64_t freq_hi = 250;
    std::size_t min_occurrences = 2;
    std::uint64_t seed = 0;
    enum class Mode { OneLayer, TwoLayer } mode = Mode::OneLayer;
    std::filesystem::path output_dir = ".";
    TfIdfVariant tfidf_variant = TfIdfVariant::LogNatural;
    bool diagonal_mode = true;  // include the histogram diagonal
    double bin_width = 0.1;
    double floor_abs = 1e-12;
    bool normalize_concatenation = true;

    void validate() const;  // throws UsageError
};

/// Runs the selected pipeline and writes, under output_dir: manifest.json
/// (config first, artifact checksums on completion), vocab.tsv, trigrams.tsv,
/// svd1.mat, svd2.mat and for two-layer runs word_svd1.mat.
void cmd_embed(const RunConfig& config);

/// Histogram CSV per representation plus shift.json with the mean log10|c|
/// shift between the two.
void cmd_diagnose(const RunConfig& config, const std::filesystem::path& rep_a,
                  const std::filesystem::path& rep_b);

/// Samples word pairs (seeded) and writes discrimination.json comparing the
/// two representations pair by pair, with the sign-test p-value.
void cmd_discriminate(const RunConfig& config, const std::filesystem::path& rep_a,
                      const std::filesystem::path& rep_b,
                      const std::filesystem::path& vocab_tsv,
                      const std::filesystem::path& trigrams_tsv);

/// Prints and writes the smallest dimension subset reaching accuracy theta
/// for one word pair. An unattainable theta is a regular (empty) result.
void cmd_focality(const RunConfig& config, const std::filesystem::path& rep,
                  const std::filesystem::path& trigrams_tsv, const std::string& word_a,
                  const std::string& word_b, double theta, Eigen::Index max_subset);

/// Maps an in-flight exception to the documented exit code, printing the
/// message to stderr. Call from a catch block.
int exit_code_for_current_exception();

}  // namespace svdstack
