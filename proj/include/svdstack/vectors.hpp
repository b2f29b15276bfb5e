#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "svdstack/corpus.hpp"

namespace svdstack {

enum class WeightState { Raw, RawNormalized, TfIdf, TfIdfNormalized };

std::string to_string(WeightState s);
WeightState weight_state_from_string(const std::string& s);

/// Dense object-by-feature matrix with labels and a weighting-state tag.
/// Raw state holds non-negative integer counts; *Normalized states guarantee
/// every non-zero row has unit L2 norm (within 1e-12).
struct CountMatrix {
    Eigen::MatrixXd values;
    std::vector<std::string> row_labels;
    std::vector<std::string> col_labels;
    WeightState state = WeightState::Raw;

    Eigen::Index rows() const { return values.rows(); }
    Eigen::Index cols() const { return values.cols(); }
};

/// Per-word adjacency count matrices: left(w)[i] counts how often the word
/// with frequency rank i+1 occurred immediately to the left of w within a
/// sentence; right is symmetric. Row order follows vocabulary ids.
struct WordContextVectors {
    CountMatrix left;
    CountMatrix right;
    Eigen::Index context_dim = 0;
};

enum class TfIdfVariant {
    LogNatural,  // weight = count * ln(n_rows / df)
    Smooth,      // weight = count * (ln((1 + n_rows) / (1 + df)) + 1)
};

std::string to_string(TfIdfVariant v);
TfIdfVariant tfidf_variant_from_string(const std::string& s);

WordContextVectors build_context_counts(const TokenizedCorpus& corpus,
                                        const Vocabulary& vocab, Eigen::Index r);

/// Weights a raw count matrix. Document frequency df_j counts rows with a
/// non-zero entry in column j; all-zero columns stay zero.
CountMatrix apply_tfidf(CountMatrix m, TfIdfVariant variant = TfIdfVariant::LogNatural);

/// Divides every non-zero row by its L2 norm. Zero rows are left untouched
/// and reported through `zero_rows` when given. Idempotent.
CountMatrix normalize_rows(CountMatrix m, std::vector<Eigen::Index>* zero_rows = nullptr);
Eigen::Index normalize_rows_in_place(Eigen::MatrixXd& m,
                                     std::vector<Eigen::Index>* zero_rows = nullptr);

/// Row per trigram: [left(w1); right(w1); left(w2); right(w2); left(w3); right(w3)],
/// 6r columns, row order = sample order. Requires weighted+normalized vectors.
CountMatrix assemble_trigram_matrix_1layer(const TrigramSample& trigrams,
                                           const WordContextVectors& wv,
                                           const Vocabulary& vocab);

/// |V| x 2r matrix, row w = [left(w); right(w)].
CountMatrix assemble_word_matrix(const WordContextVectors& wv, const Vocabulary& vocab,
                                 std::vector<Eigen::Index>* zero_rows = nullptr);

struct Representation;  // pipeline.hpp

/// Row per trigram: [e(w1); e(w2); e(w3)] over k-dimensional word embeddings.
CountMatrix assemble_trigram_matrix_2layer(const TrigramSample& trigrams,
                                           const Representation& word_embeddings);

}  // namespace svdstack
