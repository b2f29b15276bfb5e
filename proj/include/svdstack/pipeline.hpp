#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "svdstack/svd.hpp"
#include "svdstack/vectors.hpp"

namespace svdstack {

enum class Method { Svd1, Svd2 };
enum class Layer { OneLayer, TwoLayer, WordLevel };

std::string to_string(Method m);
std::string to_string(Layer l);
Method method_from_string(const std::string& s);
Layer layer_from_string(const std::string& s);

/// Row-unit-norm embedding matrix tagged with how it was produced.
struct Representation {
    Eigen::MatrixXd matrix;  // n x k, non-zero rows have unit L2 norm
    Method method = Method::Svd1;
    Layer layer = Layer::OneLayer;
    std::vector<std::string> row_labels;

    Eigen::Index rows() const { return matrix.rows(); }
    Eigen::Index k() const { return matrix.cols(); }
};

/// Rank-k factorization of C, rows of U * diag(S) scaled to unit length.
Representation svd1_embed(const CountMatrix& C, Eigen::Index k, Layer layer,
                          const SvdOptions& opts = {});

/// Full-rank SVD of the n x k embedding itself; output rows are U' * diag(S')
/// re-normalized. A rotation up to the inter-step normalization, so pairwise
/// row dot products are preserved before the final normalization.
Representation svd2_rotate(const Representation& rep, const SvdOptions& opts = {});

struct PipelineParams {
    std::size_t n_trigrams = 100000;
    Eigen::Index context_dim = 250;  // r
    Eigen::Index k = 100;
    std::uint64_t seed = 0;
    TfIdfVariant tfidf_variant = TfIdfVariant::LogNatural;
    // Row-normalize the assembled trigram matrix (each 6r- or 3k-dim row)
    // in addition to the per-word-vector normalization.
    bool normalize_concatenation = true;
    SvdOptions svd;  // seed fields are derived from `seed`, see pipeline.cpp
};

struct PipelineResult {
    Vocabulary vocab;
    TrigramSample trigrams;
    Representation svd1;                      // trigram-level, rank-k embedding
    Representation svd2;                      // trigram-level, rotated
    std::optional<Representation> word_svd1;  // word-level embedding (two-layer only)
    std::vector<Eigen::Index> zero_rows;      // trigram matrix rows that were all zero
};

/// vocab -> adjacency counts -> tf-idf -> normalize -> 6r-wide trigram matrix
/// -> rank-k embedding -> rotation.
PipelineResult pipeline_1layer(const TokenizedCorpus& corpus, const PipelineParams& params);

/// As above but trigram rows concatenate three k-dim word embeddings obtained
/// from a word-level rank-k factorization of the |V| x 2r word matrix.
PipelineResult pipeline_2layer(const TokenizedCorpus& corpus, const PipelineParams& params);

}  // namespace svdstack
