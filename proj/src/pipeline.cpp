#include "svdstack/pipeline.hpp"

#include "svdstack/common.hpp"

namespace svdstack {

std::string to_string(Method m) { return m == Method::Svd1 ? "svd1" : "svd2"; }

std::string to_string(Layer l) {
    switch (l) {
        case Layer::OneLayer: return "1layer";
        case Layer::TwoLayer: return "2layer";
        case Layer::WordLevel: return "word";
    }
    return "1layer";
}

Method method_from_string(const std::string& s) {
    if (s == "svd1") return Method::Svd1;
    if (s == "svd2") return Method::Svd2;
    throw DataError("unknown method tag: " + s);
}

Layer layer_from_string(const std::string& s) {
    if (s == "1layer") return Layer::OneLayer;
    if (s == "2layer") return Layer::TwoLayer;
    if (s == "word") return Layer::WordLevel;
    throw DataError("unknown layer tag: " + s);
}

namespace {

// A zero input row factors into pure rounding noise (~eps * S[0]) instead of
// an exactly zero U*S row; flush such rows before unit-normalization would
// inflate them.
void flush_noise_rows(Eigen::MatrixXd& m, double top_singular_value) {
    const double floor = 1e-12 * top_singular_value;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        if (m.row(i).norm() <= floor) m.row(i).setZero();
}

}  // namespace

Representation svd1_embed(const CountMatrix& C, Eigen::Index k, Layer layer,
                          const SvdOptions& opts) {
    SvdFactors f = canonicalize_signs(truncated_svd(C.values, k, opts));

    Representation rep;
    rep.matrix = f.U * f.S.asDiagonal();
    if (f.S.size() > 0) flush_noise_rows(rep.matrix, f.S(0));
    normalize_rows_in_place(rep.matrix);
    rep.method = Method::Svd1;
    rep.layer = layer;
    rep.row_labels = C.row_labels;
    return rep;
}

Representation svd2_rotate(const Representation& rep, const SvdOptions& opts) {
    if (!rep.matrix.allFinite()) throw NumericError("representation has non-finite entries");
    for (Eigen::Index i = 0; i < rep.matrix.rows(); ++i) {
        const double norm = rep.matrix.row(i).norm();
        if (norm != 0.0 && std::abs(norm - 1.0) > 1e-8)
            throw DataError("row " + std::to_string(i) +
                            " is not unit length; normalize before rotating");
    }

    // k is small, so the rotation always runs through the dense path.
    SvdOptions dense_opts = opts;
    dense_opts.dense_cutoff = std::max(dense_opts.dense_cutoff, rep.k());
    SvdFactors f = canonicalize_signs(truncated_svd(rep.matrix, rep.k(), dense_opts));

    Representation out;
    out.matrix = f.U * f.S.asDiagonal();
    if (f.S.size() > 0) flush_noise_rows(out.matrix, f.S(0));
    normalize_rows_in_place(out.matrix);
    out.method = Method::Svd2;
    out.layer = rep.layer;
    out.row_labels = rep.row_labels;
    return out;
}

namespace {

struct WeightedVectors {
    WordContextVectors wv;
    Vocabulary vocab;
};

WeightedVectors weighted_context_vectors(const TokenizedCorpus& corpus,
                                         const PipelineParams& params) {
    WeightedVectors out;
    out.vocab = build_vocab(corpus);
    out.wv = build_context_counts(corpus, out.vocab, params.context_dim);
    out.wv.left = normalize_rows(apply_tfidf(std::move(out.wv.left), params.tfidf_variant));
    out.wv.right = normalize_rows(apply_tfidf(std::move(out.wv.right), params.tfidf_variant));
    return out;
}

void finish_trigram_stages(CountMatrix trigram_matrix, const PipelineParams& params,
                           std::uint64_t svd_seed, PipelineResult& result) {
    if (params.normalize_concatenation)
        trigram_matrix = normalize_rows(std::move(trigram_matrix), &result.zero_rows);

    SvdOptions opts = params.svd;
    opts.seed = svd_seed;
    result.svd1 = svd1_embed(trigram_matrix, params.k,
                             result.word_svd1 ? Layer::TwoLayer : Layer::OneLayer, opts);
    trigram_matrix.values.resize(0, 0);  // the n x d matrix dominates memory

    SvdOptions rotate_opts = params.svd;
    rotate_opts.seed = mix_seed(params.seed, kSeedSvdLevel2);
    result.svd2 = svd2_rotate(result.svd1, rotate_opts);
}

}  // namespace

PipelineResult pipeline_1layer(const TokenizedCorpus& corpus, const PipelineParams& params) {
    PipelineResult result;
    auto [wv, vocab] = [&] {
        auto wvv = weighted_context_vectors(corpus, params);
        return std::pair{std::move(wvv.wv), std::move(wvv.vocab)};
    }();
    result.vocab = std::move(vocab);
    result.trigrams =
        sample_trigrams(corpus, params.n_trigrams, mix_seed(params.seed, kSeedTrigramSample));

    CountMatrix trigram_matrix =
        assemble_trigram_matrix_1layer(result.trigrams, wv, result.vocab);
    wv.left.values.resize(0, 0);
    wv.right.values.resize(0, 0);

    finish_trigram_stages(std::move(trigram_matrix), params,
                          mix_seed(params.seed, kSeedSvdLevel1), result);
    return result;
}

PipelineResult pipeline_2layer(const TokenizedCorpus& corpus, const PipelineParams& params) {
    PipelineResult result;
    auto wvv = weighted_context_vectors(corpus, params);
    result.vocab = std::move(wvv.vocab);
    result.trigrams =
        sample_trigrams(corpus, params.n_trigrams, mix_seed(params.seed, kSeedTrigramSample));

    CountMatrix word_matrix = assemble_word_matrix(wvv.wv, result.vocab);
    wvv.wv.left.values.resize(0, 0);
    wvv.wv.right.values.resize(0, 0);

    SvdOptions word_opts = params.svd;
    word_opts.seed = mix_seed(params.seed, kSeedSvdWordLevel);
    result.word_svd1 = svd1_embed(word_matrix, params.k, Layer::WordLevel, word_opts);
    word_matrix.values.resize(0, 0);

    CountMatrix trigram_matrix =
        assemble_trigram_matrix_2layer(result.trigrams, *result.word_svd1);
    finish_trigram_stages(std::move(trigram_matrix), params,
                          mix_seed(params.seed, kSeedSvdLevel1), result);
    return result;
}

}  // namespace svdstack
