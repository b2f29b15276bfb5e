#include "svdstack/vectors.hpp"

#include <cmath>

#include "svdstack/pipeline.hpp"

namespace svdstack {

std::string to_string(WeightState s) {
    switch (s) {
        case WeightState::Raw: return "raw";
        case WeightState::RawNormalized: return "raw+normalized";
        case WeightState::TfIdf: return "tfidf";
        case WeightState::TfIdfNormalized: return "tfidf+normalized";
    }
    return "raw";
}

WeightState weight_state_from_string(const std::string& s) {
    if (s == "raw") return WeightState::Raw;
    if (s == "raw+normalized") return WeightState::RawNormalized;
    if (s == "tfidf") return WeightState::TfIdf;
    if (s == "tfidf+normalized") return WeightState::TfIdfNormalized;
    throw DataError("unknown weight state: " + s);
}

std::string to_string(TfIdfVariant v) {
    return v == TfIdfVariant::LogNatural ? "ln" : "smooth";
}

TfIdfVariant tfidf_variant_from_string(const std::string& s) {
    if (s == "ln") return TfIdfVariant::LogNatural;
    if (s == "smooth") return TfIdfVariant::Smooth;
    throw UsageError("unknown tf-idf variant: " + s + " (expected 'ln' or 'smooth')");
}

WordContextVectors build_context_counts(const TokenizedCorpus& corpus,
                                        const Vocabulary& vocab, Eigen::Index r) {
    const auto v = static_cast<Eigen::Index>(vocab.size());
    if (r < 1 || r > v)
        throw DataError("context dimensionality " + std::to_string(r) +
                        " out of range for vocabulary of size " + std::to_string(v));

    WordContextVectors wv;
    wv.context_dim = r;
    wv.left.values = Eigen::MatrixXd::Zero(v, r);
    wv.right.values = Eigen::MatrixXd::Zero(v, r);

    // Words are stored in rank order, so "neighbor has rank <= r" is id < r.
    for (const auto& sentence : corpus.sentences) {
        for (std::size_t i = 1; i < sentence.size(); ++i) {
            const auto prev = static_cast<Eigen::Index>(vocab.id_of(sentence[i - 1]));
            const auto cur = static_cast<Eigen::Index>(vocab.id_of(sentence[i]));
            if (prev < r) wv.left.values(cur, prev) += 1.0;
            if (cur < r) wv.right.values(prev, cur) += 1.0;
        }
    }

    wv.left.row_labels = vocab.words;
    wv.right.row_labels = vocab.words;
    wv.left.col_labels.reserve(r);
    wv.right.col_labels.reserve(r);
    for (Eigen::Index i = 0; i < r; ++i) {
        wv.left.col_labels.push_back("L:" + vocab.words[i]);
        wv.right.col_labels.push_back("R:" + vocab.words[i]);
    }
    return wv;
}

CountMatrix apply_tfidf(CountMatrix m, TfIdfVariant variant) {
    if (m.state != WeightState::Raw)
        throw DataError("tf-idf weighting requires a raw count matrix, got state '" +
                        to_string(m.state) + "'");

    const Eigen::Index n = m.rows();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        const Eigen::Index df = (m.values.col(j).array() > 0.0).count();
        if (df == 0) continue;  // all-zero column stays zero
        const double idf = variant == TfIdfVariant::LogNatural
                               ? std::log(double(n) / double(df))
                               : std::log(double(1 + n) / double(1 + df)) + 1.0;
        m.values.col(j) *= idf;
    }
    m.state = WeightState::TfIdf;
    return m;
}

Eigen::Index normalize_rows_in_place(Eigen::MatrixXd& m,
                                     std::vector<Eigen::Index>* zero_rows) {
    Eigen::Index zeros = 0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        const double norm = m.row(i).norm();
        if (norm > 0.0) {
            m.row(i) /= norm;
        } else {
            ++zeros;
            if (zero_rows) zero_rows->push_back(i);
        }
    }
    return zeros;
}

CountMatrix normalize_rows(CountMatrix m, std::vector<Eigen::Index>* zero_rows) {
    normalize_rows_in_place(m.values, zero_rows);
    switch (m.state) {
        case WeightState::Raw: m.state = WeightState::RawNormalized; break;
        case WeightState::TfIdf: m.state = WeightState::TfIdfNormalized; break;
        default: break;  // already normalized; re-normalizing is a no-op
    }
    return m;
}

namespace {

Eigen::Index require_word_row(const Vocabulary& vocab, const std::string& word) {
    auto it = vocab.ids.find(word);
    if (it == vocab.ids.end())
        throw DataError("trigram word '" + word + "' missing from context vectors");
    return static_cast<Eigen::Index>(it->second);
}

}  // namespace

CountMatrix assemble_trigram_matrix_1layer(const TrigramSample& trigrams,
                                           const WordContextVectors& wv,
                                           const Vocabulary& vocab) {
    if (wv.left.state != WeightState::TfIdfNormalized ||
        wv.right.state != WeightState::TfIdfNormalized)
        throw DataError("context vectors must be tf-idf weighted and row-normalized "
                        "before trigram assembly");

    const Eigen::Index r = wv.context_dim;
    const auto n = static_cast<Eigen::Index>(trigrams.size());
    CountMatrix out;
    out.values.resize(n, 6 * r);
    out.row_labels.reserve(trigrams.size());

    for (Eigen::Index row = 0; row < n; ++row) {
        const Trigram& t = trigrams.trigrams[row];
        const std::string* words[3] = {&t.w1, &t.w2, &t.w3};
        for (int w = 0; w < 3; ++w) {
            const Eigen::Index id = require_word_row(vocab, *words[w]);
            out.values.block(row, 2 * w * r, 1, r) = wv.left.values.row(id);
            out.values.block(row, (2 * w + 1) * r, 1, r) = wv.right.values.row(id);
        }
        out.row_labels.push_back(t.text());
    }

    out.col_labels.reserve(6 * r);
    for (int w = 1; w <= 3; ++w)
        for (const auto* side : {&wv.left, &wv.right})
            for (const auto& label : side->col_labels)
                out.col_labels.push_back("w" + std::to_string(w) + ":" + label);
    out.state = WeightState::TfIdf;  // blocks unit-norm, full rows are not
    return out;
}

CountMatrix assemble_word_matrix(const WordContextVectors& wv, const Vocabulary& vocab,
                                 std::vector<Eigen::Index>* zero_rows) {
    const Eigen::Index r = wv.context_dim;
    const auto v = static_cast<Eigen::Index>(vocab.size());
    CountMatrix out;
    out.values.resize(v, 2 * r);
    out.values.leftCols(r) = wv.left.values;
    out.values.rightCols(r) = wv.right.values;
    out.row_labels = vocab.words;
    out.col_labels = wv.left.col_labels;
    out.col_labels.insert(out.col_labels.end(), wv.right.col_labels.begin(),
                          wv.right.col_labels.end());
    out.state = wv.left.state;

    if (zero_rows)
        for (Eigen::Index i = 0; i < v; ++i)
            if (out.values.row(i).isZero(0.0)) zero_rows->push_back(i);
    return out;
}

CountMatrix assemble_trigram_matrix_2layer(const TrigramSample& trigrams,
                                           const Representation& word_embeddings) {
    std::unordered_map<std::string, Eigen::Index> row_of;
    row_of.reserve(word_embeddings.row_labels.size());
    for (std::size_t i = 0; i < word_embeddings.row_labels.size(); ++i)
        row_of.emplace(word_embeddings.row_labels[i], static_cast<Eigen::Index>(i));

    const Eigen::Index k = word_embeddings.k();
    const auto n = static_cast<Eigen::Index>(trigrams.size());
    CountMatrix out;
    out.values.resize(n, 3 * k);
    out.row_labels.reserve(trigrams.size());

    for (Eigen::Index row = 0; row < n; ++row) {
        const Trigram& t = trigrams.trigrams[row];
        const std::string* words[3] = {&t.w1, &t.w2, &t.w3};
        for (int w = 0; w < 3; ++w) {
            auto it = row_of.find(*words[w]);
            if (it == row_of.end())
                throw DataError("trigram word '" + *words[w] +
                                "' missing from word embeddings");
            out.values.block(row, w * k, 1, k) = word_embeddings.matrix.row(it->second);
        }
        out.row_labels.push_back(t.text());
    }
    out.state = WeightState::TfIdf;  // weighted upstream; rows not unit-norm
    return out;
}

}  // namespace svdstack
