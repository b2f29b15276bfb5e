#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <string>
#include <unordered_map>
#include <vector>

#include "svdstack/common.hpp"

namespace svdstack {

/// One sentence per inner vector; tokens are non-empty strings.
struct TokenizedCorpus {
    std::vector<std::vector<std::string>> sentences;
    std::string source_id;

    std::size_t num_sentences() const { return sentences.size(); }
};

/// Word inventory with exact corpus counts and 1-based frequency ranks
/// (rank 1 = most frequent; ties broken by ascending lexicographic order).
/// Words are stored in rank order, so id(w) == rank(w) - 1.
struct Vocabulary {
    std::vector<std::string> words;                    // index = id = rank - 1
    std::vector<std::int64_t> freq;                    // by id
    std::unordered_map<std::string, std::size_t> ids;  // word -> id

    std::size_t size() const { return words.size(); }
    bool contains(const std::string& w) const { return ids.count(w) != 0; }
    std::size_t id_of(const std::string& w) const;     // throws DataError
    std::size_t rank_of(const std::string& w) const { return id_of(w) + 1; }
    const std::string& word_at_rank(std::size_t rank) const { return words.at(rank - 1); }
};

struct Trigram {
    std::string w1, w2, w3;

    auto operator<=>(const Trigram&) const = default;
    std::string text() const { return w1 + " " + w2 + " " + w3; }
};

/// Uniform sample (without replacement) of distinct within-sentence trigram
/// types, stored in lexicographic order.
struct TrigramSample {
    std::vector<Trigram> trigrams;
    std::uint64_t seed = 0;
    std::size_t requested = 0;

    std::size_t size() const { return trigrams.size(); }
};

struct WordPair {
    std::string a, b;
};

struct WordPairSet {
    std::vector<WordPair> pairs;
    std::int64_t freq_lo = 0;
    std::int64_t freq_hi = 0;
    std::uint64_t seed = 0;
};

/// Reads UTF-8 text, one sentence per line. Tokens are lowercased (ASCII
/// range only), ASCII punctuation characters become standalone tokens, and
/// sentences split on whitespace. Empty lines are dropped.
/// Invalid UTF-8 raises DataError naming the byte offset.
TokenizedCorpus tokenize(std::istream& raw_text, std::string source_id = "");
TokenizedCorpus tokenize_file(const std::filesystem::path& path);

Vocabulary build_vocab(const TokenizedCorpus& corpus);

/// Uniform sample of n distinct trigram types; deterministic given seed.
/// Fails with DataError if fewer than n distinct trigrams exist.
TrigramSample sample_trigrams(const TokenizedCorpus& corpus, std::size_t n,
                              std::uint64_t seed);

/// Draws 2*n_pairs distinct words with corpus frequency in [freq_lo, freq_hi]
/// and at least min_occurrences central-word occurrences in `trigrams`, then
/// pairs them by the shuffled draw order.
WordPairSet sample_word_pairs(const Vocabulary& vocab, const TrigramSample& trigrams,
                              std::size_t n_pairs, std::int64_t freq_lo,
                              std::int64_t freq_hi, std::size_t min_occurrences,
                              std::uint64_t seed);

/// Indices of trigrams whose central word equals `word`, in sample order.
std::vector<std::size_t> central_word_rows(const TrigramSample& trigrams,
                                           const std::string& word);

// Text artifacts. Vocabulary: `word<TAB>freq<TAB>rank`, sorted by rank.
// Trigrams: `w1<TAB>w2<TAB>w3`, lexicographically sorted. UTF-8, LF endings.
void write_vocab_tsv(const Vocabulary& vocab, const std::filesystem::path& path);
Vocabulary read_vocab_tsv(const std::filesystem::path& path);
void write_trigrams_tsv(const TrigramSample& sample, const std::filesystem::path& path);
TrigramSample read_trigrams_tsv(const std::filesystem::path& path);

}  // namespace svdstack
