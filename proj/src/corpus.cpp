#include "svdstack/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>
#include <unordered_set>

namespace svdstack {

unsigned effective_thread_count() {
    if (const char* env = std::getenv("SVDSTACK_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v > 0) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

std::size_t Vocabulary::id_of(const std::string& w) const {
    auto it = ids.find(w);
    if (it == ids.end()) throw DataError("unknown word: '" + w + "'");
    return it->second;
}

namespace {

bool is_ascii_punct(unsigned char c) { return c < 128 && std::ispunct(c); }
bool is_ascii_space(unsigned char c) { return c == ' ' || c == '\t' || c == '\r'; }

// Number of continuation bytes expected after a UTF-8 lead byte, or -1.
int utf8_sequence_length(unsigned char lead) {
    if (lead < 0x80) return 0;
    if ((lead & 0xE0) == 0xC0) return 1;
    if ((lead & 0xF0) == 0xE0) return 2;
    if ((lead & 0xF8) == 0xF0) return 3;
    return -1;
}

void validate_utf8(const std::string& line, std::size_t line_start_offset) {
    for (std::size_t i = 0; i < line.size();) {
        int follow = utf8_sequence_length(static_cast<unsigned char>(line[i]));
        if (follow < 0)
            throw DataError("invalid UTF-8 at byte offset " +
                            std::to_string(line_start_offset + i));
        for (int j = 1; j <= follow; ++j) {
            if (i + j >= line.size() ||
                (static_cast<unsigned char>(line[i + j]) & 0xC0) != 0x80)
                throw DataError("invalid UTF-8 at byte offset " +
                                std::to_string(line_start_offset + i));
        }
        i += 1 + follow;
    }
}

}  // namespace

TokenizedCorpus tokenize(std::istream& raw_text, std::string source_id) {
    TokenizedCorpus corpus;
    corpus.source_id = std::move(source_id);

    std::string line;
    std::size_t offset = 0;
    while (std::getline(raw_text, line)) {
        std::size_t line_start = offset;
        offset += line.size() + 1;  // + '\n'
        validate_utf8(line, line_start);

        std::vector<std::string> tokens;
        std::string current;
        auto flush = [&] {
            if (!current.empty()) {
                tokens.push_back(std::move(current));
                current.clear();
            }
        };
        for (unsigned char c : line) {
            if (is_ascii_space(c)) {
                flush();
            } else if (is_ascii_punct(c)) {
                flush();
                tokens.emplace_back(1, static_cast<char>(c));
            } else {
                current.push_back(static_cast<char>(std::tolower(c)));
            }
        }
        flush();
        if (!tokens.empty()) corpus.sentences.push_back(std::move(tokens));
    }
    return corpus;
}

TokenizedCorpus tokenize_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open corpus file: " + path.string());
    return tokenize(in, path.string());
}

Vocabulary build_vocab(const TokenizedCorpus& corpus) {
    if (corpus.sentences.empty()) throw DataError("empty corpus");

    std::unordered_map<std::string, std::int64_t> counts;
    for (const auto& sentence : corpus.sentences)
        for (const auto& token : sentence) ++counts[token];

    std::vector<std::pair<std::string, std::int64_t>> sorted(counts.begin(), counts.end());
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;  // tie-break: lexicographic
    });

    Vocabulary vocab;
    vocab.words.reserve(sorted.size());
    vocab.freq.reserve(sorted.size());
    vocab.ids.reserve(sorted.size());
    for (auto& [word, freq] : sorted) {
        vocab.ids.emplace(word, vocab.words.size());
        vocab.words.push_back(std::move(word));
        vocab.freq.push_back(freq);
    }
    return vocab;
}

namespace {

struct IdTrigram {
    std::uint32_t a, b, c;
    auto operator<=>(const IdTrigram&) const = default;
};

// Partial Fisher-Yates: after the loop, indices[0..n) hold a uniform sample
// without replacement.
template <typename T>
void draw_prefix(std::vector<T>& items, std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < n; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, items.size() - 1);
        std::swap(items[i], items[pick(rng)]);
    }
}

}  // namespace

TrigramSample sample_trigrams(const TokenizedCorpus& corpus, std::size_t n,
                              std::uint64_t seed) {
    Vocabulary vocab = build_vocab(corpus);

    std::vector<IdTrigram> distinct;
    for (const auto& sentence : corpus.sentences) {
        for (std::size_t i = 0; i + 2 < sentence.size(); ++i) {
            distinct.push_back({static_cast<std::uint32_t>(vocab.id_of(sentence[i])),
                                static_cast<std::uint32_t>(vocab.id_of(sentence[i + 1])),
                                static_cast<std::uint32_t>(vocab.id_of(sentence[i + 2]))});
        }
    }
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

    if (distinct.size() < n)
        throw DataError("requested " + std::to_string(n) + " trigrams but only " +
                        std::to_string(distinct.size()) + " distinct trigrams exist");

    draw_prefix(distinct, n, seed);
    distinct.resize(n);

    TrigramSample sample;
    sample.seed = seed;
    sample.requested = n;
    sample.trigrams.reserve(n);
    for (const auto& t : distinct)
        sample.trigrams.push_back({vocab.words[t.a], vocab.words[t.b], vocab.words[t.c]});
    std::sort(sample.trigrams.begin(), sample.trigrams.end());
    return sample;
}

WordPairSet sample_word_pairs(const Vocabulary& vocab, const TrigramSample& trigrams,
                              std::size_t n_pairs, std::int64_t freq_lo,
                              std::int64_t freq_hi, std::size_t min_occurrences,
                              std::uint64_t seed) {
    if (freq_lo > freq_hi) throw DataError("freq_lo exceeds freq_hi");

    std::unordered_map<std::string, std::size_t> central_count;
    for (const auto& t : trigrams.trigrams) ++central_count[t.w2];

    std::vector<std::string> eligible;
    for (std::size_t id = 0; id < vocab.size(); ++id) {
        if (vocab.freq[id] < freq_lo || vocab.freq[id] > freq_hi) continue;
        auto it = central_count.find(vocab.words[id]);
        if (it == central_count.end() || it->second < min_occurrences) continue;
        eligible.push_back(vocab.words[id]);
    }
    std::sort(eligible.begin(), eligible.end());

    if (eligible.size() < 2 * n_pairs)
        throw DataError("need " + std::to_string(2 * n_pairs) + " eligible words, found " +
                        std::to_string(eligible.size()));

    draw_prefix(eligible, 2 * n_pairs, seed);

    WordPairSet set;
    set.freq_lo = freq_lo;
    set.freq_hi = freq_hi;
    set.seed = seed;
    set.pairs.reserve(n_pairs);
    for (std::size_t i = 0; i < n_pairs; ++i)
        set.pairs.push_back({eligible[2 * i], eligible[2 * i + 1]});
    return set;
}

std::vector<std::size_t> central_word_rows(const TrigramSample& trigrams,
                                           const std::string& word) {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < trigrams.trigrams.size(); ++i)
        if (trigrams.trigrams[i].w2 == word) rows.push_back(i);
    return rows;
}

void write_vocab_tsv(const Vocabulary& vocab, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);  // binary: LF endings everywhere
    if (!out) throw DataError("cannot write " + path.string());
    for (std::size_t id = 0; id < vocab.size(); ++id)
        out << vocab.words[id] << '\t' << vocab.freq[id] << '\t' << (id + 1) << '\n';
    if (!out) throw DataError("write failed: " + path.string());
}

Vocabulary read_vocab_tsv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    Vocabulary vocab;
    std::string line;
    std::size_t expected_rank = 1;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::string word;
        std::int64_t freq = 0;
        std::size_t rank = 0;
        if (!std::getline(fields, word, '\t') || !(fields >> freq >> rank) ||
            rank != expected_rank)
            throw DataError("malformed vocabulary line in " + path.string() + ": " + line);
        vocab.ids.emplace(word, vocab.words.size());
        vocab.words.push_back(word);
        vocab.freq.push_back(freq);
        ++expected_rank;
    }
    if (vocab.words.empty()) throw DataError("empty vocabulary file: " + path.string());
    return vocab;
}

void write_trigrams_tsv(const TrigramSample& sample, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    for (const auto& t : sample.trigrams)
        out << t.w1 << '\t' << t.w2 << '\t' << t.w3 << '\n';
    if (!out) throw DataError("write failed: " + path.string());
}

TrigramSample read_trigrams_tsv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    TrigramSample sample;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream fields(line);
        Trigram t;
        if (!std::getline(fields, t.w1, '\t') || !std::getline(fields, t.w2, '\t') ||
            !std::getline(fields, t.w3))
            throw DataError("malformed trigram line in " + path.string() + ": " + line);
        sample.trigrams.push_back(std::move(t));
    }
    sample.requested = sample.trigrams.size();
    return sample;
}

}  // namespace svdstack
