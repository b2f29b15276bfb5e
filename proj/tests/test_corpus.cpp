#include <set>
#include <sstream>

#include "doctest.h"
#include "svdstack/corpus.hpp"

using namespace svdstack;

namespace {

TokenizedCorpus corpus_from(const std::string& text) {
    std::istringstream in(text);
    return tokenize(in, "inline");
}

}  // namespace

TEST_CASE("tokenize lowercases and splits punctuation into standalone tokens") {
    const TokenizedCorpus c = corpus_from("A tangled web .\n");
    REQUIRE(c.sentences.size() == 1);
    CHECK(c.sentences[0] == std::vector<std::string>{"a", "tangled", "web", "."});
}

TEST_CASE("tokenize drops empty lines and preserves sentence order") {
    const TokenizedCorpus c = corpus_from("first line\n\nsecond , line !\n   \n");
    REQUIRE(c.sentences.size() == 2);
    CHECK(c.sentences[0] == std::vector<std::string>{"first", "line"});
    CHECK(c.sentences[1] == std::vector<std::string>{"second", ",", "line", "!"});
}

TEST_CASE("tokenize splits attached punctuation and keeps multi-byte UTF-8") {
    const TokenizedCorpus c = corpus_from("It's fine... caf\xc3\xa9 time\n");
    CHECK(c.sentences[0] == std::vector<std::string>{"it", "'", "s", "fine", ".", ".", ".",
                                                     "caf\xc3\xa9", "time"});
}

TEST_CASE("tokenize reports the byte offset of invalid UTF-8") {
    std::istringstream in(std::string("ok line\nbad \xff byte\n"));
    CHECK_THROWS_WITH_AS(tokenize(in), doctest::Contains("byte offset 12"), DataError);
}

TEST_CASE("build_vocab counts and ranks by descending frequency") {
    const Vocabulary v = build_vocab(corpus_from("b b a\n"));
    REQUIRE(v.size() == 2);
    CHECK(v.freq[v.id_of("b")] == 2);
    CHECK(v.freq[v.id_of("a")] == 1);
    CHECK(v.rank_of("b") == 1);
    CHECK(v.rank_of("a") == 2);
}

TEST_CASE("build_vocab breaks frequency ties lexicographically") {
    const Vocabulary v = build_vocab(corpus_from("a b\n"));
    CHECK(v.rank_of("a") == 1);
    CHECK(v.rank_of("b") == 2);
}

TEST_CASE("build_vocab rejects an empty corpus") {
    CHECK_THROWS_AS(build_vocab(TokenizedCorpus{}), DataError);
}

TEST_CASE("vocabulary ranks are a permutation with non-increasing frequency") {
    const Vocabulary v = build_vocab(
        corpus_from("the cat sat on the mat\nthe dog sat\ncat and dog and bird\n"));
    for (std::size_t id = 0; id + 1 < v.size(); ++id)
        CHECK(v.freq[id] >= v.freq[id + 1]);
    // words are stored in rank order, so every rank appears exactly once
    for (std::size_t id = 0; id < v.size(); ++id)
        CHECK(v.rank_of(v.words[id]) == id + 1);
}

TEST_CASE("sample_trigrams with n equal to the distinct count returns everything") {
    const TokenizedCorpus c = corpus_from("a b c d\nx y z\n");
    // distinct trigrams: (a b c), (b c d), (x y z)
    for (std::uint64_t seed : {0ULL, 7ULL, 123456789ULL}) {
        const TrigramSample s = sample_trigrams(c, 3, seed);
        REQUIRE(s.size() == 3);
        CHECK(s.trigrams[0] == Trigram{"a", "b", "c"});
        CHECK(s.trigrams[1] == Trigram{"b", "c", "d"});
        CHECK(s.trigrams[2] == Trigram{"x", "y", "z"});
    }
}

TEST_CASE("sample_trigrams never crosses sentence boundaries") {
    const TokenizedCorpus c = corpus_from("a b\nc d e f\n");
    const TrigramSample s = sample_trigrams(c, 2, 1);
    for (const Trigram& t : s.trigrams) {
        const bool from_second = t == Trigram{"c", "d", "e"} || t == Trigram{"d", "e", "f"};
        CHECK(from_second);
    }
}

TEST_CASE("sample_trigrams deduplicates repeated trigram types") {
    const TokenizedCorpus c = corpus_from("a b c\na b c\na b c d\n");
    // types: (a b c) occurs three times but counts once; (b c d) once
    const TrigramSample s = sample_trigrams(c, 2, 99);
    REQUIRE(s.size() == 2);
    CHECK(s.trigrams[0] == Trigram{"a", "b", "c"});
    CHECK(s.trigrams[1] == Trigram{"b", "c", "d"});
}

TEST_CASE("sample_trigrams errors when fewer distinct trigrams exist than requested") {
    const TokenizedCorpus c = corpus_from("a b c d\n");
    CHECK_THROWS_WITH_AS(sample_trigrams(c, 5, 0), doctest::Contains("only 2"), DataError);
}

TEST_CASE("sample_trigrams is deterministic and every trigram occurs in the corpus") {
    std::string text;
    for (int i = 0; i < 40; ++i)
        text += "w" + std::to_string(i % 7) + " w" + std::to_string((i * 3) % 11) + " w" +
                std::to_string((i * 5) % 13) + " w" + std::to_string(i % 5) + "\n";
    const TokenizedCorpus c = corpus_from(text);

    const TrigramSample s1 = sample_trigrams(c, 20, 42);
    const TrigramSample s2 = sample_trigrams(c, 20, 42);
    CHECK(s1.trigrams == s2.trigrams);

    const TrigramSample s3 = sample_trigrams(c, 20, 43);
    CHECK(s1.trigrams != s3.trigrams);  // overwhelmingly likely under a new seed

    // sample is sorted, unique, and every triple is a contiguous subsequence
    CHECK(std::is_sorted(s1.trigrams.begin(), s1.trigrams.end()));
    CHECK(std::adjacent_find(s1.trigrams.begin(), s1.trigrams.end()) == s1.trigrams.end());
    for (const Trigram& t : s1.trigrams) {
        bool found = false;
        for (const auto& sentence : c.sentences)
            for (std::size_t i = 0; i + 2 < sentence.size() && !found; ++i)
                found = sentence[i] == t.w1 && sentence[i + 1] == t.w2 &&
                        sentence[i + 2] == t.w3;
        CHECK(found);
    }
}

TEST_CASE("sample_word_pairs draws eligible words only") {
    // 'mid' words appear twice as central words; 'rare' only once.
    const TokenizedCorpus c = corpus_from(
        "x mid1 y\nz mid1 w\nx mid2 y\nz mid2 w\nx rare y\n"
        "x mid3 y\nz mid3 w\nx mid4 y\nz mid4 w\n");
    const Vocabulary v = build_vocab(c);
    const TrigramSample all = sample_trigrams(c, 9, 0);

    const WordPairSet pairs = sample_word_pairs(v, all, 2, 1, 2, 2, 7);
    REQUIRE(pairs.pairs.size() == 2);
    std::set<std::string> seen;
    for (const WordPair& p : pairs.pairs) {
        for (const std::string& w : {p.a, p.b}) {
            CHECK(seen.insert(w).second);  // all words distinct
            CHECK(w.substr(0, 3) == "mid");
            CHECK(central_word_rows(all, w).size() >= 2);
            CHECK(v.freq[v.id_of(w)] >= 1);
            CHECK(v.freq[v.id_of(w)] <= 2);
        }
    }
}

TEST_CASE("sample_word_pairs with exactly two eligible words forces the pair") {
    const TokenizedCorpus c = corpus_from("x aa y\nz aa w\nx bb y\nz bb w\n");
    const Vocabulary v = build_vocab(c);
    const TrigramSample all = sample_trigrams(c, 4, 0);
    for (std::uint64_t seed : {0ULL, 5ULL, 999ULL}) {
        const WordPairSet pairs = sample_word_pairs(v, all, 1, 1, 2, 2, seed);
        REQUIRE(pairs.pairs.size() == 1);
        const auto& p = pairs.pairs[0];
        CHECK(((p.a == "aa" && p.b == "bb") || (p.a == "bb" && p.b == "aa")));
    }
}

TEST_CASE("sample_word_pairs excludes words under the central-occurrence minimum") {
    const TokenizedCorpus c = corpus_from("x once y\nx aa y\nz aa w\nx bb y\nz bb w\n");
    const Vocabulary v = build_vocab(c);
    const TrigramSample all = sample_trigrams(c, 5, 0);
    CHECK(central_word_rows(all, "once").size() == 1);
    // 'once' has one central occurrence, below min_occurrences=2: only aa/bb remain.
    CHECK_THROWS_WITH_AS(sample_word_pairs(v, all, 2, 1, 2, 2, 0),
                         doctest::Contains("found 2"), DataError);
}

TEST_CASE("vocab and trigram TSV round-trip") {
    const TokenizedCorpus c = corpus_from("the cat sat on the mat\nthe dog sat\n");
    const Vocabulary v = build_vocab(c);
    const TrigramSample s = sample_trigrams(c, 4, 11);

    const auto dir = std::filesystem::temp_directory_path() / "svdstack_corpus_test";
    std::filesystem::create_directories(dir);
    write_vocab_tsv(v, dir / "vocab.tsv");
    write_trigrams_tsv(s, dir / "trigrams.tsv");

    const Vocabulary v2 = read_vocab_tsv(dir / "vocab.tsv");
    REQUIRE(v2.size() == v.size());
    for (std::size_t id = 0; id < v.size(); ++id) {
        CHECK(v2.words[id] == v.words[id]);
        CHECK(v2.freq[id] == v.freq[id]);
    }
    const TrigramSample s2 = read_trigrams_tsv(dir / "trigrams.tsv");
    CHECK(s2.trigrams == s.trigrams);
    std::filesystem::remove_all(dir);
}
