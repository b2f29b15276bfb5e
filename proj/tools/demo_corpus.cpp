#include "demo_corpus.hpp"

#include <array>
#include <cmath>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace svdstack::demo {

namespace {

enum Cls { Det, Adj, Noun, Verb, Adv, Prep, Pron, Conj, Comma, End, kNumCls };

constexpr std::size_t kClassSize[kNumCls] = {
    10, 2500, 6000, 3000, 900, 25, 12, 8, 0, 0,
};

// Sentence-level topics modulate which content words are likely. The topic
// mixture is what gives the corpus a high-rank co-occurrence structure;
// without it the top singular directions would be left encoding per-word
// sampling noise, which no natural corpus does.
constexpr int kTopics = 64;
constexpr double kTopicBoost = 8.0;

bool is_content_class(int c) { return c == Adj || c == Noun || c == Verb || c == Adv; }

// Row-stochastic after normalization; Comma/End rows are successor classes
// for a comma token and the start distribution respectively.
constexpr double kTransition[kNumCls][kNumCls] = {
    //            Det   Adj   Noun  Verb  Adv   Prep  Pron  Conj  Comma End
    /* Det   */ {0.00, 0.32, 0.66, 0.00, 0.02, 0.00, 0.00, 0.00, 0.00, 0.00},
    /* Adj   */ {0.00, 0.12, 0.70, 0.00, 0.00, 0.00, 0.00, 0.04, 0.06, 0.08},
    /* Noun  */ {0.00, 0.00, 0.05, 0.34, 0.00, 0.16, 0.00, 0.08, 0.12, 0.25},
    /* Verb  */ {0.30, 0.10, 0.16, 0.00, 0.16, 0.14, 0.06, 0.00, 0.00, 0.08},
    /* Adv   */ {0.00, 0.28, 0.00, 0.30, 0.06, 0.10, 0.00, 0.00, 0.10, 0.16},
    /* Prep  */ {0.45, 0.12, 0.35, 0.00, 0.00, 0.00, 0.08, 0.00, 0.00, 0.00},
    /* Pron  */ {0.00, 0.00, 0.05, 0.60, 0.10, 0.05, 0.00, 0.00, 0.05, 0.15},
    /* Conj  */ {0.25, 0.12, 0.25, 0.18, 0.08, 0.00, 0.12, 0.00, 0.00, 0.00},
    /* Comma */ {0.20, 0.00, 0.15, 0.00, 0.10, 0.10, 0.15, 0.30, 0.00, 0.00},
    /* Start */ {0.30, 0.10, 0.18, 0.06, 0.10, 0.08, 0.18, 0.00, 0.00, 0.00},
};

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::string make_word(std::uint64_t key) {
    static constexpr const char* kOnsets[] = {"b",  "d",  "f",  "g",  "k",  "l",
                                              "m",  "n",  "p",  "r",  "s",  "t",
                                              "v",  "z",  "br", "st", "tr", "pl"};
    static constexpr const char* kVowels[] = {"a", "e", "i", "o", "u", "ai", "ou"};
    std::mt19937_64 rng(key);
    const int syllables = 2 + static_cast<int>(rng() % 3);
    std::string word;
    for (int s = 0; s < syllables; ++s) {
        word += kOnsets[rng() % std::size(kOnsets)];
        word += kVowels[rng() % std::size(kVowels)];
    }
    if (rng() % 3 == 0) word += "n";
    return word;
}

std::vector<std::vector<std::string>> build_inventories() {
    std::vector<std::vector<std::string>> words(kNumCls);
    std::set<std::string> used;
    for (int c = 0; c < kNumCls; ++c) {
        words[c].reserve(kClassSize[c]);
        std::uint64_t key = 0x517cc1b727220a95ULL * (c + 1);
        while (words[c].size() < kClassSize[c]) {
            std::string w = make_word(key++);
            if (used.insert(w).second) words[c].push_back(std::move(w));
        }
    }
    return words;
}

// Cumulative distribution over [0, n) built from Zipf-Mandelbrot weights,
// optionally boosted on a deterministic per-topic subset of the words.
class WordSampler {
  public:
    WordSampler(std::size_t n, int cls, int topic) {
        cdf_.reserve(n);
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double w = 1.0 / std::pow(double(i) + 2.7, 1.05);
            if (topic >= 0) {
                const std::uint64_t h =
                    mix64(0x9e3779b97f4a7c15ULL * (topic + 1) + (std::uint64_t(cls) << 32) + i);
                if (h % 8 == 0) w *= kTopicBoost;
            }
            acc += w;
            cdf_.push_back(acc);
        }
        for (double& v : cdf_) v /= acc;
    }

    std::size_t operator()(std::mt19937_64& rng) const {
        const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        return static_cast<std::size_t>(
            std::lower_bound(cdf_.begin(), cdf_.end(), u) - cdf_.begin());
    }

  private:
    std::vector<double> cdf_;
};

}  // namespace

void write_demo_corpus(std::ostream& out, std::size_t n_sentences, std::uint64_t seed) {
    const auto inventories = build_inventories();

    std::vector<WordSampler> global;
    global.reserve(kNumCls);
    for (int c = 0; c < kNumCls; ++c)
        global.emplace_back(std::max<std::size_t>(kClassSize[c], 1), c, -1);

    // topic-specific samplers for the content classes only
    std::vector<std::vector<WordSampler>> topical(kTopics);
    for (int t = 0; t < kTopics; ++t)
        for (int c = 0; c < kNumCls; ++c)
            topical[t].emplace_back(std::max<std::size_t>(kClassSize[c], 1), c,
                                    is_content_class(c) ? t : -1);

    std::array<std::discrete_distribution<int>, kNumCls> next;
    for (int c = 0; c < kNumCls; ++c)
        next[c] = std::discrete_distribution<int>(std::begin(kTransition[c]),
                                                  std::end(kTransition[c]));

    std::mt19937_64 rng(seed);
    constexpr int kMaxTokens = 30;
    for (std::size_t s = 0; s < n_sentences; ++s) {
        const int topic = static_cast<int>(rng() % kTopics);
        int cls = next[End](rng);  // End row doubles as the start distribution
        int emitted = 0;
        std::string line;
        while (true) {
            if (cls == End || emitted >= kMaxTokens) {
                const auto r = rng() % 20;
                line += r == 0 ? "!" : (r == 1 ? "?" : ".");
                break;
            }
            if (cls == Comma) {
                line += ", ";
            } else {
                // most content words follow the sentence topic, a slice does not
                const bool topical_draw = is_content_class(cls) && rng() % 10 != 0;
                const auto& sampler = topical_draw ? topical[topic][cls] : global[cls];
                line += inventories[cls][sampler(rng)];
                line += ' ';
            }
            ++emitted;
            // Occasional off-grammar token keeps neighbor counts noisy.
            cls = rng() % 33 == 0 ? static_cast<int>(rng() % Comma) : next[cls](rng);
        }
        out << line << '\n';
    }
}

}  // namespace svdstack::demo
