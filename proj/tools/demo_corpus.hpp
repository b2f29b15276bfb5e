#pragma once

#include <cstdint>
#include <ostream>

namespace svdstack::demo {

/// Writes a deterministic synthetic sentence-per-line corpus. Sentences come
/// from a part-of-speech Markov chain with Zipf-distributed word choice inside
/// each class, which gives the corpus the frequency profile and adjacency
/// structure the pipeline expects from natural text: a heavy hapax tail,
/// high-frequency closed-class words, and class-dependent neighbor counts.
void write_demo_corpus(std::ostream& out, std::size_t n_sentences, std::uint64_t seed);

}  // namespace svdstack::demo
