#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace svdstack {

// Error classes map 1:1 onto CLI exit codes: usage = 1, data = 2, numeric = 3.
class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class DataError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class NumericError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// splitmix64 step; used to derive independent sub-seeds from one run seed
// so that e.g. trigram sampling and the SVD range finder never share a stream.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Sub-stream ids for seed derivation (keep stable: they are part of the
// reproducibility contract of written artifacts).
enum SeedStream : std::uint64_t {
    kSeedTrigramSample = 1,
    kSeedSvdLevel1 = 2,
    kSeedSvdLevel2 = 3,
    kSeedSvdWordLevel = 4,
    kSeedWordPairs = 5,
};

// FNV-1a 64-bit, used for artifact checksums in run manifests.
// Reproducibility check only, not cryptographic.
inline std::uint64_t fnv1a64(const void* data, std::size_t len,
                             std::uint64_t h = 0xcbf29ce484222325ULL) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Thread cap for the few parallel loops in this project.
// Reads SVDSTACK_THREADS; falls back to hardware concurrency.
unsigned effective_thread_count();

}  // namespace svdstack
