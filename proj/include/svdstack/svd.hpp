#pragma once

#include <Eigen/Core>
#include <cstdint>

namespace svdstack {

/// Thin SVD factors C ~ U * diag(S) * V^T with U n x k, S k, V d x k.
struct SvdFactors {
    Eigen::MatrixXd U;
    Eigen::VectorXd S;  // non-increasing, non-negative
    Eigen::MatrixXd V;
    bool canonical_signs = false;

    Eigen::Index rank() const { return S.size(); }
    /// Number of singular values above rel_floor * S[0].
    Eigen::Index effective_rank(double rel_floor) const;
};

struct SvdOptions {
    // Randomized range-finder parameters (Halko-Martinsson-Tropp style).
    Eigen::Index oversampling = 10;
    int power_iterations = 2;
    // min(n,d) at or below this goes through the dense bidiagonalization path.
    Eigen::Index dense_cutoff = 512;
    std::uint64_t seed = 0;
    // Relative floor under which trailing singular values count as zero
    // (effective-rank detection; values are kept, never dropped).
    double zero_floor = 1e-8;
};

/// Top-k singular triplets of C. Deterministic given the seed: the Gaussian
/// test matrix of the randomized path is drawn from a seeded mt19937_64.
/// Throws DataError for k outside [1, min(n,d)], NumericError for non-finite C.
SvdFactors truncated_svd(const Eigen::MatrixXd& C, Eigen::Index k,
                         const SvdOptions& opts = {});

/// Resolves the per-column sign ambiguity: if the largest-magnitude entry of
/// V[:,j] is negative (lowest index wins ties), both U[:,j] and V[:,j] flip.
/// The reconstruction U * diag(S) * V^T is unchanged. Idempotent.
SvdFactors canonicalize_signs(SvdFactors f);

}  // namespace svdstack
