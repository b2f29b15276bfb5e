#include "svdstack/svd.hpp"

#include <Eigen/Dense>
#include <random>

#include "svdstack/common.hpp"

namespace svdstack {

Eigen::Index SvdFactors::effective_rank(double rel_floor) const {
    if (S.size() == 0) return 0;
    const double floor = rel_floor * S(0);
    Eigen::Index r = 0;
    while (r < S.size() && S(r) > floor) ++r;
    return r;
}

namespace {

// Thin Q factor of an n x l matrix, n >= l.
Eigen::MatrixXd thin_q(const Eigen::MatrixXd& m) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
    return qr.householderQ() * Eigen::MatrixXd::Identity(m.rows(), m.cols());
}

SvdFactors dense_svd(const Eigen::MatrixXd& C, Eigen::Index k) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(C, Eigen::ComputeThinU | Eigen::ComputeThinV);
    SvdFactors f;
    f.U = svd.matrixU().leftCols(k);
    f.S = svd.singularValues().head(k);
    f.V = svd.matrixV().leftCols(k);
    return f;
}

// Halko-Martinsson-Tropp randomized range finder with power iterations.
// Re-orthonormalization after every product keeps the basis stable.
SvdFactors randomized_svd(const Eigen::MatrixXd& C, Eigen::Index k,
                          const SvdOptions& opts) {
    const Eigen::Index n = C.rows();
    const Eigen::Index d = C.cols();
    const Eigen::Index l = std::min(k + opts.oversampling, std::min(n, d));

    std::mt19937_64 rng(opts.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXd omega(d, l);
    for (Eigen::Index j = 0; j < l; ++j)
        for (Eigen::Index i = 0; i < d; ++i) omega(i, j) = gauss(rng);

    Eigen::MatrixXd q = thin_q(C * omega);
    for (int it = 0; it < opts.power_iterations; ++it) {
        q = thin_q(C.transpose() * q);
        q = thin_q(C * q);
    }

    const Eigen::MatrixXd b = q.transpose() * C;  // l x d
    Eigen::BDCSVD<Eigen::MatrixXd> svd(b, Eigen::ComputeThinU | Eigen::ComputeThinV);

    SvdFactors f;
    f.U = q * svd.matrixU().leftCols(k);
    f.S = svd.singularValues().head(k);
    f.V = svd.matrixV().leftCols(k);
    return f;
}

}  // namespace

SvdFactors truncated_svd(const Eigen::MatrixXd& C, Eigen::Index k,
                         const SvdOptions& opts) {
    const Eigen::Index min_dim = std::min(C.rows(), C.cols());
    if (k < 1 || k > min_dim)
        throw DataError("rank " + std::to_string(k) + " out of range [1, " +
                        std::to_string(min_dim) + "]");
    if (!C.allFinite()) throw NumericError("matrix has non-finite entries");

    SvdFactors f = min_dim <= opts.dense_cutoff ? dense_svd(C, k)
                                                : randomized_svd(C, k, opts);
    return f;
}

SvdFactors canonicalize_signs(SvdFactors f) {
    for (Eigen::Index j = 0; j < f.V.cols(); ++j) {
        Eigen::Index arg_max = 0;
        double best = -1.0;
        for (Eigen::Index i = 0; i < f.V.rows(); ++i) {
            const double a = std::abs(f.V(i, j));
            if (a > best) {  // strict: lowest index decides ties
                best = a;
                arg_max = i;
            }
        }
        if (f.V(arg_max, j) < 0.0) {
            f.V.col(j) = -f.V.col(j);
            if (j < f.U.cols()) f.U.col(j) = -f.U.col(j);
        }
    }
    f.canonical_signs = true;
    return f;
}

}  // namespace svdstack
