#include "sgdnet/svd.hpp"

#include "sgdnet/errors.hpp"
#include "sgdnet/random.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <string>

namespace sgdnet {

namespace {

using ColMatrix = Eigen::MatrixXd;

Matrix orthonormalize(const Matrix& y) {
    const ColMatrix cm = y;
    Eigen::HouseholderQR<ColMatrix> qr(cm);
    ColMatrix q = qr.householderQ() * ColMatrix::Identity(cm.rows(), cm.cols());
    return q;
}

void fix_signs(Matrix& u, Matrix& v) {
    for (Eigen::Index j = 0; j < u.cols(); ++j) {
        Eigen::Index best = 0;
        u.col(j).cwiseAbs().maxCoeff(&best);
        if (u(best, j) < 0.0) {
            u.col(j) *= -1.0;
            v.col(j) *= -1.0;
        }
    }
}

}  // namespace

SvdResult randomized_svd(const CsrMatrix& m, const RandomizedSvdOptions& opts) {
    const Eigen::Index rows = m.rows();
    const Eigen::Index cols = m.cols();
    const Eigen::Index min_dim = std::min(rows, cols);
    if (opts.rank < 1 || opts.rank > min_dim) {
        throw ArgumentError("randomized_svd: rank " + std::to_string(opts.rank) +
                            " must be in [1, " + std::to_string(min_dim) + "]");
    }
    if (opts.oversample < 0 || opts.power_iters < 0) {
        throw ArgumentError("randomized_svd: oversample and power_iters must be >= 0");
    }
    for (double v : m.values()) {
        if (!std::isfinite(v)) throw NumericError("randomized_svd: non-finite matrix entry");
    }
    const Eigen::Index width = std::min<Eigen::Index>(opts.rank + opts.oversample, min_dim);

    Rng rng(opts.seed);
    Matrix omega(cols, width);
    for (Eigen::Index i = 0; i < omega.size(); ++i) omega.data()[i] = standard_normal(rng);

    const CsrMatrix mt = m.transpose();
    Matrix q = orthonormalize(m.multiply(omega));
    for (int it = 0; it < opts.power_iters; ++it) {
        const Matrix z = orthonormalize(mt.multiply(q));
        q = orthonormalize(m.multiply(z));
    }

    // Bᵀ = Aᵀ Q (cols x width); SVD(Bᵀ) = W S Zᵀ gives A ≈ (Q Z) S Wᵀ.
    const ColMatrix bt = mt.multiply(q);
    Eigen::BDCSVD<ColMatrix> svd(bt, Eigen::ComputeThinU | Eigen::ComputeThinV);

    SvdResult out;
    out.s = svd.singularValues().head(opts.rank);
    out.u = q * svd.matrixV().leftCols(opts.rank);
    out.v = svd.matrixU().leftCols(opts.rank);
    fix_signs(out.u, out.v);
    return out;
}

}  // namespace sgdnet
