#include "sgdnet/diffusion.hpp"

#include "sgdnet/errors.hpp"
#include "sgdnet/parallel.hpp"
#include "sgdnet/random.hpp"

#include <Eigen/LU>

#include <cmath>
#include <string>

namespace sgdnet {

namespace {

// p_out = scale·(same·p + flip·m), m_out = scale·(flip·p + same·m).
// `same` and `flip` share the row space of the outputs.
void signed_propagate(const CsrMatrix& same, const CsrMatrix& flip, const Matrix& p,
                      const Matrix& m, double scale, Matrix& p_out, Matrix& m_out) {
    const auto s_ptr = same.row_ptr();
    const auto s_col = same.col_idx();
    const auto s_val = same.values();
    const auto f_ptr = flip.row_ptr();
    const auto f_col = flip.col_idx();
    const auto f_val = flip.values();
    parallel_for(0, same.rows(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t v = lo; v < hi; ++v) {
            auto po = p_out.row(static_cast<Eigen::Index>(v));
            auto mo = m_out.row(static_cast<Eigen::Index>(v));
            po.setZero();
            mo.setZero();
            for (Offset k = s_ptr[v]; k < s_ptr[v + 1]; ++k) {
                const double w = s_val[k];
                po.noalias() += w * p.row(s_col[k]);
                mo.noalias() += w * m.row(s_col[k]);
            }
            for (Offset k = f_ptr[v]; k < f_ptr[v + 1]; ++k) {
                const double w = f_val[k];
                po.noalias() += w * m.row(f_col[k]);
                mo.noalias() += w * p.row(f_col[k]);
            }
            po *= scale;
            mo *= scale;
        }
    });
}

void check_c(double c) {
    if (!(c > 0.0 && c < 1.0)) {
        throw ArgumentError("diffusion: c must lie in (0, 1), got " + std::to_string(c));
    }
}

void check_rows(const NormalizedAdjacency& na, const Matrix& x, const char* what) {
    if (x.rows() != static_cast<Eigen::Index>(na.num_nodes())) {
        throw ArgumentError(std::string("diffusion: ") + what + " has " + std::to_string(x.rows()) +
                            " rows, graph has " + std::to_string(na.num_nodes()) + " nodes");
    }
}

}  // namespace

M0Mode parse_m0_mode(const std::string& name) {
    if (name == "zero") return M0Mode::zero;
    if (name == "uniform") return M0Mode::uniform;
    throw ArgumentError("unknown m0 mode '" + name + "' (expected zero or uniform)");
}

std::string to_string(M0Mode mode) { return mode == M0Mode::zero ? "zero" : "uniform"; }

void DiffusionConfig::validate() const {
    check_c(c);
    if (k_steps < 1) throw ArgumentError("diffusion: K must be >= 1");
}

Matrix DiffusionState::stacked() const {
    Matrix t(p.rows() + m.rows(), p.cols());
    t << p, m;
    return t;
}

double distance_l1(const DiffusionState& a, const DiffusionState& b) {
    if (a.p.rows() != b.p.rows() || a.p.cols() != b.p.cols() || a.m.rows() != b.m.rows() ||
        a.m.cols() != b.m.cols()) {
        throw ArgumentError("distance_l1: shape mismatch");
    }
    if (a.p.cols() == 0) return 0.0;
    const Vector cols = (a.p - b.p).cwiseAbs().colwise().sum().transpose() +
                        (a.m - b.m).cwiseAbs().colwise().sum().transpose();
    return cols.maxCoeff();
}

DiffusionState initial_state(const Matrix& h_tilde, const DiffusionConfig& cfg) {
    DiffusionState t{h_tilde, Matrix::Zero(h_tilde.rows(), h_tilde.cols())};
    if (cfg.m0_mode == M0Mode::uniform) {
        Rng rng(cfg.m0_seed);
        t.m = uniform_matrix(h_tilde.rows(), h_tilde.cols(), -1.0, 1.0, rng);
    }
    return t;
}

DiffusionState diffuse_from(const NormalizedAdjacency& na, const Matrix& h_tilde,
                            DiffusionState start, double c, int k_steps,
                            const StepObserver& observer) {
    check_c(c);
    if (k_steps < 0) throw ArgumentError("diffusion: K must be >= 0");
    check_rows(na, h_tilde, "H~");
    check_rows(na, start.p, "P0");
    check_rows(na, start.m, "M0");
    if (start.p.cols() != h_tilde.cols() || start.m.cols() != h_tilde.cols()) {
        throw ArgumentError("diffusion: feature dimension mismatch between H~ and T0");
    }
    if (!h_tilde.allFinite() || !start.p.allFinite() || !start.m.allFinite()) {
        throw NumericError("diffusion: non-finite input");
    }

    DiffusionState cur = std::move(start);
    DiffusionState next{Matrix(cur.p.rows(), cur.p.cols()), Matrix(cur.m.rows(), cur.m.cols())};
    for (int k = 1; k <= k_steps; ++k) {
        signed_propagate(na.plus_t, na.minus_t, cur.p, cur.m, 1.0 - c, next.p, next.m);
        next.p.noalias() += c * h_tilde;
        std::swap(cur, next);
        if (observer) observer(k, cur);
    }
    return cur;
}

DiffusionState diffuse(const NormalizedAdjacency& na, const Matrix& h_tilde,
                       const DiffusionConfig& cfg, const StepObserver& observer) {
    cfg.validate();
    return diffuse_from(na, h_tilde, initial_state(h_tilde, cfg), cfg.c, cfg.k_steps, observer);
}

Matrix dense_block_operator(const NormalizedAdjacency& na) {
    const Eigen::Index n = na.num_nodes();
    const Matrix pt = na.plus_t.to_dense();
    const Matrix mt = na.minus_t.to_dense();
    Matrix b(2 * n, 2 * n);
    b << pt, mt, mt, pt;
    return b;
}

DiffusionState exact_solve(const NormalizedAdjacency& na, const Matrix& h_tilde, double c) {
    check_c(c);
    check_rows(na, h_tilde, "H~");
    const NodeId n = na.num_nodes();
    if (n > kExactSolveMaxNodes) {
        throw ArgumentError("exact_solve: 2n = " + std::to_string(2ull * n) +
                            " exceeds the dense limit 4096");
    }
    const Eigen::Index nn = n;
    const Eigen::MatrixXd system =
        Eigen::MatrixXd::Identity(2 * nn, 2 * nn) - (1.0 - c) * dense_block_operator(na);
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(2 * nn, h_tilde.cols());
    rhs.topRows(nn) = c * h_tilde;

    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);
    const Eigen::MatrixXd t = lu.solve(rhs);
    if (!t.allFinite()) throw InternalError("exact_solve: LU produced non-finite solution");
    return {t.topRows(nn), t.bottomRows(nn)};
}

Matrix diffuse_adjoint(const NormalizedAdjacency& na, const Matrix& grad_p, const Matrix& grad_m,
                       const DiffusionConfig& cfg) {
    cfg.validate();
    check_rows(na, grad_p, "grad_p");
    check_rows(na, grad_m, "grad_m");
    if (grad_p.cols() != grad_m.cols()) throw ArgumentError("diffuse_adjoint: width mismatch");

    const double c = cfg.c;
    Matrix gp = grad_p;
    Matrix gm = grad_m;
    Matrix gp_prev(gp.rows(), gp.cols());
    Matrix gm_prev(gm.rows(), gm.cols());
    Matrix grad_h = Matrix::Zero(gp.rows(), gp.cols());
    for (int k = cfg.k_steps; k >= 1; --k) {
        grad_h.noalias() += c * gp;
        // Adjoint of left-multiplication by Ãᵀ is left-multiplication by Ã.
        signed_propagate(na.plus, na.minus, gp, gm, 1.0 - c, gp_prev, gm_prev);
        std::swap(gp, gp_prev);
        std::swap(gm, gm_prev);
    }
    grad_h += gp;  // P⁰ = H̃
    return grad_h;
}

double error_bound(const DiffusionState& t0, const DiffusionState& t_star, double c, int k_steps) {
    return std::pow(1.0 - c, k_steps) * distance_l1(t_star, t0);
}

}  // namespace sgdnet
