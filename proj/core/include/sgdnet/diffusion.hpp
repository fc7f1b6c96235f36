#pragma once

#include "sgdnet/graph.hpp"
#include "sgdnet/matrix.hpp"

#include <cstdint>
#include <functional>

namespace sgdnet {

enum class M0Mode {
    zero,     // M⁰ = 0; deterministic, used by tests
    uniform,  // M⁰ ~ U(-1, 1) drawn from m0_seed
};

M0Mode parse_m0_mode(const std::string& name);
std::string to_string(M0Mode mode);

struct DiffusionConfig {
    double c = 0.35;  // local feature injection ratio, open interval (0, 1)
    int k_steps = 10;
    M0Mode m0_mode = M0Mode::zero;
    std::uint64_t m0_seed = 0;

    /// Throws ArgumentError unless 0 < c < 1 and k_steps >= 1.
    void validate() const;
};

/// Positive-surfer (P) and negative-surfer (M) features; T = [P; M].
struct DiffusionState {
    Matrix p;
    Matrix m;

    Matrix stacked() const;
};

/// ‖a − b‖₁ over the stacked 2n x d matrices (maximum absolute column sum).
double distance_l1(const DiffusionState& a, const DiffusionState& b);

/// P⁰ = h_tilde and M⁰ according to cfg.m0_mode.
DiffusionState initial_state(const Matrix& h_tilde, const DiffusionConfig& cfg);

/// Called after every step k = 1..K with the state T⁽ᵏ⁾.
using StepObserver = std::function<void(int step, const DiffusionState& state)>;

/// Runs K steps of
///   P⁽ᵏ⁾ = (1−c)(Ã₊ᵀP⁽ᵏ⁻¹⁾ + Ã₋ᵀM⁽ᵏ⁻¹⁾) + c·H̃
///   M⁽ᵏ⁾ = (1−c)(Ã₋ᵀP⁽ᵏ⁻¹⁾ + Ã₊ᵀM⁽ᵏ⁻¹⁾)
/// starting from initial_state(h_tilde, cfg). B̃ is never formed.
DiffusionState diffuse(const NormalizedAdjacency& na, const Matrix& h_tilde,
                       const DiffusionConfig& cfg, const StepObserver& observer = {});

/// Same recurrence from an explicit starting state; k_steps may be 0.
DiffusionState diffuse_from(const NormalizedAdjacency& na, const Matrix& h_tilde,
                            DiffusionState start, double c, int k_steps,
                            const StepObserver& observer = {});

/// Largest n accepted by exact_solve (2n <= 4096).
inline constexpr NodeId kExactSolveMaxNodes = 2048;

/// Fixed point T* of the recurrence: dense LU solve of (I − (1−c)B̃)T = c[H̃; 0].
DiffusionState exact_solve(const NormalizedAdjacency& na, const Matrix& h_tilde, double c);

/// The explicit 2n x 2n block operator [Ã₊ᵀ Ã₋ᵀ; Ã₋ᵀ Ã₊ᵀ]. Oracle use only.
Matrix dense_block_operator(const NormalizedAdjacency& na);

/// Reverse-mode pass of diffuse with respect to H̃, given ∂L/∂P⁽ᴷ⁾ and ∂L/∂M⁽ᴷ⁾.
/// Includes the P⁰ = H̃ path; M⁰ is a constant and receives no gradient.
Matrix diffuse_adjoint(const NormalizedAdjacency& na, const Matrix& grad_p, const Matrix& grad_m,
                       const DiffusionConfig& cfg);

/// (1−c)ᴷ·‖T* − T⁰‖₁.
double error_bound(const DiffusionState& t0, const DiffusionState& t_star, double c, int k_steps);

}  // namespace sgdnet
