#pragma once

namespace povmdisc {

// Centralized numeric tolerances. `atol` guards the algebraic-identity
// family: relative numerical rank, pairwise-independence Gram eigenvalues,
// and alternating-projection convergence. `gram_tol` guards the Gram match
// required by isometry completion. The remaining knobs are the acceptance
// thresholds of the individual predicates.
struct Tolerances {
    double atol = 1e-10;
    double gram_tol = 1e-8;
    double completeness_tol = 1e-9;      // POVM effects sum to identity
    double sic_overlap_tol = 1e-8;       // |<phi_i|phi_j>|^2 vs 1/(d+1)
    double identity_in_span_tol = 1e-8;  // normalized residual of Proj(1)
    double span_membership_tol = 1e-8;   // Frobenius residual of Proj(X)
    double full_rank_tol = 1e-7;         // min eigenvalue of a witness state
    double orthogonality_tol = 1e-8;     // parallel witness max |<x_I|rho|y_I>|
};

// Process-wide defaults. The CLI overrides `atol` from POVMDISC_TOL; library
// callers may pass their own instance anywhere a tolerance is accepted.
Tolerances& global_tolerances();

}  // namespace povmdisc
