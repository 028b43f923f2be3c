#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "povmdisc/matcore.hpp"
#include "povmdisc/povm.hpp"

namespace povmdisc {

// Orthonormalized operator subspace of L(C^d) with Hilbert-Schmidt projection
// capability. Columns of basis()/complement() are vectorized operators.
class OperatorSubspace {
  public:
    static OperatorSubspace from_generators(
        int dim, const std::vector<ComplexMatrix>& generators,
        double relative_rank_tol = global_tolerances().atol);

    int dim() const { return dim_; }
    int rank() const { return static_cast<int>(basis_.cols()); }
    const ComplexMatrix& basis() const { return basis_; }
    const ComplexMatrix& complement() const { return complement_; }

    ComplexMatrix basis_operator(int k) const;
    ComplexMatrix project(const ComplexMatrix& x) const;
    double membership_residual(const ComplexMatrix& x) const;

  private:
    OperatorSubspace(int dim, ComplexMatrix basis, ComplexMatrix complement)
        : dim_(dim), basis_(std::move(basis)), complement_(std::move(complement)) {}

    int dim_ = 0;
    ComplexMatrix basis_;       // d^2 x r
    ComplexMatrix complement_;  // d^2 x (d^2 - r)
};

/// span{ |x_i><y_i| } of a rank-one POVM pair.
OperatorSubspace build_span(const PovmPair& pair,
                            double relative_rank_tol = global_tolerances().atol);

/// Orthonormal real basis (w.r.t. Tr(AB)) of the Hermitian operators lying in
/// the complex subspace spanned by the given orthonormal columns. Returned as
/// a 2d^2 x t real matrix of stacked (Re, Im) vectorizations.
RealMatrix hermitian_part_basis(const ComplexMatrix& columns, int dim,
                                double relative_rank_tol = global_tolerances().atol);

struct IdentityInSpan {
    bool in_span = false;
    double residual = 0.0;  // ||1 - Proj(1)||_F / sqrt(d)
};

IdentityInSpan identity_in_span(const OperatorSubspace& s,
                                double tol = global_tolerances().identity_in_span_tol);

/// True iff (x_i, y_i) are linearly independent for every i, measured by the
/// smallest eigenvalue of their 2x2 Gram matrix.
bool disjoint(const PovmPair& pair,
              double independence_tol = global_tolerances().atol);

struct PositiveSearchOptions {
    int max_iter = 5000;
    int restarts = 8;
    double convergence_tol = global_tolerances().atol;
    double membership_tol = global_tolerances().span_membership_tol;
    double full_rank_tol = global_tolerances().full_rank_tol;
};

struct PositiveSearchResult {
    // Density operator inside the span, present when any restart converged
    // with membership residual below tolerance. Average of all converged
    // runs (the intersection is convex, and averaging pushes off the
    // boundary toward full rank).
    std::optional<ComplexMatrix> state;
    bool full_rank = false;        // min_eigenvalue > full_rank_tol
    double min_eigenvalue = 0.0;
    double in_span_residual = 0.0;
    int converged_restarts = 0;
};

/// Alternating projections between the Hermitian part of the span and the
/// density operators. Heuristic: an empty result is absence of evidence, not
/// a proof of infeasibility.
PositiveSearchResult find_positive_in_span(const OperatorSubspace& s,
                                           const PositiveSearchOptions& options,
                                           std::uint64_t seed);

struct ParallelCheckOptions {
    int max_iter = 5000;
    int restarts = 8;
    double convergence_tol = global_tolerances().atol;
    double orthogonality_tol = global_tolerances().orthogonality_tol;
};

struct ParallelCheckResult {
    int n_uses = 0;
    // Witness density operator rho on d^N with <x_I|rho|y_I> = 0 for every
    // multi-index I: a sufficiency certificate for perfect parallel
    // discrimination at N uses.
    std::optional<ComplexMatrix> witness;
    double best_residual = 0.0;  // smallest max_I |<x_I|rho|y_I>| reached
};

/// Searches for a parallel-discrimination witness at n_uses black-box uses.
/// Throws BudgetExceededError outside n <= 3 (d <= 3), n <= 2 (d <= 7),
/// n = 1 otherwise.
ParallelCheckResult parallel_check(const PovmPair& pair, int n_uses,
                                   const ParallelCheckOptions& options,
                                   std::uint64_t seed);

enum class Category {
    NotPerfectlyDistinguishable,
    AdaptiveOnly,
    FiniteDistinguishableParallelUndetermined,
};

std::string to_string(Category c);

struct Verdict {
    bool identity_in_span = false;
    double identity_residual = 0.0;
    bool disjoint = false;
    bool positive_in_span = false;  // full-rank witness found
    std::optional<ComplexMatrix> witness_state;
    double witness_min_eigenvalue = 0.0;
    double witness_residual = 0.0;
    Category category = Category::NotPerfectlyDistinguishable;
    std::map<int, ParallelCheckResult> parallel_certificates;
};

struct ClassifyOptions {
    PositiveSearchOptions search;
    ParallelCheckOptions parallel;
    std::vector<int> parallel_uses;  // empty: skip parallel checks
    std::uint64_t seed = 1;
    double identity_tol = global_tolerances().identity_in_span_tol;
    double independence_tol = global_tolerances().atol;
    // Skip the witness search when identity-in-span or non-disjointness has
    // already decided the category (sweeps enable this).
    bool skip_positive_when_decided = false;
};

Verdict classify(const PovmPair& pair, const ClassifyOptions& options = {});

}  // namespace povmdisc
