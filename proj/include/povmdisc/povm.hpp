#pragma once

#include <optional>
#include <vector>

#include "povmdisc/matcore.hpp"
#include "povmdisc/rng.hpp"

namespace povmdisc {

// Rank-one POVM given by its effect vectors: effect i is |x_i><x_i| with the
// weight folded into the vector (for a SIC, |x_i> = phi_i / sqrt(d)).
struct RankOnePovm {
    int dim = 0;
    std::vector<Ket> vectors;

    int effect_count() const { return static_cast<int>(vectors.size()); }
    ComplexMatrix effect_sum() const;
};

struct ValidationReport {
    bool ok = false;
    double max_deviation = 0.0;  // max-norm deviation of sum_i |x_i><x_i| from 1
};

/// Diagnostic completeness check; never throws on an incomplete POVM.
ValidationReport validate(const RankOnePovm& p,
                          double tol = global_tolerances().completeness_tol);

/// Weyl-Heisenberg SIC POVM: m = d^2 vectors (1/sqrt(d)) X^a Z^b |fid> with
/// index i = a*d + b (0-based). d = 3 has a built-in fiducial
/// (0, 1, -1)/sqrt(2); other dimensions require an explicit fiducial. The
/// overlap property |<phi_i|phi_j>|^2 = 1/(d+1) and completeness are checked
/// before returning; a violating fiducial raises NotSicError.
RankOnePovm build_sic(int d = 3, const std::optional<Ket>& fiducial = std::nullopt,
                      double overlap_tol = global_tolerances().sic_overlap_tol);

/// Vector i of the result is vector pi(i) of the input (pi is 1-based).
RankOnePovm permute_effects(const RankOnePovm& p, const std::vector<int>& pi);

/// Haar isometry with `cols` orthonormal columns in C^rows, via QR of a
/// Ginibre matrix with the phases of diag(R) absorbed into Q.
ComplexMatrix sample_haar_isometry(int rows, int cols, RngStream& rng);

/// POVM whose effect vectors are the conjugated rows of an isometry with
/// orthonormal columns (equivalently, projectors onto the columns of its
/// adjoint).
RankOnePovm povm_from_isometry(const ComplexMatrix& q);

/// Haar-random rank-one POVM with m effects in dimension d (m >= d).
RankOnePovm sample_random_povm(int d, int m, RngStream& rng);

struct PovmPair {
    RankOnePovm first;
    RankOnePovm second;

    int dim() const { return first.dim; }
    int effect_count() const { return first.effect_count(); }
};

/// Throws naming the violated invariant (dimension/effect-count mismatch or
/// completeness failure of either POVM).
void check_pair(const PovmPair& pair,
                double completeness_tol = global_tolerances().completeness_tol);

// Effect permutation defining the default qutrit SIC pair (1-based, no fixed
// points).
inline const std::vector<int> kDefaultSicPermutation = {9, 8, 7, 3, 1, 2, 6, 4, 5};

/// (P1, P2) with P2 the effect-permuted copy of the SIC POVM P1.
PovmPair sic_pair(int d = 3, const std::vector<int>& pi = kDefaultSicPermutation,
                  const std::optional<Ket>& fiducial = std::nullopt);

}  // namespace povmdisc
