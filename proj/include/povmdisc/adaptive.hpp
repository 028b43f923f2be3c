#pragma once

#include <cstdint>
#include <vector>

#include "povmdisc/classify.hpp"
#include "povmdisc/matcore.hpp"
#include "povmdisc/povm.hpp"

namespace povmdisc {

// Two-shot adaptive discrimination scheme. The maximally entangled input is
// measured once; conditioned on outcome i an isometry U_i: C^d -> C^d (x) C^d
// re-prepares the post-measurement state; the black box is used again on the
// first factor; a per-path projective measurement on the remaining register
// decides the hypothesis.
struct AdaptiveScheme {
    int dim = 0;
    Ket input_state;         // maximally entangled on d^2
    ComplexMatrix a_matrix;  // unit-Frobenius element orthogonal to the span
    Ket xi;                  // normalized |U sqrt(Sigma)>>
    Ket eta;                 // normalized |V sqrt(Sigma)>>
    std::vector<double> phases;             // theta_i = beta - alpha_i
    std::vector<ComplexMatrix> isometries;  // m matrices, d^2 x d

    struct PathMeasurement {
        ComplexMatrix first;   // projector deciding hypothesis 1
        ComplexMatrix second;  // orthogonal projector deciding hypothesis 2
        bool informative = false;  // false on probability-zero paths
    };
    std::vector<PathMeasurement> final_measurements;  // m*m, index i*m + j

    int effect_count() const { return static_cast<int>(isometries.size()); }
    const PathMeasurement& measurement(int i, int j) const {
        return final_measurements[static_cast<std::size_t>(i) * isometries.size() + j];
    }
};

struct SynthesisOptions {
    enum class AStrategy {
        Canonical,     // first complement basis operator (deterministic)
        RandomSearch,  // random unit elements of the complement, best Gram margin
    };
    AStrategy strategy = AStrategy::Canonical;
    int search_trials = 256;
    std::uint64_t seed = 1;
    double gram_tol = global_tolerances().gram_tol;
};

/// Builds the two-shot scheme for a pair with 1 not in the span and disjoint
/// effects. Throws PreconditionError when those predicates fail and
/// GramMismatchError when the overlaps |<psi_i|phi_i>| do not all match
/// |<xi|eta>| within gram_tol (the scheme does not apply to such a pair).
AdaptiveScheme synthesize(const PovmPair& pair, const SynthesisOptions& options = {});

struct PathStat {
    int first_outcome = 0;
    int second_outcome = 0;
    double prob_under_first = 0.0;
    double prob_under_second = 0.0;
    // |<c1|c2>| of the normalized conditional final states, 0 when either
    // hypothesis gives the path probability zero.
    double conditional_overlap = 0.0;
};

struct SimulationReport {
    double success_probability = 0.0;
    std::vector<PathStat> per_path;
    bool sampled = false;
    long shots = 0;
    std::uint64_t seed = 0;
    double std_error = 0.0;
};

/// Exact evaluation over all m^2 outcome paths with a maximum-likelihood
/// decision on each (path, final outcome).
SimulationReport simulate_exact(const AdaptiveScheme& scheme, const PovmPair& pair,
                                double prior = 0.5);

/// Monte-Carlo run of the same protocol with the decision table fixed by the
/// exact likelihoods; reproducible for a fixed seed.
SimulationReport simulate_sampled(const AdaptiveScheme& scheme, const PovmPair& pair,
                                  long shots, std::uint64_t seed);

/// Single-shot achievable bound 1/2 + 1/4 ||rho_1 - rho_2||_1 on the
/// maximally entangled input, rho_k = (P_k (x) 1)(|1>><<1| / d).
double helstrom_lower_bound(const PovmPair& pair);

}  // namespace povmdisc
