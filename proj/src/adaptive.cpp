#include "povmdisc/adaptive.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "povmdisc/rng.hpp"

namespace povmdisc {

namespace {

// State of the unmeasured register after a rank-one outcome on the first
// factor: component b of (<z| (x) 1)|psi> for |psi> on C^d (x) C^k.
Ket conditional_state(const Ket& z, const Ket& psi, int d, int k) {
    const ComplexMatrix m = Eigen::Map<const ComplexMatrix>(psi.data(), d, k);
    return m.transpose() * z.conjugate();
}

// |<xi|eta>| where the A built from the complement element determines
// xi, eta: <xi|eta> = conj(Tr A) / ||A||_1.
double target_overlap(const ComplexMatrix& a) {
    Eigen::JacobiSVD<ComplexMatrix> dec(a);
    const double trace_norm = dec.singularValues().sum();
    return trace_norm > 0 ? std::abs(a.trace()) / trace_norm : 0.0;
}

}  // namespace

AdaptiveScheme synthesize(const PovmPair& pair, const SynthesisOptions& options) {
    check_pair(pair);
    const int d = pair.dim();
    const int m = pair.effect_count();

    const OperatorSubspace span = build_span(pair);
    const IdentityInSpan id = identity_in_span(span);
    if (id.in_span)
        throw PreconditionError(
            "synthesize: identity lies in span{|x_i><y_i|} (residual " +
            std::to_string(id.residual) + "); the pair is not perfectly distinguishable");
    if (!disjoint(pair))
        throw PreconditionError(
            "synthesize: some effect pair (x_i, y_i) is linearly dependent; the "
            "measurement channels are not disjoint");
    if (span.complement().cols() == 0)
        throw PreconditionError("synthesize: span has no orthogonal complement");

    // residual second-register states after the first use, from the
    // maximally entangled input (conjugation follows the vectorization
    // convention)
    std::vector<Ket> psi(m), phi(m);
    std::vector<double> overlap_mag(m), overlap_arg(m);
    for (int i = 0; i < m; ++i) {
        psi[i] = pair.first.vectors[i].conjugate() / pair.first.vectors[i].norm();
        phi[i] = pair.second.vectors[i].conjugate() / pair.second.vectors[i].norm();
        const Complex ov = psi[i].dot(phi[i]);
        overlap_mag[i] = std::abs(ov);
        overlap_arg[i] = std::arg(ov);
    }

    ComplexMatrix a = devectorize(span.complement().col(0), d);
    if (options.strategy == SynthesisOptions::AStrategy::RandomSearch &&
        span.complement().cols() > 1) {
        auto mismatch = [&](const ComplexMatrix& cand) {
            const double r = target_overlap(cand);
            double worst = 0.0;
            for (int i = 0; i < m; ++i) worst = std::max(worst, std::abs(overlap_mag[i] - r));
            return worst;
        };
        double best = mismatch(a);
        RngStream stream(options.seed);
        for (int t = 0; t < options.search_trials; ++t) {
            Ket coeff(span.complement().cols());
            for (Eigen::Index k = 0; k < coeff.size(); ++k) coeff(k) = stream.gaussian_complex();
            coeff.normalize();
            const ComplexMatrix cand = devectorize(span.complement() * coeff, d);
            const double score = mismatch(cand);
            if (score < best) {
                best = score;
                a = cand;
            }
        }
    }

    AdaptiveScheme scheme;
    scheme.dim = d;
    scheme.input_state = maximally_entangled(d);
    scheme.a_matrix = a;

    const Svd asvd = svd(a);
    const RealVector root_sigma = asvd.sigma.cwiseSqrt();
    const Ket xi_raw = vectorize(ComplexMatrix(asvd.u * root_sigma.asDiagonal()));
    const Ket eta_raw = vectorize(ComplexMatrix(asvd.v * root_sigma.asDiagonal()));
    scheme.xi = xi_raw / xi_raw.norm();
    scheme.eta = eta_raw / eta_raw.norm();

    const Complex xi_eta = scheme.xi.dot(scheme.eta);
    const double r = std::abs(xi_eta);
    const double beta = std::arg(xi_eta);

    double worst_margin = 0.0;
    for (int i = 0; i < m; ++i) worst_margin = std::max(worst_margin, std::abs(overlap_mag[i] - r));
    if (worst_margin > options.gram_tol)
        throw GramMismatchError(
            "synthesize: residual-state overlaps do not match |<xi|eta>| = " +
                std::to_string(r) + " (worst margin " + std::to_string(worst_margin) +
                "); the two-shot scheme does not apply to this pair",
            worst_margin);

    scheme.phases.resize(m);
    scheme.isometries.reserve(m);
    for (int i = 0; i < m; ++i) {
        scheme.phases[i] = beta - overlap_arg[i];
        const Complex phase = std::polar(1.0, scheme.phases[i]);
        scheme.isometries.push_back(complete_isometry(
            {{psi[i], phase * scheme.xi}, {phi[i], scheme.eta}}, options.gram_tol));
    }

    // per-path projective measurement onto the two conditional third-register
    // states; orthogonality <v1|v2> = <y_j|A^dag|x_j> / ||A||_1 = 0 follows
    // from A _|_ span
    scheme.final_measurements.resize(static_cast<std::size_t>(m) * m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            AdaptiveScheme::PathMeasurement meas;
            Ket v1 = conditional_state(pair.first.vectors[j], scheme.xi, d, d);
            Ket v2 = conditional_state(pair.second.vectors[j], scheme.eta, d, d);
            const double n1 = v1.norm(), n2 = v2.norm();
            if (n1 > 1e-12 && n2 > 1e-12) {
                v1 /= n1;
                v2 /= n2;
                meas.first = v1 * v1.adjoint();
                meas.second = v2 * v2.adjoint();
                meas.informative = true;
            } else {
                // probability-zero path under at least one hypothesis; any
                // fixed measurement decides it correctly
                meas.first = ComplexMatrix::Zero(d, d);
                meas.first(0, 0) = 1.0;
                meas.second = ComplexMatrix::Zero(d, d);
                meas.second(1 % d, 1 % d) = 1.0;
                meas.informative = false;
            }
            scheme.final_measurements[static_cast<std::size_t>(i) * m + j] = std::move(meas);
        }
    }
    return scheme;
}

namespace {

struct PathDistribution {
    // per path (i, j): final-outcome masses under each hypothesis, indexed
    // [first-projector, second-projector, remainder]
    std::vector<std::array<double, 3>> outcome_mass[2];
    std::vector<double> path_prob[2];
    std::vector<double> overlap;  // normalized conditional-state overlap
    std::vector<double> first_prob[2];
    int m = 0;
};

PathDistribution path_distribution(const AdaptiveScheme& scheme, const PovmPair& pair) {
    const int d = pair.dim();
    const int m = pair.effect_count();
    if (scheme.dim != d)
        throw DimensionError("simulate: scheme dimension " + std::to_string(scheme.dim) +
                             " does not match POVM dimension " + std::to_string(d));
    if (scheme.effect_count() != m)
        throw DimensionError("simulate: scheme has " + std::to_string(scheme.effect_count()) +
                             " isometries for " + std::to_string(m) + " effects");
    if (scheme.input_state.size() != static_cast<Eigen::Index>(d) * d)
        throw DimensionError("simulate: input state is not on d^2");
    for (const ComplexMatrix& u : scheme.isometries)
        if (u.rows() != static_cast<Eigen::Index>(d) * d || u.cols() != d)
            throw DimensionError("simulate: isometry shape mismatch");
    if (scheme.final_measurements.size() != static_cast<std::size_t>(m) * m)
        throw DimensionError("simulate: final measurement table has wrong size");

    PathDistribution dist;
    dist.m = m;
    for (int h = 0; h < 2; ++h) {
        dist.outcome_mass[h].assign(static_cast<std::size_t>(m) * m, {0.0, 0.0, 0.0});
        dist.path_prob[h].assign(static_cast<std::size_t>(m) * m, 0.0);
        dist.first_prob[h].assign(m, 0.0);
    }
    dist.overlap.assign(static_cast<std::size_t>(m) * m, 0.0);

    std::vector<std::vector<Ket>> finals[2];
    for (int h = 0; h < 2; ++h) {
        const RankOnePovm& povm = h == 0 ? pair.first : pair.second;
        finals[h].assign(m, std::vector<Ket>(m));
        for (int i = 0; i < m; ++i) {
            const Ket res = conditional_state(povm.vectors[i], scheme.input_state, d, d);
            dist.first_prob[h][i] = res.squaredNorm();
            const Ket carried = scheme.isometries[i] * res;
            for (int j = 0; j < m; ++j) {
                const Ket final_state = conditional_state(povm.vectors[j], carried, d, d);
                const std::size_t path = static_cast<std::size_t>(i) * m + j;
                const double q = final_state.squaredNorm();
                dist.path_prob[h][path] = q;
                const auto& meas = scheme.final_measurements[path];
                const double t1 = std::real(final_state.dot(meas.first * final_state));
                const double t2 = std::real(final_state.dot(meas.second * final_state));
                dist.outcome_mass[h][path] = {std::max(t1, 0.0), std::max(t2, 0.0),
                                              std::max(q - t1 - t2, 0.0)};
                finals[h][i][j] = final_state;
            }
        }
    }
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            const std::size_t path = static_cast<std::size_t>(i) * m + j;
            const double n1 = finals[0][i][j].norm(), n2 = finals[1][i][j].norm();
            if (n1 > 1e-12 && n2 > 1e-12)
                dist.overlap[path] = std::abs(finals[0][i][j].dot(finals[1][i][j])) / (n1 * n2);
        }
    return dist;
}

std::vector<PathStat> path_stats(const PathDistribution& dist) {
    std::vector<PathStat> stats;
    stats.reserve(dist.path_prob[0].size());
    for (int i = 0; i < dist.m; ++i)
        for (int j = 0; j < dist.m; ++j) {
            const std::size_t path = static_cast<std::size_t>(i) * dist.m + j;
            stats.push_back({i, j, dist.path_prob[0][path], dist.path_prob[1][path],
                             dist.overlap[path]});
        }
    return stats;
}

}  // namespace

SimulationReport simulate_exact(const AdaptiveScheme& scheme, const PovmPair& pair,
                                double prior) {
    if (prior < 0.0 || prior > 1.0) throw PreconditionError("simulate_exact: prior outside [0, 1]");
    const PathDistribution dist = path_distribution(scheme, pair);
    double success = 0.0;
    for (std::size_t path = 0; path < dist.path_prob[0].size(); ++path)
        for (int o = 0; o < 3; ++o)
            success += std::max(prior * dist.outcome_mass[0][path][o],
                                (1.0 - prior) * dist.outcome_mass[1][path][o]);
    SimulationReport report;
    report.success_probability = std::min(success, 1.0);
    report.per_path = path_stats(dist);
    return report;
}

SimulationReport simulate_sampled(const AdaptiveScheme& scheme, const PovmPair& pair,
                                  long shots, std::uint64_t seed) {
    if (shots < 1) throw PreconditionError("simulate_sampled: need at least one shot");
    const PathDistribution dist = path_distribution(scheme, pair);
    const int m = dist.m;

    // decision fixed by the exact likelihoods at equal priors
    std::vector<std::array<int, 3>> decide(static_cast<std::size_t>(m) * m);
    for (std::size_t path = 0; path < decide.size(); ++path)
        for (int o = 0; o < 3; ++o)
            decide[path][o] =
                dist.outcome_mass[0][path][o] >= dist.outcome_mass[1][path][o] ? 0 : 1;

    auto draw = [](RngStream& rng, const double* masses, int count, double total) {
        double u = rng.uniform() * total;
        for (int k = 0; k < count - 1; ++k) {
            u -= masses[k];
            if (u < 0.0) return k;
        }
        return count - 1;
    };

    RngStream rng(seed);
    long correct = 0;
    for (long shot = 0; shot < shots; ++shot) {
        const int h = rng.uniform() < 0.5 ? 0 : 1;
        const int i = draw(rng, dist.first_prob[h].data(), m, 1.0);
        const double* paths = dist.path_prob[h].data() + static_cast<std::size_t>(i) * m;
        const int j = draw(rng, paths, m, dist.first_prob[h][i]);
        const std::size_t path = static_cast<std::size_t>(i) * m + j;
        const auto& mass = dist.outcome_mass[h][path];
        const int o = draw(rng, mass.data(), 3, dist.path_prob[h][path]);
        if (decide[path][o] == h) ++correct;
    }

    SimulationReport report;
    report.sampled = true;
    report.shots = shots;
    report.seed = seed;
    report.success_probability = static_cast<double>(correct) / static_cast<double>(shots);
    report.std_error = std::sqrt(report.success_probability *
                                 (1.0 - report.success_probability) / static_cast<double>(shots));
    report.per_path = path_stats(dist);
    return report;
}

double helstrom_lower_bound(const PovmPair& pair) {
    check_pair(pair);
    const int d = pair.dim();
    // rho_k are block diagonal over the classical outcome register, so the
    // trace norm splits into per-outcome dyad differences
    double trace_norm = 0.0;
    for (int i = 0; i < pair.effect_count(); ++i) {
        const Ket& x = pair.first.vectors[i];
        const Ket& y = pair.second.vectors[i];
        const ComplexMatrix diff = x * x.adjoint() - y * y.adjoint();
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(diff);
        trace_norm += es.eigenvalues().cwiseAbs().sum();
    }
    return 0.5 + 0.25 * trace_norm / static_cast<double>(d);
}

}  // namespace povmdisc
