#include "povmdisc/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "povmdisc/rng.hpp"

namespace povmdisc {

namespace {

ComplexMatrix hermitize(const ComplexMatrix& x) { return 0.5 * (x + x.adjoint()); }

// Full-U SVD used for span/complement splits. Large inputs go through the
// self-adjoint eigenproblem of G G^dag instead of BDCSVD, whose deflation
// mishandles the heavily degenerate spectra these dyad matrices produce.
void full_svd(const ComplexMatrix& g, ComplexMatrix& u, RealVector& sigma) {
    if (std::max(g.rows(), g.cols()) <= 128) {
        Eigen::JacobiSVD<ComplexMatrix> dec(g, Eigen::ComputeFullU);
        u = dec.matrixU();
        sigma = dec.singularValues();
        return;
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(ComplexMatrix(g * g.adjoint()));
    const Eigen::Index n = g.rows();
    // eigenvalues of the normal matrix carry ~eps * lambda_max noise: clamp
    // everything below that floor to an exact zero singular value
    const double floor = std::max(es.eigenvalues().maxCoeff(), 0.0) * 1e-12;
    u.resize(n, n);
    sigma.resize(std::min(n, g.cols()));
    for (Eigen::Index i = 0; i < n; ++i) {
        u.col(i) = es.eigenvectors().col(n - 1 - i);  // descending
        const double lambda = es.eigenvalues()(n - 1 - i);
        if (i < sigma.size()) sigma(i) = lambda > floor ? std::sqrt(lambda) : 0.0;
    }
}

// Stacked (Re, Im) picture of the vectorized operator; the Euclidean inner
// product of these real vectors is Re Tr(A^dag B), which restricts to the
// Hilbert-Schmidt inner product Tr(AB) on Hermitian operators.
RealVector vec_real(const ComplexMatrix& m) {
    const Eigen::Index n = m.size();
    RealVector v(2 * n);
    const auto flat = Eigen::Map<const Ket>(m.data(), n);
    v.head(n) = flat.real();
    v.tail(n) = flat.imag();
    return v;
}

ComplexMatrix unvec_real(const RealVector& v, int dim) {
    const Eigen::Index n = static_cast<Eigen::Index>(dim) * dim;
    Ket flat(n);
    flat.real() = v.head(n);
    flat.imag() = v.tail(n);
    return Eigen::Map<const ComplexMatrix>(flat.data(), dim, dim);
}

struct PocsRun {
    ComplexMatrix state;  // density operator (the density projection runs last)
    int iterations = 0;
};

// Alternating projections between the real subspace spanned by herm_basis
// and the density operators.
PocsRun alternating_projections(const RealMatrix& herm_basis, int dim,
                                const ComplexMatrix& start, int max_iter,
                                double convergence_tol) {
    PocsRun run;
    ComplexMatrix x = start;
    for (int it = 0; it < max_iter; ++it) {
        ComplexMatrix projected;
        if (herm_basis.cols() == 0) {
            projected = ComplexMatrix::Zero(dim, dim);
        } else {
            const RealVector coeffs = herm_basis.transpose() * vec_real(x);
            projected = unvec_real(herm_basis * coeffs, dim);
        }
        ComplexMatrix next = nearest_density(projected);
        const double step = (next - x).norm();
        x = std::move(next);
        run.iterations = it + 1;
        if (step < convergence_tol) break;
    }
    run.state = std::move(x);
    return run;
}

}  // namespace

OperatorSubspace OperatorSubspace::from_generators(int dim,
                                                   const std::vector<ComplexMatrix>& generators,
                                                   double relative_rank_tol) {
    if (dim <= 0) throw DimensionError("OperatorSubspace: nonpositive dimension");
    const Eigen::Index n = static_cast<Eigen::Index>(dim) * dim;
    if (generators.empty())
        return OperatorSubspace(dim, ComplexMatrix(n, 0), ComplexMatrix::Identity(n, n));
    ComplexMatrix g(n, static_cast<Eigen::Index>(generators.size()));
    for (std::size_t i = 0; i < generators.size(); ++i) {
        if (generators[i].rows() != dim || generators[i].cols() != dim)
            throw DimensionError("OperatorSubspace: generator dimension mismatch");
        g.col(static_cast<Eigen::Index>(i)) = vectorize(generators[i]);
    }
    ComplexMatrix u;
    RealVector sigma;
    full_svd(g, u, sigma);
    const double cutoff = relative_rank_tol * (sigma.size() > 0 ? sigma(0) : 0.0);
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sigma.size(); ++i)
        if (sigma(i) > cutoff) ++rank;
    return OperatorSubspace(dim, u.leftCols(rank), u.rightCols(n - rank));
}

ComplexMatrix OperatorSubspace::basis_operator(int k) const {
    return devectorize(basis_.col(k), dim_);
}

ComplexMatrix OperatorSubspace::project(const ComplexMatrix& x) const {
    if (x.rows() != dim_ || x.cols() != dim_)
        throw DimensionError("OperatorSubspace::project: dimension mismatch");
    if (basis_.cols() == 0) return ComplexMatrix::Zero(dim_, dim_);
    const Ket v = vectorize(x);
    return devectorize(basis_ * (basis_.adjoint() * v), dim_);
}

double OperatorSubspace::membership_residual(const ComplexMatrix& x) const {
    return (x - project(x)).norm();
}

OperatorSubspace build_span(const PovmPair& pair, double relative_rank_tol) {
    check_pair(pair);
    std::vector<ComplexMatrix> dyads;
    dyads.reserve(pair.effect_count());
    for (int i = 0; i < pair.effect_count(); ++i)
        dyads.push_back(pair.first.vectors[i] * pair.second.vectors[i].adjoint());
    return OperatorSubspace::from_generators(pair.dim(), dyads, relative_rank_tol);
}

RealMatrix hermitian_part_basis(const ComplexMatrix& columns, int dim,
                                double relative_rank_tol) {
    const Eigen::Index n = static_cast<Eigen::Index>(dim) * dim;
    const Eigen::Index r = columns.cols();
    if (columns.rows() != n)
        throw DimensionError("hermitian_part_basis: columns are not vectorized d x d operators");
    if (r == 0) return RealMatrix(2 * n, 0);

    // Hermiticity of sum_k (x_k + i y_k) B_k as a real-linear constraint on
    // the coefficients (x, y).
    RealMatrix constraint(2 * n, 2 * r);
    std::vector<ComplexMatrix> ops;
    ops.reserve(r);
    for (Eigen::Index k = 0; k < r; ++k) {
        const ComplexMatrix b = devectorize(columns.col(k), dim);
        constraint.col(k) = vec_real(b - b.adjoint());
        constraint.col(r + k) = vec_real(Complex(0, 1) * (b + b.adjoint()));
        ops.push_back(b);
    }

    // nullspace of K via the (small, well-conditioned) normal matrix K^T K;
    // eigenvector c with ||K c||^2 below the cutoff spans a Hermitian element.
    // The cutoff lives in lambda units with an eps floor, since the normal
    // matrix carries ~eps * lambda_max eigenvalue noise on true nulls.
    Eigen::SelfAdjointEigenSolver<RealMatrix> null_dec(
        RealMatrix(constraint.transpose() * constraint));
    const RealVector& lambda = null_dec.eigenvalues();  // ascending
    const double lambda_max = std::max(lambda(2 * r - 1), 0.0);
    const double cutoff =
        lambda_max * std::max(relative_rank_tol * relative_rank_tol, 1e-12);
    Eigen::Index null_count = 0;
    for (Eigen::Index i = 0; i < 2 * r; ++i)
        if (lambda(i) <= cutoff) ++null_count;
    if (null_count == 0) return RealMatrix(2 * n, 0);

    RealMatrix stacked(2 * n, null_count);
    for (Eigen::Index idx = 0; idx < null_count; ++idx) {
        const RealVector c = null_dec.eigenvectors().col(idx);
        ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
        for (Eigen::Index k = 0; k < r; ++k) h += Complex(c(k), c(r + k)) * ops[k];
        stacked.col(idx) = vec_real(hermitize(h));
    }

    // orthonormalize; drop anything that collapsed to zero
    Eigen::JacobiSVD<RealMatrix> ortho(stacked, Eigen::ComputeThinU);
    const RealVector& os = ortho.singularValues();
    const double ocut = std::max(1e-12, relative_rank_tol * (os.size() > 0 ? os(0) : 0.0));
    Eigen::Index keep = 0;
    for (Eigen::Index i = 0; i < os.size(); ++i)
        if (os(i) > ocut) ++keep;
    return ortho.matrixU().leftCols(keep);
}

IdentityInSpan identity_in_span(const OperatorSubspace& s, double tol) {
    const int d = s.dim();
    const ComplexMatrix id = ComplexMatrix::Identity(d, d);
    IdentityInSpan out;
    out.residual = (id - s.project(id)).norm() / std::sqrt(static_cast<double>(d));
    out.in_span = out.residual < tol;
    return out;
}

bool disjoint(const PovmPair& pair, double independence_tol) {
    check_pair(pair);
    for (int i = 0; i < pair.effect_count(); ++i) {
        const Ket& x = pair.first.vectors[i];
        const Ket& y = pair.second.vectors[i];
        const double xx = x.squaredNorm(), yy = y.squaredNorm();
        const double det = xx * yy - std::norm(x.dot(y));
        const double tr = xx + yy;
        const double min_eig = 0.5 * (tr - std::sqrt(std::max(tr * tr - 4.0 * det, 0.0)));
        if (min_eig <= independence_tol) return false;
    }
    return true;
}

PositiveSearchResult find_positive_in_span(const OperatorSubspace& s,
                                           const PositiveSearchOptions& options,
                                           std::uint64_t seed) {
    const int d = s.dim();
    const RealMatrix herm = hermitian_part_basis(s.basis(), d);
    PositiveSearchResult result;
    std::vector<ComplexMatrix> converged;
    for (int r = 0; r < options.restarts; ++r) {
        RngStream stream = RngStream::derive(seed, {static_cast<std::uint64_t>(r)});
        const ComplexMatrix start = random_density(d, stream);
        const PocsRun run = alternating_projections(herm, d, start, options.max_iter,
                                                    options.convergence_tol);
        if (s.membership_residual(run.state) < options.membership_tol)
            converged.push_back(run.state);
    }
    result.converged_restarts = static_cast<int>(converged.size());
    if (converged.empty()) return result;

    ComplexMatrix mean = ComplexMatrix::Zero(d, d);
    for (const ComplexMatrix& x : converged) mean += x;
    mean = hermitize(mean / static_cast<double>(converged.size()));

    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(mean);
    result.min_eigenvalue = es.eigenvalues().minCoeff();
    result.in_span_residual = s.membership_residual(mean);
    result.full_rank = result.min_eigenvalue > options.full_rank_tol;
    result.state = std::move(mean);
    return result;
}

namespace {

std::vector<Ket> product_vectors(const std::vector<Ket>& single, int n_uses) {
    std::vector<Ket> out = single;
    for (int level = 1; level < n_uses; ++level) {
        std::vector<Ket> next;
        next.reserve(out.size() * single.size());
        for (const Ket& head : out)
            for (const Ket& tail : single) next.push_back(tensor(head, tail));
        out = std::move(next);
    }
    return out;
}

double max_orthogonality_violation(const ComplexMatrix& rho, const std::vector<Ket>& xs,
                                   const std::vector<Ket>& ys) {
    double worst = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i)
        worst = std::max(worst, std::abs(xs[i].dot(rho * ys[i])));
    return worst;
}

}  // namespace

ParallelCheckResult parallel_check(const PovmPair& pair, int n_uses,
                                   const ParallelCheckOptions& options,
                                   std::uint64_t seed) {
    check_pair(pair);
    if (n_uses < 1) throw PreconditionError("parallel_check: need at least one use");
    const int d = pair.dim();
    const bool within_budget =
        (d <= 3 && n_uses <= 3) || (d <= 7 && n_uses <= 2) || n_uses == 1;
    if (!within_budget)
        throw BudgetExceededError("parallel_check: (d = " + std::to_string(d) +
                                  ", N = " + std::to_string(n_uses) +
                                  ") exceeds the memory budget");

    const std::vector<Ket> xs = product_vectors(pair.first.vectors, n_uses);
    const std::vector<Ket> ys = product_vectors(pair.second.vectors, n_uses);
    const int dn = static_cast<int>(xs.front().size());

    std::vector<ComplexMatrix> dyads;
    dyads.reserve(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) dyads.push_back(xs[i] * ys[i].adjoint());
    const OperatorSubspace span = OperatorSubspace::from_generators(dn, dyads);

    // A witness must be Hilbert-Schmidt orthogonal to every product dyad, so
    // the feasible set is (Hermitian part of the complement) x densities.
    const RealMatrix herm = hermitian_part_basis(span.complement(), dn);

    ParallelCheckResult result;
    result.n_uses = n_uses;
    result.best_residual = std::numeric_limits<double>::infinity();
    std::vector<ComplexMatrix> found;
    for (int r = 0; r < options.restarts; ++r) {
        RngStream stream = RngStream::derive(seed, {static_cast<std::uint64_t>(r)});
        const ComplexMatrix start = random_density(dn, stream);
        const PocsRun run = alternating_projections(herm, dn, start, options.max_iter,
                                                    options.convergence_tol);
        const double violation = max_orthogonality_violation(run.state, xs, ys);
        result.best_residual = std::min(result.best_residual, violation);
        if (violation < options.orthogonality_tol) found.push_back(run.state);
    }
    if (!found.empty()) {
        ComplexMatrix mean = ComplexMatrix::Zero(dn, dn);
        for (const ComplexMatrix& x : found) mean += x;
        mean = hermitize(mean / static_cast<double>(found.size()));
        result.best_residual = max_orthogonality_violation(mean, xs, ys);
        result.witness = std::move(mean);
    }
    return result;
}

std::string to_string(Category c) {
    switch (c) {
        case Category::NotPerfectlyDistinguishable: return "NotPerfectlyDistinguishable";
        case Category::AdaptiveOnly: return "AdaptiveOnly";
        case Category::FiniteDistinguishableParallelUndetermined:
            return "FiniteDistinguishable_ParallelUndetermined";
    }
    return "unknown";
}

Verdict classify(const PovmPair& pair, const ClassifyOptions& options) {
    check_pair(pair);
    const OperatorSubspace span = build_span(pair);
    const IdentityInSpan id = identity_in_span(span, options.identity_tol);
    const bool dj = disjoint(pair, options.independence_tol);

    Verdict verdict;
    verdict.identity_in_span = id.in_span;
    verdict.identity_residual = id.residual;
    verdict.disjoint = dj;

    const bool decided_negative = id.in_span || !dj;
    if (!(options.skip_positive_when_decided && decided_negative)) {
        const PositiveSearchResult pos =
            find_positive_in_span(span, options.search, derive_stream_id(options.seed, {1}));
        verdict.positive_in_span = pos.state.has_value() && pos.full_rank;
        if (verdict.positive_in_span) {
            verdict.witness_state = pos.state;
            verdict.witness_min_eigenvalue = pos.min_eigenvalue;
            verdict.witness_residual = pos.in_span_residual;
        }
    }

    if (decided_negative)
        verdict.category = Category::NotPerfectlyDistinguishable;
    else if (verdict.positive_in_span)
        verdict.category = Category::AdaptiveOnly;
    else
        verdict.category = Category::FiniteDistinguishableParallelUndetermined;

    for (int n : options.parallel_uses)
        verdict.parallel_certificates[n] = parallel_check(
            pair, n, options.parallel,
            derive_stream_id(options.seed, {2, static_cast<std::uint64_t>(n)}));
    return verdict;
}

}  // namespace povmdisc
