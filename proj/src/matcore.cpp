#include "povmdisc/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace povmdisc {

Tolerances& global_tolerances() {
    static Tolerances instance;
    return instance;
}

Ket vectorize(const ComplexMatrix& x) {
    if (x.rows() != x.cols())
        throw DimensionError("vectorize: matrix must be square, got " +
                             std::to_string(x.rows()) + "x" + std::to_string(x.cols()));
    // column-major storage makes |X>> a straight copy
    return Eigen::Map<const Ket>(x.data(), x.size());
}

ComplexMatrix devectorize(const Ket& v, int d) {
    if (v.size() != static_cast<Eigen::Index>(d) * d)
        throw DimensionError("devectorize: vector length " + std::to_string(v.size()) +
                             " is not " + std::to_string(d) + "^2");
    return Eigen::Map<const ComplexMatrix>(v.data(), d, d);
}

Ket tensor(const Ket& first, const Ket& second) {
    const auto da = first.size(), db = second.size();
    Ket out(da * db);
    for (Eigen::Index b = 0; b < db; ++b)
        out.segment(b * da, da) = second(b) * first;
    return out;
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index bc = 0; bc < b.cols(); ++bc)
        for (Eigen::Index br = 0; br < b.rows(); ++br)
            out.block(br * a.rows(), bc * a.cols(), a.rows(), a.cols()) = b(br, bc) * a;
    return out;
}

ComplexMatrix partial_trace_second(const ComplexMatrix& m, int d, int k) {
    if (m.rows() != m.cols() || m.rows() != static_cast<Eigen::Index>(d) * k)
        throw DimensionError("partial_trace_second: matrix side " + std::to_string(m.rows()) +
                             " is not " + std::to_string(d) + "*" + std::to_string(k));
    ComplexMatrix out = ComplexMatrix::Zero(d, d);
    for (int b = 0; b < k; ++b)
        out += m.block(static_cast<Eigen::Index>(b) * d, static_cast<Eigen::Index>(b) * d, d, d);
    return out;
}

Ket maximally_entangled(int d) {
    return vectorize(ComplexMatrix::Identity(d, d)) / std::sqrt(static_cast<double>(d));
}

Svd svd(const ComplexMatrix& a) {
    if (!a.allFinite()) throw Error("svd: input has non-finite entries");
    // Jacobi throughout: the operators here are small, and BDCSVD's
    // deflation mishandles the degenerate spectra structured dyad sets
    // produce (observed on Eigen 3.4.0).
    Eigen::JacobiSVD<ComplexMatrix> dec(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Svd out;
    out.u = dec.matrixU();
    out.sigma = dec.singularValues();
    out.v = dec.matrixV();
    return out;
}

std::vector<double> simplex_projection(const std::vector<double>& values) {
    const std::size_t n = values.size();
    std::vector<double> sorted(values);
    std::sort(sorted.begin(), sorted.end(), std::greater<double>());
    double running = 0.0, threshold = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        running += sorted[j];
        const double candidate = (running - 1.0) / static_cast<double>(j + 1);
        if (sorted[j] - candidate > 0.0) threshold = candidate;
    }
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = std::max(values[i] - threshold, 0.0);
    return out;
}

ComplexMatrix nearest_density(const ComplexMatrix& y) {
    if (y.rows() != y.cols())
        throw DimensionError("nearest_density: matrix must be square");
    const ComplexMatrix herm = 0.5 * (y + y.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(herm);
    const RealVector& lambda = es.eigenvalues();
    std::vector<double> raw(lambda.data(), lambda.data() + lambda.size());
    const std::vector<double> proj = simplex_projection(raw);
    RealVector w = Eigen::Map<const RealVector>(proj.data(), lambda.size());
    return es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
}

namespace {

// Gram-Schmidt in the order given, two passes for numerical orthogonality.
// Inputs with negligible residual are dependent on their predecessors and
// produce no basis vector. Because the coefficients depend only on inner
// products, equal Gram matrices make source and target runs line up.
std::vector<Ket> gram_schmidt(const std::vector<Ket>& inputs, double drop_tol) {
    std::vector<Ket> basis;
    for (const Ket& s : inputs) {
        Ket v = s;
        for (int pass = 0; pass < 2; ++pass)
            for (const Ket& b : basis) v -= b.dot(v) * b;
        const double rnorm = v.norm();
        if (rnorm > drop_tol * std::max(1.0, s.norm())) basis.push_back(v / rnorm);
    }
    return basis;
}

// Orthonormal vectors extending `basis` to all of C^dim, built by
// orthogonalizing e_1, e_2, ... in order and keeping the survivors.
std::vector<Ket> lexicographic_completion(std::vector<Ket> basis, int dim, int needed) {
    std::vector<Ket> extra;
    for (int e = 0; e < dim && static_cast<int>(extra.size()) < needed; ++e) {
        Ket v = Ket::Zero(dim);
        v(e) = 1.0;
        for (const Ket& b : basis) v -= b.dot(v) * b;
        for (const Ket& b : basis) v -= b.dot(v) * b;
        const double rnorm = v.norm();
        if (rnorm > 1e-8) {
            v /= rnorm;
            basis.push_back(v);
            extra.push_back(v);
        }
    }
    if (static_cast<int>(extra.size()) < needed)
        throw Error("complete_isometry: failed to complete the target basis");
    return extra;
}

}  // namespace

ComplexMatrix complete_isometry(const std::vector<std::pair<Ket, Ket>>& pairs,
                                double gram_tol) {
    if (pairs.empty()) throw PreconditionError("complete_isometry: no pairs given");
    const int a = static_cast<int>(pairs.front().first.size());
    const int b = static_cast<int>(pairs.front().second.size());
    if (b < a)
        throw DimensionError("complete_isometry: target dimension " + std::to_string(b) +
                             " smaller than source dimension " + std::to_string(a));
    std::vector<Ket> sources, targets;
    for (const auto& [s, t] : pairs) {
        if (s.size() != a || t.size() != b)
            throw DimensionError("complete_isometry: inconsistent vector dimensions");
        sources.push_back(s);
        targets.push_back(t);
    }

    const std::size_t k = pairs.size();
    double gram_dev = 0.0;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            gram_dev = std::max(gram_dev,
                                std::abs(sources[i].dot(sources[j]) - targets[i].dot(targets[j])));
    if (gram_dev > gram_tol)
        throw GramMismatchError("complete_isometry: source/target Gram matrices differ by " +
                                    std::to_string(gram_dev),
                                gram_dev);

    const std::vector<Ket> src_basis = gram_schmidt(sources, 1e-12);
    const std::vector<Ket> tgt_basis = gram_schmidt(targets, 1e-12);
    if (src_basis.size() != tgt_basis.size())
        throw GramMismatchError("complete_isometry: source and target ranks differ", gram_dev);

    const int r = static_cast<int>(src_basis.size());
    ComplexMatrix w = ComplexMatrix::Zero(b, a);
    for (int j = 0; j < r; ++j) w += tgt_basis[j] * src_basis[j].adjoint();

    if (r < a) {
        const std::vector<Ket> src_extra = lexicographic_completion(src_basis, a, a - r);
        const std::vector<Ket> tgt_extra = lexicographic_completion(tgt_basis, b, a - r);
        for (int j = 0; j < a - r; ++j) w += tgt_extra[j] * src_extra[j].adjoint();
    }

    double map_resid = 0.0;
    for (std::size_t i = 0; i < k; ++i)
        map_resid = std::max(map_resid, (w * sources[i] - targets[i]).norm());
    if (map_resid > 1e-8)
        throw GramMismatchError(
            "complete_isometry: prescribed action inconsistent, residual " +
                std::to_string(map_resid),
            map_resid);
    return w;
}

}  // namespace povmdisc
