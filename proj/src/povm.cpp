#include "povmdisc/povm.hpp"

#include <cmath>
#include <unordered_set>

namespace povmdisc {

ComplexMatrix RankOnePovm::effect_sum() const {
    ComplexMatrix sum = ComplexMatrix::Zero(dim, dim);
    for (const Ket& v : vectors) sum += v * v.adjoint();
    return sum;
}

ValidationReport validate(const RankOnePovm& p, double tol) {
    if (p.dim <= 0) throw DimensionError("validate: nonpositive dimension");
    for (const Ket& v : p.vectors)
        if (v.size() != p.dim)
            throw DimensionError("validate: effect vector dimension mismatch");
    ValidationReport report;
    report.max_deviation =
        (p.effect_sum() - ComplexMatrix::Identity(p.dim, p.dim)).cwiseAbs().maxCoeff();
    report.ok = report.max_deviation < tol;
    return report;
}

namespace {

Ket default_fiducial_d3() {
    Ket fid(3);
    fid << Complex(0.0, 0.0), Complex(M_SQRT1_2, 0.0), Complex(-M_SQRT1_2, 0.0);
    return fid;
}

}  // namespace

RankOnePovm build_sic(int d, const std::optional<Ket>& fiducial, double overlap_tol) {
    if (d < 2) throw DimensionError("build_sic: dimension must be at least 2");
    Ket fid;
    if (fiducial) {
        if (fiducial->size() != d)
            throw DimensionError("build_sic: fiducial dimension mismatch");
        const double norm = fiducial->norm();
        if (norm < 1e-12) throw PreconditionError("build_sic: zero fiducial");
        fid = *fiducial / norm;
    } else if (d == 3) {
        fid = default_fiducial_d3();
    } else {
        throw PreconditionError(
            "build_sic: no built-in fiducial for dimension " + std::to_string(d) +
            "; supply one explicitly");
    }

    // Weyl-Heisenberg orbit phi_{a*d+b} = X^a Z^b |fid>
    std::vector<Ket> phi;
    phi.reserve(static_cast<std::size_t>(d) * d);
    for (int a = 0; a < d; ++a) {
        for (int b = 0; b < d; ++b) {
            Ket v(d);
            for (int row = 0; row < d; ++row) {
                // (X^a Z^b)|k> = omega^{bk} |k+a>, so row r draws from k = r-a
                const int k = ((row - a) % d + d) % d;
                v(row) = std::polar(1.0, 2.0 * M_PI * b * k / d) * fid(k);
            }
            phi.push_back(std::move(v));
        }
    }

    const double want = 1.0 / (d + 1);
    double worst = 0.0;
    for (std::size_t i = 0; i < phi.size(); ++i)
        for (std::size_t j = i + 1; j < phi.size(); ++j)
            worst = std::max(worst, std::abs(std::norm(phi[i].dot(phi[j])) - want));
    if (worst > overlap_tol)
        throw NotSicError("build_sic: orbit is not equiangular, worst overlap deviation " +
                              std::to_string(worst),
                          worst);

    RankOnePovm povm;
    povm.dim = d;
    const double scale = 1.0 / std::sqrt(static_cast<double>(d));
    for (Ket& v : phi) povm.vectors.push_back(scale * v);
    const ValidationReport report = validate(povm);
    if (!report.ok)
        throw NotSicError("build_sic: effects do not sum to identity, deviation " +
                              std::to_string(report.max_deviation),
                          report.max_deviation);
    return povm;
}

RankOnePovm permute_effects(const RankOnePovm& p, const std::vector<int>& pi) {
    const int m = p.effect_count();
    if (static_cast<int>(pi.size()) != m)
        throw InvalidPermutationError("permute_effects: permutation length " +
                                      std::to_string(pi.size()) + " does not match " +
                                      std::to_string(m) + " effects");
    std::unordered_set<int> seen;
    for (int v : pi) {
        if (v < 1 || v > m || !seen.insert(v).second)
            throw InvalidPermutationError(
                "permute_effects: not a bijection on 1.." + std::to_string(m));
    }
    RankOnePovm out;
    out.dim = p.dim;
    out.vectors.reserve(m);
    for (int i = 0; i < m; ++i) out.vectors.push_back(p.vectors[pi[i] - 1]);
    return out;
}

ComplexMatrix sample_haar_isometry(int rows, int cols, RngStream& rng) {
    if (rows < cols)
        throw DimensionError("sample_haar_isometry: need rows >= cols, got " +
                             std::to_string(rows) + " < " + std::to_string(cols));
    const ComplexMatrix g = ginibre(rows, cols, rng);
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(rows, cols);
    for (int j = 0; j < cols; ++j) {
        const Complex rjj = qr.matrixQR()(j, j);
        const double mag = std::abs(rjj);
        q.col(j) *= (mag > 1e-300) ? rjj / mag : 1.0;
    }
    return q;
}

RankOnePovm povm_from_isometry(const ComplexMatrix& q) {
    RankOnePovm povm;
    povm.dim = static_cast<int>(q.cols());
    povm.vectors.reserve(q.rows());
    for (Eigen::Index i = 0; i < q.rows(); ++i)
        povm.vectors.push_back(q.row(i).conjugate().transpose());
    return povm;
}

RankOnePovm sample_random_povm(int d, int m, RngStream& rng) {
    if (m < d)
        throw DimensionError("sample_random_povm: need m >= d, got m = " + std::to_string(m) +
                             ", d = " + std::to_string(d));
    RankOnePovm povm = povm_from_isometry(sample_haar_isometry(m, d, rng));
    const ValidationReport report = validate(povm);
    if (!report.ok)
        throw Error("sample_random_povm: completeness failed, deviation " +
                    std::to_string(report.max_deviation));
    return povm;
}

void check_pair(const PovmPair& pair, double completeness_tol) {
    if (pair.first.dim != pair.second.dim)
        throw DimensionError("povm pair: dimensions differ (" + std::to_string(pair.first.dim) +
                             " vs " + std::to_string(pair.second.dim) + ")");
    if (pair.first.effect_count() != pair.second.effect_count())
        throw DimensionError("povm pair: effect counts differ (" +
                             std::to_string(pair.first.effect_count()) + " vs " +
                             std::to_string(pair.second.effect_count()) + ")");
    const ValidationReport a = validate(pair.first, completeness_tol);
    if (!a.ok)
        throw Error("povm pair: first POVM violates completeness, deviation " +
                    std::to_string(a.max_deviation));
    const ValidationReport b = validate(pair.second, completeness_tol);
    if (!b.ok)
        throw Error("povm pair: second POVM violates completeness, deviation " +
                    std::to_string(b.max_deviation));
}

PovmPair sic_pair(int d, const std::vector<int>& pi, const std::optional<Ket>& fiducial) {
    PovmPair pair;
    pair.first = build_sic(d, fiducial);
    pair.second = permute_effects(pair.first, pi);
    return pair;
}

}  // namespace povmdisc
