#pragma once

#include <Eigen/Dense>
#include <complex>
#include <utility>
#include <vector>

#include "povmdisc/errors.hpp"
#include "povmdisc/tolerances.hpp"

namespace povmdisc {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using Ket = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

// Tensor index convention used throughout: the basis vector |a> (x) |b> of a
// composite space with factor dimensions (da, db) sits at index a + da*b,
// i.e. the first-factor index varies fastest. Under this convention
// |X>> = (X (x) 1) sum_i |ii> is exactly the column-stacking of X:
// |X>>[a + d*b] = X(a, b).

/// Vectorization |X>> of a square matrix; throws DimensionError otherwise.
Ket vectorize(const ComplexMatrix& x);

/// Inverse of vectorize for a d*d-element vector.
ComplexMatrix devectorize(const Ket& v, int d);

/// |first> (x) |second> under the index convention above.
Ket tensor(const Ket& first, const Ket& second);

/// (A on first factor) (x) (B on second factor).
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);

/// Trace over the second, k-dimensional factor of a (d*k)x(d*k) matrix.
/// Satisfies Tr(result) = Tr(M) and Tr_2(|A>><<B|) = A B^dag.
ComplexMatrix partial_trace_second(const ComplexMatrix& m, int d, int k);

/// (1/sqrt(d)) sum_i |ii>.
Ket maximally_entangled(int d);

struct Svd {
    ComplexMatrix u;       // orthonormal columns
    RealVector sigma;      // nonnegative, descending
    ComplexMatrix v;       // orthonormal columns; a = u * sigma * v^dag
};

Svd svd(const ComplexMatrix& a);

/// Euclidean projection of a real vector onto the probability simplex.
std::vector<double> simplex_projection(const std::vector<double>& values);

/// Frobenius-nearest density operator: symmetrize, then project the
/// eigenvalues onto the probability simplex and reconstruct.
ComplexMatrix nearest_density(const ComplexMatrix& y);

/// Isometry W with W * source = target for every (source, target) pair and
/// W^dag W = 1. Sources are orthonormalized in the order given; the
/// orthogonal complement of the source span is mapped onto the
/// lexicographically-first orthonormal completion of the target span, which
/// makes the result deterministic. Throws GramMismatchError when the two
/// Gram matrices differ by more than gram_tol.
ComplexMatrix complete_isometry(const std::vector<std::pair<Ket, Ket>>& pairs,
                                double gram_tol = global_tolerances().gram_tol);

}  // namespace povmdisc
