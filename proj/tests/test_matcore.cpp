#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "povmdisc/matcore.hpp"
#include "povmdisc/rng.hpp"
#include "test_helpers.hpp"

using namespace povmdisc;
using namespace povmdisc::testing;

namespace {

// brute-force partial trace over the second factor, independent of the
// implementation under test
ComplexMatrix partial_trace_oracle(const ComplexMatrix& m, int d, int k) {
    ComplexMatrix out = ComplexMatrix::Zero(d, d);
    for (int a = 0; a < d; ++a)
        for (int ap = 0; ap < d; ++ap)
            for (int b = 0; b < k; ++b) out(a, ap) += m(a + d * b, ap + d * b);
    return out;
}

double frobenius_oracle(const ComplexMatrix& x) {
    double sum = 0.0;
    for (Eigen::Index r = 0; r < x.rows(); ++r)
        for (Eigen::Index c = 0; c < x.cols(); ++c) sum += std::norm(x(r, c));
    return sum;
}

}  // namespace

TEST_CASE("vectorize: identity and basis dyad") {
    const Ket vid = vectorize(ComplexMatrix::Identity(2, 2));
    CHECK(vid(0) == Complex(1, 0));
    CHECK(vid(1) == Complex(0, 0));
    CHECK(vid(2) == Complex(0, 0));
    CHECK(vid(3) == Complex(1, 0));

    // X = |0><1| lands at the (a=1 slot of the second factor)
    ComplexMatrix x = ComplexMatrix::Zero(2, 2);
    x(0, 1) = 1.0;
    const Ket vx = vectorize(x);
    CHECK(vx(0) == Complex(0, 0));
    CHECK(vx(1) == Complex(0, 0));
    CHECK(vx(2) == Complex(1, 0));
    CHECK(vx(3) == Complex(0, 0));
}

TEST_CASE("vectorize: linear and norm-preserving") {
    RngStream rng(11);
    for (int t = 0; t < 20; ++t) {
        const ComplexMatrix a = random_matrix(3, 3, rng);
        const ComplexMatrix b = random_matrix(3, 3, rng);
        const Complex c1 = rng.gaussian_complex(), c2 = rng.gaussian_complex();
        CHECK((vectorize(ComplexMatrix(c1 * a + c2 * b)) -
               (c1 * vectorize(a) + c2 * vectorize(b)))
                  .norm() == doctest::Approx(0.0).epsilon(1e-14));
        CHECK(vectorize(a).squaredNorm() ==
              doctest::Approx(frobenius_oracle(a)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(vectorize(ComplexMatrix::Zero(2, 3)), DimensionError);
    CHECK((devectorize(vectorize(ComplexMatrix::Identity(3, 3)), 3) -
           ComplexMatrix::Identity(3, 3))
              .norm() == 0.0);
}

TEST_CASE("tensor: first factor varies fastest") {
    Ket e0 = Ket::Zero(2), e1 = Ket::Zero(2);
    e0(0) = 1.0;
    e1(1) = 1.0;
    const Ket t = tensor(e0, e1);  // |0> (x) |1> -> index 0 + 2*1
    CHECK(t(2) == Complex(1, 0));
    CHECK(t.cwiseAbs().sum() == doctest::Approx(1.0));
}

TEST_CASE("partial_trace_second: product states, duality, entangled marginal") {
    RngStream rng(12);
    const ComplexMatrix rho = random_density(3, rng);
    const ComplexMatrix sigma = random_density(4, rng);
    CHECK((partial_trace_second(tensor(rho, sigma), 3, 4) - rho).norm() ==
          doctest::Approx(0.0).epsilon(1e-12));

    for (int d : {2, 3})
        for (int t = 0; t < 20; ++t) {
            const ComplexMatrix a = random_matrix(d, d, rng);
            const ComplexMatrix b = random_matrix(d, d, rng);
            const ComplexMatrix outer = vectorize(a) * vectorize(b).adjoint();
            const ComplexMatrix traced = partial_trace_second(outer, d, d);
            CHECK((traced - partial_trace_oracle(outer, d, d)).norm() ==
                  doctest::Approx(0.0).epsilon(1e-13));
            CHECK((traced - a * b.adjoint()).norm() == doctest::Approx(0.0).epsilon(1e-12));
            CHECK(std::abs(traced.trace() - outer.trace()) < 1e-12);
        }

    const Ket one = vectorize(ComplexMatrix::Identity(2, 2));
    CHECK((partial_trace_second(ComplexMatrix(one * one.adjoint()), 2, 2) -
           ComplexMatrix::Identity(2, 2))
              .norm() == 0.0);

    CHECK_THROWS_AS(partial_trace_second(ComplexMatrix::Identity(5, 5), 2, 2),
                    DimensionError);
}

TEST_CASE("svd: reconstruction, ordering, rank") {
    CHECK(svd(ComplexMatrix::Identity(3, 3)).sigma.isApprox(RealVector::Ones(3)));

    RngStream rng(13);
    for (int t = 0; t < 50; ++t) {
        const ComplexMatrix a = random_matrix(3, 3, rng);
        const Svd dec = svd(a);
        CHECK((a - dec.u * dec.sigma.asDiagonal() * dec.v.adjoint()).norm() < 1e-10);
        for (Eigen::Index i = 0; i < dec.sigma.size(); ++i) {
            CHECK(dec.sigma(i) >= 0.0);
            if (i > 0) CHECK(dec.sigma(i) <= dec.sigma(i - 1));
        }
        // numerical rank agrees with the Gram-eigenvalue count
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> gram(a.adjoint() * a);
        int rank_gram = 0;
        for (Eigen::Index i = 0; i < 3; ++i)
            if (gram.eigenvalues()(i) > 1e-20) ++rank_gram;
        int rank_svd = 0;
        for (Eigen::Index i = 0; i < 3; ++i)
            if (dec.sigma(i) > 1e-10) ++rank_svd;
        CHECK(rank_svd == rank_gram);
    }

    // rank-deficient input
    const ComplexMatrix tall = random_matrix(3, 2, rng);
    const ComplexMatrix wide = random_matrix(2, 3, rng);
    const Svd dec = svd(ComplexMatrix(tall * wide));
    CHECK(dec.sigma(2) < 1e-12);
    CHECK(dec.sigma(1) > 1e-6);
}

TEST_CASE("nearest_density: fixed points and simplex projection") {
    RngStream rng(14);
    const ComplexMatrix rho = random_density(3, rng);
    CHECK((nearest_density(rho) - rho).norm() < 1e-12);

    ComplexMatrix y = ComplexMatrix::Zero(2, 2);
    y(0, 0) = 2.0;
    const ComplexMatrix projected = nearest_density(y);
    CHECK(std::abs(projected(0, 0) - Complex(1, 0)) < 1e-12);
    CHECK(std::abs(projected(1, 1)) < 1e-12);
}

TEST_CASE("nearest_density: matches brute-force minimization on diagonal cases") {
    const std::vector<std::pair<double, double>> cases = {
        {2.0, 0.0}, {0.7, 0.1}, {-0.3, 0.5}, {3.0, 2.0}, {-1.0, -2.0}};
    for (const auto& [y1, y2] : cases) {
        ComplexMatrix y = ComplexMatrix::Zero(2, 2);
        y(0, 0) = y1;
        y(1, 1) = y2;
        const ComplexMatrix out = nearest_density(y);
        // grid search over diagonal densities diag(p, 1-p)
        double best_p = 0.0, best_cost = 1e300;
        for (int g = 0; g <= 100000; ++g) {
            const double p = g / 100000.0;
            const double cost = (p - y1) * (p - y1) + (1.0 - p - y2) * (1.0 - p - y2);
            if (cost < best_cost) {
                best_cost = cost;
                best_p = p;
            }
        }
        CHECK(std::abs(out(0, 0).real() - best_p) < 1e-4);
        CHECK(std::abs(out(0, 1)) < 1e-12);
        const double cost = std::pow(out(0, 0).real() - y1, 2) +
                            std::pow(out(1, 1).real() - y2, 2);
        CHECK(cost <= best_cost + 1e-9);
    }
}

TEST_CASE("nearest_density: always PSD with unit trace") {
    RngStream rng(15);
    for (int t = 0; t < 50; ++t) {
        const int d = 2 + static_cast<int>(rng.bits() % 4);
        const ComplexMatrix out = nearest_density(ComplexMatrix(3.0 * random_hermitian(d, rng)));
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(out);
        CHECK(es.eigenvalues().minCoeff() >= -1e-12);
        CHECK(std::abs(out.trace().real() - 1.0) < 1e-12);
        CHECK(std::abs(out.trace().imag()) < 1e-14);
    }
}

TEST_CASE("simplex_projection: clamps and renormalizes") {
    const std::vector<double> all_negative = simplex_projection({-1.0, -2.0});
    CHECK(all_negative[0] == doctest::Approx(1.0));
    CHECK(all_negative[1] == doctest::Approx(0.0));
    const std::vector<double> interior = simplex_projection({0.4, 0.4, 0.2});
    CHECK(interior[0] == doctest::Approx(0.4));
    CHECK(interior[2] == doctest::Approx(0.2));
}

TEST_CASE("complete_isometry: basis pair, mismatch, commensurate extension") {
    Ket e1 = Ket::Zero(2), f1 = Ket::Zero(2);
    e1(0) = 1.0;
    f1(1) = 1.0;
    const ComplexMatrix w = complete_isometry({{e1, f1}});
    CHECK(w.rows() == 2);
    CHECK(w.cols() == 2);
    CHECK((w.adjoint() * w - ComplexMatrix::Identity(2, 2)).norm() < 1e-12);
    CHECK((w * e1 - f1).norm() < 1e-12);

    // isometries preserve inner products: overlap 0.5 cannot map to 0.3
    Ket s1 = Ket::Zero(2), s2(2), t1 = Ket::Zero(2), t2(2);
    s1(0) = 1.0;
    s2 << Complex(0.5, 0), Complex(std::sqrt(0.75), 0);
    t1(0) = 1.0;
    t2 << Complex(0.3, 0), Complex(std::sqrt(0.91), 0);
    CHECK_THROWS_AS(complete_isometry({{s1, t1}, {s2, t2}}), GramMismatchError);

    RngStream rng(16);
    for (int t = 0; t < 20; ++t) {
        std::vector<std::pair<Ket, Ket>> pairs;
        const ComplexMatrix embed = sample_haar_isometry(9, 3, rng);
        for (int i = 0; i < 3; ++i) {
            const Ket s = random_matrix(3, 1, rng);
            pairs.push_back({s, embed * s});
        }
        const ComplexMatrix iso = complete_isometry(pairs);
        CHECK((iso.adjoint() * iso - ComplexMatrix::Identity(3, 3)).norm() < 1e-10);
        for (const auto& [s, tgt] : pairs) CHECK((iso * s - tgt).norm() < 1e-8);
        // deterministic completion
        const ComplexMatrix again = complete_isometry(pairs);
        CHECK((iso - again).norm() == 0.0);
    }

    CHECK_THROWS_AS(complete_isometry({{Ket::Zero(3), Ket::Zero(2)}}), DimensionError);
}

TEST_CASE("maximally_entangled: normalized vectorized identity") {
    const Ket psi = maximally_entangled(2);
    CHECK(psi.norm() == doctest::Approx(1.0));
    CHECK(psi(0).real() == doctest::Approx(M_SQRT1_2));
    CHECK(psi(3).real() == doctest::Approx(M_SQRT1_2));
}
