#include "povmdisc/rng.hpp"

#include <cmath>

#include "povmdisc/errors.hpp"

namespace povmdisc {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

// splitmix64 finalizer
std::uint64_t mix_bits(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace

std::uint64_t derive_stream_id(std::uint64_t seed,
                               std::initializer_list<std::uint64_t> path) {
    std::uint64_t h = mix_bits(seed + kGolden);
    for (std::uint64_t w : path) h = mix_bits(h ^ (w + kGolden + (h << 6) + (h >> 2)));
    return h;
}

double RngStream::gaussian() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    if (u1 < 0x1.0p-100) u1 = 0x1.0p-100;
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

Eigen::MatrixXcd ginibre(int rows, int cols, RngStream& rng) {
    Eigen::MatrixXcd g(rows, cols);
    for (int c = 0; c < cols; ++c)
        for (int r = 0; r < rows; ++r) g(r, c) = rng.gaussian_complex();
    return g;
}

Eigen::MatrixXcd haar_unitary(int dim, RngStream& rng) {
    const Eigen::MatrixXcd g = ginibre(dim, dim, rng);
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    Eigen::MatrixXcd q = qr.householderQ();
    const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < dim; ++j) {
        const std::complex<double> rjj = r(j, j);
        const double mag = std::abs(rjj);
        q.col(j) *= (mag > 1e-300) ? rjj / mag : 1.0;
    }
    return q;
}

Eigen::MatrixXcd random_density(int dim, RngStream& rng) {
    const Eigen::MatrixXcd g = ginibre(dim, dim, rng);
    Eigen::MatrixXcd rho = g * g.adjoint();
    return rho / rho.trace().real();
}

}  // namespace povmdisc
