#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace povmdisc {

// Counter-based stream derivation: a stream id is a stable 64-bit hash of a
// master seed and a path of indices, so sample k of a sweep always sees the
// same stream no matter which worker runs it or in what order.
std::uint64_t derive_stream_id(std::uint64_t seed,
                               std::initializer_list<std::uint64_t> path);

// Deterministic random stream. Gaussians come from an explicit Box-Muller
// transform on the raw engine output rather than std::normal_distribution,
// whose output sequence is implementation-defined.
class RngStream {
  public:
    explicit RngStream(std::uint64_t stream_id) : engine_(stream_id) {}

    static RngStream derive(std::uint64_t seed,
                            std::initializer_list<std::uint64_t> path) {
        return RngStream(derive_stream_id(seed, path));
    }

    std::uint64_t bits() { return engine_(); }

    // uniform on [0, 1) with 53-bit resolution
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double gaussian();

    // standard complex normal, E|z|^2 = 1
    std::complex<double> gaussian_complex() {
        const double re = gaussian();
        const double im = gaussian();
        return {re * M_SQRT1_2, im * M_SQRT1_2};
    }

  private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Complex Ginibre matrix, entries drawn in column-major order.
Eigen::MatrixXcd ginibre(int rows, int cols, RngStream& rng);

// Haar-distributed unitary via QR of a Ginibre matrix with the phases of
// diag(R) absorbed into Q.
Eigen::MatrixXcd haar_unitary(int dim, RngStream& rng);

// Random full-rank density operator G G^dag / Tr(G G^dag).
Eigen::MatrixXcd random_density(int dim, RngStream& rng);

}  // namespace povmdisc
