#include "condqubit/random.hpp"

#include <array>
#include <cmath>

namespace condqubit {

Rng make_stream(std::uint64_t seed, std::uint64_t stream)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream),
                      static_cast<std::uint32_t>(stream >> 32), 0x636f6e64u};
    return Rng(seq);
}

namespace {

CMatrix ginibre(int rows, int cols, Rng& rng)
{
    std::normal_distribution<double> normal;
    CMatrix g(rows, cols);
    for (int j = 0; j < cols; ++j) {
        for (int i = 0; i < rows; ++i) {
            const double re = normal(rng);
            const double im = normal(rng);
            g(i, j) = Complex(re, im);
        }
    }
    return g;
}

} // namespace

CVector haar_ket(int d, Rng& rng)
{
    CVector v = ginibre(d, 1, rng).col(0);
    return v / v.norm();
}

CMatrix haar_unitary(int d, Rng& rng)
{
    const CMatrix g = ginibre(d, d, rng);
    Eigen::HouseholderQR<CMatrix> qr(g);
    CMatrix q = qr.householderQ() * CMatrix::Identity(d, d);
    const CMatrix& r = qr.matrixQR();
    for (int j = 0; j < d; ++j) {
        const double mag = std::abs(r(j, j));
        if (mag > 0.0) {
            q.col(j) *= r(j, j) / mag;
        }
    }
    return q;
}

CMatrix random_density_matrix(int d, Rng& rng)
{
    const CMatrix g = ginibre(d, d, rng);
    CMatrix rho = g * g.adjoint();
    return rho / rho.trace().real();
}

} // namespace condqubit
