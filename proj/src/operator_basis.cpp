#include "condqubit/operator_basis.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "condqubit/error.hpp"

namespace condqubit {

const char* to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::InvalidDimension: return "invalid-dimension";
    case ErrorCode::Shape: return "shape";
    case ErrorCode::Validation: return "validation";
    case ErrorCode::PositivityViolation: return "positivity-violation";
    case ErrorCode::ZeroProbability: return "zero-probability";
    case ErrorCode::InvalidMeasurement: return "invalid-measurement";
    case ErrorCode::UnsupportedFamily: return "unsupported-family";
    case ErrorCode::Degenerate: return "degenerate";
    case ErrorCode::NoTangency: return "no-tangency";
    case ErrorCode::Io: return "io";
    }
    return "unknown";
}

RMatrix HermitianBasis::gram() const
{
    const auto n = ops_.size();
    RMatrix g(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            g(i, j) = (ops_[i] * ops_[j]).trace().real();
        }
    }
    return g;
}

HermitianBasis build_basis(int d)
{
    if (d < 2) {
        throw Error(ErrorCode::InvalidDimension,
                    "basis dimension must be >= 2, got " + std::to_string(d));
    }
    const double scale = std::sqrt(d / 2.0);
    std::vector<CMatrix> ops;
    ops.reserve(static_cast<std::size_t>(d * d - 1));

    for (int j = 0; j < d; ++j) {
        for (int k = j + 1; k < d; ++k) {
            CMatrix m = CMatrix::Zero(d, d);
            m(j, k) = scale;
            m(k, j) = scale;
            ops.push_back(std::move(m));
        }
    }
    for (int j = 0; j < d; ++j) {
        for (int k = j + 1; k < d; ++k) {
            CMatrix m = CMatrix::Zero(d, d);
            m(j, k) = Complex(0.0, -scale);
            m(k, j) = Complex(0.0, scale);
            ops.push_back(std::move(m));
        }
    }
    for (int l = 1; l < d; ++l) {
        const double f = scale * std::sqrt(2.0 / (l * (l + 1.0)));
        CMatrix m = CMatrix::Zero(d, d);
        for (int j = 0; j < l; ++j) {
            m(j, j) = f;
        }
        m(l, l) = -l * f;
        ops.push_back(std::move(m));
    }
    return HermitianBasis(d, std::move(ops));
}

const HermitianBasis& basis_for(int d)
{
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<HermitianBasis>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[d];
    if (!slot) {
        slot = std::make_unique<HermitianBasis>(build_basis(d));
    }
    return *slot;
}

namespace {

void check_square(const CMatrix& m, int d, const char* what)
{
    if (m.rows() != d || m.cols() != d) {
        throw Error(ErrorCode::Shape, std::string(what) + ": expected " + std::to_string(d) + "x"
                                          + std::to_string(d) + " matrix, got "
                                          + std::to_string(m.rows()) + "x"
                                          + std::to_string(m.cols()));
    }
}

} // namespace

RVector bloch_vector(const CMatrix& rho, const HermitianBasis& basis)
{
    check_square(rho, basis.dim(), "bloch_vector");
    RVector r(basis.size());
    for (std::size_t mu = 0; mu < basis.size(); ++mu) {
        // Tr[rho s] = sum_ij rho_ij s_ji
        r(mu) = (rho.transpose().cwiseProduct(basis[mu])).sum().real();
    }
    return r;
}

RVector ket_bloch_vector(const CVector& ket, const HermitianBasis& basis)
{
    if (ket.size() != basis.dim()) {
        throw Error(ErrorCode::Shape, "ket_bloch_vector: ket length " + std::to_string(ket.size())
                                          + " does not match basis dimension "
                                          + std::to_string(basis.dim()));
    }
    RVector k(basis.size());
    for (std::size_t mu = 0; mu < basis.size(); ++mu) {
        k(mu) = ket.dot(basis[mu] * ket).real();
    }
    return k;
}

CMatrix state_from_bloch(const RVector& r, const HermitianBasis& basis)
{
    if (static_cast<std::size_t>(r.size()) != basis.size()) {
        throw Error(ErrorCode::Shape, "state_from_bloch: vector length does not match basis");
    }
    const int d = basis.dim();
    CMatrix rho = CMatrix::Identity(d, d);
    for (std::size_t mu = 0; mu < basis.size(); ++mu) {
        rho += r(mu) * basis[mu];
    }
    return rho / static_cast<double>(d);
}

} // namespace condqubit
