#pragma once

#include <cstddef>
#include <vector>

#include "condqubit/types.hpp"

namespace condqubit {

/// Orthogonal traceless Hermitian operator basis for a d-level system,
/// normalized so that Tr[s_mu s_nu] = d * delta_mu_nu.
///
/// Ordering is the generalized Gell-Mann order: symmetric pairs (j<k),
/// antisymmetric pairs (j<k), then the d-1 diagonal operators. For d = 2
/// this gives the Pauli matrices in x, y, z order.
class HermitianBasis {
public:
    int dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return ops_.size(); }
    const CMatrix& operator[](std::size_t i) const { return ops_[i]; }
    const std::vector<CMatrix>& ops() const noexcept { return ops_; }

    /// Gram matrix G_mu_nu = Tr[s_mu s_nu].
    RMatrix gram() const;

private:
    friend HermitianBasis build_basis(int d);
    HermitianBasis(int d, std::vector<CMatrix> ops) : dim_(d), ops_(std::move(ops)) {}

    int dim_;
    std::vector<CMatrix> ops_;
};

/// Throws Error{InvalidDimension} for d < 2.
HermitianBasis build_basis(int d);

/// Cached basis for dimension d (built once per dimension, thread-safe).
const HermitianBasis& basis_for(int d);

/// r_mu = Tr[rho s_mu].
RVector bloch_vector(const CMatrix& rho, const HermitianBasis& basis);

/// k_mu = <ket| s_mu |ket>; for a unit ket |k|^2 = d - 1.
RVector ket_bloch_vector(const CVector& ket, const HermitianBasis& basis);

/// rho = (1 + r.s) / d.
CMatrix state_from_bloch(const RVector& r, const HermitianBasis& basis);

} // namespace condqubit
