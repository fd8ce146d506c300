#pragma once

#include <cstdint>
#include <random>

#include "condqubit/types.hpp"

namespace condqubit {

using Rng = std::mt19937_64;

/// Independent generator for substream `stream` of master seed `seed`.
/// The pair is hashed through std::seed_seq, so streams are reproducible
/// no matter which worker ends up consuming them.
Rng make_stream(std::uint64_t seed, std::uint64_t stream);

/// Haar-random unit vector: normalized vector of i.i.d. complex standard normals.
CVector haar_ket(int d, Rng& rng);

/// Haar-random unitary from the QR decomposition of a complex Ginibre matrix
/// with the phases of R's diagonal folded back in.
CMatrix haar_unitary(int d, Rng& rng);

/// Random full-rank density matrix G G^dagger / Tr, with G complex Ginibre.
CMatrix random_density_matrix(int d, Rng& rng);

} // namespace condqubit
