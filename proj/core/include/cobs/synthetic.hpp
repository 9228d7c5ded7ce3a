#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "cobs/dataset.hpp"

namespace cobs::synthetic {

/// Isotropic Gaussian blobs around the given centres (one row per centre).
Dataset blobs(const Matrix& centers, std::size_t per_blob, double stddev, std::uint64_t seed);

/// `k` blobs centred on the corners of the unit simplex in R^k.
Dataset simplex_blobs(int k, std::size_t per_blob, double stddev, std::uint64_t seed);

/// Two interleaving half circles with Gaussian jitter.
Dataset two_moons(std::size_t per_moon, double noise, std::uint64_t seed);

/// Two concentric rings (radii 1 and `inner_ratio`) with Gaussian jitter.
Dataset two_rings(std::size_t per_ring, double inner_ratio, double noise, std::uint64_t seed);

}  // namespace cobs::synthetic
