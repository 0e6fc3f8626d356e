#pragma once

#include <cstdint>
#include <vector>

#include "gwk/covariance.hpp"
#include "gwk/geometry.hpp"
#include "gwk/linalg.hpp"

namespace gwk {

struct SimConfig {
    CovarianceModel model;
    LocationSet locs;
    int replicates = 1;
    std::uint64_t seed = 0;
};

/// One realization z = L eps, eps drawn from substream `stream` of `seed`.
std::vector<double> simulate_with_factor(const CholFactor& cov_factor, std::uint64_t seed, std::uint64_t stream);

/// Replicate j uses substream stream_id("sim", j), so any replicate can be
/// regenerated on its own. Throws NotPositiveDefinite if the covariance matrix is not PD.
std::vector<std::vector<double>> simulate(const SimConfig& cfg);

/// Substream used by simulate() for replicate j.
std::uint64_t replicate_stream(std::uint64_t j) noexcept;

}  // namespace gwk
