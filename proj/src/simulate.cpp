#include "gwk/simulate.hpp"

#include "gwk/error.hpp"
#include "gwk/random.hpp"

namespace gwk {

std::uint64_t replicate_stream(std::uint64_t j) noexcept { return stream_id(0x73696d /* "sim" */, j); }

std::vector<double> simulate_with_factor(const CholFactor& cov_factor, std::uint64_t seed, std::uint64_t stream) {
    const auto eps = standard_normals(seed, stream, cov_factor.size());
    return cov_factor.lower_multiply(eps);
}

std::vector<std::vector<double>> simulate(const SimConfig& cfg) {
    if (cfg.replicates < 1) throw InvalidArgument("simulate: replicates must be >= 1");
    if (cfg.locs.size() == 0) throw InvalidArgument("simulate: empty location set");
    const auto factor = cholesky(assemble_dense(cfg.model, cfg.locs, false));
    std::vector<std::vector<double>> out;
    out.reserve(cfg.replicates);
    for (int j = 0; j < cfg.replicates; ++j)
        out.push_back(simulate_with_factor(factor, cfg.seed, replicate_stream(static_cast<std::uint64_t>(j))));
    return out;
}

}  // namespace gwk
