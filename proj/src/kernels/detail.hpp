#pragma once

#include <cstdint>

#include "vcontract/model.hpp"

namespace vcontract::kernels {

/// Sum of draw suprema over draws [block * kDrawBlock, min(draws, ...)).
double mc_block_sum(const ScalarTable& a, std::uint64_t draws, std::uint64_t seed,
                    std::uint64_t block);

}  // namespace vcontract::kernels
