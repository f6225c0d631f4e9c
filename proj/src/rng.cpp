#include "wban/rng.hpp"

namespace wban {

Rng::Rng(std::uint64_t master_seed, Stream stream)
{
    std::seed_seq seq{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
                      static_cast<std::uint32_t>(stream), 0x5eedu};
    engine_.seed(seq);
}

}  // namespace wban
