#include "poseaug/core/random.hpp"

#include <stdexcept>

namespace poseaug {

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi)
{
    if (hi < lo)
    {
        throw std::invalid_argument("uniform_int: empty range");
    }
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1u;
    if (span == 0u)
    {
        return static_cast<std::int64_t>(engine_());
    }
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % span);
    std::uint64_t draw = engine_();
    while (draw >= limit)
    {
        draw = engine_();
    }
    return lo + static_cast<std::int64_t>(draw % span);
}

std::uint64_t mix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t global_seed, std::string_view item_id)
{
    // FNV-1a over the id, then mixed with the global seed.
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : item_id)
    {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return mix64(mix64(global_seed) ^ h);
}

} // namespace poseaug
