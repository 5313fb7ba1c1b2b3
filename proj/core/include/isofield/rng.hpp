#pragma once

#include <array>
#include <cstdint>

namespace isofield {

// Philox4x32-10 counter-based generator.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key);

std::uint64_t splitmix64(std::uint64_t x);
// Seed of substream `index` under `master`.
std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index);

// Standard normals by inverse CDF on Philox uniforms. The stream id occupies the third counter word.
class NormalStream {
public:
    explicit NormalStream(std::uint64_t seed, std::uint32_t stream = 0);

    double uniform();  // in (0, 1)
    double normal();

private:
    std::array<std::uint32_t, 2> key_;
    std::uint64_t counter_ = 0;
    std::uint32_t stream_ = 0;
    std::array<std::uint32_t, 4> buf_{};
    int used_ = 4;
};

}  // namespace isofield
