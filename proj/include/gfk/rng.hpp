#pragma once

#include <cstdint>

// "Superduper" congruential generator, S_i = 69069 S_{i-1} + 1 (mod 2^32).
// Signs are derived from the post-advance state: +1 above 2^31, -1 at or
// below it.  The generator is part of the reproducibility contract: every
// run is replayable bit-exactly from (master seed, replication index).

namespace gfk {

struct RngState {
    std::uint32_t state = 0;
};

inline RngState next_state(RngState s) {
    return {static_cast<std::uint32_t>(s.state * 69069u + 1u)};
}

// Advances the state once and maps it to a +/-1 step.
inline int bernoulli_step(RngState& s) {
    s = next_state(s);
    return s.state > 2147483648u ? +1 : -1;
}

// Per-replication starting state: master_seed + 0x9E3779B9 * (index + 1)
// mod 2^32.  The stride is odd, so distinct indices give distinct states;
// replication k gets the same substream no matter which worker runs it.
inline RngState substream(std::uint32_t master_seed, std::uint64_t replication_index) {
    std::uint32_t stride = 0x9E3779B9u;
    std::uint32_t k = static_cast<std::uint32_t>(replication_index + 1);
    return {static_cast<std::uint32_t>(master_seed + stride * k)};
}

// Uniform variate on [0,1) from one state advance; used only to place the
// starting walker, never for the +/-1 walk itself.
inline double uniform01(RngState& s) {
    s = next_state(s);
    return s.state / 4294967296.0;
}

} // namespace gfk
