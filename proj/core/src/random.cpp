#include "arlkit/random.hpp"

namespace arlkit {

Xoshiro256pp::Xoshiro256pp(std::uint64_t seed, std::uint64_t stream_id) noexcept {
    SplitMix64 mix(stream_id);
    SplitMix64 sm(seed ^ mix.next());
    for (auto& word : s_) word = sm.next();
    // All-zero is a fixed point of the generator.
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
}

}  // namespace arlkit
