#include "rumour/rng.hpp"

#include <stdexcept>
#include <string>

namespace rumour {
namespace {

constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept
{
    return (x << k) | (x >> (64 - k));
}

}  // namespace

Xoshiro256pp::Xoshiro256pp(std::uint64_t seed) noexcept
{
    SplitMix64 sm(seed);
    for (auto& word : s_)
        word = sm.next();
}

std::uint64_t Xoshiro256pp::next() noexcept
{
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double SlotStream::uniform(std::uint64_t slot)
{
    // Re-reading the most recent slot is allowed (a vertex's variate may be
    // needed twice); anything older is gone.
    if (has_last_ && slot == last_slot_)
        return last_value_;
    if (slot < position_)
        throw std::logic_error("SlotStream: slot " + std::to_string(slot) +
                               " already consumed (next is " + std::to_string(position_) + ")");
    while (position_ < slot) {
        gen_.next();
        ++position_;
    }
    last_value_ = to_unit_open(gen_.next());
    last_slot_ = slot;
    has_last_ = true;
    ++position_;
    return last_value_;
}

}  // namespace rumour
