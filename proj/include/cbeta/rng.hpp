#pragma once

#include <array>
#include <cstdint>

namespace cbeta {

//! Philox4x32-10 counter-based bijection (Salmon et al., Random123).
//!
//! Maps a 128-bit counter under a 64-bit key to 128 pseudo-random bits.
//! Stateless: the same (counter, key) always gives the same block.
class Philox4x32
{
  public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter apply(Counter ctr, Key key) noexcept;
};

//! Reproducible random stream identified by (seed, stream_id).
//!
//! The Philox key is the master seed and the upper half of the counter is the
//! stream id, so every trajectory owns an independent, order-independent
//! sequence. Satisfies std::uniform_random_bit_generator.
class RandomStream
{
  public:
    using result_type = std::uint64_t;

    RandomStream(std::uint64_t seed, std::uint64_t stream_id) noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return ~result_type{0}; }

    result_type operator()() noexcept;

    //! Uniform double on the open interval (0, 1) with 53 random bits.
    double uniform() noexcept;

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream_id() const noexcept { return stream_id_; }

  private:
    void refill() noexcept;

    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buffer_{};
    unsigned next_ = 4;
};

}  // namespace cbeta
