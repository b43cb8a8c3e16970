/*
 * Copyright (c) 2026 The bkcorners contributors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 */
#pragma once

#include <array>
#include <cstdint>

namespace bk {

// Philox4x32-10 counter-based generator. The 64-bit seed is the key, the stream index
// occupies the upper counter words, and the lower words count blocks.
class Philox4x32 {
public:
    using result_type = std::uint64_t;
    using Block = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    Philox4x32(std::uint64_t seed, std::uint64_t stream)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          stream_(stream)
    {
    }

    static Block encrypt(Block ctr, Key key)
    {
        for (int r = 0; r < 10; ++r) {
            if (r > 0) {
                key[0] += 0x9E3779B9u;
                key[1] += 0xBB67AE85u;
            }
            const std::uint64_t p0 = static_cast<std::uint64_t>(0xD2511F53u) * ctr[0];
            const std::uint64_t p1 = static_cast<std::uint64_t>(0xCD9E8D57u) * ctr[2];
            ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
        }
        return ctr;
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~static_cast<result_type>(0); }

    result_type operator()()
    {
        const std::uint64_t lo = next32();
        return (static_cast<std::uint64_t>(next32()) << 32) | lo;
    }

    // one 32-bit word; four per block, so cheaper than a full 64-bit draw
    std::uint32_t next32()
    {
        if (have_ == 0) refill();
        return buf_[4 - have_--];
    }

    // uniform double in [0,1)
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

private:
    void refill()
    {
        const Block ctr{static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                        static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
        buf_ = encrypt(ctr, key_);
        ++block_;
        have_ = 4;
    }

    Key key_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    Block buf_{};
    int have_ = 0;
};

}  // namespace bk
