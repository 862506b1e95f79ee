#pragma once

#include <array>
#include <bit>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <span>

namespace rdcscreen {

// Error-free accumulator for nonnegative finite doubles.
//
// Every addend is deposited exactly into a fixed-point register spanning the
// whole double range, and value() rounds the exact total once (to nearest,
// ties to even). The result is therefore independent of the order in which
// terms are added, which is what makes the dependence statistics exactly
// invariant under sample permutations.
class ExactSum {
public:
    void add(double v) noexcept
    {
        assert(v >= 0.0 && std::isfinite(v));
        const auto bits = std::bit_cast<std::uint64_t>(v);
        const auto biased = static_cast<unsigned>(bits >> 52);
        std::uint64_t mant = bits & kFracMask;
        unsigned pos = 0;
        if (biased != 0) {
            mant |= kHiddenBit;
            pos = biased - 1;
        }
        if (mant == 0) {
            return;
        }
        const unsigned limb = pos / kDigitBits;
        const auto wide = static_cast<unsigned __int128>(mant) << (pos % kDigitBits);
        limbs_[limb] += static_cast<std::uint64_t>(wide) & kDigitMask;
        limbs_[limb + 1] += static_cast<std::uint64_t>(wide >> kDigitBits) & kDigitMask;
        limbs_[limb + 2] += static_cast<std::uint64_t>(wide >> (2 * kDigitBits));
        if (++pending_ == kCarryInterval) {
            propagate(limbs_);
            pending_ = 0;
        }
    }

    ExactSum& operator+=(double v) noexcept
    {
        add(v);
        return *this;
    }

    /// Correctly rounded total of everything added so far.
    [[nodiscard]] double value() const noexcept
    {
        Limbs l = limbs_;
        propagate(l);

        int top = kLimbCount - 1;
        while (top >= 0 && l[top] == 0) {
            --top;
        }
        if (top < 0) {
            return 0.0;
        }

        auto digit = [&l](int i) -> unsigned __int128 { return i >= 0 ? l[i] : 0; };
        const unsigned __int128 hi =
            (digit(top) << (2 * kDigitBits)) | (digit(top - 1) << kDigitBits) | digit(top - 2);
        bool sticky = false;
        for (int i = top - 3; i >= 0 && !sticky; --i) {
            sticky = l[i] != 0;
        }

        const int base = static_cast<int>(kDigitBits) * (top - 2) - 1074;
        const int width = bit_width(hi);
        if (width <= 53) {
            return std::ldexp(static_cast<double>(static_cast<std::uint64_t>(hi)), base);
        }
        const int shift = width - 53;
        auto mant = static_cast<std::uint64_t>(hi >> shift);
        const unsigned __int128 rem = hi & ((static_cast<unsigned __int128>(1) << shift) - 1);
        const unsigned __int128 half = static_cast<unsigned __int128>(1) << (shift - 1);
        if (rem > half || (rem == half && (sticky || (mant & 1U) != 0))) {
            ++mant;
        }
        return std::ldexp(static_cast<double>(mant), base + shift);
    }

private:
    static constexpr unsigned kDigitBits = 32;
    static constexpr std::uint64_t kDigitMask = (std::uint64_t{1} << kDigitBits) - 1;
    static constexpr std::uint64_t kFracMask = (std::uint64_t{1} << 52) - 1;
    static constexpr std::uint64_t kHiddenBit = std::uint64_t{1} << 52;
    static constexpr int kLimbCount = 68;
    // Each add puts < 2^32 into a limb; flush well before a 64-bit limb can wrap.
    static constexpr std::uint32_t kCarryInterval = std::uint32_t{1} << 30;

    using Limbs = std::array<std::uint64_t, kLimbCount>;

    static void propagate(Limbs& l) noexcept
    {
        for (int i = 0; i + 1 < kLimbCount; ++i) {
            l[i + 1] += l[i] >> kDigitBits;
            l[i] &= kDigitMask;
        }
    }

    static int bit_width(unsigned __int128 v) noexcept
    {
        const auto upper = static_cast<std::uint64_t>(v >> 64);
        if (upper != 0) {
            return 64 + static_cast<int>(std::bit_width(upper));
        }
        return static_cast<int>(std::bit_width(static_cast<std::uint64_t>(v)));
    }

    Limbs limbs_{};
    std::uint32_t pending_ = 0;
};

[[nodiscard]] inline double exact_sum(std::span<const double> values) noexcept
{
    ExactSum acc;
    for (double v : values) {
        acc.add(v);
    }
    return acc.value();
}

} // namespace rdcscreen
