#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "wmkit/dct.hpp"
#include "wmkit/error.hpp"
#include "wmkit/image.hpp"
#include "wmkit/prng.hpp"

namespace wmkit {

/// 8x8 table of positive quantization steps, row-major.
class QuantTable {
public:
    explicit QuantTable(const std::array<int, 64>& steps) : steps_(steps) {
        for (int s : steps_) {
            if (s < 1) throw InvalidArgument("quantization steps must be >= 1");
        }
    }

    int operator()(std::size_t row, std::size_t col) const noexcept { return steps_[row * 8 + col]; }
    const std::array<int, 64>& steps() const noexcept { return steps_; }

    /// Reference table used for pair selection and the quantization attack.
    /// It departs from the JPEG Annex K luminance table in row 1
    /// (48 and 16 where Annex K has 58 and 60).
    static const QuantTable& reference() {
        static const QuantTable table({
            16, 11, 10, 16, 24,  40,  51,  61,
            12, 12, 14, 19, 26,  48,  16,  55,
            14, 13, 16, 24, 40,  57,  69,  56,
            14, 17, 22, 29, 51,  87,  80,  62,
            18, 22, 37, 56, 68,  109, 108, 77,
            24, 35, 55, 64, 81,  104, 113, 92,
            49, 64, 78, 87, 103, 121, 120, 101,
            72, 92, 95, 98, 112, 100, 103, 99,
        });
        return table;
    }

private:
    std::array<int, 64> steps_;
};

/// JPEG-style coefficient quantization on every full 8x8 block:
/// F' = round(F / (scale*Q)) * (scale*Q), then IDCT, round half up, clamp.
/// Larger scale means coarser steps. Margins outside the block grid are kept.
inline ImageBuffer jpeg_quantize_attack(const ImageBuffer& img, double scale,
                                        const QuantTable& table = QuantTable::reference()) {
    if (!(scale > 0.0) || !std::isfinite(scale)) {
        throw InvalidArgument("quantization scale must be positive");
    }
    const BlockGrid grid = block_grid(img);
    const auto src = img.samples();
    std::vector<std::uint8_t> out(src.begin(), src.end());
    for (std::size_t b = 0; b < grid.block_count(); ++b) {
        const BlockOrigin o = grid.origin(b);
        CoefBlock f = dct2_8x8(read_block(img, o));
        for (std::size_t r = 0; r < 8; ++r) {
            for (std::size_t c = 0; c < 8; ++c) {
                const double step = scale * table(r, c);
                f(r, c) = std::round(f(r, c) / step) * step;
            }
        }
        write_block(out, img.width(), o, idct2_8x8(f));
    }
    return ImageBuffer(img.width(), img.height(), 1, std::move(out));
}

/// Adds N(0, sigma^2) noise to every sample, then rounds half up and clamps.
/// Draws come from SplitMix64(seed) in sample order, two per sample.
inline ImageBuffer gaussian_noise_attack(const ImageBuffer& img, double sigma, std::uint64_t seed) {
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
        throw InvalidArgument("noise sigma must be non-negative");
    }
    if (sigma == 0.0) {
        return img;
    }
    const auto src = img.samples();
    std::vector<std::uint8_t> out(src.begin(), src.end());
    SplitMix64 rng(seed);
    for (auto& s : out) s = round_to_sample(s + sigma * rng.next_gaussian());
    return ImageBuffer(img.width(), img.height(), img.channels(), std::move(out));
}

/// 3x3 median per channel with mirrored borders (edge sample not repeated).
/// Images narrower or shorter than 2 pixels clamp instead of mirroring.
inline ImageBuffer median_filter_3x3(const ImageBuffer& img) {
    const auto w = static_cast<std::ptrdiff_t>(img.width());
    const auto h = static_cast<std::ptrdiff_t>(img.height());
    const auto ch = static_cast<std::ptrdiff_t>(img.channels());
    auto mirror = [](std::ptrdiff_t i, std::ptrdiff_t n) {
        if (n == 1) return std::ptrdiff_t{0};
        if (i < 0) return -i;
        if (i >= n) return 2 * (n - 1) - i;
        return i;
    };
    const auto src = img.samples();
    std::vector<std::uint8_t> out(src.size());
    std::array<std::uint8_t, 9> window{};
    for (std::ptrdiff_t y = 0; y < h; ++y) {
        for (std::ptrdiff_t x = 0; x < w; ++x) {
            for (std::ptrdiff_t c = 0; c < ch; ++c) {
                std::size_t n = 0;
                for (std::ptrdiff_t dy = -1; dy <= 1; ++dy) {
                    for (std::ptrdiff_t dx = -1; dx <= 1; ++dx) {
                        window[n++] = src[static_cast<std::size_t>((mirror(y + dy, h) * w + mirror(x + dx, w)) * ch + c)];
                    }
                }
                std::nth_element(window.begin(), window.begin() + 4, window.end());
                out[static_cast<std::size_t>((y * w + x) * ch + c)] = window[4];
            }
        }
    }
    return ImageBuffer(img.width(), img.height(), img.channels(), std::move(out));
}

} // namespace wmkit
