#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wmkit/dct.hpp"
#include "wmkit/error.hpp"
#include "wmkit/image.hpp"

namespace wmkit {

/// Zero-based (row, col) position inside an 8x8 coefficient block.
struct CoefPos {
    std::size_t row;
    std::size_t col;
    friend bool operator==(const CoefPos&, const CoefPos&) = default;
};

/// Mid-frequency band: the anti-diagonals 3 <= row + col <= 6.
inline bool in_midband(CoefPos p) noexcept {
    return p.row < 8 && p.col < 8 && p.row + p.col >= 3 && p.row + p.col <= 6;
}

inline std::vector<CoefPos> midband_mask() {
    std::vector<CoefPos> out;
    for (std::size_t r = 0; r < 8; ++r) {
        for (std::size_t c = 0; c < 8; ++c) {
            if (in_midband({r, c})) out.push_back({r, c});
        }
    }
    return out;
}

/// Coefficient pair compared in every block, plus the minimum separation
/// enforced between the two values at embed time.
struct MbecConfig {
    CoefPos first{4, 1};
    CoefPos second{3, 2};
    double strength = 10.0;

    /// (4,1)/(3,2): both quantization step 22.
    static MbecConfig pair_a(double strength = 10.0) { return {{4, 1}, {3, 2}, strength}; }
    /// (1,2)/(3,0): both quantization step 14.
    static MbecConfig pair_b(double strength = 10.0) { return {{1, 2}, {3, 0}, strength}; }

    void validate() const {
        if (!in_midband(first) || !in_midband(second)) {
            throw InvalidArgument("MBEC coefficient positions must lie in the mid band");
        }
        if (first == second) {
            throw InvalidArgument("MBEC coefficient positions must be distinct");
        }
        if (!(strength >= 0.0) || !std::isfinite(strength)) {
            throw InvalidArgument("MBEC strength must be a finite non-negative number");
        }
    }
};

/// Binary watermark, row-major, one byte (0 or 1) per bit.
class WatermarkImage {
public:
    WatermarkImage(std::size_t width, std::size_t height, std::vector<std::uint8_t> bits)
        : width_(width), height_(height), bits_(std::move(bits)) {
        if (width_ == 0 || height_ == 0) throw InvalidArgument("watermark dimensions must be positive");
        if (bits_.size() != width_ * height_) throw InvalidArgument("watermark bit count mismatch");
        for (auto b : bits_) {
            if (b > 1) throw InvalidArgument("watermark bits must be 0 or 1");
        }
    }

    /// Grayscale image thresholded at 128: sample >= 128 is bit 1.
    static WatermarkImage from_image(const ImageBuffer& img) {
        const ImageBuffer gray = to_grayscale(img);
        std::vector<std::uint8_t> bits;
        bits.reserve(gray.sample_count());
        for (auto s : gray.samples()) bits.push_back(s >= 128 ? 1 : 0);
        return WatermarkImage(gray.width(), gray.height(), std::move(bits));
    }

    /// Renders bit 1 as 255 and bit 0 as 0.
    ImageBuffer to_image() const {
        std::vector<std::uint8_t> px;
        px.reserve(bits_.size());
        for (auto b : bits_) px.push_back(b ? 255 : 0);
        return ImageBuffer(width_, height_, 1, std::move(px));
    }

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    std::size_t size() const noexcept { return bits_.size(); }
    std::span<const std::uint8_t> bits() const noexcept { return bits_; }
    std::uint8_t operator[](std::size_t i) const noexcept { return bits_[i]; }

    friend bool operator==(const WatermarkImage&, const WatermarkImage&) = default;

private:
    std::size_t width_;
    std::size_t height_;
    std::vector<std::uint8_t> bits_;
};

/// One watermark bit per full 8x8 block.
inline std::size_t wm_capacity(const ImageBuffer& img) { return block_grid(img).block_count(); }

/// Orders the configured pair so that bit 0 <=> c1 >= c2 and bit 1 <=> c1 < c2
/// (exchanging them when the relation fails), then pushes both values apart
/// symmetrically about their mean until |c1 - c2| >= strength.
inline void mbec_encode_block(CoefBlock& f, const MbecConfig& cfg, std::uint8_t bit) {
    double c1 = f(cfg.first.row, cfg.first.col);
    double c2 = f(cfg.second.row, cfg.second.col);
    const bool holds = bit == 0 ? c1 >= c2 : c1 < c2;
    if (!holds) std::swap(c1, c2);
    if (std::abs(c1 - c2) < cfg.strength) {
        const double mean = 0.5 * (c1 + c2);
        const double half = 0.5 * cfg.strength;
        c1 = bit == 0 ? mean + half : mean - half;
        c2 = bit == 0 ? mean - half : mean + half;
    }
    f(cfg.first.row, cfg.first.col) = c1;
    f(cfg.second.row, cfg.second.col) = c2;
}

inline std::uint8_t mbec_decode_block(const CoefBlock& f, const MbecConfig& cfg) noexcept {
    return f(cfg.first.row, cfg.first.col) >= f(cfg.second.row, cfg.second.col) ? 0 : 1;
}

namespace detail {

/// Pixel block as it will be stored: rounded half-up and clamped to [0, 255].
inline PixelBlock quantize_pixels(const PixelBlock& p) {
    PixelBlock q;
    for (std::size_t i = 0; i < 64; ++i) q.values[i] = round_to_sample(p.values[i]);
    return q;
}

/// Rounding to 8-bit samples can move a coefficient by a few units, enough
/// to undo a small gap. With a positive strength the gap is widened one unit
/// at a time until the stored block decodes to `bit`. Returns the pixels.
inline PixelBlock encode_stored_block(const CoefBlock& original, const MbecConfig& cfg, std::uint8_t bit) {
    constexpr int kMaxWidening = 256;
    MbecConfig attempt = cfg;
    PixelBlock stored;
    for (int extra = 0; extra <= kMaxWidening; ++extra) {
        CoefBlock f = original;
        mbec_encode_block(f, attempt, bit);
        stored = quantize_pixels(idct2_8x8(f));
        if (cfg.strength <= 0.0 || mbec_decode_block(dct2_8x8(stored), cfg) == bit) break;
        attempt.strength += 1.0;
    }
    return stored;
}

} // namespace detail

/// Embeds watermark bit b (row-major) into block b (row-major). Blocks past
/// the watermark length and the uncovered right/bottom margins keep their
/// original samples.
inline ImageBuffer mbec_embed(const ImageBuffer& host, const WatermarkImage& wm, const MbecConfig& cfg) {
    cfg.validate();
    const BlockGrid grid = block_grid(host);
    if (wm.size() > grid.block_count()) {
        throw CapacityError("watermark larger than capacity (" + std::to_string(wm.size()) + " bits > " +
                            std::to_string(grid.block_count()) + " blocks)");
    }
    const auto src = host.samples();
    std::vector<std::uint8_t> out(src.begin(), src.end());
    for (std::size_t b = 0; b < wm.size(); ++b) {
        const BlockOrigin o = grid.origin(b);
        write_block(out, host.width(), o, detail::encode_stored_block(dct2_8x8(read_block(host, o)), cfg, wm[b]));
    }
    return ImageBuffer(host.width(), host.height(), 1, std::move(out));
}

/// Blind extraction: bit = 0 iff F(first) >= F(second), per block.
inline WatermarkImage mbec_extract(const ImageBuffer& img, std::size_t w_width, std::size_t w_height,
                                   const MbecConfig& cfg) {
    cfg.validate();
    const BlockGrid grid = block_grid(img);
    if (w_width == 0 || w_height == 0) {
        throw InvalidArgument("watermark dimensions must be positive");
    }
    if (w_width * w_height > grid.block_count()) {
        throw CapacityError("requested watermark exceeds block count");
    }
    std::vector<std::uint8_t> bits;
    bits.reserve(w_width * w_height);
    for (std::size_t b = 0; b < w_width * w_height; ++b) {
        bits.push_back(mbec_decode_block(dct2_8x8(read_block(img, grid.origin(b))), cfg));
    }
    return WatermarkImage(w_width, w_height, std::move(bits));
}

} // namespace wmkit
