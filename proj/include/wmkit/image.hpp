#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wmkit/error.hpp"

namespace wmkit {

/// Row-major 8-bit image, 1 (gray) or 3 (interleaved RGB) channels.
///
/// The sample type makes the [0,255] invariant structural; the constructor
/// checks the remaining ones (positive dimensions, channel count, length).
class ImageBuffer {
public:
    ImageBuffer(std::size_t width, std::size_t height, std::size_t channels,
                std::vector<std::uint8_t> samples)
        : width_(width), height_(height), channels_(channels), samples_(std::move(samples)) {
        if (width_ == 0 || height_ == 0) {
            throw InvalidArgument("image dimensions must be positive");
        }
        if (channels_ != 1 && channels_ != 3) {
            throw InvalidArgument("image must have 1 or 3 channels");
        }
        if (samples_.size() != width_ * height_ * channels_) {
            throw InvalidArgument("sample count does not match width*height*channels");
        }
    }

    /// Constant-valued image.
    ImageBuffer(std::size_t width, std::size_t height, std::size_t channels, std::uint8_t fill)
        : ImageBuffer(width, height, channels,
                      std::vector<std::uint8_t>(width * height * channels, fill)) {}

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    std::size_t channels() const noexcept { return channels_; }
    std::size_t sample_count() const noexcept { return samples_.size(); }

    std::span<const std::uint8_t> samples() const noexcept { return samples_; }

    std::uint8_t at(std::size_t x, std::size_t y, std::size_t c = 0) const {
        return samples_[(y * width_ + x) * channels_ + c];
    }

    bool same_shape(const ImageBuffer& other) const noexcept {
        return width_ == other.width_ && height_ == other.height_ && channels_ == other.channels_;
    }

    friend bool operator==(const ImageBuffer&, const ImageBuffer&) = default;

private:
    std::size_t width_;
    std::size_t height_;
    std::size_t channels_;
    std::vector<std::uint8_t> samples_;
};

/// Round half up, then clamp into the 8-bit sample range.
inline std::uint8_t round_to_sample(double v) noexcept {
    const double r = std::floor(v + 0.5);
    if (!(r > 0.0)) return 0; // also maps NaN to 0
    if (r >= 255.0) return 255;
    return static_cast<std::uint8_t>(r);
}

// ---------------------------------------------------------------------------
// Netpbm I/O (binary P5 / P6, maxval 255)

namespace detail {

inline void skip_pnm_space(std::istream& in) {
    for (;;) {
        const int c = in.peek();
        if (c == '#') {
            std::string ignored;
            std::getline(in, ignored);
        } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f') {
            in.get();
        } else {
            return;
        }
    }
}

inline std::size_t read_pnm_number(std::istream& in, const char* what) {
    skip_pnm_space(in);
    std::size_t value = 0;
    bool any = false;
    while (in.peek() >= '0' && in.peek() <= '9') {
        value = value * 10 + static_cast<std::size_t>(in.get() - '0');
        any = true;
        if (value > (std::size_t{1} << 32)) {
            throw FormatError(std::string("malformed header: ") + what + " too large");
        }
    }
    if (!any) {
        throw FormatError(std::string("malformed header: missing ") + what);
    }
    return value;
}

} // namespace detail

/// Reads a binary PGM (P5) or PPM (P6) with maxval 255.
inline ImageBuffer load_image(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FormatError("cannot open '" + path.string() + "' for reading");
    }
    char magic[2] = {};
    in.read(magic, 2);
    if (!in || magic[0] != 'P' || (magic[1] != '5' && magic[1] != '6')) {
        throw FormatError("malformed header: '" + path.string() + "' is not a binary PGM/PPM");
    }
    const std::size_t channels = magic[1] == '5' ? 1 : 3;
    const std::size_t width = detail::read_pnm_number(in, "width");
    const std::size_t height = detail::read_pnm_number(in, "height");
    const std::size_t maxval = detail::read_pnm_number(in, "maxval");
    if (width == 0 || height == 0) {
        throw FormatError("malformed header: zero image dimension");
    }
    if (maxval != 255) {
        throw FormatError("unsupported maxval " + std::to_string(maxval) + " (only 255 is supported)");
    }
    // Exactly one whitespace byte separates the header from the raster.
    const int sep = in.get();
    if (sep != ' ' && sep != '\t' && sep != '\n' && sep != '\r') {
        throw FormatError("malformed header: missing separator before raster");
    }
    std::vector<std::uint8_t> samples(width * height * channels);
    in.read(reinterpret_cast<char*>(samples.data()), static_cast<std::streamsize>(samples.size()));
    if (static_cast<std::size_t>(in.gcount()) != samples.size()) {
        throw FormatError("truncated raster in '" + path.string() + "'");
    }
    return ImageBuffer(width, height, channels, std::move(samples));
}

/// Writes P5 for one channel, P6 for three. Header is "P5|P6\n<w> <h>\n255\n".
inline void save_image(const ImageBuffer& img, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw FormatError("cannot open '" + path.string() + "' for writing");
    }
    out << (img.channels() == 1 ? "P5" : "P6") << '\n'
        << img.width() << ' ' << img.height() << '\n'
        << "255\n";
    const auto s = img.samples();
    out.write(reinterpret_cast<const char*>(s.data()), static_cast<std::streamsize>(s.size()));
    if (!out) {
        throw FormatError("write failed for '" + path.string() + "'");
    }
}

/// BT.601 luma with round-half-up; gray input is returned as is.
inline ImageBuffer to_grayscale(const ImageBuffer& img) {
    if (img.channels() == 1) {
        return img;
    }
    const auto s = img.samples();
    std::vector<std::uint8_t> gray(img.width() * img.height());
    for (std::size_t i = 0; i < gray.size(); ++i) {
        // Integer weights in thousandths keep the rounding exact.
        const unsigned acc = 299u * s[3 * i] + 587u * s[3 * i + 1] + 114u * s[3 * i + 2];
        gray[i] = static_cast<std::uint8_t>((acc + 500u) / 1000u);
    }
    return ImageBuffer(img.width(), img.height(), 1, std::move(gray));
}

// ---------------------------------------------------------------------------
// 8x8 block decomposition

inline constexpr std::size_t kBlockSize = 8;

struct BlockOrigin {
    std::size_t x;
    std::size_t y;
    friend bool operator==(const BlockOrigin&, const BlockOrigin&) = default;
};

/// Non-overlapping 8x8 tiling of the top-left floor(w/8)*8 x floor(h/8)*8
/// region. Blocks are numbered row-major.
class BlockGrid {
public:
    BlockGrid(std::size_t blocks_x, std::size_t blocks_y) : blocks_x_(blocks_x), blocks_y_(blocks_y) {}

    std::size_t blocks_x() const noexcept { return blocks_x_; }
    std::size_t blocks_y() const noexcept { return blocks_y_; }
    std::size_t block_count() const noexcept { return blocks_x_ * blocks_y_; }

    BlockOrigin origin(std::size_t index) const noexcept {
        return {(index % blocks_x_) * kBlockSize, (index / blocks_x_) * kBlockSize};
    }

    std::vector<BlockOrigin> origins() const {
        std::vector<BlockOrigin> out;
        out.reserve(block_count());
        for (std::size_t i = 0; i < block_count(); ++i) out.push_back(origin(i));
        return out;
    }

private:
    std::size_t blocks_x_;
    std::size_t blocks_y_;
};

inline BlockGrid block_grid(const ImageBuffer& img) {
    if (img.channels() != 1) {
        throw InvalidArgument("block decomposition requires a grayscale image");
    }
    if (img.width() < kBlockSize || img.height() < kBlockSize) {
        throw InvalidArgument("image too small for block watermarking");
    }
    return BlockGrid(img.width() / kBlockSize, img.height() / kBlockSize);
}

} // namespace wmkit
