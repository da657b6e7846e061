#pragma once

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wmkit/error.hpp"
#include "wmkit/image.hpp"
#include "wmkit/prng.hpp"

namespace wmkit {

/// Ordered sequence of message bits, one byte (0 or 1) per bit.
class BitPayload {
public:
    BitPayload() = default;

    explicit BitPayload(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
        for (auto b : bits_) {
            if (b > 1) throw InvalidArgument("payload bits must be 0 or 1");
        }
    }

    std::size_t size() const noexcept { return bits_.size(); }
    bool empty() const noexcept { return bits_.empty(); }
    std::span<const std::uint8_t> bits() const noexcept { return bits_; }
    std::uint8_t operator[](std::size_t i) const noexcept { return bits_[i]; }

    friend bool operator==(const BitPayload&, const BitPayload&) = default;

private:
    std::vector<std::uint8_t> bits_;
};

/// Seed of the keyed pixel order.
struct EmbedKey {
    std::uint64_t seed = 0;

    static EmbedKey from_passphrase(std::string_view passphrase) noexcept { return {fnv1a64(passphrase)}; }

    friend bool operator==(const EmbedKey&, const EmbedKey&) = default;
};

inline constexpr std::size_t kLengthHeaderBits = 32;
inline constexpr std::size_t kMaxMessageBytes = (std::size_t{1} << 29) - 1;

/// 32-bit big-endian byte count, then each byte MSB first.
inline BitPayload frame_message(std::string_view text) {
    if (text.size() > kMaxMessageBytes) {
        throw CapacityError("message too long to frame");
    }
    std::vector<std::uint8_t> bits;
    bits.reserve(kLengthHeaderBits + 8 * text.size());
    const auto count = static_cast<std::uint32_t>(text.size());
    for (int i = 31; i >= 0; --i) bits.push_back(static_cast<std::uint8_t>((count >> i) & 1u));
    for (const char c : text) {
        const auto byte = static_cast<unsigned char>(c);
        for (int i = 7; i >= 0; --i) bits.push_back(static_cast<std::uint8_t>((byte >> i) & 1u));
    }
    return BitPayload(std::move(bits));
}

/// Inverse of frame_message.
inline std::string unframe_message(const BitPayload& payload) {
    if (payload.size() < kLengthHeaderBits) {
        throw PayloadError("corrupt or absent payload");
    }
    std::uint64_t count = 0;
    for (std::size_t i = 0; i < kLengthHeaderBits; ++i) count = (count << 1) | payload[i];
    if (payload.size() != kLengthHeaderBits + 8 * count) {
        throw PayloadError("corrupt or absent payload");
    }
    std::string text(count, '\0');
    for (std::size_t c = 0; c < count; ++c) {
        unsigned byte = 0;
        for (std::size_t i = 0; i < 8; ++i) byte = (byte << 1) | payload[kLengthHeaderBits + 8 * c + i];
        text[c] = static_cast<char>(byte);
    }
    return text;
}

/// One bit per sample.
inline std::size_t lsb_capacity(const ImageBuffer& img) noexcept { return img.sample_count(); }

/// Lazily produces the sample indices used for embedding.
///
/// Without a key the order is row-major 0,1,2,... With a key it is a
/// forward Fisher-Yates shuffle of [0, n): step i swaps slot i with slot
/// i + r % (n - i), r drawn from SplitMix64(seed). A prefix of the sequence
/// therefore never depends on how many indices are eventually requested.
class PixelSequence {
public:
    PixelSequence(std::size_t sample_count, std::optional<EmbedKey> key)
        : n_(sample_count), rng_(key ? key->seed : 0), keyed_(key.has_value()) {
        if (keyed_) {
            perm_.resize(n_);
            std::iota(perm_.begin(), perm_.end(), std::size_t{0});
        }
    }

    std::size_t size() const noexcept { return n_; }
    std::size_t remaining() const noexcept { return n_ - pos_; }

    std::size_t next() {
        if (pos_ >= n_) {
            throw CapacityError("message exceeds capacity");
        }
        if (!keyed_) return pos_++;
        const std::size_t j = pos_ + static_cast<std::size_t>(rng_.next() % (n_ - pos_));
        std::swap(perm_[pos_], perm_[j]);
        return perm_[pos_++];
    }

private:
    std::size_t n_;
    std::size_t pos_ = 0;
    SplitMix64 rng_;
    bool keyed_;
    std::vector<std::size_t> perm_;
};

struct ImageDims {
    std::size_t width;
    std::size_t height;
    std::size_t channels;

    std::size_t sample_count() const noexcept { return width * height * channels; }
};

/// First `count` indices of the embedding order for an image of the given shape.
inline std::vector<std::size_t> pixel_order(std::optional<EmbedKey> key, ImageDims dims, std::size_t count) {
    if (count > dims.sample_count()) {
        throw CapacityError("message exceeds capacity");
    }
    PixelSequence seq(dims.sample_count(), key);
    std::vector<std::size_t> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(seq.next());
    return out;
}

/// Writes payload bit i into the LSB of the i-th sample of the pixel order.
inline ImageBuffer lsb_embed(const ImageBuffer& cover, const BitPayload& payload,
                             std::optional<EmbedKey> key = std::nullopt) {
    if (payload.size() > lsb_capacity(cover)) {
        throw CapacityError("message exceeds capacity");
    }
    const auto src = cover.samples();
    std::vector<std::uint8_t> out(src.begin(), src.end());
    PixelSequence seq(out.size(), key);
    for (std::size_t i = 0; i < payload.size(); ++i) {
        std::uint8_t& s = out[seq.next()];
        s = static_cast<std::uint8_t>((s & 0xFEu) | payload[i]);
    }
    return ImageBuffer(cover.width(), cover.height(), cover.channels(), std::move(out));
}

/// Reads the length header along the pixel order, then the message bytes.
inline std::string lsb_extract(const ImageBuffer& stego, std::optional<EmbedKey> key = std::nullopt) {
    const auto px = stego.samples();
    if (px.size() < kLengthHeaderBits) {
        throw PayloadError("corrupt or absent payload");
    }
    PixelSequence seq(px.size(), key);
    std::uint64_t count = 0;
    for (std::size_t i = 0; i < kLengthHeaderBits; ++i) count = (count << 1) | (px[seq.next()] & 1u);
    if (count * 8 > seq.remaining()) {
        throw PayloadError("corrupt or absent payload");
    }
    std::string text(count, '\0');
    for (std::size_t c = 0; c < count; ++c) {
        unsigned byte = 0;
        for (int i = 0; i < 8; ++i) byte = (byte << 1) | (px[seq.next()] & 1u);
        text[c] = static_cast<char>(byte);
    }
    return text;
}

} // namespace wmkit
