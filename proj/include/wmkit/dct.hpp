#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>

#include "wmkit/image.hpp"

namespace wmkit {

/// 8x8 real grid addressed as (row, col).
template <class Tag>
struct Grid8 {
    std::array<double, 64> values{};

    double operator()(std::size_t row, std::size_t col) const noexcept { return values[row * 8 + col]; }
    double& operator()(std::size_t row, std::size_t col) noexcept { return values[row * 8 + col]; }

    friend bool operator==(const Grid8&, const Grid8&) = default;
};

struct PixelTag {};
struct CoefTag {};

/// Spatial-domain samples of one block (no level shift).
using PixelBlock = Grid8<PixelTag>;
/// DCT coefficients F(j,k) of one block.
using CoefBlock = Grid8<CoefTag>;

namespace detail {

/// basis[j][m] = a(j) cos((2m+1) j pi / 16), a(0) = sqrt(1/8), a(j>0) = sqrt(2/8).
struct DctBasis {
    std::array<std::array<double, 8>, 8> c{};

    DctBasis() {
        for (int j = 0; j < 8; ++j) {
            const double a = j == 0 ? std::sqrt(1.0 / 8.0) : std::sqrt(2.0 / 8.0);
            for (int m = 0; m < 8; ++m) {
                c[j][m] = a * std::cos((2 * m + 1) * j * std::numbers::pi / 16.0);
            }
        }
    }
};

inline const DctBasis& dct_basis() {
    static const DctBasis basis;
    return basis;
}

} // namespace detail

/// Orthonormal 2-D DCT-II, computed separably as C f C^T.
inline CoefBlock dct2_8x8(const PixelBlock& f) {
    const auto& c = detail::dct_basis().c;
    std::array<double, 64> tmp{}; // rows transformed: tmp(m,k)
    for (int m = 0; m < 8; ++m) {
        for (int k = 0; k < 8; ++k) {
            double s = 0.0;
            for (int n = 0; n < 8; ++n) s += f(m, n) * c[k][n];
            tmp[m * 8 + k] = s;
        }
    }
    CoefBlock out;
    for (int j = 0; j < 8; ++j) {
        for (int k = 0; k < 8; ++k) {
            double s = 0.0;
            for (int m = 0; m < 8; ++m) s += c[j][m] * tmp[m * 8 + k];
            out(j, k) = s;
        }
    }
    return out;
}

/// Inverse of dct2_8x8: C^T F C.
inline PixelBlock idct2_8x8(const CoefBlock& coefs) {
    const auto& c = detail::dct_basis().c;
    std::array<double, 64> tmp{}; // tmp(j,n)
    for (int j = 0; j < 8; ++j) {
        for (int n = 0; n < 8; ++n) {
            double s = 0.0;
            for (int k = 0; k < 8; ++k) s += coefs(j, k) * c[k][n];
            tmp[j * 8 + n] = s;
        }
    }
    PixelBlock out;
    for (int m = 0; m < 8; ++m) {
        for (int n = 0; n < 8; ++n) {
            double s = 0.0;
            for (int j = 0; j < 8; ++j) s += c[j][m] * tmp[j * 8 + n];
            out(m, n) = s;
        }
    }
    return out;
}

/// Copies the 8x8 block at `origin` of a grayscale image.
inline PixelBlock read_block(const ImageBuffer& img, BlockOrigin origin) {
    PixelBlock b;
    for (std::size_t r = 0; r < 8; ++r) {
        for (std::size_t col = 0; col < 8; ++col) b(r, col) = img.at(origin.x + col, origin.y + r);
    }
    return b;
}

/// Rounds (half up), clamps and stores a block into a row-major grayscale raster.
inline void write_block(std::span<std::uint8_t> raster, std::size_t width, BlockOrigin origin,
                        const PixelBlock& b) {
    for (std::size_t r = 0; r < 8; ++r) {
        for (std::size_t col = 0; col < 8; ++col) {
            raster[(origin.y + r) * width + origin.x + col] = round_to_sample(b(r, col));
        }
    }
}

} // namespace wmkit
