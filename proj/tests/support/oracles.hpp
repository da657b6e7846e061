#pragma once

// Reference implementations used only by the tests. Each one follows the
// textbook definition literally and shares no code path with the library
// routine it checks.

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <vector>

namespace wmkit::oracle {

using Block = std::array<std::array<double, 8>, 8>;

inline double dct_weight(int j) { return j == 0 ? std::sqrt(1.0 / 8.0) : std::sqrt(2.0 / 8.0); }

/// F(j,k) = a(j)a(k) sum_m sum_n f(m,n) cos((2m+1)j pi/16) cos((2n+1)k pi/16)
inline Block dct_four_loop(const Block& f) {
    Block out{};
    for (int j = 0; j < 8; ++j) {
        for (int k = 0; k < 8; ++k) {
            double s = 0.0;
            for (int m = 0; m < 8; ++m) {
                for (int n = 0; n < 8; ++n) {
                    s += f[m][n] * std::cos((2 * m + 1) * j * std::numbers::pi / 16.0) *
                         std::cos((2 * n + 1) * k * std::numbers::pi / 16.0);
                }
            }
            out[j][k] = dct_weight(j) * dct_weight(k) * s;
        }
    }
    return out;
}

/// f(m,n) = sum_j sum_k a(j)a(k) F(j,k) cos((2m+1)j pi/16) cos((2n+1)k pi/16)
inline Block idct_four_loop(const Block& F) {
    Block out{};
    for (int m = 0; m < 8; ++m) {
        for (int n = 0; n < 8; ++n) {
            double s = 0.0;
            for (int j = 0; j < 8; ++j) {
                for (int k = 0; k < 8; ++k) {
                    s += dct_weight(j) * dct_weight(k) * F[j][k] *
                         std::cos((2 * m + 1) * j * std::numbers::pi / 16.0) *
                         std::cos((2 * n + 1) * k * std::numbers::pi / 16.0);
                }
            }
            out[m][n] = s;
        }
    }
    return out;
}

/// The bandwidth formula, evaluated as printed: b = log2((s pi + c)/(s pi - c)).
inline double bandwidth_formula(double sigma, double lambda) {
    const double c = std::sqrt(std::log(2.0) / 2.0);
    const double s = sigma / lambda;
    return std::log((s * std::numbers::pi + c) / (s * std::numbers::pi - c)) / std::log(2.0);
}

/// Raw (not mean-corrected) Gabor weight at integer offset (x, y); angles in degrees.
inline double gabor_raw(int x, int y, double lambda, double theta_deg, double phi_deg, double sigma, double gamma) {
    const double t = theta_deg * std::numbers::pi / 180.0;
    const double p = phi_deg * std::numbers::pi / 180.0;
    const double xr = x * std::cos(t) + y * std::sin(t);
    const double yr = -x * std::sin(t) + y * std::cos(t);
    return std::exp(-(xr * xr + gamma * gamma * yr * yr) / (2.0 * sigma * sigma)) *
           std::cos(2.0 * std::numbers::pi * xr / lambda + p);
}

/// Convolution through an explicitly mirror-padded copy of the image.
/// `kernel` is (2r+1)^2 row-major with kernel[(dy+r)*(2r+1) + dx+r] = k(dx,dy).
inline std::vector<double> convolve_padded(const std::vector<std::uint8_t>& img, int w, int h,
                                           const std::vector<double>& kernel, int r) {
    const int pw = w + 2 * r;
    const int ph = h + 2 * r;
    std::vector<double> padded(static_cast<std::size_t>(pw * ph));
    for (int py = 0; py < ph; ++py) {
        for (int px = 0; px < pw; ++px) {
            int sy = py - r;
            int sx = px - r;
            if (sy < 0) sy = -sy;
            if (sy > h - 1) sy = 2 * (h - 1) - sy;
            if (sx < 0) sx = -sx;
            if (sx > w - 1) sx = 2 * (w - 1) - sx;
            padded[static_cast<std::size_t>(py * pw + px)] = img[static_cast<std::size_t>(sy * w + sx)];
        }
    }
    const int side = 2 * r + 1;
    std::vector<double> out(static_cast<std::size_t>(w * h), 0.0);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double s = 0.0;
            // out(x,y) = sum_{u,v} img(x-u, y-v) k(u,v)
            for (int v = -r; v <= r; ++v) {
                for (int u = -r; u <= r; ++u) {
                    s += padded[static_cast<std::size_t>((y - v + r) * pw + (x - u + r))] *
                         kernel[static_cast<std::size_t>((v + r) * side + (u + r))];
                }
            }
            out[static_cast<std::size_t>(y * w + x)] = s;
        }
    }
    return out;
}

} // namespace wmkit::oracle
