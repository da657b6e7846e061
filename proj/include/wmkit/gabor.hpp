#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "wmkit/error.hpp"
#include "wmkit/image.hpp"

namespace wmkit {

namespace detail {
inline double half_response_constant() noexcept { return std::sqrt(std::numbers::ln2 / 2.0); }
inline double radians(double degrees) noexcept { return degrees * std::numbers::pi / 180.0; }
} // namespace detail

/// Gaussian envelope width for a given wavelength and half-response
/// bandwidth (octaves): sigma = lambda/pi * sqrt(ln2/2) * (2^b+1)/(2^b-1).
inline double sigma_from_bandwidth(double lambda, double bandwidth) {
    if (!(lambda > 0.0) || !(bandwidth > 0.0)) {
        throw InvalidArgument("wavelength and bandwidth must be positive");
    }
    const double p = std::exp2(bandwidth);
    return lambda / std::numbers::pi * detail::half_response_constant() * (p + 1.0) / (p - 1.0);
}

/// Inverse of sigma_from_bandwidth:
/// b = log2((s*pi + c) / (s*pi - c)), s = sigma/lambda, c = sqrt(ln2/2).
/// Defined only when s*pi > c; narrower envelopes have no finite bandwidth.
inline double bandwidth_from_sigma(double sigma, double lambda) {
    if (!(lambda > 0.0) || !(sigma > 0.0)) {
        throw InvalidArgument("wavelength and sigma must be positive");
    }
    const double c = detail::half_response_constant();
    const double sp = sigma / lambda * std::numbers::pi;
    if (sp <= c) {
        throw InvalidArgument("sigma/lambda too small: bandwidth is unbounded");
    }
    return std::log2((sp + c) / (sp - c));
}

/// Parameters of one Gabor filter. Angles are in degrees.
///
/// Either sigma or the bandwidth is authoritative; build through
/// with_sigma()/with_bandwidth() so the other one is derived consistently.
struct GaborParams {
    double lambda = 8.0;
    double theta_deg = 0.0;
    double phi_deg = 0.0;
    double gamma = 0.5;
    double sigma = 0.0;
    std::optional<double> bandwidth_octaves;

    static GaborParams with_sigma(double lambda, double theta_deg, double phi_deg, double gamma,
                                  double sigma) {
        if (!(lambda > 0.0) || !(gamma > 0.0) || !(sigma > 0.0)) {
            throw InvalidArgument("lambda, gamma and sigma must be positive");
        }
        return {lambda, theta_deg, phi_deg, gamma, sigma, std::nullopt};
    }

    static GaborParams with_bandwidth(double lambda, double theta_deg, double phi_deg, double gamma,
                                      double bandwidth) {
        if (!(gamma > 0.0)) {
            throw InvalidArgument("gamma must be positive");
        }
        return {lambda, theta_deg, phi_deg, gamma, sigma_from_bandwidth(lambda, bandwidth), bandwidth};
    }

    double bandwidth() const {
        return bandwidth_octaves ? *bandwidth_octaves : bandwidth_from_sigma(sigma, lambda);
    }
};

/// Support radius used when none is given: ceil(3 sigma).
inline int default_radius(double sigma) { return std::max(1, static_cast<int>(std::ceil(3.0 * sigma))); }

/// Square (2r+1)^2 filter centred on the origin.
class Kernel {
public:
    explicit Kernel(int radius) : radius_(radius) {
        if (radius < 1) throw InvalidArgument("kernel radius must be >= 1");
        weights_.assign(static_cast<std::size_t>(side() * side()), 0.0);
    }

    Kernel(int radius, std::vector<double> weights) : radius_(radius), weights_(std::move(weights)) {
        if (radius < 1) throw InvalidArgument("kernel radius must be >= 1");
        if (weights_.size() != static_cast<std::size_t>(side() * side())) {
            throw InvalidArgument("kernel weight count does not match radius");
        }
    }

    int radius() const noexcept { return radius_; }
    int side() const noexcept { return 2 * radius_ + 1; }
    std::span<const double> weights() const noexcept { return weights_; }

    /// Weight at offset (dx, dy), both in [-radius, radius].
    double at(int dx, int dy) const noexcept { return weights_[index(dx, dy)]; }
    double& at(int dx, int dy) noexcept { return weights_[index(dx, dy)]; }

    double sum() const noexcept {
        double s = 0.0;
        for (double w : weights_) s += w;
        return s;
    }

    double abs_sum() const noexcept {
        double s = 0.0;
        for (double w : weights_) s += std::abs(w);
        return s;
    }

    Kernel operator-() const {
        Kernel k = *this;
        for (double& w : k.weights_) w = -w;
        return k;
    }

    /// Delta kernel: 1 at the centre.
    static Kernel identity(int radius) {
        Kernel k(radius);
        k.at(0, 0) = 1.0;
        return k;
    }

private:
    std::size_t index(int dx, int dy) const noexcept {
        return static_cast<std::size_t>((dy + radius_) * side() + (dx + radius_));
    }

    int radius_;
    std::vector<double> weights_;
};

/// exp(-(x'^2 + gamma^2 y'^2) / (2 sigma^2)) * cos(2 pi x'/lambda + phi),
/// with x' = x cos(theta) + y sin(theta), y' = -x sin(theta) + y cos(theta),
/// sampled on integer offsets and shifted to zero mean.
inline Kernel gabor_kernel(const GaborParams& p, int radius) {
    if (!(p.lambda > 0.0) || !(p.sigma > 0.0) || !(p.gamma > 0.0)) {
        throw InvalidArgument("lambda, gamma and sigma must be positive");
    }
    Kernel k(radius);
    const double theta = detail::radians(p.theta_deg);
    const double phi = detail::radians(p.phi_deg);
    const double ct = std::cos(theta);
    const double st = std::sin(theta);
    const double two_sigma_sq = 2.0 * p.sigma * p.sigma;
    for (int y = -radius; y <= radius; ++y) {
        for (int x = -radius; x <= radius; ++x) {
            const double xr = x * ct + y * st;
            const double yr = -x * st + y * ct;
            const double envelope = std::exp(-(xr * xr + p.gamma * p.gamma * yr * yr) / two_sigma_sq);
            k.at(x, y) = envelope * std::cos(2.0 * std::numbers::pi * xr / p.lambda + phi);
        }
    }
    const double mean = k.sum() / static_cast<double>(k.side() * k.side());
    for (int y = -radius; y <= radius; ++y) {
        for (int x = -radius; x <= radius; ++x) k.at(x, y) -= mean;
    }
    return k;
}

inline Kernel gabor_kernel(const GaborParams& p) { return gabor_kernel(p, default_radius(p.sigma)); }

/// Element-wise sum of equally sized kernels.
inline Kernel superpose(std::span<const Kernel> kernels) {
    if (kernels.empty()) {
        throw InvalidArgument("cannot superpose an empty kernel list");
    }
    Kernel out(kernels.front().radius());
    for (const Kernel& k : kernels) {
        if (k.radius() != out.radius()) {
            throw InvalidArgument("cannot superpose kernels of different radii");
        }
        for (int y = -out.radius(); y <= out.radius(); ++y) {
            for (int x = -out.radius(); x <= out.radius(); ++x) out.at(x, y) += k.at(x, y);
        }
    }
    return out;
}

/// Unclamped real-valued response map, row-major.
class RealMap {
public:
    RealMap(std::size_t width, std::size_t height)
        : width_(width), height_(height), values_(width * height, 0.0) {}

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    std::span<const double> values() const noexcept { return values_; }

    double at(std::size_t x, std::size_t y) const noexcept { return values_[y * width_ + x]; }
    double& at(std::size_t x, std::size_t y) noexcept { return values_[y * width_ + x]; }

private:
    std::size_t width_;
    std::size_t height_;
    std::vector<double> values_;
};

namespace detail {
/// Mirror about the edge sample without repeating it: -1 -> 1, n -> n-2.
/// Valid for offsets smaller than n.
inline std::ptrdiff_t reflect(std::ptrdiff_t i, std::ptrdiff_t n) noexcept {
    if (i < 0) return -i;
    if (i >= n) return 2 * (n - 1) - i;
    return i;
}
} // namespace detail

/// out(x,y) = sum_{dx,dy} img(x+dx, y+dy) * k(-dx,-dy), reflected borders.
inline RealMap convolve(const ImageBuffer& img, const Kernel& k) {
    if (img.channels() != 1) {
        throw InvalidArgument("convolution requires a grayscale image");
    }
    const auto side = static_cast<std::size_t>(k.side());
    if (img.width() < side || img.height() < side) {
        throw InvalidArgument("image is smaller than the kernel");
    }
    const auto w = static_cast<std::ptrdiff_t>(img.width());
    const auto h = static_cast<std::ptrdiff_t>(img.height());
    const int r = k.radius();
    const auto px = img.samples();

    // Pre-reflected column lookup for each output column and tap.
    std::vector<std::ptrdiff_t> col(static_cast<std::size_t>(w) * side);
    for (std::ptrdiff_t x = 0; x < w; ++x) {
        for (int dx = -r; dx <= r; ++dx) {
            col[static_cast<std::size_t>(x) * side + static_cast<std::size_t>(dx + r)] =
                detail::reflect(x + dx, w);
        }
    }

    RealMap out(img.width(), img.height());
    for (std::ptrdiff_t y = 0; y < h; ++y) {
        for (std::ptrdiff_t x = 0; x < w; ++x) {
            double acc = 0.0;
            const std::ptrdiff_t* cx = &col[static_cast<std::size_t>(x) * side];
            for (int dy = -r; dy <= r; ++dy) {
                const std::uint8_t* row = px.data() + detail::reflect(y + dy, h) * w;
                for (int dx = -r; dx <= r; ++dx) {
                    acc += row[cx[dx + r]] * k.at(-dx, -dy);
                }
            }
            out.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) = acc;
        }
    }
    return out;
}

/// Settings of the superposed-bank edge detector.
struct EdgeParams {
    double lambda = 8.0;
    double gamma = 0.5;
    double bandwidth = 1.0;
    int orientations = 12;
};

/// The two superposed banks (phase 0 and phase 90 degrees), each summing
/// `orientations` filters at theta_k = k * 360 / orientations.
struct GaborBankPair {
    Kernel even;
    Kernel odd;
};

inline GaborBankPair edge_banks(const EdgeParams& e) {
    if (e.orientations < 1) {
        throw InvalidArgument("orientation count must be >= 1");
    }
    const double sigma = sigma_from_bandwidth(e.lambda, e.bandwidth);
    const int radius = default_radius(sigma);
    std::vector<Kernel> even;
    std::vector<Kernel> odd;
    for (int i = 0; i < e.orientations; ++i) {
        const double theta = 360.0 * i / e.orientations;
        even.push_back(gabor_kernel(GaborParams::with_sigma(e.lambda, theta, 0.0, e.gamma, sigma), radius));
        odd.push_back(gabor_kernel(GaborParams::with_sigma(e.lambda, theta, 90.0, e.gamma, sigma), radius));
    }
    return {superpose(even), superpose(odd)};
}

/// Per-pixel magnitude sqrt(even^2 + odd^2) of the two bank responses.
inline RealMap edge_response(const ImageBuffer& img, const EdgeParams& e) {
    const GaborBankPair banks = edge_banks(e);
    const RealMap re = convolve(img, banks.even);
    const RealMap im = convolve(img, banks.odd);
    RealMap mag(img.width(), img.height());
    for (std::size_t y = 0; y < img.height(); ++y) {
        for (std::size_t x = 0; x < img.width(); ++x) mag.at(x, y) = std::hypot(re.at(x, y), im.at(x, y));
    }
    return mag;
}

/// Edge map rescaled linearly so the strongest response is 255.
///
/// Responses at floating-point noise level (below 1e-9 of the largest
/// response an 8-bit image can produce) count as zero, so flat input gives
/// an all-zero map.
inline ImageBuffer edge_map(const ImageBuffer& img, const EdgeParams& e) {
    const GaborBankPair banks = edge_banks(e);
    const RealMap re = convolve(img, banks.even);
    const RealMap im = convolve(img, banks.odd);
    std::vector<double> mag(img.width() * img.height());
    double peak = 0.0;
    for (std::size_t i = 0; i < mag.size(); ++i) {
        mag[i] = std::hypot(re.values()[i], im.values()[i]);
        peak = std::max(peak, mag[i]);
    }
    const double floor = 1e-9 * 255.0 * (banks.even.abs_sum() + banks.odd.abs_sum());
    std::vector<std::uint8_t> out(mag.size(), 0);
    if (peak > floor) {
        for (std::size_t i = 0; i < mag.size(); ++i) out[i] = round_to_sample(255.0 * mag[i] / peak);
    }
    return ImageBuffer(img.width(), img.height(), 1, std::move(out));
}

inline ImageBuffer edge_map(const ImageBuffer& img, double lambda, double gamma, double bandwidth,
                            int orientations) {
    return edge_map(img, EdgeParams{lambda, gamma, bandwidth, orientations});
}

} // namespace wmkit
