#pragma once

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <optional>
#include <string>

#include "wmkit/error.hpp"
#include "wmkit/image.hpp"
#include "wmkit/mbec.hpp"

namespace wmkit {

inline constexpr double kPeakAmplitude = 255.0;

/// Mean squared error over every sample (channels included in the divisor).
inline double mse(const ImageBuffer& a, const ImageBuffer& b) {
    if (!a.same_shape(b)) {
        throw InvalidArgument("images differ in dimensions or channel count");
    }
    const auto sa = a.samples();
    const auto sb = b.samples();
    // Integer accumulation keeps the sum exact and symmetric.
    unsigned long long acc = 0;
    for (std::size_t i = 0; i < sa.size(); ++i) {
        const long long d = static_cast<long long>(sa[i]) - sb[i];
        acc += static_cast<unsigned long long>(d * d);
    }
    return static_cast<double>(acc) / static_cast<double>(sa.size());
}

/// 10 log10(255^2 / mse), +infinity for identical images.
inline double psnr_from_mse(double mse_value) {
    if (mse_value == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(kPeakAmplitude * kPeakAmplitude / mse_value);
}

inline double psnr(const ImageBuffer& a, const ImageBuffer& b) { return psnr_from_mse(mse(a, b)); }

/// Normalized cross-correlation of two equally sized bit grids.
inline double nc(const WatermarkImage& w, const WatermarkImage& w2) {
    if (w.width() != w2.width() || w.height() != w2.height()) {
        throw InvalidArgument("watermarks differ in dimensions");
    }
    std::size_t dot = 0;
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        dot += static_cast<std::size_t>(w[i] & w2[i]);
        n1 += w[i];
        n2 += w2[i];
    }
    if (n1 == 0 || n2 == 0) {
        throw InvalidArgument("NC undefined for zero watermark");
    }
    // One square root of the product keeps nc(w, w) exactly 1.
    return static_cast<double>(dot) / std::sqrt(static_cast<double>(n1) * static_cast<double>(n2));
}

struct QualityReport {
    double mse = 0.0;
    double psnr_db = std::numeric_limits<double>::infinity();
    std::optional<double> nc;
};

inline QualityReport compare_images(const ImageBuffer& reference, const ImageBuffer& test) {
    const double m = mse(reference, test);
    return {m, psnr_from_mse(m), std::nullopt};
}

/// Six decimals, or "inf".
inline std::string format_metric(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

} // namespace wmkit
