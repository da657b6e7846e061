#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "support/synthetic.hpp"
#include "wmkit/attacks.hpp"
#include "wmkit/mbec.hpp"
#include "wmkit/metrics.hpp"

using wmkit::CoefBlock;
using wmkit::ImageBuffer;
using wmkit::MbecConfig;
using wmkit::WatermarkImage;

namespace {

TEST(MidbandTest, Membership) {
    EXPECT_TRUE(wmkit::in_midband({4, 1}));
    EXPECT_TRUE(wmkit::in_midband({3, 2}));
    EXPECT_TRUE(wmkit::in_midband({1, 2}));
    EXPECT_TRUE(wmkit::in_midband({3, 0}));
    EXPECT_FALSE(wmkit::in_midband({0, 0}));
    EXPECT_FALSE(wmkit::in_midband({7, 7}));
    EXPECT_FALSE(wmkit::in_midband({1, 1}));
    EXPECT_FALSE(wmkit::in_midband({4, 3}));
    EXPECT_FALSE(wmkit::in_midband({8, 0}));
    // diagonals 3..6 hold 4 + 5 + 6 + 7 positions
    EXPECT_EQ(wmkit::midband_mask().size(), 22u);
}

TEST(MidbandTest, DefaultPairsShareQuantizationStep) {
    const auto& q = wmkit::QuantTable::reference();
    const auto a = MbecConfig::pair_a();
    const auto b = MbecConfig::pair_b();
    EXPECT_EQ(q(a.first.row, a.first.col), 22);
    EXPECT_EQ(q(a.second.row, a.second.col), 22);
    EXPECT_EQ(q(b.first.row, b.first.col), 14);
    EXPECT_EQ(q(b.second.row, b.second.col), 14);
}

TEST(MbecConfigTest, Validation) {
    EXPECT_NO_THROW(MbecConfig::pair_a().validate());
    EXPECT_NO_THROW(MbecConfig::pair_b(0.0).validate());
    EXPECT_THROW((MbecConfig{{0, 0}, {3, 2}, 10.0}.validate()), wmkit::InvalidArgument);
    EXPECT_THROW((MbecConfig{{3, 2}, {3, 2}, 10.0}.validate()), wmkit::InvalidArgument);
    EXPECT_THROW((MbecConfig{{4, 1}, {3, 2}, -1.0}.validate()), wmkit::InvalidArgument);
}

TEST(WatermarkImageTest, ThresholdAndRender) {
    const ImageBuffer img(4, 1, 1, std::vector<std::uint8_t>{0, 127, 128, 255});
    const WatermarkImage wm = WatermarkImage::from_image(img);
    EXPECT_EQ(wm, WatermarkImage(4, 1, std::vector<std::uint8_t>{0, 0, 1, 1}));
    EXPECT_EQ(wm.to_image(), ImageBuffer(4, 1, 1, std::vector<std::uint8_t>{0, 0, 255, 255}));
    EXPECT_THROW(WatermarkImage(2, 2, std::vector<std::uint8_t>{0, 1, 2, 0}), wmkit::InvalidArgument);
}

// ---------------------------------------------------------------------------
// Per-block rule

TEST(MbecBlockTest, ExchangeThenWiden) {
    const MbecConfig cfg = MbecConfig::pair_a(10.0);
    CoefBlock f;
    f(4, 1) = 3.0;
    f(3, 2) = 7.0;
    // bit 0 wants c1 >= c2: swap to (7,3), gap 4 < 10, widen about mean 5.
    CoefBlock zero = f;
    wmkit::mbec_encode_block(zero, cfg, 0);
    EXPECT_DOUBLE_EQ(zero(4, 1), 10.0);
    EXPECT_DOUBLE_EQ(zero(3, 2), 0.0);
    // bit 1 already holds, only widening.
    CoefBlock one = f;
    wmkit::mbec_encode_block(one, cfg, 1);
    EXPECT_DOUBLE_EQ(one(4, 1), 0.0);
    EXPECT_DOUBLE_EQ(one(3, 2), 10.0);
}

TEST(MbecBlockTest, LargeGapOnlyExchanges) {
    const MbecConfig cfg = MbecConfig::pair_a(10.0);
    CoefBlock f;
    f(4, 1) = -20.0;
    f(3, 2) = 15.0;
    f(0, 0) = 900.0;
    CoefBlock g = f;
    wmkit::mbec_encode_block(g, cfg, 0);
    EXPECT_DOUBLE_EQ(g(4, 1), 15.0);
    EXPECT_DOUBLE_EQ(g(3, 2), -20.0);
    EXPECT_DOUBLE_EQ(g(0, 0), 900.0);
    CoefBlock h = f;
    wmkit::mbec_encode_block(h, cfg, 1);
    EXPECT_EQ(h, f);
}

TEST(MbecBlockTest, LiteralRuleWithZeroStrength) {
    const MbecConfig cfg = MbecConfig::pair_a(0.0);
    CoefBlock f;
    f(4, 1) = 5.0;
    f(3, 2) = 5.0;
    CoefBlock g = f;
    wmkit::mbec_encode_block(g, cfg, 0); // equal values already encode 0
    EXPECT_EQ(g, f);
    EXPECT_EQ(wmkit::mbec_decode_block(g, cfg), 0);
}

TEST(MbecBlockTest, EncodeDecodeAgreeAcrossStrengths) {
    wmkit::SplitMix64 rng(3);
    for (int trial = 0; trial < 2000; ++trial) {
        CoefBlock f;
        for (auto& v : f.values) v = 200.0 * rng.next_unit() - 100.0;
        const auto bit = static_cast<std::uint8_t>(rng.next() & 1);
        const double k = 20.0 * rng.next_unit();
        const MbecConfig cfg = trial % 2 ? MbecConfig::pair_a(k) : MbecConfig::pair_b(k);
        wmkit::mbec_encode_block(f, cfg, bit);
        ASSERT_EQ(wmkit::mbec_decode_block(f, cfg), bit);
        ASSERT_GE(std::abs(f(cfg.first.row, cfg.first.col) - f(cfg.second.row, cfg.second.col)), k - 1e-9);
    }
}

// ---------------------------------------------------------------------------
// Image level

TEST(MbecImageTest, RoundTripForStrengthAtLeastTwo) {
    // Includes saturated hosts, where clamping fights the embedder.
    wmkit::SplitMix64 rng(11);
    for (int trial = 0; trial < 36; ++trial) {
        const std::size_t w = 8 * (1 + rng.next() % 12) + rng.next() % 8;
        const std::size_t h = 8 * (1 + rng.next() % 12) + rng.next() % 8;
        const ImageBuffer host = trial % 3 == 0   ? wmkit::testing::random_image(w, h, 1, rng.next())
                                 : trial % 3 == 1 ? wmkit::testing::natural_host(w, h, rng.next(), 90.0)
                                                  : ImageBuffer(w, h, 1, static_cast<std::uint8_t>(trial % 2 ? 255 : 0));
        const std::size_t blocks = wmkit::wm_capacity(host);
        const std::size_t ww = 1 + rng.next() % blocks;
        const std::size_t wh = blocks / ww;
        const WatermarkImage wm = wmkit::testing::random_watermark(ww, wh, rng.next());
        const double k = 2.0 + 10.0 * rng.next_unit();
        const MbecConfig cfg = trial % 3 ? MbecConfig::pair_a(k) : MbecConfig::pair_b(k);
        const ImageBuffer marked = wmkit::mbec_embed(host, wm, cfg);
        const WatermarkImage got = wmkit::mbec_extract(marked, ww, wh, cfg);
        EXPECT_EQ(got, wm) << "trial " << trial;
        EXPECT_DOUBLE_EQ(wmkit::nc(wm, got), 1.0);
    }
}

TEST(MbecImageTest, PixelsOutsideMarkedBlocksAreUntouched) {
    const ImageBuffer host = wmkit::testing::random_image(45, 30, 1, 4, 16, 239); // 5x3 blocks + margins
    const WatermarkImage wm = wmkit::testing::random_watermark(7, 1, 5);           // first 7 blocks
    const ImageBuffer marked = wmkit::mbec_embed(host, wm, MbecConfig::pair_a());
    const auto grid = wmkit::block_grid(host);
    std::vector<bool> inside(host.sample_count(), false);
    for (std::size_t b = 0; b < wm.size(); ++b) {
        const auto o = grid.origin(b);
        for (std::size_t y = 0; y < 8; ++y) {
            for (std::size_t x = 0; x < 8; ++x) inside[(o.y + y) * 45 + o.x + x] = true;
        }
    }
    for (std::size_t i = 0; i < host.sample_count(); ++i) {
        if (!inside[i]) {
            EXPECT_EQ(marked.samples()[i], host.samples()[i]) << "sample " << i;
        }
    }
}

TEST(MbecImageTest, SatisfiedBlockChangesOnlyByRounding) {
    // Build a block whose pair already encodes bit 1 with a wide gap.
    CoefBlock f;
    f(0, 0) = 8.0 * 120.0;
    f(4, 1) = -30.0;
    f(3, 2) = 30.0;
    std::vector<std::uint8_t> px(64);
    wmkit::write_block(px, 8, {0, 0}, wmkit::idct2_8x8(f));
    const ImageBuffer host(8, 8, 1, px);
    const ImageBuffer marked = wmkit::mbec_embed(host, WatermarkImage(1, 1, {1}), MbecConfig::pair_a(10.0));
    for (std::size_t i = 0; i < 64; ++i) {
        EXPECT_LE(std::abs(int(marked.samples()[i]) - int(host.samples()[i])), 1);
    }
}

TEST(MbecImageTest, CapacityErrors) {
    const ImageBuffer host(16, 16, 1, std::uint8_t{128});
    EXPECT_THROW((void)wmkit::mbec_embed(host, wmkit::testing::random_watermark(5, 1, 1), MbecConfig::pair_a()),
                 wmkit::CapacityError);
    EXPECT_THROW((void)wmkit::mbec_extract(host, 5, 1, MbecConfig::pair_a()), wmkit::CapacityError);
    EXPECT_THROW((void)wmkit::mbec_extract(ImageBuffer(7, 7, 1, std::uint8_t{0}), 1, 1, MbecConfig::pair_a()),
                 wmkit::InvalidArgument);
}

TEST(MbecImageTest, UnmarkedImageGivesDefinedBits) {
    const ImageBuffer img = wmkit::testing::random_image(256, 256, 1, 12);
    const WatermarkImage bits = wmkit::mbec_extract(img, 32, 32, MbecConfig::pair_a());
    std::size_t ones = 0;
    for (auto b : bits.bits()) ones += b;
    // Bernoulli(1/2) over 1024 blocks: 6 standard deviations is +-96.
    EXPECT_NEAR(static_cast<double>(ones), 512.0, 96.0);
}

TEST(WmCapacityTest, Examples) {
    EXPECT_EQ(wmkit::wm_capacity(ImageBuffer(512, 512, 1, std::uint8_t{0})), 4096u);
    EXPECT_EQ(wmkit::wm_capacity(ImageBuffer(256, 240, 1, std::uint8_t{0})), 960u);
    EXPECT_EQ(wmkit::wm_capacity(ImageBuffer(8, 8, 1, std::uint8_t{0})), 1u);
    EXPECT_THROW((void)wmkit::wm_capacity(ImageBuffer(8, 7, 1, std::uint8_t{0})), wmkit::InvalidArgument);
}

TEST(MbecImageTest, FullCapacityFidelityAndRobustness) {
    const ImageBuffer host = wmkit::testing::natural_host(512, 512, 1);
    const WatermarkImage wm = wmkit::testing::logo_watermark();
    const MbecConfig cfg = MbecConfig::pair_a(10.0);
    const ImageBuffer marked = wmkit::mbec_embed(host, wm, cfg);
    EXPECT_GE(wmkit::psnr(host, marked), 35.0);
    EXPECT_DOUBLE_EQ(wmkit::nc(wm, wmkit::mbec_extract(marked, 64, 64, cfg)), 1.0);
    const double at_half = wmkit::nc(wm, wmkit::mbec_extract(wmkit::jpeg_quantize_attack(marked, 0.5), 64, 64, cfg));
    const double at_one = wmkit::nc(wm, wmkit::mbec_extract(wmkit::jpeg_quantize_attack(marked, 1.0), 64, 64, cfg));
    const double at_two = wmkit::nc(wm, wmkit::mbec_extract(wmkit::jpeg_quantize_attack(marked, 2.0), 64, 64, cfg));
    EXPECT_GE(at_one, 0.75);
    EXPECT_GE(at_half, at_one);
    EXPECT_GE(at_one, at_two);
}

} // namespace
