#pragma once

// Command-line front end. run() is kept separate from main() so the test
// suites can drive every subcommand in-process.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wmkit/wmkit.hpp"

namespace wmkit::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2 };

/// Bad flag combination detected after parsing.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

namespace fs = std::filesystem;

inline void ensure_distinct(const fs::path& input, const fs::path& output) {
    std::error_code ec;
    const bool same = fs::exists(output, ec) ? fs::equivalent(input, output, ec)
                                             : fs::weakly_canonical(input, ec) == fs::weakly_canonical(output, ec);
    if (same) {
        throw UsageError("refusing to overwrite input file '" + input.string() + "'");
    }
}

inline std::string read_bytes(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open '" + path.string() + "' for reading");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_bytes(const fs::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot open '" + path.string() + "' for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw FormatError("write failed for '" + path.string() + "'");
}

inline MbecConfig pair_config(const std::string& pair, double k) {
    return pair == "B" ? MbecConfig::pair_b(k) : MbecConfig::pair_a(k);
}

struct KeyFlags {
    std::string passphrase;
    std::optional<std::uint64_t> seed;

    std::optional<EmbedKey> key() const {
        if (seed) return EmbedKey{*seed};
        if (!passphrase.empty()) return EmbedKey::from_passphrase(passphrase);
        return std::nullopt;
    }
};

inline void add_key_flags(CLI::App* cmd, KeyFlags& flags) {
    auto* key = cmd->add_option("--key", flags.passphrase, "Passphrase; hashed with FNV-1a 64 to a seed");
    auto* seed = cmd->add_option("--seed", flags.seed, "Explicit 64-bit seed (bypasses passphrase hashing)");
    key->excludes(seed);
}

} // namespace detail

/// Parses argv and runs one subcommand. Returns 0 on success, 1 on usage
/// errors, 2 on data errors. Diagnostics go to `err`; extracted text and
/// reports go to `out`.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    namespace fs = std::filesystem;
    using detail::ensure_distinct;

    CLI::App app{"wmkit: LSB steganography, DCT mid-band watermarking, Gabor edge maps"};
    app.name("wmkit");
    app.require_subcommand(1);

    // lsb-embed
    std::string cover, message, stego_out;
    detail::KeyFlags embed_key;
    auto* lsb_embed_cmd = app.add_subcommand("lsb-embed", "Hide a message file in the LSBs of a cover image");
    lsb_embed_cmd->add_option("--cover", cover, "Cover image (PGM/PPM)")->required();
    lsb_embed_cmd->add_option("--message", message, "Message file (raw bytes)")->required();
    lsb_embed_cmd->add_option("--out", stego_out, "Stego image output")->required();
    detail::add_key_flags(lsb_embed_cmd, embed_key);

    // lsb-extract
    std::string stego_in, text_out;
    detail::KeyFlags extract_key;
    auto* lsb_extract_cmd = app.add_subcommand("lsb-extract", "Recover a message hidden with lsb-embed");
    lsb_extract_cmd->add_option("--stego", stego_in, "Stego image")->required();
    lsb_extract_cmd->add_option("--out", text_out, "Write the message here instead of stdout");
    detail::add_key_flags(lsb_extract_cmd, extract_key);

    // dct-embed
    std::string host, wm_path, wm_out;
    double strength = 10.0;
    std::string pair = "A";
    auto* dct_embed_cmd = app.add_subcommand("dct-embed", "Embed a binary watermark in 8x8 DCT mid-band pairs");
    dct_embed_cmd->add_option("--host", host, "Host image (color input is converted to gray)")->required();
    dct_embed_cmd->add_option("--wm", wm_path, "Watermark image, thresholded at 128")->required();
    dct_embed_cmd->add_option("--k", strength, "Minimum coefficient separation")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    dct_embed_cmd->add_option("--pair", pair, "Coefficient pair: A=(4,1)/(3,2), B=(1,2)/(3,0)")
        ->check(CLI::IsMember({"A", "B"}))
        ->capture_default_str();
    dct_embed_cmd->add_option("--out", wm_out, "Watermarked image output")->required();

    // dct-extract
    std::string marked_in, wm_extract_out;
    std::size_t wm_w = 0, wm_h = 0;
    std::string extract_pair = "A";
    auto* dct_extract_cmd = app.add_subcommand("dct-extract", "Blind extraction of a DCT mid-band watermark");
    dct_extract_cmd->set_help_flag("--help", "Print this help message and exit"); // -h is taken by --h
    dct_extract_cmd->add_option("--in", marked_in, "Watermarked image")->required();
    dct_extract_cmd->add_option("--w", wm_w, "Watermark width")->required()->check(CLI::PositiveNumber);
    dct_extract_cmd->add_option("--h", wm_h, "Watermark height")->required()->check(CLI::PositiveNumber);
    dct_extract_cmd->add_option("--pair", extract_pair, "Coefficient pair used at embed time")
        ->check(CLI::IsMember({"A", "B"}))
        ->capture_default_str();
    dct_extract_cmd->add_option("--out", wm_extract_out, "Extracted watermark (PGM, 0/255)")->required();

    // edges
    std::string edges_in, edges_out;
    EdgeParams edge;
    auto* edges_cmd = app.add_subcommand("edges", "Gabor filter-bank edge map");
    edges_cmd->add_option("--in", edges_in, "Input image (color input is converted to gray)")->required();
    edges_cmd->add_option("--lambda", edge.lambda, "Wavelength in pixels")->check(CLI::PositiveNumber)->capture_default_str();
    edges_cmd->add_option("--gamma", edge.gamma, "Spatial aspect ratio")->check(CLI::PositiveNumber)->capture_default_str();
    edges_cmd->add_option("--bandwidth", edge.bandwidth, "Half-response bandwidth in octaves")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    edges_cmd->add_option("--orientations", edge.orientations, "Orientations spread over 360 degrees")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    edges_cmd->add_option("--out", edges_out, "Edge map output (PGM)")->required();

    // attack
    std::string attack_in, attack_out, kind;
    double scale = 1.0;
    double sigma = 5.0;
    std::uint64_t noise_seed = 0;
    auto* attack_cmd = app.add_subcommand("attack", "Apply a quantization or noise attack");
    attack_cmd->add_option("--kind", kind, "quantize | noise")->required()->check(CLI::IsMember({"quantize", "noise"}));
    attack_cmd->add_option("--scale", scale, "Quantization table multiplier")->check(CLI::PositiveNumber)->capture_default_str();
    attack_cmd->add_option("--sigma", sigma, "Noise standard deviation (gray levels)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    attack_cmd->add_option("--seed", noise_seed, "Noise seed")->capture_default_str();
    attack_cmd->add_option("--in", attack_in, "Input image")->required();
    attack_cmd->add_option("--out", attack_out, "Attacked image output")->required();

    // metrics
    std::string ref, test, wm_ref, wm_test;
    auto* metrics_cmd = app.add_subcommand("metrics", "MSE/PSNR between images, NC between watermarks");
    auto* ref_opt = metrics_cmd->add_option("--ref", ref, "Reference image");
    auto* test_opt = metrics_cmd->add_option("--test", test, "Test image");
    auto* wm_ref_opt = metrics_cmd->add_option("--wm-ref", wm_ref, "Reference watermark");
    auto* wm_test_opt = metrics_cmd->add_option("--wm-test", wm_test, "Test watermark");
    ref_opt->needs(test_opt);
    test_opt->needs(ref_opt);
    wm_ref_opt->needs(wm_test_opt);
    wm_test_opt->needs(wm_ref_opt);

    // capacity
    std::string capacity_in;
    auto* capacity_cmd = app.add_subcommand("capacity", "Report LSB and DCT watermark capacity in bits");
    capacity_cmd->add_option("--in", capacity_in, "Image")->required();

    // median-filter
    std::string median_in, median_out;
    auto* median_cmd = app.add_subcommand("median-filter", "3x3 median filter");
    median_cmd->add_option("--in", median_in, "Input image")->required();
    median_cmd->add_option("--out", median_out, "Filtered image output")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "wmkit: " << e.what() << "\n";
        const auto subs = app.get_subcommands();
        err << (subs.empty() ? app.help() : subs.front()->help());
        return kUsage;
    }

    try {
        if (lsb_embed_cmd->parsed()) {
            ensure_distinct(cover, stego_out);
            const ImageBuffer img = load_image(cover);
            const std::string bytes = detail::read_bytes(message);
            save_image(lsb_embed(img, frame_message(bytes), embed_key.key()), stego_out);
        } else if (lsb_extract_cmd->parsed()) {
            if (!text_out.empty()) ensure_distinct(stego_in, text_out);
            const std::string text = lsb_extract(load_image(stego_in), extract_key.key());
            if (text_out.empty()) {
                out.write(text.data(), static_cast<std::streamsize>(text.size()));
                out.flush();
            } else {
                detail::write_bytes(text_out, text);
            }
        } else if (dct_embed_cmd->parsed()) {
            ensure_distinct(host, wm_out);
            ensure_distinct(wm_path, wm_out);
            const ImageBuffer h = to_grayscale(load_image(host));
            const WatermarkImage w = WatermarkImage::from_image(load_image(wm_path));
            save_image(mbec_embed(h, w, detail::pair_config(pair, strength)), wm_out);
        } else if (dct_extract_cmd->parsed()) {
            ensure_distinct(marked_in, wm_extract_out);
            const ImageBuffer img = to_grayscale(load_image(marked_in));
            save_image(mbec_extract(img, wm_w, wm_h, detail::pair_config(extract_pair, 0.0)).to_image(),
                       wm_extract_out);
        } else if (edges_cmd->parsed()) {
            ensure_distinct(edges_in, edges_out);
            save_image(edge_map(to_grayscale(load_image(edges_in)), edge), edges_out);
        } else if (attack_cmd->parsed()) {
            ensure_distinct(attack_in, attack_out);
            const ImageBuffer img = load_image(attack_in);
            if (kind == "quantize") {
                save_image(jpeg_quantize_attack(to_grayscale(img), scale), attack_out);
            } else {
                save_image(gaussian_noise_attack(img, sigma, noise_seed), attack_out);
            }
        } else if (metrics_cmd->parsed()) {
            if (ref.empty() && wm_ref.empty()) {
                throw UsageError("metrics needs --ref/--test or --wm-ref/--wm-test");
            }
            if (!ref.empty()) {
                const QualityReport q = compare_images(load_image(ref), load_image(test));
                out << "mse=" << format_metric(q.mse) << " psnr=" << format_metric(q.psnr_db) << "\n";
            }
            if (!wm_ref.empty()) {
                const double v = nc(WatermarkImage::from_image(load_image(wm_ref)),
                                    WatermarkImage::from_image(load_image(wm_test)));
                out << "nc=" << format_metric(v) << "\n";
            }
        } else if (capacity_cmd->parsed()) {
            const ImageBuffer img = load_image(capacity_in);
            const bool blocks = img.width() >= kBlockSize && img.height() >= kBlockSize;
            out << "lsb_bits=" << lsb_capacity(img) << "\n"
                << "wm_bits=" << (blocks ? wm_capacity(to_grayscale(img)) : 0) << "\n";
        } else if (median_cmd->parsed()) {
            ensure_distinct(median_in, median_out);
            save_image(median_filter_3x3(load_image(median_in)), median_out);
        }
    } catch (const UsageError& e) {
        err << "wmkit: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        err << "wmkit: " << e.what() << "\n";
        return kData;
    }
    return kOk;
}

} // namespace wmkit::cli
