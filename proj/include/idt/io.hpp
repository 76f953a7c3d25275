#pragma once

#include "idt/matrix.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace idt {

/// 8-bit image held as one double-valued plane per channel (1 = gray, 3 = RGB).
struct Image {
    std::vector<Matrix> channels;

    [[nodiscard]] std::size_t height() const { return channels.empty() ? 0 : channels.front().rows(); }
    [[nodiscard]] std::size_t width() const { return channels.empty() ? 0 : channels.front().cols(); }
};

/// Binary PGM (P5) or PPM (P6) with maxval 255.
[[nodiscard]] Image read_pnm(const std::filesystem::path& path);
void write_pnm(const std::filesystem::path& path, const Image& img);

/// 8-bit gray, gray+alpha, RGB or RGBA PNG; alpha is dropped, palettes expanded.
[[nodiscard]] Image read_png(const std::filesystem::path& path);
void write_png(const std::filesystem::path& path, const Image& img);

/// Picks the reader from the file signature.
[[nodiscard]] Image read_image(const std::filesystem::path& path);
/// Picks the writer from the extension (.png, otherwise PNM).
void write_image(const std::filesystem::path& path, const Image& img);

/// Round half to even, then clamp to [0, 255].
[[nodiscard]] std::uint8_t quantize_pixel(double v) noexcept;
[[nodiscard]] Image quantized(const Image& img);

/// ITU-R BT.601 luma: 0.299 R + 0.587 G + 0.114 B. Gray input is returned as is.
[[nodiscard]] Image to_gray(const Image& img);

/// PCM audio with samples mapped to [-1, 1) (sample / 32768).
struct Audio {
    std::uint32_t sample_rate = 44100;
    std::vector<std::vector<double>> channels;

    [[nodiscard]] std::size_t frames() const { return channels.empty() ? 0 : channels.front().size(); }
};

/// 16-bit PCM WAV, any channel count.
[[nodiscard]] Audio read_wav(const std::filesystem::path& path);
void write_wav(const std::filesystem::path& path, const Audio& audio);

/// Writes `content` to `path`; throws IoError on failure.
void write_text(const std::filesystem::path& path, const std::string& content);

} // namespace idt
