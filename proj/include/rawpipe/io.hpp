#pragma once

#include "rawpipe/image.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace rawpipe {

/// Interleaved 8-bit RGB buffer as exchanged with the codecs.
struct Rgb8Buffer {
  Index rows = 0;
  Index cols = 0;
  std::vector<std::uint8_t> data;  // rows * cols * 3
};

/// Rounds to the nearest 8-bit code after clamping to [0,1].
Rgb8Buffer quantize_8bit(const SrgbImage& img);
SrgbImage dequantize_8bit(const Rgb8Buffer& buf);

std::vector<std::uint8_t> encode_jpeg(const Rgb8Buffer& buf, int quality, bool subsample_420 = true);
Rgb8Buffer decode_jpeg(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> encode_png8(const Rgb8Buffer& buf);

/// Reads an 8/16-bit PNG or baseline JPEG; gray and alpha inputs are expanded/dropped.
SrgbImage read_image(const std::filesystem::path& path);
void write_png8(const std::filesystem::path& path, const SrgbImage& img);
void write_jpeg(const std::filesystem::path& path, const SrgbImage& img, int quality);

/// Raw float container: "RPF1", then height, width, channels as u32 LE, then
/// row-major interleaved f32 LE samples.
std::vector<std::uint8_t> encode_raw_float(const LinearImage& img);
LinearImage decode_raw_float(std::span<const std::uint8_t> bytes);
void write_raw_float(const std::filesystem::path& path, const LinearImage& img);
LinearImage read_raw_float(const std::filesystem::path& path);

/// Raw float files load as-is; PNG/JPEG are decoded and linearized.
LinearImage read_linear_image(const std::filesystem::path& path);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace rawpipe
