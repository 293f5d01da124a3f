#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "coatflow/core/image.hpp"

namespace coatflow {

/// Decodes a binary PPM (P6) or PGM (P5), 8-bit. PGM input is replicated
/// across the three channels. Throws IoError (missing file), FormatError
/// (malformed header / truncated pixels), UnsupportedError (bit depth or
/// magic).
RgbImage load_image(const std::filesystem::path& path);

/// Writes a binary PPM (P6). Byte-exact round trip with load_image.
void save_image(const RgbImage& img, const std::filesystem::path& path);

/// Loads an 8- or 16-bit PGM as floating-point gray (16-bit values are kept
/// as-is, 0..65535).
GrayImage load_pgm(const std::filesystem::path& path);

/// Writes an 8-bit PGM; values are clamped to [0,255] and rounded.
void save_pgm(const GrayImage& img, const std::filesystem::path& path);

/// Writes a 16-bit PGM (big-endian samples per the Netpbm convention).
void save_pgm16(const std::vector<std::uint16_t>& data, int width, int height,
                const std::filesystem::path& path);

/// Mask files are 8-bit PGM, 0 = background, 255 = foreground. Loading
/// treats any value >= 128 as foreground.
BinaryMask load_mask(const std::filesystem::path& path);
void save_mask(const BinaryMask& mask, const std::filesystem::path& path);

/// Writes bytes to a temp file in the target directory, then renames.
void write_file_atomic(const std::filesystem::path& path, const std::string& bytes);

std::string read_file(const std::filesystem::path& path);

} // namespace coatflow
