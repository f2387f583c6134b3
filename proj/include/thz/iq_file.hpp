#pragma once

#include <array>
#include <filesystem>

#include "thz/core.hpp"

namespace thz {

inline constexpr std::array<char, 8> iq_magic{'T', 'H', 'Z', 'I', 'Q', '1', '\0', '\0'};
inline constexpr std::uint32_t iq_format_version = 1;
inline constexpr std::size_t iq_header_bytes = 64;

/// Writes a 64-byte little-endian header and interleaved float32 (I, Q)
/// pairs. Double frames are narrowed to float32. Symbol timing is not stored.
template <typename Scalar>
void write_iq(const BasicIqFrame<Scalar>& frame, const std::filesystem::path& path);

/// Reads a recording written by write_iq. Payload size must match the header.
IqFrameF read_iq(const std::filesystem::path& path);

/// Encoded byte image, header included.
template <typename Scalar>
std::vector<unsigned char> encode_iq(const BasicIqFrame<Scalar>& frame);
IqFrameF decode_iq(const std::vector<unsigned char>& bytes, const std::string& origin = "<buffer>");

}  // namespace thz
