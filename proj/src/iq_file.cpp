#include "thz/iq_file.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

namespace thz {

namespace {

template <typename U>
void put_le(unsigned char* out, U v) {
  for (std::size_t i = 0; i < sizeof(U); ++i) out[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
}

template <typename U>
U get_le(const unsigned char* p) {
  U v = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) v |= U(p[i]) << (8 * i);
  return v;
}

}  // namespace

template <typename Scalar>
std::vector<unsigned char> encode_iq(const BasicIqFrame<Scalar>& frame) {
  if (!std::isfinite(frame.sample_rate_hz) || !(frame.sample_rate_hz > 0.0))
    throw Error(Errc::parameter, "write_iq: sample_rate_hz must be finite and > 0");
  const auto n = static_cast<std::uint64_t>(frame.samples.size());
  std::vector<unsigned char> out(iq_header_bytes + n * 8, 0);
  unsigned char* p = out.data();
  std::memcpy(p, iq_magic.data(), iq_magic.size());
  put_le<std::uint32_t>(p + 8, iq_format_version);
  put_le<std::uint64_t>(p + 12, n);
  put_le<std::uint64_t>(p + 20, std::bit_cast<std::uint64_t>(frame.sample_rate_hz));
  put_le<std::uint64_t>(p + 28, std::bit_cast<std::uint64_t>(frame.center_freq_hz));
  put_le<std::uint64_t>(p + 36, std::bit_cast<std::uint64_t>(frame.origin_time_s));

  for (Eigen::Index k = 0; k < frame.samples.size(); ++k) {
    const float i = float(frame.samples[k].real());
    const float q = float(frame.samples[k].imag());
    if (!std::isfinite(i) || !std::isfinite(q))
      throw Error(Errc::parameter, "write_iq: non-finite sample at index " + std::to_string(k));
    put_le<std::uint32_t>(p + iq_header_bytes + 8 * k, std::bit_cast<std::uint32_t>(i));
    put_le<std::uint32_t>(p + iq_header_bytes + 8 * k + 4, std::bit_cast<std::uint32_t>(q));
  }
  return out;
}

IqFrameF decode_iq(const std::vector<unsigned char>& bytes, const std::string& origin) {
  if (bytes.size() < iq_header_bytes)
    throw Error(Errc::truncation, origin + ": header truncated, expected " + std::to_string(iq_header_bytes) +
                                      " bytes, got " + std::to_string(bytes.size()));
  if (std::memcmp(bytes.data(), iq_magic.data(), iq_magic.size()) != 0)
    throw Error(Errc::format, origin + ": bad magic, not an IQ recording");
  const unsigned char* p = bytes.data();
  const auto version = get_le<std::uint32_t>(p + 8);
  if (version != iq_format_version)
    throw Error(Errc::format, origin + ": unsupported format version " + std::to_string(version));
  const auto n = get_le<std::uint64_t>(p + 12);
  IqFrameF frame;
  frame.sample_rate_hz = std::bit_cast<double>(get_le<std::uint64_t>(p + 20));
  frame.center_freq_hz = std::bit_cast<double>(get_le<std::uint64_t>(p + 28));
  frame.origin_time_s = std::bit_cast<double>(get_le<std::uint64_t>(p + 36));
  for (std::size_t i = 44; i < iq_header_bytes; ++i)
    if (p[i] != 0) throw Error(Errc::format, origin + ": reserved header bytes are not zero");
  if (!(frame.sample_rate_hz > 0.0) || !std::isfinite(frame.sample_rate_hz))
    throw Error(Errc::format, origin + ": sample rate in header is not a positive number");

  const std::uint64_t payload = bytes.size() - iq_header_bytes;
  if (n > (std::numeric_limits<std::uint64_t>::max() - iq_header_bytes) / 8)
    throw Error(Errc::format, origin + ": sample count " + std::to_string(n) + " is implausible");
  const std::uint64_t expected = n * 8;
  if (payload < expected)
    throw Error(Errc::truncation, origin + ": payload truncated, expected " + std::to_string(expected) +
                                      " bytes for " + std::to_string(n) + " samples, got " + std::to_string(payload));
  if (payload > expected)
    throw Error(Errc::format, origin + ": sample-count mismatch, header says " + std::to_string(n) + " samples (" +
                                  std::to_string(expected) + " bytes) but payload has " + std::to_string(payload));

  frame.samples.resize(static_cast<Eigen::Index>(n));
  const unsigned char* d = p + iq_header_bytes;
  for (std::uint64_t k = 0; k < n; ++k) {
    const float i = std::bit_cast<float>(get_le<std::uint32_t>(d + 8 * k));
    const float q = std::bit_cast<float>(get_le<std::uint32_t>(d + 8 * k + 4));
    frame.samples[static_cast<Eigen::Index>(k)] = {i, q};
  }
  return frame;
}

template <typename Scalar>
void write_iq(const BasicIqFrame<Scalar>& frame, const std::filesystem::path& path) {
  const auto bytes = encode_iq(frame);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io, "write_iq: cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(Errc::io, "write_iq: write to '" + path.string() + "' failed");
}

IqFrameF read_iq(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, "read_iq: cannot open '" + path.string() + "'");
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_iq(bytes, path.string());
}

template std::vector<unsigned char> encode_iq(const BasicIqFrame<float>&);
template std::vector<unsigned char> encode_iq(const BasicIqFrame<double>&);
template void write_iq(const BasicIqFrame<float>&, const std::filesystem::path&);
template void write_iq(const BasicIqFrame<double>&, const std::filesystem::path&);

}  // namespace thz
