#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "tada/errors.hpp"
#include "tada/segment.hpp"

namespace tada {

enum class CorpusFormat { Csv, Bin };

inline constexpr char kSegMagic[8] = {'T', 'A', 'D', 'A', 'S', 'E', 'G', '1'};

namespace detail {

inline void put_u32_le(std::ostream& os, std::uint32_t v) {
  char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
               static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
  os.write(b, 4);
}

inline std::uint32_t get_u32_le(std::istream& is) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  if (!is) throw IoError("truncated binary segment file");
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) |
         (static_cast<std::uint32_t>(b[3]) << 24);
}

}  // namespace detail

inline void write_segments_csv(const std::string& path,
                               const std::vector<Segment>& segments) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open for write: " + path);
  os << std::setprecision(17);
  for (const Segment& seg : segments) {
    for (std::size_t i = 0; i < seg.size(); ++i) {
      if (i) os << ',';
      os << seg.samples[i];
    }
    os << '\n';
  }
  if (!os) throw IoError("write failed: " + path);
}

inline std::vector<Segment> read_segments_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open: " + path);
  std::vector<Segment> out;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    Segment seg;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) seg.samples.push_back(std::stod(cell));
    if (!seg.finite()) throw NonFiniteData("non-finite sample in " + path);
    out.push_back(std::move(seg));
  }
  return out;
}

/// Raw binary corpus: magic "TADASEG1", u32 count, u32 length, then
/// float32 little-endian samples row-major.
inline void write_segments_bin(const std::string& path,
                               const std::vector<Segment>& segments) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open for write: " + path);
  os.write(kSegMagic, 8);
  const std::uint32_t count = static_cast<std::uint32_t>(segments.size());
  const std::uint32_t length =
      segments.empty() ? 0u : static_cast<std::uint32_t>(segments[0].size());
  detail::put_u32_le(os, count);
  detail::put_u32_le(os, length);
  for (const Segment& seg : segments) {
    if (seg.size() != length) throw LengthMismatch("ragged binary corpus");
    for (double v : seg.samples) {
      const float f = static_cast<float>(v);
      std::uint32_t bits;
      std::memcpy(&bits, &f, 4);
      detail::put_u32_le(os, bits);
    }
  }
  if (!os) throw IoError("write failed: " + path);
}

inline std::vector<Segment> read_segments_bin(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open: " + path);
  char magic[8];
  is.read(magic, 8);
  if (!is || std::memcmp(magic, kSegMagic, 8) != 0)
    throw IoError("bad magic in " + path);
  const std::uint32_t count = detail::get_u32_le(is);
  const std::uint32_t length = detail::get_u32_le(is);
  std::vector<Segment> out;
  out.reserve(count);
  for (std::uint32_t s = 0; s < count; ++s) {
    Segment seg;
    seg.samples.resize(length);
    for (std::uint32_t i = 0; i < length; ++i) {
      const std::uint32_t bits = detail::get_u32_le(is);
      float f;
      std::memcpy(&f, &bits, 4);
      seg.samples[i] = static_cast<double>(f);
    }
    if (!seg.finite()) throw NonFiniteData("non-finite sample in " + path);
    out.push_back(std::move(seg));
  }
  return out;
}

inline void write_segments(const std::string& path, const std::vector<Segment>& segments,
                           CorpusFormat format) {
  if (format == CorpusFormat::Csv)
    write_segments_csv(path, segments);
  else
    write_segments_bin(path, segments);
}

inline std::vector<Segment> read_segments(const std::string& path, CorpusFormat format) {
  return format == CorpusFormat::Csv ? read_segments_csv(path)
                                     : read_segments_bin(path);
}

}  // namespace tada
