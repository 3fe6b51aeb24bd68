#pragma once

#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "image.hpp"

namespace morpho {

enum class PnmErrorKind { malformed_header, maxval_too_large, truncated, bad_sample };

/// Parse failure with the byte offset where it was detected.
class PnmError : public std::runtime_error {
public:
  PnmError(PnmErrorKind kind, std::size_t offset, const std::string& what)
      : std::runtime_error(what + " (byte offset " + std::to_string(offset) + ")"),
        kind_(kind), offset_(offset) {}

  PnmErrorKind kind() const { return kind_; }
  std::size_t offset() const { return offset_; }

private:
  PnmErrorKind kind_;
  std::size_t offset_;
};

namespace detail {

struct PnmCursor {
  std::string_view bytes;
  std::size_t pos = 0;

  bool eof() const { return pos >= bytes.size(); }
  char peek() const { return bytes[pos]; }

  // PNM whitespace; '#' starts a comment running to end of line.
  void skip_space_and_comments() {
    while (!eof()) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        ++pos;
      } else if (c == '#') {
        while (!eof() && peek() != '\n')
          ++pos;
      } else {
        break;
      }
    }
  }

  int parse_uint(const char* what) {
    skip_space_and_comments();
    if (eof())
      throw PnmError(PnmErrorKind::malformed_header, pos, std::string("unexpected end of data before ") + what);
    if (peek() < '0' || peek() > '9')
      throw PnmError(PnmErrorKind::malformed_header, pos, std::string("expected digit for ") + what);
    long v = 0;
    while (!eof() && peek() >= '0' && peek() <= '9') {
      v = v * 10 + (peek() - '0');
      if (v > 1000000000)
        throw PnmError(PnmErrorKind::malformed_header, pos, std::string("value out of range for ") + what);
      ++pos;
    }
    return static_cast<int>(v);
  }
};

} // namespace detail

/// Decode a P2 (ASCII) or P5 (binary) grayscale image, maxval <= 255.
inline Image read_pnm(std::string_view bytes) {
  detail::PnmCursor cur{bytes};
  cur.skip_space_and_comments();
  if (bytes.size() - cur.pos < 2 || bytes[cur.pos] != 'P' ||
      (bytes[cur.pos + 1] != '2' && bytes[cur.pos + 1] != '5'))
    throw PnmError(PnmErrorKind::malformed_header, cur.pos, "not a P2/P5 PNM file");
  bool binary = bytes[cur.pos + 1] == '5';
  cur.pos += 2;

  int w = cur.parse_uint("width");
  int h = cur.parse_uint("height");
  if (w <= 0 || h <= 0)
    throw PnmError(PnmErrorKind::malformed_header, cur.pos, "dimensions must be positive");
  cur.skip_space_and_comments();
  std::size_t maxval_at = cur.pos;
  int maxval = cur.parse_uint("maxval");
  if (maxval <= 0)
    throw PnmError(PnmErrorKind::malformed_header, maxval_at, "maxval must be positive");
  if (maxval > 255)
    throw PnmError(PnmErrorKind::maxval_too_large, maxval_at, "maxval exceeds 255");

  Image img(w, h);
  std::size_t count = img.size();
  if (binary) {
    if (cur.eof())
      throw PnmError(PnmErrorKind::truncated, cur.pos, "missing payload");
    ++cur.pos; // exactly one whitespace byte after maxval
    if (bytes.size() - cur.pos < count)
      throw PnmError(PnmErrorKind::truncated, bytes.size(), "binary payload shorter than declared size");
    for (std::size_t i = 0; i < count; ++i) {
      std::uint8_t v = static_cast<std::uint8_t>(bytes[cur.pos + i]);
      if (v > maxval)
        throw PnmError(PnmErrorKind::bad_sample, cur.pos + i, "sample exceeds maxval");
      img.values[i] = v;
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      std::size_t at = cur.pos;
      int v;
      try {
        v = cur.parse_uint("sample");
      } catch (const PnmError&) {
        throw PnmError(PnmErrorKind::truncated, at, "ASCII payload shorter than declared size");
      }
      if (v > maxval)
        throw PnmError(PnmErrorKind::bad_sample, at, "sample exceeds maxval");
      img.values[i] = static_cast<std::uint8_t>(v);
    }
  }
  return img;
}

/// Encode as P2 when ascii, else P5; maxval is normalized to 255.
inline std::string write_pnm(const Image& img, bool ascii = false) {
  std::string out;
  char head[64];
  std::snprintf(head, sizeof head, "%s\n%d %d\n255\n", ascii ? "P2" : "P5", img.width, img.height);
  out += head;
  if (ascii) {
    std::string line;
    for (int y = 0; y < img.height; ++y) {
      line.clear();
      for (int x = 0; x < img.width; ++x) {
        char buf[8];
        std::snprintf(buf, sizeof buf, "%d", img.at(x, y));
        // keep lines within the conventional 70-character limit
        if (!line.empty() && line.size() + 1 + std::char_traits<char>::length(buf) > 70) {
          out += line;
          out += '\n';
          line.clear();
        }
        if (!line.empty())
          line += ' ';
        line += buf;
      }
      out += line;
      out += '\n';
    }
  } else {
    out.append(reinterpret_cast<const char*>(img.values.data()), img.size());
  }
  return out;
}

/// RGB image used by the detection overlay renderer (P6, write-only).
struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> values; // interleaved r,g,b

  RgbImage() = default;
  explicit RgbImage(const Image& gray)
      : width(gray.width), height(gray.height), values(gray.size() * 3) {
    for (std::size_t i = 0; i < gray.size(); ++i)
      values[3 * i] = values[3 * i + 1] = values[3 * i + 2] = gray.values[i];
  }

  void set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    std::size_t i = 3 * (static_cast<std::size_t>(y) * width + x);
    values[i] = r;
    values[i + 1] = g;
    values[i + 2] = b;
  }
};

inline std::string write_ppm(const RgbImage& img) {
  std::string out;
  char head[64];
  std::snprintf(head, sizeof head, "P6\n%d %d\n255\n", img.width, img.height);
  out += head;
  out.append(reinterpret_cast<const char*>(img.values.data()), img.values.size());
  return out;
}

} // namespace morpho
