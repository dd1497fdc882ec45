#ifndef MDSEG_IMAGE_IO_HPP
#define MDSEG_IMAGE_IO_HPP

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "mdseg/errors.hpp"
#include "mdseg/image.hpp"

namespace mdseg {

// Raw float format: 8-byte magic, uint32 LE width, uint32 LE height, then
// width*height IEEE-754 binary64 LE values in row-major order.
inline constexpr char kFloatMagic[9] = "MDFIMG01";

enum class ImageFormat { pgm_ascii, pgm_binary, float64 };

namespace detail {

inline std::vector<unsigned char> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed on '" + path.string() + "'");
  return bytes;
}

inline void dump(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) throw IoError("write failed on '" + path.string() + "'");
}

// Header tokenizer for the netpbm family: whitespace separated, '#' starts a
// comment running to end of line.
class PnmCursor {
 public:
  explicit PnmCursor(const std::vector<unsigned char>& b) : b_(b) {}

  std::string token() {
    skip();
    std::string t;
    while (pos_ < b_.size() && !std::isspace(b_[pos_]) && b_[pos_] != '#') t.push_back(static_cast<char>(b_[pos_++]));
    if (t.empty()) throw MalformedHeader("unexpected end of header");
    return t;
  }

  std::uint64_t number(const char* what) {
    const std::string t = token();
    if (!std::all_of(t.begin(), t.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      throw MalformedHeader(std::string("bad ") + what + " '" + t + "'");
    }
    if (t.size() > 9) throw MalformedHeader(std::string(what) + " out of range");
    return std::stoull(t);
  }

  // Exactly one whitespace byte separates the header from binary data.
  void end_header() {
    if (pos_ >= b_.size() || !std::isspace(b_[pos_])) throw MalformedHeader("missing whitespace after header");
    ++pos_;
  }

  std::size_t pos() const noexcept { return pos_; }

 private:
  void skip() {
    while (pos_ < b_.size()) {
      if (std::isspace(b_[pos_])) {
        ++pos_;
      } else if (b_[pos_] == '#') {
        while (pos_ < b_.size() && b_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  const std::vector<unsigned char>& b_;
  std::size_t pos_ = 0;
};

inline Image parse_pgm(const std::vector<unsigned char>& bytes) {
  PnmCursor cur(bytes);
  const std::string magic = cur.token();
  if (magic != "P2" && magic != "P5") throw MalformedHeader("not a graymap (magic '" + magic + "')");
  const auto w = cur.number("width");
  const auto h = cur.number("height");
  const auto maxval = cur.number("maxval");
  if (w == 0 || h == 0) throw MalformedHeader("zero image dimension");
  if (maxval == 0 || maxval > 65535) throw MalformedHeader("maxval must be in 1..65535");
  const std::size_t n = w * h;
  const auto scale = static_cast<double>(maxval);
  std::vector<double> vals(n);

  if (magic == "P2") {
    for (std::size_t i = 0; i < n; ++i) {
      std::uint64_t v = 0;
      try {
        v = cur.number("sample");
      } catch (const MalformedHeader&) {
        throw DimensionMismatch("expected " + std::to_string(n) + " samples, found " + std::to_string(i));
      }
      if (v > maxval) throw MalformedHeader("sample exceeds maxval");
      vals[i] = static_cast<double>(v) / scale;
    }
  } else {
    cur.end_header();
    const std::size_t bpp = maxval < 256 ? 1 : 2;
    const std::size_t have = bytes.size() - cur.pos();
    if (have < n * bpp) {
      throw DimensionMismatch("expected " + std::to_string(n * bpp) + " data bytes, found " + std::to_string(have));
    }
    const unsigned char* p = bytes.data() + cur.pos();
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint32_t v = bpp == 1 ? p[i] : (static_cast<std::uint32_t>(p[2 * i]) << 8) | p[2 * i + 1];
      if (v > maxval) throw MalformedHeader("sample exceeds maxval");
      vals[i] = static_cast<double>(v) / scale;
    }
  }
  return Image(w, h, std::move(vals));
}

inline std::uint32_t get_u32le(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
         static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}

inline void put_u32le(std::string& s, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) s.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

inline Image parse_float(const std::vector<unsigned char>& bytes) {
  if (bytes.size() < 16) throw MalformedHeader("float image header truncated");
  const std::uint32_t w = get_u32le(bytes.data() + 8);
  const std::uint32_t h = get_u32le(bytes.data() + 12);
  if (w == 0 || h == 0) throw MalformedHeader("zero image dimension");
  const std::size_t n = static_cast<std::size_t>(w) * h;
  if (bytes.size() - 16 != n * 8) {
    throw DimensionMismatch("expected " + std::to_string(n * 8) + " data bytes, found " +
                            std::to_string(bytes.size() - 16));
  }
  std::vector<double> vals(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t u = 0;
    for (int b = 7; b >= 0; --b) u = (u << 8) | bytes[16 + 8 * i + static_cast<std::size_t>(b)];
    std::memcpy(&vals[i], &u, sizeof u);
  }
  return Image(w, h, std::move(vals));
}

inline unsigned quantize(double v) {
  return static_cast<unsigned>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

}  // namespace detail

/// .f64 selects the float format, .pgma ASCII graymap, anything else binary graymap.
inline ImageFormat format_for(const std::filesystem::path& path) {
  const std::string ext = path.extension().string();
  if (ext == ".f64") return ImageFormat::float64;
  if (ext == ".pgma") return ImageFormat::pgm_ascii;
  return ImageFormat::pgm_binary;
}

inline Image decode_image(const std::vector<unsigned char>& bytes) {
  if (bytes.size() >= 8 && std::memcmp(bytes.data(), kFloatMagic, 8) == 0) return detail::parse_float(bytes);
  return detail::parse_pgm(bytes);
}

inline std::string encode_image(const Image& img, ImageFormat fmt) {
  std::string out;
  switch (fmt) {
    case ImageFormat::float64: {
      if (img.width() > UINT32_MAX || img.height() > UINT32_MAX) throw InvalidArgument("image too large");
      out.append(kFloatMagic, 8);
      detail::put_u32le(out, static_cast<std::uint32_t>(img.width()));
      detail::put_u32le(out, static_cast<std::uint32_t>(img.height()));
      for (double v : img.values()) {
        std::uint64_t u = 0;
        std::memcpy(&u, &v, sizeof u);
        for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((u >> (8 * b)) & 0xFF));
      }
      break;
    }
    case ImageFormat::pgm_binary: {
      out = "P5\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
      for (double v : img.values()) out.push_back(static_cast<char>(detail::quantize(v)));
      break;
    }
    case ImageFormat::pgm_ascii: {
      std::ostringstream os;
      os << "P2\n" << img.width() << ' ' << img.height() << "\n255\n";
      for (std::size_t r = 0; r < img.height(); ++r) {
        for (std::size_t c = 0; c < img.width(); ++c) os << (c ? " " : "") << detail::quantize(img.at(r, c));
        os << '\n';
      }
      out = os.str();
      break;
    }
  }
  return out;
}

inline Image read_image(const std::filesystem::path& path) { return decode_image(detail::slurp(path)); }

inline void write_image(const std::filesystem::path& path, const Image& img) {
  detail::dump(path, encode_image(img, format_for(path)));
}

inline void write_image(const std::filesystem::path& path, const Image& img, ImageFormat fmt) {
  detail::dump(path, encode_image(img, fmt));
}

inline Image to_image(const Mask& m) {
  Image out(m.width(), m.height());
  for (std::size_t i = 0; i < m.size(); ++i) out[i] = m[i] ? 1.0 : 0.0;
  return out;
}

/// Masks are stored as images; a pixel is foreground when its value is >= 0.5.
inline Mask read_mask(const std::filesystem::path& path) {
  const Image img = read_image(path);
  Mask m(img.width(), img.height());
  for (std::size_t i = 0; i < img.size(); ++i) m.set(i, img[i] >= 0.5);
  return m;
}

inline void write_mask(const std::filesystem::path& path, const Mask& m) { write_image(path, to_image(m)); }

}  // namespace mdseg

#endif  // MDSEG_IMAGE_IO_HPP
