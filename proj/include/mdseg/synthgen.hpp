#ifndef MDSEG_SYNTHGEN_HPP
#define MDSEG_SYNTHGEN_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mdseg/errors.hpp"
#include "mdseg/image.hpp"
#include "mdseg/rng.hpp"

namespace mdseg {

enum class ShapeKind { circle, square, triangle, star, pseudo_qr };

inline ShapeKind parse_shape_kind(std::string_view s) {
  if (s == "circle") return ShapeKind::circle;
  if (s == "square") return ShapeKind::square;
  if (s == "triangle") return ShapeKind::triangle;
  if (s == "star") return ShapeKind::star;
  if (s == "qr") return ShapeKind::pseudo_qr;
  throw InvalidArgument("unknown shape kind '" + std::string(s) + "'");
}

/// Point in pixel coordinates: x = column, y = row.
struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Geometry of a synthetic shape. Which fields matter depends on `kind`:
/// circle uses center/radius, square uses top/left/side, triangle and star use
/// the polygon vertices.
struct ShapeSpec {
  ShapeKind kind = ShapeKind::circle;
  std::size_t width = 200;
  std::size_t height = 200;
  std::int64_t center_row = 100;
  std::int64_t center_col = 100;
  std::int64_t radius = 60;
  std::int64_t top = 50;
  std::int64_t left = 50;
  std::int64_t side = 100;
  std::vector<Point> vertices;
};

struct NoiseSpec {
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

struct Synthetic {
  Image image;  // clean: 1 inside the shape, 0 outside
  Mask truth;   // foreground = side 1
};

/// Regular star with `points` tips, first tip pointing up.
inline std::vector<Point> star_vertices(Point c, double outer, double inner, int points = 5) {
  std::vector<Point> out;
  for (int i = 0; i < 2 * points; ++i) {
    const double r = i % 2 == 0 ? outer : inner;
    const double a = -std::numbers::pi / 2 + i * std::numbers::pi / points;
    out.push_back({c.x + r * std::cos(a), c.y + r * std::sin(a)});
  }
  return out;
}

/// Default geometry scaled to the image: centered circle of radius 0.3 min,
/// centered square of side 0.5 min, an upright triangle and a five-point star.
inline ShapeSpec default_shape(ShapeKind kind, std::size_t width, std::size_t height) {
  ShapeSpec s;
  s.kind = kind;
  s.width = width;
  s.height = height;
  const auto w = static_cast<double>(width);
  const auto h = static_cast<double>(height);
  const double m = std::min(w, h);
  s.center_row = static_cast<std::int64_t>(height / 2);
  s.center_col = static_cast<std::int64_t>(width / 2);
  s.radius = static_cast<std::int64_t>(0.3 * m);
  s.side = static_cast<std::int64_t>(0.5 * m);
  s.top = static_cast<std::int64_t>((height - static_cast<std::size_t>(s.side)) / 2);
  s.left = static_cast<std::int64_t>((width - static_cast<std::size_t>(s.side)) / 2);
  if (kind == ShapeKind::triangle) {
    s.vertices = {{0.5 * w, 0.15 * h}, {0.15 * w, 0.85 * h}, {0.85 * w, 0.85 * h}};
  } else if (kind == ShapeKind::star) {
    s.vertices = star_vertices({0.5 * w, 0.5 * h}, 0.4 * m, 0.16 * m);
  }
  return s;
}

/// Even-odd rule at point (x, y).
inline bool inside_polygon(const std::vector<Point>& poly, double x, double y) {
  bool in = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const Point& a = poly[i];
    const Point& b = poly[j];
    if ((a.y > y) != (b.y > y)) {
      const double cross = (b.x - a.x) * (y - a.y) / (b.y - a.y) + a.x;
      if (x < cross) in = !in;
    }
  }
  return in;
}

inline Synthetic make_shape(const ShapeSpec& spec) {
  if (spec.width == 0 || spec.height == 0) throw InvalidArgument("shape image must be nonempty");
  const auto w = static_cast<std::int64_t>(spec.width);
  const auto h = static_cast<std::int64_t>(spec.height);
  Mask truth(spec.width, spec.height);
  auto paint = [&](auto&& contains) {
    for (std::int64_t r = 0; r < h; ++r) {
      for (std::int64_t c = 0; c < w; ++c) truth.set(static_cast<std::size_t>(r * w + c), contains(r, c));
    }
  };

  switch (spec.kind) {
    case ShapeKind::circle: {
      const std::int64_t cr = spec.center_row, cc = spec.center_col, rad = spec.radius;
      if (rad < 0 || cr - rad < 0 || cc - rad < 0 || cr + rad >= h || cc + rad >= w) {
        throw InvalidArgument("circle does not fit inside the image");
      }
      paint([&](std::int64_t r, std::int64_t c) { return (r - cr) * (r - cr) + (c - cc) * (c - cc) <= rad * rad; });
      break;
    }
    case ShapeKind::square: {
      if (spec.side <= 0 || spec.top < 0 || spec.left < 0 || spec.top + spec.side > h || spec.left + spec.side > w) {
        throw InvalidArgument("square does not fit inside the image");
      }
      paint([&](std::int64_t r, std::int64_t c) {
        return r >= spec.top && r < spec.top + spec.side && c >= spec.left && c < spec.left + spec.side;
      });
      break;
    }
    case ShapeKind::triangle:
    case ShapeKind::star: {
      if (spec.vertices.size() < 3) throw InvalidArgument("polygon needs at least three vertices");
      for (const Point& p : spec.vertices) {
        if (p.x < 0 || p.y < 0 || p.x > static_cast<double>(w - 1) || p.y > static_cast<double>(h - 1)) {
          throw InvalidArgument("polygon vertex outside the image");
        }
      }
      paint([&](std::int64_t r, std::int64_t c) {
        return inside_polygon(spec.vertices, static_cast<double>(c), static_cast<double>(r));
      });
      break;
    }
    case ShapeKind::pseudo_qr:
      throw InvalidArgument("use make_pseudo_qr for the pseudo-QR image");
  }

  Image img(spec.width, spec.height);
  for (std::size_t i = 0; i < truth.size(); ++i) img[i] = truth[i] ? 1.0 : 0.0;
  return {std::move(img), std::move(truth)};
}

/// `count` distinct white pixels at uniformly drawn (row, col) positions;
/// collisions are re-drawn.
inline Synthetic make_pseudo_qr(std::size_t width = 100, std::size_t height = 100, std::size_t count = 5000,
                                std::uint64_t seed = 0) {
  if (count > width * height) throw InvalidArgument("pseudo-QR count exceeds pixel total");
  Mask truth(width, height);
  RngStream rng(seed, 0x0DE5);
  std::size_t placed = 0;
  while (placed < count) {
    const auto row = rng.next_below(height);
    const auto col = rng.next_below(width);
    const std::size_t k = row * width + col;
    if (!truth[k]) {
      truth.set(k, true);
      ++placed;
    }
  }
  Image img(width, height);
  for (std::size_t i = 0; i < truth.size(); ++i) img[i] = truth[i] ? 1.0 : 0.0;
  return {std::move(img), std::move(truth)};
}

/// Adds i.i.d. N(0, sigma^2) noise; pixel i uses counter-indexed draws so the
/// result does not depend on traversal order. No clamping.
inline Image add_noise(const Image& img, const NoiseSpec& spec) {
  if (!(spec.sigma >= 0.0) || !std::isfinite(spec.sigma)) throw InvalidArgument("sigma must be nonnegative");
  Image out = img;
  if (spec.sigma == 0.0) return out;
  const CounterRng rng(spec.seed, 0x7015E);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += spec.sigma * rng.normal(i);
  return out;
}

}  // namespace mdseg

#endif  // MDSEG_SYNTHGEN_HPP
