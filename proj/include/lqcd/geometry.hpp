#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace lqcd {

inline constexpr int kDims = 4;
inline constexpr int kDirections = 2 * kDims;

// Extents per axis; axis 0 is time. Every extent must be >= 2.
struct LatticeDims {
  int nt = 0;
  int nx = 0;
  int ny = 0;
  int nz = 0;

  constexpr int extent(int axis) const {
    switch (axis) {
      case 0: return nt;
      case 1: return nx;
      case 2: return ny;
      default: return nz;
    }
  }
  std::size_t volume() const;
  std::string to_string() const;  // "T,X,Y,Z"

  friend bool operator==(const LatticeDims&, const LatticeDims&) = default;
};

// Throws GeometryError on extents < 2 or a volume that overflows size_t.
void validate(const LatticeDims& dims);

// Parses "T,X,Y,Z" (also accepts 'x' as separator).
LatticeDims parse_dims(const std::string& text);

using SiteIndex = std::size_t;
using Coords = std::array<int, kDims>;

enum class Orientation : std::uint8_t { forward, backward };

struct Direction {
  int axis = 0;
  Orientation orientation = Orientation::forward;

  constexpr bool is_forward() const { return orientation == Orientation::forward; }
  // 0..7: 2*axis + (backward ? 1 : 0)
  constexpr int index() const { return 2 * axis + (is_forward() ? 0 : 1); }
  static constexpr Direction from_index(int i) {
    return {i / 2, (i % 2) == 0 ? Orientation::forward : Orientation::backward};
  }
  constexpr Direction reversed() const {
    return {axis, is_forward() ? Orientation::backward : Orientation::forward};
  }
  friend constexpr bool operator==(const Direction&, const Direction&) = default;
};

inline constexpr std::array<Direction, kDirections> all_directions() {
  std::array<Direction, kDirections> out{};
  for (int i = 0; i < kDirections; ++i) out[i] = Direction::from_index(i);
  return out;
}

// Lexicographic with t slowest and z fastest.
SiteIndex index_of(const LatticeDims& dims, const Coords& coords);
Coords coords_of(const LatticeDims& dims, SiteIndex n);
SiteIndex neighbor(const LatticeDims& dims, SiteIndex n, Direction d);

// Immutable lattice descriptor with a precomputed periodic neighbor table.
class Geometry {
 public:
  explicit Geometry(const LatticeDims& dims);

  const LatticeDims& dims() const { return dims_; }
  std::size_t volume() const { return volume_; }

  SiteIndex index_of(const Coords& c) const { return lqcd::index_of(dims_, c); }
  Coords coords_of(SiteIndex n) const { return lqcd::coords_of(dims_, n); }
  SiteIndex neighbor(SiteIndex n, Direction d) const {
    return neighbors_[n * kDirections + static_cast<std::size_t>(d.index())];
  }

  friend bool operator==(const Geometry& a, const Geometry& b) { return a.dims_ == b.dims_; }

 private:
  LatticeDims dims_;
  std::size_t volume_;
  std::vector<SiteIndex> neighbors_;
};

using GeometryPtr = std::shared_ptr<const Geometry>;

GeometryPtr make_geometry(const LatticeDims& dims);

// Throws GeometryError unless both descriptors describe the same lattice.
void require_same_geometry(const Geometry& a, const Geometry& b, const char* what);

}  // namespace lqcd
