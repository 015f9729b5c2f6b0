#include "lqcd/geometry.hpp"

#include <limits>
#include <sstream>

#include "lqcd/errors.hpp"

namespace lqcd {

namespace {

const char* axis_name(int axis) {
  static constexpr const char* names[kDims] = {"t", "x", "y", "z"};
  return names[axis];
}

}  // namespace

std::size_t LatticeDims::volume() const {
  return static_cast<std::size_t>(nt) * static_cast<std::size_t>(nx) *
         static_cast<std::size_t>(ny) * static_cast<std::size_t>(nz);
}

std::string LatticeDims::to_string() const {
  std::ostringstream os;
  os << nt << ',' << nx << ',' << ny << ',' << nz;
  return os.str();
}

void validate(const LatticeDims& dims) {
  std::size_t volume = 1;
  for (int axis = 0; axis < kDims; ++axis) {
    const int L = dims.extent(axis);
    if (L < 2) {
      throw GeometryError("extent along axis " + std::string(axis_name(axis)) + " is " +
                          std::to_string(L) + ", must be >= 2");
    }
    const auto ext = static_cast<std::size_t>(L);
    // keep room for the neighbor table (8 entries per site)
    if (volume > std::numeric_limits<std::size_t>::max() / (ext * kDirections)) {
      throw GeometryError("lattice volume overflows the index range");
    }
    volume *= ext;
  }
}

LatticeDims parse_dims(const std::string& text) {
  std::array<int, kDims> v{};
  std::size_t pos = 0;
  for (int axis = 0; axis < kDims; ++axis) {
    if (pos > text.size()) throw GeometryError("bad lattice dims '" + text + "'");
    std::size_t end = text.find_first_of(",xX", pos);
    if (axis == kDims - 1) {
      if (end != std::string::npos) throw GeometryError("bad lattice dims '" + text + "'");
      end = text.size();
    } else if (end == std::string::npos) {
      throw GeometryError("bad lattice dims '" + text + "' (expected T,X,Y,Z)");
    }
    const std::string field = text.substr(pos, end - pos);
    std::size_t used = 0;
    int value = 0;
    try {
      value = std::stoi(field, &used);
    } catch (const std::exception&) {
      throw GeometryError("bad lattice dims '" + text + "'");
    }
    if (used != field.size()) throw GeometryError("bad lattice dims '" + text + "'");
    v[axis] = value;
    pos = end + 1;
  }
  LatticeDims dims{v[0], v[1], v[2], v[3]};
  validate(dims);
  return dims;
}

SiteIndex index_of(const LatticeDims& dims, const Coords& c) {
  SiteIndex n = 0;
  for (int axis = 0; axis < kDims; ++axis) {
    const int L = dims.extent(axis);
    if (c[axis] < 0 || c[axis] >= L) {
      throw GeometryError("coordinate " + std::to_string(c[axis]) + " out of range [0, " +
                          std::to_string(L) + ") on axis " + axis_name(axis));
    }
    n = n * static_cast<SiteIndex>(L) + static_cast<SiteIndex>(c[axis]);
  }
  return n;
}

Coords coords_of(const LatticeDims& dims, SiteIndex n) {
  if (n >= dims.volume()) {
    throw GeometryError("site index " + std::to_string(n) + " out of range");
  }
  Coords c{};
  for (int axis = kDims - 1; axis >= 0; --axis) {
    const auto L = static_cast<SiteIndex>(dims.extent(axis));
    c[axis] = static_cast<int>(n % L);
    n /= L;
  }
  return c;
}

SiteIndex neighbor(const LatticeDims& dims, SiteIndex n, Direction d) {
  Coords c = coords_of(dims, n);
  const int L = dims.extent(d.axis);
  c[d.axis] = d.is_forward() ? (c[d.axis] + 1) % L : (c[d.axis] + L - 1) % L;
  return index_of(dims, c);
}

Geometry::Geometry(const LatticeDims& dims) : dims_(dims), volume_(0) {
  validate(dims);
  volume_ = dims.volume();
  neighbors_.resize(volume_ * kDirections);
  for (SiteIndex n = 0; n < volume_; ++n) {
    for (const Direction d : all_directions()) {
      neighbors_[n * kDirections + static_cast<std::size_t>(d.index())] =
          lqcd::neighbor(dims_, n, d);
    }
  }
}

GeometryPtr make_geometry(const LatticeDims& dims) { return std::make_shared<const Geometry>(dims); }

void require_same_geometry(const Geometry& a, const Geometry& b, const char* what) {
  if (!(a == b)) {
    throw GeometryError(std::string(what) + ": geometry mismatch (" + a.dims().to_string() +
                        " vs " + b.dims().to_string() + ")");
  }
}

}  // namespace lqcd
