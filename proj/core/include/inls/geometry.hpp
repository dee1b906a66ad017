#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace inls {

enum class GeometryKind { radial, cartesian3d };

std::string to_string(GeometryKind kind);
GeometryKind geometry_kind_from_string(const std::string& name);

// Sample layout plus the quadrature data every functional needs. Radial
// samples sit at cell centres r_j = r(s_j), s_j = (j + 1/2)/n, with
// r(s) = l sinh(alpha s), l = extent / sinh(alpha); alpha = 0 gives the
// uniform mesh r_j = (j + 1/2) h. Cartesian grids are periodic boxes
// [-L, L)^3 with samples at cell centres, so the origin is a cell corner.
class Geometry {
 public:
  Geometry();

  static Geometry radial(int N, double extent, int resolution, double stretch = 0.0);
  static Geometry cartesian3d(double half_length, int resolution);

  GeometryKind kind() const;
  bool is_radial() const { return kind() == GeometryKind::radial; }
  int dim() const;
  double extent() const;
  int resolution() const;
  double stretch() const;
  bool origin_offset() const { return true; }
  std::size_t size() const;

  const std::vector<double>& radius() const;
  const std::vector<double>& weight() const;

  // radial only; face j separates samples j and j+1, the last face is the
  // outer boundary where a zero ghost value sits at mirrored distance
  const std::vector<double>& face_radius() const;
  const std::vector<double>& face_gap() const;
  const std::vector<double>& face_area() const;
  const std::vector<double>& cell_lower() const;

  // cartesian only
  double spacing() const;
  const std::vector<double>& axis() const;
  const std::vector<double>& wavenumber() const;
  std::size_t index(int i, int j, int k) const {
    const std::size_t n = static_cast<std::size_t>(resolution());
    return (static_cast<std::size_t>(i) * n + static_cast<std::size_t>(j)) * n +
           static_cast<std::size_t>(k);
  }

  // cartesian only: sample indices sorted by |x|, and the sorted radii
  const std::vector<std::uint32_t>& radial_order() const;
  const std::vector<double>& sorted_radius() const;

  double min_radius() const;
  // number of samples with |x| below r
  std::size_t count_within(double r) const;

  bool operator==(const Geometry& other) const;
  bool operator!=(const Geometry& other) const { return !(*this == other); }
  std::string describe() const;

  struct Data;

 private:
  explicit Geometry(std::shared_ptr<const Data> data);
  std::shared_ptr<const Data> data_;
};

}  // namespace inls
