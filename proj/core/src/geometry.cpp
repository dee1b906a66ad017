#include "inls/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "inls/error.hpp"
#include "inls/params.hpp"

namespace inls {

struct Geometry::Data {
  GeometryKind kind = GeometryKind::radial;
  int dim = 3;
  double extent = 1.0;
  int resolution = 1;
  double stretch = 0.0;

  std::vector<double> radius;
  std::vector<double> weight;
  std::vector<double> face_radius;
  std::vector<double> face_gap;
  std::vector<double> face_area;
  std::vector<double> cell_lower;

  double spacing = 0.0;
  std::vector<double> axis;
  std::vector<double> wavenumber;
  std::vector<double> sorted_radius;
  std::vector<std::uint32_t> radial_order;
};

std::string to_string(GeometryKind kind) {
  return kind == GeometryKind::radial ? "radial" : "cartesian3d";
}

GeometryKind geometry_kind_from_string(const std::string& name) {
  if (name == "radial") return GeometryKind::radial;
  if (name == "cartesian3d") return GeometryKind::cartesian3d;
  throw InvalidArgument("unknown geometry kind '" + name + "' (expected radial or cartesian3d)");
}

namespace {

std::shared_ptr<const Geometry::Data> build_radial(int N, double extent, int n, double alpha) {
  if (N < 3) throw InvalidArgument("radial geometry: N must be >= 3");
  if (!(extent > 0.0) || !std::isfinite(extent)) throw InvalidArgument("radial geometry: extent must be > 0");
  if (n < 4) throw InvalidArgument("radial geometry: resolution must be >= 4");
  if (!(alpha >= 0.0) || !std::isfinite(alpha) || alpha > 40.0) {
    throw InvalidArgument("radial geometry: stretch must lie in [0, 40]");
  }
  auto d = std::make_shared<Geometry::Data>();
  d->kind = GeometryKind::radial;
  d->dim = N;
  d->extent = extent;
  d->resolution = n;
  d->stretch = alpha;

  const double omega = unit_sphere_area(N);
  const double ds = 1.0 / n;
  const double ell = alpha > 0.0 ? extent / std::sinh(alpha) : extent;
  auto map = [&](double s) { return alpha > 0.0 ? ell * std::sinh(alpha * s) : extent * s; };
  auto jac = [&](double s) { return alpha > 0.0 ? ell * alpha * std::cosh(alpha * s) : extent; };

  const auto un = static_cast<std::size_t>(n);
  d->radius.resize(un);
  d->weight.resize(un);
  d->face_radius.resize(un);
  d->face_gap.resize(un);
  d->face_area.resize(un);
  d->cell_lower.resize(un);
  for (std::size_t j = 0; j < un; ++j) {
    const double s = (static_cast<double>(j) + 0.5) * ds;
    const double r = map(s);
    d->radius[j] = r;
    d->weight[j] = omega * std::pow(r, N - 1) * jac(s) * ds;
    d->face_radius[j] = j + 1 == un ? extent : map(static_cast<double>(j + 1) * ds);
    d->cell_lower[j] = j == 0 ? 0.0 : map(static_cast<double>(j) * ds);
  }
  for (std::size_t j = 0; j < un; ++j) {
    const double rf = d->face_radius[j];
    d->face_gap[j] = j + 1 < un ? d->radius[j + 1] - d->radius[j] : 2.0 * (rf - d->radius[j]);
    d->face_area[j] = omega * std::pow(rf, N - 1);
  }
  return d;
}

std::shared_ptr<const Geometry::Data> build_cartesian(double L, int n) {
  if (!(L > 0.0) || !std::isfinite(L)) throw InvalidArgument("cartesian3d geometry: half-length must be > 0");
  if (n < 4 || n % 2 != 0) throw InvalidArgument("cartesian3d geometry: resolution must be even and >= 4");
  if (n > 512) throw InvalidArgument("cartesian3d geometry: resolution above 512 is not supported");
  auto d = std::make_shared<Geometry::Data>();
  d->kind = GeometryKind::cartesian3d;
  d->dim = 3;
  d->extent = L;
  d->resolution = n;
  const double h = 2.0 * L / n;
  d->spacing = h;
  const auto un = static_cast<std::size_t>(n);
  d->axis.resize(un);
  d->wavenumber.resize(un);
  const double dk = std::numbers::pi / L;
  for (std::size_t i = 0; i < un; ++i) {
    d->axis[i] = -L + (static_cast<double>(i) + 0.5) * h;
    const long m = static_cast<long>(i) < n / 2 ? static_cast<long>(i) : static_cast<long>(i) - n;
    d->wavenumber[i] = dk * static_cast<double>(m);
  }
  const std::size_t total = un * un * un;
  d->radius.resize(total);
  d->weight.assign(total, h * h * h);
  std::size_t q = 0;
  for (std::size_t i = 0; i < un; ++i) {
    for (std::size_t j = 0; j < un; ++j) {
      for (std::size_t k = 0; k < un; ++k) {
        const double x = d->axis[i], y = d->axis[j], z = d->axis[k];
        d->radius[q++] = std::sqrt(x * x + y * y + z * z);
      }
    }
  }
  d->radial_order.resize(total);
  for (std::size_t i = 0; i < total; ++i) d->radial_order[i] = static_cast<std::uint32_t>(i);
  std::stable_sort(d->radial_order.begin(), d->radial_order.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return d->radius[a] < d->radius[b]; });
  d->sorted_radius.resize(total);
  for (std::size_t i = 0; i < total; ++i) d->sorted_radius[i] = d->radius[d->radial_order[i]];
  return d;
}

}  // namespace

Geometry::Geometry() : Geometry(build_radial(3, 10.0, 256, 0.0)) {}

Geometry::Geometry(std::shared_ptr<const Data> data) : data_(std::move(data)) {}

Geometry Geometry::radial(int N, double extent, int resolution, double stretch) {
  return Geometry(build_radial(N, extent, resolution, stretch));
}

Geometry Geometry::cartesian3d(double half_length, int resolution) {
  return Geometry(build_cartesian(half_length, resolution));
}

GeometryKind Geometry::kind() const { return data_->kind; }
int Geometry::dim() const { return data_->dim; }
double Geometry::extent() const { return data_->extent; }
int Geometry::resolution() const { return data_->resolution; }
double Geometry::stretch() const { return data_->stretch; }
std::size_t Geometry::size() const { return data_->radius.size(); }
const std::vector<double>& Geometry::radius() const { return data_->radius; }
const std::vector<double>& Geometry::weight() const { return data_->weight; }

namespace {
void require_radial(const Geometry::Data& d, const char* what) {
  if (d.kind != GeometryKind::radial) throw Unsupported(std::string(what) + " is only defined on radial meshes");
}
void require_cartesian(const Geometry::Data& d, const char* what) {
  if (d.kind != GeometryKind::cartesian3d) throw Unsupported(std::string(what) + " is only defined on cartesian3d grids");
}
}  // namespace

const std::vector<double>& Geometry::face_radius() const {
  require_radial(*data_, "face_radius");
  return data_->face_radius;
}
const std::vector<double>& Geometry::face_gap() const {
  require_radial(*data_, "face_gap");
  return data_->face_gap;
}
const std::vector<double>& Geometry::face_area() const {
  require_radial(*data_, "face_area");
  return data_->face_area;
}
const std::vector<double>& Geometry::cell_lower() const {
  require_radial(*data_, "cell_lower");
  return data_->cell_lower;
}
double Geometry::spacing() const {
  require_cartesian(*data_, "spacing");
  return data_->spacing;
}
const std::vector<double>& Geometry::axis() const {
  require_cartesian(*data_, "axis");
  return data_->axis;
}
const std::vector<double>& Geometry::wavenumber() const {
  require_cartesian(*data_, "wavenumber");
  return data_->wavenumber;
}

const std::vector<std::uint32_t>& Geometry::radial_order() const {
  require_cartesian(*data_, "radial_order");
  return data_->radial_order;
}
const std::vector<double>& Geometry::sorted_radius() const {
  require_cartesian(*data_, "sorted_radius");
  return data_->sorted_radius;
}

double Geometry::min_radius() const {
  return is_radial() ? data_->radius.front() : data_->sorted_radius.front();
}

std::size_t Geometry::count_within(double r) const {
  const auto& v = is_radial() ? data_->radius : data_->sorted_radius;
  return static_cast<std::size_t>(std::upper_bound(v.begin(), v.end(), r) - v.begin());
}

bool Geometry::operator==(const Geometry& o) const {
  if (data_ == o.data_) return true;
  return data_->kind == o.data_->kind && data_->dim == o.data_->dim && data_->extent == o.data_->extent &&
         data_->resolution == o.data_->resolution && data_->stretch == o.data_->stretch;
}

std::string Geometry::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << to_string(kind()) << "(dim=" << dim() << ", extent=" << extent() << ", resolution=" << resolution();
  if (is_radial()) os << ", stretch=" << stretch();
  os << ")";
  return os.str();
}

}  // namespace inls
