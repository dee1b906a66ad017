#pragma once

#include <string>
#include <vector>

namespace inls {

enum class CutoffKind { virial_phi, plateau_phi, frequency_chi };

std::string to_string(CutoffKind kind);

// One segment of the virial curvature spline: on [a, a + L] the second
// derivative moves from v0 to v1 along 3t^2 - 2t^3.
struct CurvatureSegment {
  double a = 0.0;
  double length = 0.0;
  double v0 = 0.0;
  double v1 = 0.0;
};

// Radial cutoff profiles.
//   virial_phi:    phi = r^2 on [0, 2], phi = 0 for r >= support(), phi'' <= 2
//   plateau_phi:   1 on [0, 1], 0 for r >= 2, smooth monotone step between
//   frequency_chi: C exp(-1/(1 - r^2)) on r < 1 in three dimensions, unit integral
class CutoffProfile {
 public:
  static CutoffProfile virial();
  static CutoffProfile plateau();
  static CutoffProfile frequency();

  CutoffKind kind() const { return kind_; }
  double inner() const;
  double support() const;

  double value(double r) const;
  double d1(double r) const;
  double d2(double r) const;
  double d3(double r) const;
  double d4(double r) const;

  // (Lap phi)' = phi''' + (N-1)(phi''/r - phi'/r^2)
  double laplacian_d1(double r, int N) const;
  // Lap^2 phi = (Lap phi)'' + (N-1)/r (Lap phi)'
  double bilaplacian(double r, int N) const;

  // chi-hat(k) for frequency_chi; chi-hat(0) = 1
  double hat(double k) const;

  // virial: c with |phi'|^2 <= c phi; plateau: max |phi'|
  double recorded_constant() const { return constant_; }
  const std::vector<CurvatureSegment>& segments() const { return segments_; }
  double normalisation() const { return norm_; }

 private:
  CutoffKind kind_ = CutoffKind::virial_phi;
  std::vector<CurvatureSegment> segments_;
  std::vector<double> seg_phi_;   // phi at each segment start
  std::vector<double> seg_dphi_;  // phi' at each segment start
  double constant_ = 0.0;
  double norm_ = 1.0;
  std::vector<double> hat_table_;
  double hat_step_ = 0.0;
  int locate(double r) const;
};

struct CutoffCertificate {
  CutoffKind kind = CutoffKind::virial_phi;
  int samples = 0;
  double lo = 0.0;
  double hi = 0.0;
  double min_value = 0.0;
  double max_value = 0.0;
  double max_d2 = 0.0;
  double max_ratio = 0.0;  // virial: max |phi'|^2 / phi
  double max_abs_d1 = 0.0;
  double inner_error = 0.0;  // max deviation from the inner formula
  double outer_max = 0.0;    // max |phi| at and beyond the support edge
  double integral = 0.0;     // chi: 4 pi int chi r^2 dr
  bool ok = false;
};

// Dense sampling on [0, support] (plus the outer tail) of every stated property.
CutoffCertificate certify(const CutoffProfile& phi, int samples = 100000);
std::string to_text(const CutoffCertificate& c);

}  // namespace inls
