#include "nvforge/strain.hpp"

#include <doctest.h>

#include <stdexcept>

#include <cmath>

using namespace nvforge;

namespace {

// Printed transformed tensor for the [-111] NV, per unit axial strain.
Eigen::Matrix3d printed_m111(double nu) {
  const double s2 = std::sqrt(2.0), s3 = std::sqrt(3.0), s6 = std::sqrt(6.0);
  Eigen::Matrix3d m;
  m << 2.0 / 9 - 7.0 / 9 * nu, 2 * s3 / 9 * (nu + 1), s2 / 9 * (nu + 1),
      2 * s3 / 9 * (nu + 1), 2.0 / 3 - nu / 3, s6 / 9 * (nu + 1),
      s2 / 9 * (nu + 1), s6 / 9 * (nu + 1), 1.0 / 9 - 8.0 / 9 * nu;
  return m;
}

// Optical detuning of Ex straight from the coupling formulas.
double oracle_ex_ghz(const Eigen::Matrix3d& e) {
  const double la1 = -1.95e6, la1p = 2.16e6, le = -0.85e6, lep = 0.02e6;
  const double ga1 = la1 * e(2, 2) + la1p * (e(0, 0) + e(1, 1));
  const double ge1 = le * (e(1, 1) - e(0, 0)) + lep * (e(0, 2) + e(2, 0));
  const double ge2 = le * (e(0, 1) + e(1, 0)) + lep * (e(1, 2) + e(2, 1));
  return ga1 + std::sqrt((ge1 + 6.3) * (ge1 + 6.3) + (ge2 + 0.15) * (ge2 + 0.15));
}

}  // namespace

TEST_CASE("[-111] transform reproduces the printed tensor") {
  for (double nu : {0.11, 0.0, 0.3}) {
    const StrainTensor nv = transform_to_nv_frame(StrainTensor::uniaxial(1.0, nu), Orientation::kM111);
    CHECK(nv.frame == StrainFrame::kNv);
    REQUIRE(nv.orientation.has_value());
    CHECK((nv.components - printed_m111(nu)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("aligned NV frame is the cantilever frame") {
  const StrainTensor c = StrainTensor::uniaxial(2e-5, 0.11);
  CHECK(transform_to_nv_frame(c, Orientation::kM1M1M1).components == c.components);
}

TEST_CASE("frame rotations are proper and put z' on the NV axis") {
  for (Orientation o : kAllOrientations) {
    const Eigen::Matrix3d r = nv_frame_rotation(o);
    CHECK((r * r.transpose() - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(r.determinant() == doctest::Approx(1.0));
  }
  // Angle between the aligned and tilted z' axes is arccos(-1/3) or arccos(1/3).
  for (Orientation o : {Orientation::kM111, Orientation::k1M11, Orientation::k11M1}) {
    const double c = nv_frame_rotation(o).row(2).dot(Eigen::Vector3d(0, 0, 1));
    CHECK(std::abs(c) == doctest::Approx(1.0 / 3.0));
  }
}

TEST_CASE("transformed tensors are symmetric and trace-preserving") {
  const StrainTensor c = StrainTensor::uniaxial(3e-4, 0.11);
  for (Orientation o : kAllOrientations) {
    const Eigen::Matrix3d e = transform_to_nv_frame(c, o).components;
    CHECK((e - e.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(e.trace() == doctest::Approx(c.components.trace()).epsilon(1e-12));
  }
}

TEST_CASE("frames are checked") {
  const StrainTensor c = StrainTensor::uniaxial(1e-5, 0.11);
  CHECK_THROWS_AS(coupling_shifts(c), std::invalid_argument);
  const StrainTensor nv = transform_to_nv_frame(c, Orientation::kM111);
  CHECK_THROWS_AS(transform_to_nv_frame(nv, Orientation::kM111), std::invalid_argument);
  Eigen::Matrix3d asym = Eigen::Matrix3d::Zero();
  asym(0, 1) = 1e-6;
  CHECK_THROWS_AS(StrainTensor::cantilever(asym), std::invalid_argument);
}

TEST_CASE("detunings match the coupling-formula oracle") {
  for (Orientation o : kAllOrientations) {
    for (double s : {0.0, 1e-6, 1e-5, 5e-4}) {
      const StrainTensor nv = transform_to_nv_frame(StrainTensor::uniaxial(s, 0.11), o);
      CHECK(detunings_for_strain(s, o).ex_ghz ==
            doctest::Approx(oracle_ex_ghz(nv.components)).epsilon(1e-12));
    }
  }
}

TEST_CASE("zero strain gives the intrinsic splitting") {
  const OpticalDetunings d = detunings_for_strain(0.0, Orientation::kM1M1M1);
  CHECK(d.ex_ghz == doctest::Approx(std::hypot(6.3, 0.15)).epsilon(1e-14));
  CHECK(d.ey_ghz == doctest::Approx(-std::hypot(6.3, 0.15)).epsilon(1e-14));
  CHECK(d.ex_ghz == doctest::Approx(6.3018).epsilon(1e-5));
}

TEST_CASE("aligned Ex shift at 1e-5 strain") {
  const double shift = detunings_for_strain(1e-5, Orientation::kM1M1M1).ex_ghz -
                       detunings_for_strain(0.0, Orientation::kM1M1M1).ex_ghz;
  // (lambda_A1 - 2 nu lambda_A1') * 1e-5, with no transverse part.
  CHECK(shift == doctest::Approx((-1.95 - 2 * 0.11 * 2.16) * 10.0).epsilon(1e-12));
  CHECK(shift == doctest::Approx(-24.25).epsilon(0.02));
}

TEST_CASE("tilted orientations are degenerate") {
  for (double s : {1e-6, 1e-5, 5e-4}) {
    const OpticalDetunings a = detunings_for_strain(s, Orientation::kM111);
    for (Orientation o : {Orientation::k1M11, Orientation::k11M1}) {
      const OpticalDetunings b = detunings_for_strain(s, o);
      CHECK(b.ex_ghz == doctest::Approx(a.ex_ghz).epsilon(1e-12));
      CHECK(b.ey_ghz == doctest::Approx(a.ey_ghz).epsilon(1e-12));
    }
  }
}

TEST_CASE("absolute frequency adds the ZPL") {
  CHECK(absolute_frequency_ghz(1.0) == doctest::Approx(470601.0));
}

TEST_CASE("strain addressable count") {
  CHECK(strain_addressable_count(1e-5) == 1865);
  CHECK(strain_addressable_count(0.0) == 0);
  CHECK_THROWS_AS(strain_addressable_count(1e-5, 0.0), std::invalid_argument);
}

TEST_CASE("cantilever bending profile") {
  CantileverGeometry g;
  g.force_n = 1e-7;
  const double w = 0.5e-6, h = 0.25e-6, l = 5e-6, e = 1100e9;
  const double inertia = w * h * h * h / 12;
  const double expected_peak = g.force_n * l * (h / 2) / (e * inertia);
  CHECK(peak_strain(g) == doctest::Approx(expected_peak).epsilon(1e-12));
  CHECK(cantilever_strain(g, 0.0, 0.125).components(2, 2) ==
        doctest::Approx(expected_peak).epsilon(1e-12));
  // Linear in (L - z) and in x, zero at the free end and on the neutral axis.
  CHECK(cantilever_strain(g, 2.5, 0.125).components(2, 2) ==
        doctest::Approx(expected_peak / 2).epsilon(1e-12));
  CHECK(cantilever_strain(g, 0.0, -0.0625).components(2, 2) ==
        doctest::Approx(-expected_peak / 2).epsilon(1e-12));
  CHECK(cantilever_strain(g, 5.0, 0.125).components(2, 2) == 0.0);
  CHECK(cantilever_strain(g, 1.0, 0.0).components(2, 2) == 0.0);
  const Eigen::Matrix3d c = cantilever_strain(g, 1.0, 0.1).components;
  CHECK(c(0, 0) == doctest::Approx(-0.11 * c(2, 2)));
  CHECK(c(1, 1) == doctest::Approx(-0.11 * c(2, 2)));
}

TEST_CASE("cantilever rejects points outside the beam") {
  CantileverGeometry g;
  CHECK_THROWS_AS(cantilever_strain(g, -0.1, 0.0), std::out_of_range);
  CHECK_THROWS_AS(cantilever_strain(g, 5.1, 0.0), std::out_of_range);
  CHECK_THROWS_AS(cantilever_strain(g, 1.0, 0.2), std::out_of_range);
}

TEST_CASE("force for a target peak strain") {
  CantileverGeometry g;
  g.force_n = force_for_peak_strain(g, 4e-4);
  CHECK(peak_strain(g) == doctest::Approx(4e-4).epsilon(1e-12));
}
