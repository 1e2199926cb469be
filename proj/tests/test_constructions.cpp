#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "doctest.h"
#include "projpack/analysis.hpp"
#include "projpack/bounds.hpp"
#include "projpack/certificate.hpp"
#include "projpack/constructions.hpp"
#include "projpack/errors.hpp"
#include "projpack/packing_io.hpp"

using namespace projpack;
using namespace projpack::constructions;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;

TEST_CASE("simplex is an equiangular tight frame at coherence 1/d") {
  for (const Field field : {Field::real(), Field::complex()}) {
    for (int d = 2; d <= 8; ++d) {
      const UnitFrame f = simplex(d, field);
      CHECK(f.d() == d);
      CHECK(f.n() == d + 1);
      CHECK(f.field() == field);
      CHECK(coherence(f) == doctest::Approx(1.0 / d).epsilon(1e-12));
      const Certificate cert = certify(f);
      CHECK(cert.tight);
      CHECK(cert.equiangular);
      CHECK(cert.saturated == SaturatedBound::Welch);
      if (field.is_real()) CHECK(f.vectors().imag().isZero(0.0));
    }
  }
  CHECK_THROWS_AS(simplex(0, Field::real()), ValidationError);
}

TEST_CASE("maximal mutually unbiased bases for prime d") {
  for (const int d : {2, 3, 5, 7}) {
    const UnitFrame f = mub_maximal(d);
    CHECK(f.n() == d * (d + 1));
    CHECK(coherence(f) == doctest::Approx(1.0 / std::sqrt(double(d))).epsilon(1e-12));

    const AngleProfile p = angle_profile(f);
    REQUIRE(p.values.size() == 2);
    CHECK(std::abs(p.values[0]) < 1e-12);
    CHECK(p.values[1] == doctest::Approx(1.0 / d).epsilon(1e-12));
    // orthogonal pairs live inside the d+1 bases
    CHECK(p.counts[0] == (d + 1) * d * (d - 1) / 2);

    const Certificate cert = certify(f);
    CHECK(cert.tight);
    CHECK_FALSE(cert.equiangular);
    // n = d(d+1) always exceeds Z(d,C) = d^2, so these saturate the orthoplex floor
    CHECK(cert.saturated == SaturatedBound::Orthoplex);
    CHECK(bounds::classify_saturation(cert, 1e-8).kind ==
          bounds::SaturationKind::OrthoplexSaturating);
  }
  CHECK_THROWS_AS(mub_maximal(4), ValidationError);
  CHECK_THROWS_AS(mub_maximal(6), ValidationError);
  CHECK_THROWS_AS(mub_maximal(1), ValidationError);
}

TEST_CASE("naimark complement of the shipped (3,9) file is an ETF in dimension 6") {
  const UnitFrame f =
      io::load_packing_file(std::string(PROJPACK_DATA_DIR) + "/etf-3-9.txt");
  const UnitFrame g = naimark_complement(f);
  CHECK(g.d() == 6);
  CHECK(g.n() == 9);
  CHECK(coherence(g) == doctest::Approx(0.25).epsilon(1e-10));
  const Certificate cert = certify(g, CertifyProfile::numerical());
  CHECK(cert.tight);
  CHECK(cert.equiangular);
  CHECK(cert.saturated == SaturatedBound::Welch);
}

TEST_CASE("naimark complement moduli follow the gram identity") {
  // |<psi_j, psi_k>| = d |<phi_j, phi_k>| / (n - d) for unit-norm complements
  const UnitFrame f = mub_maximal(2);  // d=2, n=6, moduli {0, 1/sqrt(2)}
  const UnitFrame g = naimark_complement(f);
  CHECK(g.d() == 4);
  CHECK(coherence(g) == doctest::Approx(2.0 * (1.0 / std::sqrt(2.0)) / 4.0).epsilon(1e-12));
  CHECK(is_tight(g, 1e-8).tight);
}

TEST_CASE("naimark complement is an involution up to unitary equivalence") {
  const UnitFrame f =
      io::load_packing_file(std::string(PROJPACK_DATA_DIR) + "/etf-3-9.txt");
  const UnitFrame back = naimark_complement(naimark_complement(f));
  CHECK(back.d() == 3);
  CHECK(coherence(back) == doctest::Approx(coherence(f)).epsilon(1e-12));
  const AngleProfile pa = angle_profile(f), pb = angle_profile(back);
  REQUIRE(pa.values.size() == pb.values.size());
  for (std::size_t i = 0; i < pa.values.size(); ++i) {
    CHECK(pa.values[i] == doctest::Approx(pb.values[i]).epsilon(1e-10));
    CHECK(pa.counts[i] == pb.counts[i]);
  }
}

TEST_CASE("naimark complement rejects unusable inputs") {
  // square frame: the complement would live in dimension 0
  CHECK_THROWS_AS(naimark_complement(UnitFrame(Field::complex(), MatrixXcd::Identity(3, 3))),
                  ValidationError);
  // n < d
  CHECK_THROWS_AS(naimark_complement(UnitFrame(Field::complex(), MatrixXcd::Identity(4, 2))),
                  ApplicabilityError);
  // not tight
  MatrixXd x(2, 3);
  const double s = 1.0 / std::sqrt(2.0);
  x << 1, 0, s, 0, 1, s;
  CHECK_THROWS_AS(naimark_complement(UnitFrame::from_real(x)), ApplicabilityError);
}

TEST_CASE("five vectors in C^3 from the closed-form radicals") {
  const UnitFrame f = conjecture_c3n5();
  CHECK(f.d() == 3);
  CHECK(f.n() == 5);
  for (int j = 0; j < 5; ++j)
    CHECK(std::abs(f.vectors().col(j).norm() - 1.0) < 1e-14);

  // nine of the ten pairs share one modulus; the tenth is orthogonal
  CHECK(coherence(f) == doctest::Approx(0.43425854591066488).epsilon(1e-13));
  const std::complex<double> ip = f.vectors().col(3).dot(f.vectors().col(4));
  CHECK(std::abs(ip) < 1e-14);

  const AngleProfile p = angle_profile(f);
  REQUIRE(p.values.size() == 2);
  CHECK(p.counts[0] == 1);
  CHECK(p.counts[1] == 9);

  // not tight: this packing beats every applicable bound's equality case
  const Certificate cert = certify(f);
  CHECK_FALSE(cert.tight);
  CHECK(cert.saturated == SaturatedBound::None);
}

TEST_CASE("remove_vector drops the addressed column") {
  const UnitFrame eye(Field::complex(), MatrixXcd::Identity(3, 3));
  const UnitFrame f = remove_vector(eye, 2);
  CHECK(f.n() == 2);
  CHECK(f.vectors()(0, 0).real() == 1.0);
  CHECK(f.vectors()(2, 1).real() == 1.0);
  CHECK_THROWS_AS(remove_vector(eye, 0), ValidationError);
  CHECK_THROWS_AS(remove_vector(eye, 4), ValidationError);

  MatrixXcd two = MatrixXcd::Identity(2, 2);
  CHECK(remove_vector(UnitFrame(Field::complex(), two), 1).n() == 1);
}

TEST_CASE("best_removal finds the coherence-minimizing deletion") {
  // e1, e2, (e1+e2)/sqrt(2), e3: dropping the third vector leaves an
  // orthonormal set
  MatrixXd x(3, 4);
  const double s = 1.0 / std::sqrt(2.0);
  x << 1, 0, s, 0, 0, 1, s, 0, 0, 0, 0, 1;
  const auto [best, index] = best_removal(UnitFrame::from_real(x));
  CHECK(index == 3);
  CHECK(coherence(best) == doctest::Approx(0.0).epsilon(1e-15));

  // all removals tie on a simplex; smallest index wins
  const auto [simplex_best, simplex_index] = best_removal(simplex(3, Field::complex()));
  CHECK(simplex_index == 1);
  CHECK(coherence(simplex_best) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  MatrixXcd two = MatrixXcd::Identity(2, 2);
  CHECK_THROWS_AS(best_removal(UnitFrame(Field::complex(), two)), ValidationError);
}

TEST_CASE("removing one vector from the maximal MUB keeps the orthoplex floor") {
  const auto [best, index] = best_removal(mub_maximal(5));
  CHECK(best.n() == 29);
  CHECK(coherence(best) == doctest::Approx(1.0 / std::sqrt(5.0)).epsilon(1e-12));
}

TEST_CASE("construction notes") {
  CHECK(default_note(ConstructionKind::Simplex) == "etf");
  CHECK(default_note(ConstructionKind::MubMaximal) == "mub");
  CHECK(default_note(ConstructionKind::NaimarkComplement) == "naimark");
  CHECK(default_note(ConstructionKind::ConjectureC3N5) == "c3n5");
  CHECK(default_note(ConstructionKind::Removal) == "AUTO");
}
