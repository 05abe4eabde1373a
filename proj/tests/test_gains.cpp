#include "lpctrl/gains.hpp"
#include "lpctrl/satellite.hpp"

#include <doctest.h>

#include <random>

using namespace lpctrl;

namespace {

LinearMap row3(double a, double b, double c, Space from, Space to) {
  Mat m(1, 3);
  m << a, b, c;
  return LinearMap::dense(from, to, m);
}

KaluzaKlein sat_kk() { return satellite_kaluza_klein(SatelliteParams{}); }

GainSet sat_gains(double k, double G) {
  SatelliteParams p;
  GainSet g;
  g.C = row3(0, 0, k * p.i3 / p.I3, Space::DStar, Space::GStar);
  g.G = LinearMap::diagonal(Space::GStar, Space::GStar, Vec::Constant(1, G));
  return g;
}

}  // namespace

TEST_CASE("controlled metric of the default satellite gains") {
  KaluzaKlein kk = sat_kk();
  ControlledMetric cm = controlled_metric(kk, sat_gains(2.0, 1.0).C);
  CHECK(cm.admissible);
  Vec diag = cm.muC.matrix().diagonal();
  CHECK(diag(0) == doctest::Approx(1.0));
  CHECK(diag(1) == doctest::Approx(2.0));
  CHECK(diag(2) == doctest::Approx(1.8));  // (1 + k i3/I3)^-1 I3
  CHECK(cm.muC.matrix().cwiseAbs().sum() ==
        doctest::Approx(diag.cwiseAbs().sum()));  // stays diagonal
}

TEST_CASE("zero gain returns the free metric") {
  KaluzaKlein kk = sat_kk();
  ControlledMetric cm = controlled_metric(kk, sat_gains(0.0, 1.0).C);
  CHECK(cm.admissible);
  CHECK((cm.muC.matrix() - kk.mu0().matrix()).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("the singular gain is rejected") {
  SatelliteParams p;
  KaluzaKlein kk = sat_kk();
  // k = -I3/i3 zeroes the third diagonal entry of 1 + A0* C
  CHECK_THROWS_AS(controlled_metric(kk, sat_gains(-p.I3 / p.i3, 1.0).C),
                  NotInvertibleError);
}

TEST_CASE("matching succeeds for the matched satellite gains") {
  SatelliteParams p;
  KaluzaKlein kk = sat_kk();
  double G = 1.0 + p.k * (p.i3 + p.I3) / p.I3;
  CHECK(G == doctest::Approx(11.0 / 3.0));
  MatchOutcome mo = match_structure(kk, sat_gains(p.k, G));
  REQUIRE(mo.ok);

  // A_C = A0 + I0^-1 C mu_C; at the default parameters this is (11/5) e3^T.
  // (The definitional value; it is the one satisfying the matching identities
  // to machine precision.)
  Mat AC = mo.structure.AC.matrix();
  CHECK(AC(0, 0) == doctest::Approx(0.0));
  CHECK(AC(0, 1) == doctest::Approx(0.0));
  CHECK(AC(0, 2) == doctest::Approx(11.0 / 5.0));
  CHECK(mo.structure.IC.matrix()(0, 0) == doctest::Approx(5.0 / 11.0));

  auto [lp1, lp2] = check_lp_conditions(kk, mo.structure);
  CHECK(lp1 <= 1e-12);
  CHECK(lp2 <= 1e-12);
}

TEST_CASE("identity gains match onto the free structure") {
  KaluzaKlein kk = sat_kk();
  MatchOutcome mo = match_structure(kk, sat_gains(0.0, 1.0));
  REQUIRE(mo.ok);
  CHECK((mo.structure.muC.matrix() - kk.mu0().matrix()).cwiseAbs().maxCoeff() <=
        1e-14);
  CHECK((mo.structure.IC.matrix() - kk.I0().matrix()).cwiseAbs().maxCoeff() <=
        1e-14);
  CHECK((mo.structure.AC.matrix() - kk.A0().matrix()).cwiseAbs().maxCoeff() <=
        1e-14);
  auto [lp1, lp2] = check_lp_conditions(kk, mo.structure);
  CHECK(lp1 == 0.0);
  CHECK(lp2 == 0.0);
}

TEST_CASE("wrong G is reported against the matching bullet") {
  MatchOutcome mo = match_structure(sat_kk(), sat_gains(2.0, 1.0));
  CHECK_FALSE(mo.ok);
  CHECK(mo.violated_bullet == "A0* G = mu0 mu_C^-1 A_C*");
  CHECK(mo.residual > 1e-3);
}

TEST_CASE("gains are recovered from the matched structure") {
  SatelliteParams p;
  KaluzaKlein kk = sat_kk();
  double G = 1.0 + p.k * (p.i3 + p.I3) / p.I3;
  MatchOutcome mo = match_structure(kk, sat_gains(p.k, G));
  REQUIRE(mo.ok);
  GainSet rec = gain_from_structure(kk, mo.structure);
  CHECK(rec.C.matrix()(0, 2) == doctest::Approx(2.0 / 3.0));
  CHECK(rec.G.matrix()(0, 0) == doctest::Approx(11.0 / 3.0));
}

TEST_CASE("round trip on random symmetric positive structures") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> d(0.0, 1.0);
  auto randm = [&](int r, int c) {
    Mat m(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) m(i, j) = d(rng);
    return m;
  };
  for (int trial = 0; trial < 20; ++trial) {
    const int nd = 4, ng = 2;
    Mat a = randm(nd, nd), b = randm(ng, ng), ic = randm(ng, ng);
    KaluzaKlein kk(AlgebraDescriptor::abelian(nd), AlgebraDescriptor::abelian(ng),
                   LinearMap::dense(Space::D, Space::DStar,
                                    a.transpose() * a + nd * Mat::Identity(nd, nd)),
                   LinearMap::dense(Space::G, Space::GStar,
                                    b.transpose() * b + ng * Mat::Identity(ng, ng)),
                   LinearMap::dense(Space::D, Space::G, randm(ng, nd)));
    LinearMap IC = LinearMap::dense(
        Space::G, Space::GStar,
        kk.I0().matrix() + ic.transpose() * ic + 0.5 * Mat::Identity(ng, ng));
    LinearMap AC = IC.inverse().compose(kk.I0()).compose(kk.A0());
    Mat muc = kk.mu0().matrix() +
              kk.A0_adj().compose(kk.I0()).compose(kk.A0()).matrix() -
              AC.adjoint().compose(IC).compose(AC).matrix();
    MatchedStructure ms{LinearMap::dense(Space::D, Space::DStar, muc), IC, AC};

    GainSet gains = gain_from_structure(kk, ms);
    MatchOutcome mo = match_structure(kk, gains);
    REQUIRE(mo.ok);
    CHECK(operator_norm(mo.structure.muC.subtract(ms.muC)) <= 1e-10);
    CHECK(operator_norm(mo.structure.IC.subtract(ms.IC)) <= 1e-10);
    CHECK(operator_norm(mo.structure.AC.subtract(ms.AC)) <= 1e-10);
  }
}

TEST_CASE("perturbing the connection shows up as the first matching residual") {
  SatelliteParams p;
  KaluzaKlein kk = sat_kk();
  double G = 1.0 + p.k * (p.i3 + p.I3) / p.I3;
  MatchOutcome mo = match_structure(kk, sat_gains(p.k, G));
  REQUIRE(mo.ok);
  Mat delta(1, 3);
  delta << 0.0, 1e-3, 0.0;
  MatchedStructure bad = mo.structure;
  bad.AC = bad.AC.add(LinearMap::dense(Space::D, Space::G, delta));
  auto [lp1, lp2] = check_lp_conditions(kk, bad);
  // LP1 residual equals || I_C * perturbation ||.
  CHECK(lp1 == doctest::Approx((5.0 / 11.0) * 1e-3).epsilon(1e-10));
  CHECK(lp2 > 0.0);
}

TEST_CASE("local-coordinate data of the matched satellite") {
  SatelliteParams p;
  KaluzaKlein kk = sat_kk();
  double G = 1.0 + p.k * (p.i3 + p.I3) / p.I3;
  MatchOutcome mo = match_structure(kk, sat_gains(p.k, G));
  REQUIRE(mo.ok);
  EPData ep = ep_from_lp(kk, mo.structure);
  // tau = A_C - A0 = (6/5) e3^T, rho = I_C, sigma = (I0^-1 - rho^-1)^-1.
  CHECK(ep.tau.matrix()(0, 2) == doctest::Approx(6.0 / 5.0));
  CHECK(ep.rho.matrix()(0, 0) == doctest::Approx(5.0 / 11.0));
  CHECK(ep.sigma.matrix()(0, 0) == doctest::Approx(-5.0 / 6.0));

  EPResiduals er = ep_residuals(kk, mo.structure, ep);
  CHECK(er.first <= 1e-12);
  CHECK(er.second <= 1e-12);
  CHECK(er.metric <= 1e-12);

  MatchedStructure back = lp_from_ep(kk, ep);
  CHECK(operator_norm(back.muC.subtract(mo.structure.muC)) <= 1e-12);
  CHECK(operator_norm(back.IC.subtract(mo.structure.IC)) <= 1e-12);
  CHECK(operator_norm(back.AC.subtract(mo.structure.AC)) <= 1e-12);
}

TEST_CASE("identity structure has no finite sigma") {
  KaluzaKlein kk = sat_kk();
  MatchOutcome mo = match_structure(kk, sat_gains(0.0, 1.0));
  REQUIRE(mo.ok);
  // tau = 0 and rho = I0; the sigma leg degenerates (I0^-1 - rho^-1 = 0).
  CHECK_THROWS_AS(ep_from_lp(kk, mo.structure), NotInvertibleError);
}
