#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "gearmap/error.hpp"
#include "gearmap/ode.hpp"

using namespace gearmap;

namespace {

constexpr double kPi = std::numbers::pi;

bool close(cplx a, cplx b, double tol) { return std::abs(a - b) <= tol; }

Jet2 fd_jet(const std::function<cplx(cplx)>& f, cplx z, double h = 1e-4) {
  const cplx fp = f(z + h), fm = f(z - h), f0 = f(z);
  return {f0, (fp - fm) / (2 * h), (fp - 2.0 * f0 + fm) / (h * h)};
}

MobiusMap random_mobius(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto c = [&] { return cplx(u(rng), u(rng)); };
  return {c() + 2.0, c(), 0.3 * c(), c() + 2.0};
}

}  // namespace

TEST_CASE("zero potential gives linear solutions") {
  const Coefficient zero = [](cplx) { return cplx(0.0); };
  const OdeBasis b = integrate_basis(zero, {0.0, 1.0}, {1.0, 0.0}, {0.0, 1.0});
  CHECK(close(b.y1.value, 1.0, 1e-13));
  CHECK(close(b.y1.deriv, 0.0, 1e-13));
  CHECK(close(b.y2.value, 1.0, 1e-13));
  CHECK(close(b.y2.deriv, 1.0, 1e-13));
  const Jet2 j = jet_of_quotient(b);
  CHECK(close(j.value, 1.0, 1e-12));
  CHECK(close(j.d1, 1.0, 1e-12));
  CHECK(close(j.d2, 0.0, 1e-12));
}

TEST_CASE("harmonic oscillator quarter period") {
  const Coefficient two = [](cplx) { return cplx(2.0); };
  const OdeBasis b = integrate_basis(two, {0.0, kPi / 2}, {1.0, 0.0}, {0.0, 1.0});
  CHECK(close(b.y1.value, 0.0, 1e-9));
  CHECK(close(b.y2.value, 1.0, 1e-9));
  CHECK(std::abs(b.wronskian() - 1.0) <= 1e-9);
}

TEST_CASE("complex path direction is respected") {
  // 2y'' + 2y = 0 along [0, i]: y2 = sin z, so y2(i) = i sinh 1.
  const Coefficient two = [](cplx) { return cplx(2.0); };
  const OdeBasis b = integrate_basis(two, {0.0, cplx(0, 1)}, {1.0, 0.0}, {0.0, 1.0});
  CHECK(close(b.y2.value, cplx(0, std::sinh(1.0)), 1e-9));
  CHECK(close(b.y1.value, std::cosh(1.0), 1e-9));
}

TEST_CASE("halving the tolerance at least halves the error") {
  const Coefficient two = [](cplx) { return cplx(2.0); };
  for (double tol : {1e-5, 1e-6, 1e-7, 1e-8}) {
    OdeOptions a;
    a.tol = tol;
    OdeOptions b = a;
    b.tol = tol / 2;
    const OdeBasis ra = integrate_basis(two, {0.0, kPi / 2}, {1.0, 0.0}, {0.0, 1.0}, a);
    const OdeBasis rb = integrate_basis(two, {0.0, kPi / 2}, {1.0, 0.0}, {0.0, 1.0}, b);
    const double ea = std::abs(ra.y1.value) + std::abs(ra.y2.value - 1.0);
    const double eb = std::abs(rb.y1.value) + std::abs(rb.y2.value - 1.0);
    CAPTURE(tol);
    CHECK(eb * 2.0 <= ea);
  }
}

TEST_CASE("quotient jet of cos/sin pair") {
  const Coefficient two = [](cplx) { return cplx(2.0); };
  const OdeBasis b = integrate_basis(two, {0.0, kPi / 4}, {1.0, 0.0}, {0.0, 1.0});
  const Jet2 j = jet_of_quotient(b);
  CHECK(close(j.value, 1.0, 1e-9));
  CHECK(close(j.d1, 2.0, 1e-9));
  // tan'' = 2 sec^2 tan = 4 at pi/4.
  CHECK(close(j.d2, 4.0, 1e-8));
}

TEST_CASE("quotient jet matches finite differences of the traced quotient") {
  const Coefficient coeff = [](cplx z) { return 1.0 + z * z / (1.0 + 0.5 * z); };
  const PathSpec path{0.0, cplx(0.3, 0.6)};
  const Jet2 j = jet_of_quotient(integrate_basis(coeff, path, {1.0, 0.0}, {0.0, 1.0}));
  auto quotient = [&](cplx z) {
    const OdeBasis b = integrate_basis(coeff, {0.0, z}, {1.0, 0.0}, {0.0, 1.0}, {1e-13});
    return b.y2.value / b.y1.value;
  };
  const Jet2 fd = fd_jet(quotient, path.end, 1e-3);
  CHECK(close(j.value, fd.value, 1e-10));
  CHECK(close(j.d1, fd.d1, 1e-6));
  CHECK(close(j.d2, fd.d2, 1e-5));
}

TEST_CASE("trace samples agree with separate integrations") {
  const Coefficient coeff = [](cplx z) { return 3.0 * z; };
  const PathSpec path{0.0, cplx(0.0, 1.0)};
  const std::vector<double> fr{0.0, 0.25, 0.5, 1.0};
  const auto tr = trace_basis(coeff, path, {1.0, 0.0}, {0.0, 1.0}, fr);
  REQUIRE(tr.size() == 4);
  CHECK(close(tr[0].y1.value, 1.0, 0.0));
  for (std::size_t k = 1; k < fr.size(); ++k) {
    const OdeBasis b = integrate_basis(coeff, {0.0, path.at(fr[k])}, {1.0, 0.0}, {0.0, 1.0});
    CHECK(close(tr[k].y2.value, b.y2.value, 1e-9));
    CHECK(close(tr[k].y1.deriv, b.y1.deriv, 1e-9));
  }
}

TEST_CASE("pole on path is reported") {
  const Coefficient c = [](cplx z) { return 1.0 / (z - 0.5); };
  CHECK_THROWS_AS(integrate_basis(c, {0.0, 1.0}, {1.0, 0.0}, {0.0, 1.0}), Error);
  try {
    integrate_basis(c, {0.0, 1.0}, {1.0, 0.0}, {0.0, 1.0});
  } catch (const Error& e) {
    CAPTURE(std::string(e.what()));
    CHECK(e.code() == ErrorCode::PoleOnPath);
  }
  const Coefficient nan = [](cplx z) { return z.real() > 0.3 ? cplx(NAN) : cplx(1.0); };
  try {
    integrate_basis(nan, {0.0, 1.0}, {1.0, 0.0}, {0.0, 1.0});
    FAIL("expected failure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PoleOnPath);
  }
}

TEST_CASE("vanishing first solution is detected") {
  OdeBasis b{{0.0, 1.0}, {1.0, 0.0}};
  try {
    jet_of_quotient(b);
    FAIL("expected failure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DivisionByZeroSolution);
  }
}

TEST_CASE("basis_from_jet inverts jet_of_quotient") {
  const Jet2 target{cplx(0.3, -0.2), cplx(1.5, 0.7), cplx(-0.4, 2.0)};
  const OdeBasis b = basis_from_jet(target);
  CHECK(close(b.wronskian(), 1.0, 1e-14));
  const Jet2 back = jet_of_quotient(b);
  CHECK(close(back.value, target.value, 1e-14));
  CHECK(close(back.d1, target.d1, 1e-14));
  CHECK(close(back.d2, target.d2, 1e-14));
}

TEST_CASE("compose_jet2 basic identities") {
  const Jet2 inner{cplx(0.2, 0.1), cplx(2.0, -1.0), cplx(0.5, 0.5)};
  const Jet2 id{inner.value, 1.0, 0.0};
  const Jet2 r = compose_jet2(id, inner);
  CHECK(close(r.value, inner.value, 0.0));
  CHECK(close(r.d1, inner.d1, 0.0));
  CHECK(close(r.d2, inner.d2, 0.0));
  // T_0 is the identity.
  const Jet2 t0 = mobius_jet(MobiusMap::disk_automorphism(0.0), 0.0);
  CHECK(close(t0.value, 0.0, 0.0));
  CHECK(close(t0.d1, 1.0, 1e-15));
  CHECK(close(t0.d2, 0.0, 1e-15));
}

TEST_CASE("square composed with a disk automorphism") {
  // f(z) = z^2, T(z) = (z - 1/2)/(1 - z/2). Expansion of (T(z))^2 at 0:
  // T = -1/2 + (3/4) z + (3/8) z^2 + ..., so T^2 = 1/4 - (3/4) z + (9/16 - 3/8) z^2 + ...
  const MobiusMap t = MobiusMap::disk_automorphism(0.5);
  const Jet2 inner = mobius_jet(t, 0.0);
  const cplx w = inner.value;
  const Jet2 outer{w * w, 2.0 * w, 2.0};
  const Jet2 r = compose_jet2(outer, inner);
  CHECK(close(r.value, 0.25, 1e-15));
  CHECK(close(r.d1, -0.75, 1e-15));
  CHECK(close(r.d2, 2.0 * (9.0 / 16 - 3.0 / 8), 1e-15));
}

TEST_CASE("chain rule against nested finite differences") {
  std::mt19937 rng(20240611);
  for (int trial = 0; trial < 25; ++trial) {
    const MobiusMap f = random_mobius(rng);
    const MobiusMap g = random_mobius(rng);
    const cplx z0(0.1 * trial / 25.0, -0.05);
    const Jet2 jf = mobius_jet(f, z0);
    const Jet2 jg = mobius_jet(g, jf.value);
    const Jet2 c = compose_jet2(jg, jf);
    const Jet2 fd = fd_jet([&](cplx z) { return g(f(z)); }, z0);
    const double scale = 1.0 + std::abs(c.d2);
    CHECK(close(c.value, fd.value, 1e-12));
    CHECK(close(c.d1, fd.d1, 1e-6 * scale));
    CHECK(close(c.d2, fd.d2, 1e-6 * scale));
    // Composition of maps matches composition of jets.
    const Jet2 direct = mobius_jet(g.after(f), z0);
    CHECK(close(direct.d1, c.d1, 1e-12 * scale));
    CHECK(close(direct.d2, c.d2, 1e-12 * scale));
  }
}

TEST_CASE("mobius jets at the tooth-circle crossings") {
  const double bm = -0.7, bp = 2.3, D = bp - bm;
  // -(z - b-)/(z - b+) and (z - b+)/(z - b-).
  const MobiusMap tm(-1.0, bm, 1.0, -bp);
  const MobiusMap tp(1.0, -bp, 1.0, -bm);
  const Jet2 jm = mobius_jet(tm, bm);
  const Jet2 jp = mobius_jet(tp, bp);
  CHECK(close(jm.value, 0.0, 1e-15));
  CHECK(close(jm.d1, 1.0 / D, 1e-15));
  CHECK(close(jm.d2, 2.0 / (D * D), 1e-15));
  CHECK(close(jp.value, 0.0, 1e-15));
  CHECK(close(jp.d1, 1.0 / D, 1e-15));
  CHECK(close(jp.d2, -2.0 / (D * D), 1e-15));
  // Cross-check the signs by finite differences.
  const Jet2 fm = fd_jet([&](cplx z) { return tm(z); }, bm);
  const Jet2 fp = fd_jet([&](cplx z) { return tp(z); }, bp);
  CHECK(close(fm.d2, jm.d2, 1e-6));
  CHECK(close(fp.d2, jp.d2, 1e-6));
  const Jet2 id = mobius_jet(MobiusMap::identity(), cplx(0.3, 0.9));
  CHECK(close(id.value, cplx(0.3, 0.9), 0.0));
  CHECK(close(id.d1, 1.0, 0.0));
  CHECK(close(id.d2, 0.0, 0.0));
  CHECK_THROWS_AS(mobius_jet(tm, bp), Error);
}

TEST_CASE("mobius algebra") {
  const MobiusMap m(2.0, cplx(0, 1), 0.5, 3.0);
  CHECK(close(m.a() * m.d() - m.b() * m.c(), 1.0, 1e-14));
  const cplx z(0.3, -0.4);
  CHECK(close(m.inverse()(m(z)), z, 1e-14));
  const MobiusMap n = MobiusMap::disk_automorphism(0.4);
  const MobiusMap k = MobiusMap::translation(cplx(1, 1));
  CHECK(close(k.after(n.after(m))(z), k.after(n).after(m)(z), 1e-14));
  CHECK(close(m.pole(), -6.0, 1e-14));
  CHECK(std::isinf(k.pole().real()));
}
