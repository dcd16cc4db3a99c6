#include <cmath>
#include <numbers>

#include "doctest.h"
#include "heisen/contactgeo.hpp"
#include "heisen/errors.hpp"
#include "oracles.hpp"

using namespace heisen;
using std::numbers::pi;

namespace {

ManifoldPtr s3_32() {
  static ManifoldPtr M = std_s3(32);
  return M;
}

// f = a1 b2 + sin(a2 + 2 b1), with its ambient gradient.
double test_fn(const double* X) { return X[0] * X[3] + std::sin(X[2] + 2 * X[1]); }
void test_grad(const double* X, double* g) {
  double c = std::cos(X[2] + 2 * X[1]);
  g[0] = X[3];
  g[1] = 2 * c;
  g[2] = c;
  g[3] = X[0];
}

Form test_scalar(ManifoldPtr M) {
  return scalar_function(M, [&](size_t c, size_t v) { return cplx(test_fn(&M->charts[c].X[v * 4])); });
}

// max |d f - analytic df| over nodes where rho > 0
double d_error(ManifoldPtr M, Exec ex) {
  Form df = d(test_scalar(M), ex);
  double err = 0;
  for (size_t c = 0; c < M->charts.size(); ++c) {
    const Chart& ch = M->charts[c];
    for (size_t v = 0; v < ch.nodes(); ++v) {
      if (ch.rho[v] == 0) continue;
      double g[4];
      test_grad(&ch.X[v * 4], g);
      for (int mu = 0; mu < 3; ++mu) {
        double exact = 0;
        for (int j = 0; j < 4; ++j) exact += g[j] * ch.DX[v * 12 + j * 3 + mu];
        err = std::max(err, std::abs(df.at(c, v, mu)[0] - exact));
      }
    }
  }
  return err;
}

// Ch_3 of bott in Hopf coordinates z1 = cos(eta) e^{i p}, z2 = sin(eta) e^{i q},
// oriented by alpha ^ d alpha = -sin(2 eta) d eta ^ dp ^ dq.

}  // namespace

TEST_CASE("form algebra basics") {
  CHECK(components(3, 2).size() == 3);
  CHECK(components(3, 2)[0] == 0b011u);
  CHECK(components(3, 2)[1] == 0b101u);
  CHECK(components(3, 2)[2] == 0b110u);
  CHECK(wedge_sign(0b010u, 0b001u) == -1);
  CHECK(wedge_sign(0b001u, 0b110u) == 1);
  CHECK(wedge_sign(0b010u, 0b101u) == -1);
  CHECK(wedge_sign(0b011u, 0b010u) == 0);
  auto P = point_fiber(1, 4);
  Form a(P, 1, 1), b(P, 1, 1);
  a.at(0, 0, 0)[0] = 1;  // du0
  b.at(0, 0, 1)[0] = 1;  // du1
  Form ab = wedge(a, b), ba = wedge(b, a);
  CHECK(ab.degree() == 2);
  CHECK(ab.at(0, 0, 0)[0] == cplx(1));
  CHECK(ba.at(0, 0, 0)[0] == cplx(-1));
  CHECK(wedge(a, a).is_zero());
}

TEST_CASE("S3 contact invariants hold at every node") {
  auto M = s3_32();
  auto inv = contact_invariants(*M);
  CHECK(inv.alpha_T < 1e-10);
  CHECK(inv.dalpha_T < 1e-10);
  CHECK(inv.alpha_frame < 1e-10);
  CHECK(inv.omega_frame < 1e-10);
  CHECK(inv.J_square < 1e-10);
  CHECK(inv.J_symplectic < 1e-10);
  CHECK(inv.compat_min > 0);
  CHECK(inv.volume_min > 1e-3);
}

TEST_CASE("Reeb field is the Hopf field") {
  auto M = s3_32();
  for (size_t c = 0; c < 2; ++c) {
    const Chart& ch = M->charts[c];
    for (size_t v = 0; v < ch.nodes(); v += 997) {
      const double* X = &ch.X[v * 4];
      const double hopf[4] = {-X[1], X[0], -X[3], X[2]};
      for (int j = 0; j < 4; ++j) {
        double push = 0;
        for (int mu = 0; mu < 3; ++mu) push += ch.DX[v * 12 + j * 3 + mu] * ch.reeb[v * 3 + mu];
        CHECK(std::abs(push - hopf[j]) < 1e-12);
      }
    }
  }
}

TEST_CASE("exterior derivative") {
  auto M = s3_32();
  Form one = scalar_function(M, [](size_t, size_t) { return cplx(1); });
  CHECK(d(one).max_abs(2) == 0.0);
  // central stencils commute, so d d vanishes to rounding
  Form f = test_scalar(M);
  CHECK(d(d(f)).max_abs(4) < 1e-9);
  // fourth order: halving h shrinks the error about 16x once resolved
  double e32 = d_error(M, Exec::Parallel), e63 = d_error(std_s3(63), Exec::Parallel);
  MESSAGE("d error grid 32: " << e32 << ", grid 63: " << e63);
  CHECK(e32 / e63 > 12);
  CHECK(e32 < 5e-2);
  // serial and parallel kernels agree
  Form dp = d(f, Exec::Parallel), ds = d(f, Exec::Serial);
  CHECK((dp - ds).max_abs(2) == 0.0);
  CHECK_THROWS_AS(d(Form(point_fiber(1, 3), 0, 1)), BoundaryStencil);
}

TEST_CASE("alpha ^ d alpha is a volume form and integrates to 2 vol(S3)") {
  auto M = s3_32();
  Form vol = wedge(alpha_form(M), dalpha_form(M));
  for (size_t c = 0; c < 2; ++c) {
    const Chart& ch = M->charts[c];
    for (size_t v = 0; v < ch.nodes(); ++v) CHECK_MESSAGE(ch.orientation * vol.at(c, v, 0)[0].real() > 0, v);
  }
  cplx I = integrate(vol);
  auto M64 = std_s3(64);
  cplx I64 = integrate(wedge(alpha_form(M64), dalpha_form(M64)));
  double e32 = std::abs(I / 2.0 - 2 * pi * pi), e64 = std::abs(I64 / 2.0 - 2 * pi * pi);
  MESSAGE("vol(S3) error grid 32: " << e32 << ", grid 64: " << e64);
  CHECK(e32 < 2e-3);
  CHECK(e64 < e32 / 10);
  CHECK(std::abs(integrate(vol, Exec::Serial) - I) < 1e-9);
}

TEST_CASE("Stokes and partition consistency") {
  auto M = s3_32();
  // eta = f d alpha + g alpha ^ d b1 is a global 2-form
  Form f = test_scalar(M);
  Form g = scalar_function(M, [&](size_t c, size_t v) { return cplx(M->charts[c].X[v * 4 + 2]); });
  Form db1 = one_form(M, 1, [&](size_t c, size_t v, int mu, cplx* out) { out[0] = ambient_d(*M, c, v, 1, mu); });
  Form eta = wedge(f, dalpha_form(M)) + wedge(wedge(g, alpha_form(M)), db1);
  cplx s = integrate(d(eta));
  MESSAGE("int d eta = " << s);
  CHECK(std::abs(s) < 1e-5);
  // a form supported in the overlap integrates the same in either chart
  Form bump = scalar_function(M, [&](size_t c, size_t v) {
    double b2 = M->charts[c].X[v * 4 + 3];
    return cplx(std::abs(b2) < 0.25 ? std::exp(-1 / (1 - 16 * b2 * b2)) : 0.0);
  });
  Form top = wedge(bump, wedge(alpha_form(M), dalpha_form(M)));
  cplx i0 = integrate_chart(top, 0), i1 = integrate_chart(top, 1), ib = integrate(top);
  MESSAGE("overlap integrals " << i0 << " " << i1 << " " << ib);
  CHECK(std::abs(i0 - i1) < 1e-8 * std::abs(i0));
  CHECK(std::abs(ib - i0) < 1e-3 * std::abs(i0));
  CHECK(std::abs(integrate_checked(top) - ib) == 0.0);
  Form skew = top;
  for (auto& x : skew.chart_data(1)) x *= 1.01;
  CHECK_THROWS_AS(integrate_checked(skew), ChartOverlapMismatch);
}

TEST_CASE("connections and curvature") {
  auto M = s3_32();
  auto flat = make_connection(M, "flat");
  CHECK(flat.theta.is_zero());
  auto levi = make_connection(M, "levi");
  // theta = dA (x) J_std with dA = 0.7 da1 ^ db2 + 0.4 db1 ^ da2
  double err = 0, scale = 0;
  for (size_t c = 0; c < 2; ++c) {
    const Chart& ch = M->charts[c];
    for (size_t v = 0; v < ch.nodes(); ++v) {
      if (ch.rho[v] == 0) continue;
      for (int k = 0; k < 3; ++k) {
        unsigned m = components(3, 2)[k];
        int mu = std::countr_zero(m), nu = 31 - std::countl_zero(m);
        auto D = [&](int j, int a) { return ch.DX[v * 12 + j * 3 + a]; };
        double dA = 0.7 * (D(0, mu) * D(3, nu) - D(0, nu) * D(3, mu)) + 0.4 * (D(1, mu) * D(2, nu) - D(1, nu) * D(2, mu));
        // J_std = [[0, -1], [1, 0]]: entry (1, 0) carries +dA
        err = std::max(err, std::abs(levi.theta.at(c, v, k)[2] - dA));
        scale = std::max(scale, std::abs(dA));
      }
    }
  }
  MESSAGE("levi curvature error " << err << " scale " << scale);
  CHECK(err < 1e-2 * scale);
  auto sl2 = make_connection(M, "sl2");
  double bi = bianchi_residual(sl2).max_abs(4), th = sl2.theta.max_abs(4);
  MESSAGE("Bianchi residual " << bi << " theta scale " << th);
  CHECK(bi < 1e-2 * th);
  CHECK(bianchi_residual(levi).max_abs(4) < 1e-2 * th);
  auto M48 = std_s3(48);
  double bi48 = bianchi_residual(make_connection(M48, "sl2")).max_abs(4);
  MESSAGE("Bianchi residual grid 48: " << bi48);
  CHECK(bi48 < bi / 4);
  CHECK_THROWS_AS(c1(sl2), NotUnitary);
  CHECK_THROWS_AS(make_connection(M, "nope"), DomainError);
}

TEST_CASE("c1 of the levi connection vanishes on closed surfaces") {
  // boundary of a coordinate box in chart 0, faces integrated by Simpson's rule
  auto M = s3_32();
  Form c = c1(make_connection(M, "levi"));
  const Chart& ch = M->charts[0];
  int lo = 8, hi = 24;  // even number of intervals
  auto simpson_w = [&](int i) { return (i == lo || i == hi) ? 1.0 : ((i - lo) % 2 ? 4.0 : 2.0); };
  cplx total = 0, mag = 0;
  for (int axis = 0; axis < 3; ++axis) {
    int a1 = (axis + 1) % 3, a2 = (axis + 2) % 3;
    // component du^{a1} ^ du^{a2} with orientation of the outward normal
    unsigned m = (1u << a1) | (1u << a2);
    int k = component_index(3, m);
    double sgn = a1 < a2 ? 1 : -1;
    for (int side = 0; side < 2; ++side) {
      int fixed = side ? hi : lo;
      double out = side ? 1 : -1;
      for (int i = lo; i <= hi; ++i)
        for (int j = lo; j <= hi; ++j) {
          int idx[3];
          idx[axis] = fixed;
          idx[a1] = i;
          idx[a2] = j;
          size_t v = idx[0] * ch.stride(0) + idx[1] * ch.stride(1) + idx[2] * ch.stride(2);
          double w = simpson_w(i) * simpson_w(j) * ch.h * ch.h / 9;
          cplx val = c.at(0, v, k)[0] * (sgn * out * w);
          total += val;
          mag += std::abs(val);
        }
    }
  }
  MESSAGE("closed-surface c1 probe " << total << " against " << mag);
  CHECK(std::abs(total) < 1e-4 * std::abs(mag));
}

TEST_CASE("odd Chern character") {
  auto M = s3_32();
  Form cst = function_form(M, 2, [](size_t, size_t, cplx* o) {
    o[0] = cplx(0.6, 0.8);
    o[1] = 0;
    o[2] = 0;
    o[3] = 1;
  });
  for (const auto& f : ch_odd(cst)) CHECK(f.max_abs(2) == 0.0);
  Form b = bott_map(M);
  CHECK(unitarity_defect(b) < 1e-12);
  auto ch = ch_odd(b);
  cplx deg = integrate(ch[3]);
  double oracle = test::hopf_degree_oracle();
  MESSAGE("int Ch_3(bott) = " << deg << ", Hopf-coordinate oracle " << oracle);
  CHECK(std::abs(std::abs(oracle) - 1) < 1e-10);
  CHECK(std::abs(deg - oracle) < 1e-3);
  // Ch_1 is closed; its integral against the exact c1 vanishes
  Form c = c1(make_connection(M, "levi"));
  CHECK(std::abs(integrate(wedge(ch[1], c))) < 1e-4);
}
