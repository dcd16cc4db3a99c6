#include "heisen/contactgeo.hpp"

#include <Eigen/Dense>
#include <bit>
#include <cmath>
#include <numbers>

#include "heisen/errors.hpp"

namespace heisen {

namespace {

using std::numbers::pi;

double smooth_step(double t) {
  if (t <= -1) return 0;
  if (t >= 1) return 1;
  double g1 = std::exp(-1.0 / (1.0 + t)), g2 = std::exp(-1.0 / (1.0 - t));
  return g1 / (g1 + g2);
}

// Index of the pair (mu < nu) among the 2-form components in dimension 3.
int pair_index(int mu, int nu) { return component_index(3, (1u << mu) | (1u << nu)); }

// Full antisymmetric d alpha_{mu nu} from the stored components.
double dalpha_at(const Chart& ch, size_t v, int mu, int nu) {
  if (mu == nu) return 0;
  double s = mu < nu ? 1 : -1;
  return s * ch.dalpha[v * 3 + pair_index(std::min(mu, nu), std::max(mu, nu))];
}

void fill_s3_node(Chart& ch, size_t v, bool north, double blend) {
  double u[3], s = 0;
  for (int a = 0; a < 3; ++a) {
    u[a] = ch.coord(v, a);
    s += u[a] * u[a];
  }
  double den = 1 + s;
  double* X = &ch.X[v * 4];
  double* DX = &ch.DX[v * 12];
  for (int j = 0; j < 3; ++j) X[j] = 2 * u[j] / den;
  X[3] = (north ? s - 1 : 1 - s) / den;
  for (int j = 0; j < 3; ++j)
    for (int m = 0; m < 3; ++m) DX[j * 3 + m] = (j == m ? 2 / den : 0.0) - 4 * u[j] * u[m] / (den * den);
  for (int m = 0; m < 3; ++m) DX[9 + m] = (north ? 4 : -4) * u[m] / (den * den);
  double t = smooth_step(X[3] / blend);
  ch.rho[v] = north ? 1 - t : t;

  const double a1 = X[0], b1 = X[1], a2 = X[2], b2 = X[3];
  const double av[2] = {a1, a2}, bv[2] = {b1, b2};
  for (int m = 0; m < 3; ++m) {
    double al = 0;
    for (int j = 0; j < 2; ++j) al += av[j] * DX[(2 * j + 1) * 3 + m] - bv[j] * DX[(2 * j) * 3 + m];
    ch.alpha[v * 3 + m] = al;
  }
  for (int m = 0; m < 3; ++m)
    for (int q = m + 1; q < 3; ++q) {
      double w = 0;
      for (int j = 0; j < 2; ++j)
        w += DX[(2 * j) * 3 + m] * DX[(2 * j + 1) * 3 + q] - DX[(2 * j) * 3 + q] * DX[(2 * j + 1) * 3 + m];
      ch.dalpha[v * 3 + pair_index(m, q)] = 2 * w;
    }
  // Stereographic maps are conformal: tangent V has coordinates DX^T V / lambda^2.
  double lam2 = 0;
  for (int j = 0; j < 4; ++j) lam2 += DX[j * 3] * DX[j * 3];
  auto to_coords = [&](const double* V, double* out) {
    for (int m = 0; m < 3; ++m) {
      double c = 0;
      for (int j = 0; j < 4; ++j) c += DX[j * 3 + m] * V[j];
      out[m] = c / lam2;
    }
  };
  const double T[4] = {-b1, a1, -b2, a2};
  const double e1[4] = {-a2, b2, a1, -b1};
  const double e2[4] = {-b2, -a2, b1, a1};
  to_coords(T, &ch.reeb[v * 3]);
  const double r2 = 1 / std::sqrt(2.0);
  double f1[4], f2[4];
  for (int j = 0; j < 4; ++j) {
    f1[j] = e2[j] * r2;
    f2[j] = e1[j] * r2;
  }
  to_coords(f1, &ch.frame[v * 6]);
  to_coords(f2, &ch.frame[v * 6 + 3]);
  // J of C^2 in the frame: J f_a = sum_b J_ba f_b, frame orthogonal in R^4.
  auto Jamb = [](const double* V, double* out) {
    out[0] = -V[1];
    out[1] = V[0];
    out[2] = -V[3];
    out[3] = V[2];
  };
  const double* fr[2] = {f1, f2};
  for (int a = 0; a < 2; ++a) {
    double Jf[4];
    Jamb(fr[a], Jf);
    for (int b = 0; b < 2; ++b) {
      double num = 0, nrm = 0;
      for (int j = 0; j < 4; ++j) {
        num += fr[b][j] * Jf[j];
        nrm += fr[b][j] * fr[b][j];
      }
      ch.J[v * 4 + b * 2 + a] = num / nrm;
    }
  }
}

double volume_component(const Chart& ch, size_t v) {
  const double* a = &ch.alpha[v * 3];
  return a[0] * dalpha_at(ch, v, 1, 2) - a[1] * dalpha_at(ch, v, 0, 2) + a[2] * dalpha_at(ch, v, 0, 1);
}

void require_s3(const Manifold& M) {
  if (M.charts.empty() || M.charts[0].X.empty()) throw DomainError("operation needs an embedded S^3 atlas");
}

}  // namespace

ManifoldPtr std_s3(const S3Options& opt) {
  if (opt.grid < 8) throw DomainError("S^3 grid needs at least 8 nodes per axis");
  auto M = std::make_shared<Manifold>();
  M->name = "s3";
  M->n = 1;
  M->dim = 3;
  for (int c = 0; c < 2; ++c) {
    Chart ch;
    ch.dim = 3;
    ch.N = opt.grid;
    ch.L = opt.half_width;
    ch.h = 2 * opt.half_width / (opt.grid - 1);
    size_t nn = ch.nodes();
    ch.rho.resize(nn);
    ch.X.resize(nn * 4);
    ch.DX.resize(nn * 12);
    ch.alpha.resize(nn * 3);
    ch.dalpha.resize(nn * 3);
    ch.reeb.resize(nn * 3);
    ch.frame.resize(nn * 6);
    ch.J.resize(nn * 4);
    for (size_t v = 0; v < nn; ++v) fill_s3_node(ch, v, c == 0, opt.blend);
    ch.orientation = volume_component(ch, nn / 2) > 0 ? 1 : -1;
    // rho must vanish where a central stencil is missing
    for (size_t v = 0; v < nn; ++v)
      if (ch.rho[v] > 0 && !ch.interior(v, 2))
        throw BoundaryStencil("partition function reaches the grid margin; enlarge the box");
    M->charts.push_back(std::move(ch));
  }
  return M;
}

ManifoldPtr std_s3(int grid) {
  S3Options o;
  o.grid = grid;
  return std_s3(o);
}

ManifoldPtr point_fiber(int n, int dim) {
  if (n < 1 || dim < 0 || dim > 10) throw DomainError("point fiber dimension out of range");
  auto M = std::make_shared<Manifold>();
  M->name = "point";
  M->n = n;
  M->dim = dim;
  Chart ch;
  ch.dim = dim;
  ch.N = 1;
  ch.rho = {1.0};
  M->charts.push_back(std::move(ch));
  return M;
}

ContactInvariants contact_invariants(const Manifold& M) {
  require_s3(M);
  ContactInvariants r;
  r.compat_min = INFINITY;
  r.volume_min = INFINITY;
  const double Om[4] = {0, 1, -1, 0};
  for (const Chart& ch : M.charts) {
    for (size_t v = 0; v < ch.nodes(); ++v) {
      const double* T = &ch.reeb[v * 3];
      const double* al = &ch.alpha[v * 3];
      double aT = 0;
      for (int m = 0; m < 3; ++m) aT += al[m] * T[m];
      r.alpha_T = std::max(r.alpha_T, std::abs(aT - 1));
      for (int q = 0; q < 3; ++q) {
        double s = 0;
        for (int m = 0; m < 3; ++m) s += T[m] * dalpha_at(ch, v, m, q);
        r.dalpha_T = std::max(r.dalpha_T, std::abs(s));
      }
      const double* f[2] = {&ch.frame[v * 6], &ch.frame[v * 6 + 3]};
      auto omega = [&](const double* x, const double* y) {
        double s = 0;
        for (int m = 0; m < 3; ++m)
          for (int q = 0; q < 3; ++q) s -= x[m] * y[q] * dalpha_at(ch, v, m, q);
        return s;
      };
      for (int a = 0; a < 2; ++a) {
        double s = 0;
        for (int m = 0; m < 3; ++m) s += al[m] * f[a][m];
        r.alpha_frame = std::max(r.alpha_frame, std::abs(s));
        for (int b = 0; b < 2; ++b) r.omega_frame = std::max(r.omega_frame, std::abs(omega(f[a], f[b]) - Om[a * 2 + b]));
      }
      Eigen::Matrix2d J, O;
      J << ch.J[v * 4], ch.J[v * 4 + 1], ch.J[v * 4 + 2], ch.J[v * 4 + 3];
      O << 0, 1, -1, 0;
      r.J_square = std::max(r.J_square, (J * J + Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff());
      r.J_symplectic = std::max(r.J_symplectic, (J.transpose() * O * J - O).cwiseAbs().maxCoeff());
      // omega(J v, v) on frame coefficient vectors
      const Eigen::Vector2d probes[3] = {{1, 0}, {0, 1}, {0.6, -0.8}};
      for (const auto& p : probes) r.compat_min = std::min(r.compat_min, (J * p).dot(O * p));
      r.volume_min = std::min(r.volume_min, std::abs(volume_component(ch, v)));
    }
  }
  return r;
}

double ambient(const Manifold& M, size_t chart, size_t node, int j) {
  require_s3(M);
  return M.charts[chart].X[node * 4 + j];
}

double ambient_d(const Manifold& M, size_t chart, size_t node, int j, int axis) {
  require_s3(M);
  return M.charts[chart].DX[node * 12 + j * 3 + axis];
}

Form alpha_form(ManifoldPtr M) {
  require_s3(*M);
  const Manifold& m = *M;
  return one_form(M, 1, [&](size_t c, size_t v, int mu, cplx* out) { out[0] = m.charts[c].alpha[v * 3 + mu]; });
}

Form dalpha_form(ManifoldPtr M) {
  require_s3(*M);
  Form f(M, 2, 1);
  for (size_t c = 0; c < M->charts.size(); ++c)
    for (size_t v = 0; v < M->charts[c].nodes(); ++v)
      for (int k = 0; k < 3; ++k) f.at(c, v, k)[0] = M->charts[c].dalpha[v * 3 + k];
  return f;
}

Form contract(const Form& a, const std::function<double(size_t, size_t, int)>& field) {
  const Manifold& M = *a.manifold();
  int D = M.dim, k = a.degree();
  if (k == 0) return Form(a.manifold(), 0, a.r());
  Form out(a.manifold(), k - 1, a.r());
  const auto& src = components(D, k);
  size_t B = a.block();
  for (size_t c = 0; c < M.charts.size(); ++c)
    for (size_t v = 0; v < M.charts[c].nodes(); ++v)
      for (size_t s = 0; s < src.size(); ++s) {
        int pos = 0;
        for (int mu = 0; mu < D; ++mu) {
          if (!(src[s] >> mu & 1u)) continue;
          double w = field(c, v, mu) * (pos % 2 ? -1.0 : 1.0);
          ++pos;
          int o = component_index(D, src[s] & ~(1u << mu));
          const cplx* in = a.at(c, v, static_cast<int>(s));
          cplx* dst = out.at(c, v, o);
          for (size_t e = 0; e < B; ++e) dst[e] += w * in[e];
        }
      }
  return out;
}

Form reeb_contract(const Form& a) {
  const Manifold& M = *a.manifold();
  require_s3(M);
  return contract(a, [&](size_t c, size_t v, int mu) { return M.charts[c].reeb[v * 3 + mu]; });
}

std::vector<double> j_std(int n) {
  int m = 2 * n;
  std::vector<double> J(m * m, 0.0);
  for (int k = 0; k < n; ++k) {
    J[(n + k) * m + k] = 1;   // x_k -> xi_k
    J[k * m + n + k] = -1;    // xi_k -> -x_k
  }
  return J;
}

Connection connection_from_beta(std::string name, Form beta, Exec ex) {
  Connection c;
  c.name = std::move(name);
  c.theta = d(beta, ex) + wedge(beta, beta, ex);
  c.beta = std::move(beta);
  return c;
}

Connection make_connection(ManifoldPtr M, const std::string& name, Exec ex) {
  int n = M->n, r = 2 * n;
  if (name == "flat") return connection_from_beta(name, Form(M, 1, r), ex);
  require_s3(*M);
  const Manifold& m = *M;
  auto X = [&](size_t c, size_t v, int j) { return m.charts[c].X[v * 4 + j]; };
  auto dX = [&](size_t c, size_t v, int j, int mu) { return m.charts[c].DX[v * 12 + j * 3 + mu]; };
  if (name == "levi") {
    auto J = j_std(n);
    return connection_from_beta(name,
                                one_form(M, r,
                                         [&](size_t c, size_t v, int mu, cplx* out) {
                                           double A = 0.7 * X(c, v, 0) * dX(c, v, 3, mu) +
                                                      0.4 * X(c, v, 1) * dX(c, v, 2, mu);
                                           for (int i = 0; i < r * r; ++i) out[i] = A * J[i];
                                         }),
                                ex);
  }
  if (name == "sl2") {
    return connection_from_beta(name,
                                one_form(M, r,
                                         [&](size_t c, size_t v, int mu, cplx* out) {
                                           double A1 = 0.5 * X(c, v, 2) * dX(c, v, 0, mu) + 0.3 * X(c, v, 3) * dX(c, v, 1, mu);
                                           double A2 = 0.4 * X(c, v, 0) * dX(c, v, 3, mu) - 0.2 * X(c, v, 1) * dX(c, v, 2, mu);
                                           double A3 = 0.3 * X(c, v, 3) * dX(c, v, 0, mu) + 0.5 * X(c, v, 0) * dX(c, v, 1, mu);
                                           // A1 H + A2 E + A3 F
                                           out[0] = A1;
                                           out[1] = A2;
                                           out[2] = A3;
                                           out[3] = -A1;
                                         }),
                                ex);
  }
  throw DomainError("unknown connection '" + name + "'");
}

Form bianchi_residual(const Connection& c, Exec ex) {
  return d(c.theta, ex) + graded_commutator(c.beta, c.theta, ex);
}

Form c1(const Connection& conn) {
  const Form& th = conn.theta;
  int r = th.r(), n = r / 2;
  auto J = j_std(n);
  Form out(th.manifold(), th.degree(), 1);
  const Manifold& M = *th.manifold();
  const cplx coef = -1.0 / (2 * pi * cplx(0, 1));
  for (size_t c = 0; c < M.charts.size(); ++c)
    for (size_t v = 0; v < M.charts[c].nodes(); ++v)
      for (int k = 0; k < th.ncomp(); ++k) {
        const cplx* T = th.at(c, v, k);
        cplx tJT = 0;
        double comm = 0, scale = 0;
        for (int i = 0; i < r; ++i)
          for (int j = 0; j < r; ++j) {
            cplx tj = 0, jt = 0;
            for (int l = 0; l < r; ++l) {
              tj += T[i * r + l] * J[l * r + j];
              jt += J[i * r + l] * T[l * r + j];
            }
            comm = std::max(comm, std::abs(tj - jt));
            scale = std::max(scale, std::abs(T[i * r + j]));
            if (i == j) tJT += jt;
          }
        if (std::isnan(comm)) {
          out.at(c, v, k)[0] = T[0];
          continue;
        }
        if (comm > 1e-9 * std::max(1.0, scale)) throw NotUnitary("curvature does not commute with J_std");
        out.at(c, v, k)[0] = coef * (-0.5 * cplx(0, 1)) * tJT;
      }
  return out;
}

FormSeries todd(const Connection& conn) {
  ManifoldPtr M = conn.theta.manifold();
  if (M->dim >= 4) throw DomainError("Todd form implemented through degree 3");
  FormSeries s;
  for (int k = 0; k <= M->dim; ++k) s.emplace_back(M, k, 1);
  s[0] = scalar_function(M, [](size_t, size_t) { return cplx(1); });
  if (M->dim >= 2) s[2] = c1(conn) * cplx(0.5);
  return s;
}

FormSeries a_hat(const Connection& conn) {
  ManifoldPtr M = conn.theta.manifold();
  if (M->dim >= 4) throw DomainError("A-hat form implemented through degree 3");
  FormSeries s;
  for (int k = 0; k <= M->dim; ++k) s.emplace_back(M, k, 1);
  s[0] = scalar_function(M, [](size_t, size_t) { return cplx(1); });
  return s;
}

FormSeries ch_odd(const Form& f, Exec ex) {
  ManifoldPtr M = f.manifold();
  FormSeries s;
  for (int k = 0; k <= M->dim; ++k) s.emplace_back(M, k, 1);
  Form g = wedge(pointwise_inverse(f), d(f, ex), ex);
  Form p = g;
  const cplx tpi = 2 * pi * cplx(0, 1);
  double fact_l = 1, fact_2l1 = 1;
  for (int l = 0; 2 * l + 1 <= M->dim; ++l) {
    if (l > 0) {
      p = wedge(wedge(p, g, ex), g, ex);
      fact_l *= l;
      fact_2l1 *= (2 * l) * (2 * l + 1);
    }
    cplx coef = -std::pow(tpi, -(l + 1)) * (fact_l / fact_2l1);
    s[2 * l + 1] = matrix_trace(p) * coef;
  }
  return s;
}

Form top_wedge(const FormSeries& a, const FormSeries& b, Exec ex) {
  ManifoldPtr M = a.at(0).manifold();
  int D = M->dim;
  Form out(M, D, 1);
  for (int p = 0; p <= D; ++p) {
    int q = D - p;
    if (p >= static_cast<int>(a.size()) || q >= static_cast<int>(b.size())) continue;
    out += wedge(a[p], b[q], ex);
  }
  return out;
}

Form bott_map(ManifoldPtr M) {
  require_s3(*M);
  const Manifold& m = *M;
  return function_form(M, 2, [&](size_t c, size_t v, cplx* out) {
    const double* X = &m.charts[c].X[v * 4];
    cplx z1(X[0], X[1]), z2(X[2], X[3]);
    out[0] = z1;
    out[1] = -std::conj(z2);
    out[2] = z2;
    out[3] = std::conj(z1);
  });
}

Form pointwise_inverse(const Form& f) {
  if (f.degree() != 0) throw DomainError("pointwise inverse needs a 0-form");
  int r = f.r();
  Form out(f.manifold(), 0, r);
  const Manifold& M = *f.manifold();
  for (size_t c = 0; c < M.charts.size(); ++c)
    for (size_t v = 0; v < M.charts[c].nodes(); ++v) {
      Eigen::MatrixXcd A(r, r);
      for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) A(i, j) = f.at(c, v, 0)[i * r + j];
      Eigen::MatrixXcd B = A.inverse();
      for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) out.at(c, v, 0)[i * r + j] = B(i, j);
    }
  return out;
}

double unitarity_defect(const Form& f) {
  int r = f.r();
  double m = 0;
  const Manifold& M = *f.manifold();
  for (size_t c = 0; c < M.charts.size(); ++c)
    for (size_t v = 0; v < M.charts[c].nodes(); ++v) {
      Eigen::MatrixXcd A(r, r);
      for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) A(i, j) = f.at(c, v, 0)[i * r + j];
      m = std::max(m, (A.adjoint() * A - Eigen::MatrixXcd::Identity(r, r)).cwiseAbs().maxCoeff());
    }
  return m;
}

}  // namespace heisen
