#include "dgviv/verify.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dgviv {

State manufactured_state(const Vec2& x, const ManufacturedCase& mc) {
  const double s = std::sin(mc.kappa * (x.x() + x.y())) + mc.c2;
  return State(s, s, s, s * s);
}

State manufactured_source(const Vec2& x, const ManufacturedCase& mc) {
  const double k = mc.kappa, c2 = mc.c2;
  const double g = mc.gas.gamma, g1 = g - 1.0;
  const double phi = k * (x.x() + x.y());
  const double sn = std::sin(phi), cs = std::cos(phi), s2 = std::sin(2.0 * phi);
  const double momentum = k * g1 * s2 + (2.0 * k + 2.0 * k * g1 * c2 - k * g1) * cs;
  const double energy = 2.0 * k * g * s2 + (4.0 * k * g * c2 - 2.0 * k * g1) * cs +
                        2.0 * g * mc.gas.mu * k * k / mc.gas.prandtl * sn;
  return State(2.0 * k * cs, momentum, momentum, energy);
}

ErrorNorms error_norms(const StateField& field, const StateFunction& exact, const Mesh& mesh,
                       const OperatorTables& tables) {
  const int np = tables.n_p;
  const int m = std::max(2 * tables.p, 6);
  Matrix lattice(num_nodes(m), 2);
  int row = 0;
  for (int j = 0; j <= m; ++j)
    for (int i = 0; i + j <= m; ++i)
      lattice.row(row++) << -1.0 + 2.0 * i / m, -1.0 + 2.0 * j / m;
  const Matrix lattice_interp = tables.interp_matrix(lattice);

  ErrorNorms out;
  double sum = 0.0;
  for (int k = 0; k < mesh.num_elements(); ++k) {
    const auto uk = field.element(k);
    const double det = mesh.element(k).det_j;
    const NodalState uc = tables.Vq * uk;
    for (int c = 0; c < tables.num_cub(); ++c) {
      const Vec2 x = mesh.map_to_physical(k, tables.cub.points.row(c).transpose());
      const State e = uc.row(c).transpose() - exact(x);
      sum += tables.cub.weights(c) * det * e.squaredNorm();
    }
    const NodalState ul = lattice_interp * uk;
    for (int i = 0; i < ul.rows(); ++i) {
      const Vec2 x = mesh.map_to_physical(k, lattice.row(i).transpose());
      out.linf = std::max(out.linf, (ul.row(i).transpose() - exact(x)).cwiseAbs().maxCoeff());
    }
    for (int i = 0; i < np; ++i) {
      const Vec2 x = mesh.map_to_physical(k, tables.nodes.points.row(i).transpose());
      out.linf = std::max(out.linf, (uk.row(i).transpose() - exact(x)).cwiseAbs().maxCoeff());
    }
  }
  out.l2 = std::sqrt(sum);
  return out;
}

double convergence_rate(const std::vector<double>& errors, const std::vector<double>& h) {
  if (errors.size() != h.size() || errors.size() < 2)
    throw Error("convergence rate needs at least two (h, error) pairs");
  const std::size_t n = errors.size();
  double mx = 0.0, my = 0.0;
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(errors[i] > 0.0) || !(h[i] > 0.0))
      throw Error("convergence rate needs positive errors and mesh sizes");
    lx[i] = std::log(h[i]);
    ly[i] = std::log(errors[i]);
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  return sxy / sxx;
}

Forces aero_forces(const StateField& field, const Mesh& mesh, const OperatorTables& tables,
                   const GasParams& gas, const Freestream& fs, double diameter,
                   const Vec2& center) {
  if (!mesh.has_tag(BoundaryTag::Wall)) throw Error("mesh has no wall boundary");
  const int p = tables.p;
  const int nq = tables.num_face_quad();
  Forces out;
  NodalState face_nodes(p + 1, 4);
  Matrix rs(nq, 2);
  for (const Face& face : mesh.faces()) {
    if (!face.is_boundary() || face.tag != BoundaryTag::Wall) continue;
    const int k = face.left, f = face.left_face;
    const ElementGeometry& geo = mesh.element(k);
    const auto uk = field.element(k);
    const auto& idx = tables.nodes.face_index[f];
    for (int a = 0; a <= p; ++a) face_nodes.row(a) = uk.row(idx[a]);
    const NodalState uq = tables.face_interp * face_nodes;
    const NodalState ur = tables.face_Dr[f] * uk;
    const NodalState us = tables.face_Ds[f] * uk;
    const Vec2 nb = -face.normal;  // out of the body, into the fluid
    for (int q = 0; q < nq; ++q) {
      const State u = uq.row(q).transpose();
      const Primitive prim = to_primitive(u, gas);
      Vec2 traction = -prim.p * nb;
      if (gas.mu > 0.0) {
        const State ux = geo.rx() * ur.row(q).transpose() + geo.sx() * us.row(q).transpose();
        const State uy = geo.ry() * ur.row(q).transpose() + geo.sy() * us.row(q).transpose();
        Mat2 dv;  // dv(i, j) = d v_i / d x_j
        dv(0, 0) = (ux(1) - prim.v.x() * ux(0)) / prim.rho;
        dv(0, 1) = (uy(1) - prim.v.x() * uy(0)) / prim.rho;
        dv(1, 0) = (ux(2) - prim.v.y() * ux(0)) / prim.rho;
        dv(1, 1) = (uy(2) - prim.v.y() * uy(0)) / prim.rho;
        const Mat2 tau =
            gas.mu * (dv + dv.transpose() - 2.0 / 3.0 * dv.trace() * Mat2::Identity());
        traction += tau * nb;
      }
      const double w = tables.quad_w(q) * 0.5 * face.length;
      const Vec2 x = mesh.map_to_physical(k, face_point(f, tables.quad_xi(q)));
      out.force += w * traction;
      const Vec2 r = x - center;
      out.moment += w * (r.x() * traction.y() - r.y() * traction.x());
    }
  }
  const double speed = fs.speed();
  const Vec2 d = speed > 0.0 ? Vec2(fs.v / speed) : Vec2(1.0, 0.0);
  const Vec2 l(-d.y(), d.x());
  out.drag = out.force.dot(d);
  out.lift = out.force.dot(l);
  const double q_inf = 0.5 * fs.rho * speed * speed * diameter;
  if (q_inf > 0.0) {
    out.cd = out.drag / q_inf;
    out.cl = out.lift / q_inf;
  }
  return out;
}

Spectrum dft_spectrum(const std::vector<double>& t, const std::vector<double>& values, bool hann) {
  const int n = static_cast<int>(t.size());
  if (n < 16 || values.size() != t.size()) throw Error("spectrum needs at least 16 samples");
  for (int i = 1; i < n; ++i)
    if (!(t[i] > t[i - 1])) throw Error("spectrum needs strictly increasing times");

  const double span = t.back() - t.front();
  const double dt = span / (n - 1);
  std::vector<double> uniform(n);
  int j = 0;
  for (int i = 0; i < n; ++i) {
    const double ti = i == n - 1 ? t.back() : t.front() + i * dt;
    while (j < n - 2 && t[j + 1] < ti) ++j;
    const double s = (ti - t[j]) / (t[j + 1] - t[j]);
    uniform[i] = (1.0 - s) * values[j] + s * values[j + 1];
  }
  const double mean = std::accumulate(uniform.begin(), uniform.end(), 0.0) / n;
  double wsum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double w = hann ? 0.5 * (1.0 - std::cos(2.0 * M_PI * i / (n - 1))) : 1.0;
    uniform[i] = (uniform[i] - mean) * w;
    wsum += w;
  }

  const int nf = n / 2 + 1;
  fftw_complex* out = fftw_alloc_complex(nf);
  fftw_plan plan = fftw_plan_dft_r2c_1d(n, uniform.data(), out, FFTW_ESTIMATE);
  fftw_execute(plan);
  Spectrum s;
  s.f.resize(nf);
  s.mag.resize(nf);
  for (int k = 0; k < nf; ++k) {
    const double a = std::hypot(out[k][0], out[k][1]) / wsum;
    s.f[k] = k / (n * dt);
    s.mag[k] = (k == 0 || (n % 2 == 0 && k == nf - 1)) ? a : 2.0 * a;
  }
  fftw_destroy_plan(plan);
  fftw_free(out);
  return s;
}

std::vector<Mode> dominant_modes(const Spectrum& spectrum, int k) {
  const int n = static_cast<int>(spectrum.mag.size());
  const double df = n > 1 ? spectrum.f[1] - spectrum.f[0] : 0.0;
  std::vector<Mode> modes;
  for (int i = 1; i + 1 < n; ++i) {
    const double a = spectrum.mag[i - 1], b = spectrum.mag[i], c = spectrum.mag[i + 1];
    if (!(b > a && b >= c) || b <= 0.0) continue;
    const double denom = a - 2.0 * b + c;
    const double delta = denom != 0.0 ? 0.5 * (a - c) / denom : 0.0;
    modes.push_back({spectrum.f[i] + delta * df, b - 0.25 * (a - c) * delta});
  }
  std::stable_sort(modes.begin(), modes.end(),
                   [](const Mode& x, const Mode& y) { return x.mag > y.mag; });
  if (modes.empty() && n > 0) modes.push_back({0.0, spectrum.mag[0]});
  if (static_cast<int>(modes.size()) > k) modes.resize(std::max(k, 0));
  return modes;
}

Vector vorticity_field(const StateField& field, const Matrix& gradients) {
  Vector w(field.u.rows());
  for (Eigen::Index i = 0; i < field.u.rows(); ++i) {
    const double rho = field.u(i, 0);
    const double u = field.u(i, 1) / rho, v = field.u(i, 2) / rho;
    const double dvdx = (gradients(i, 2) - v * gradients(i, 0)) / rho;
    const double dudy = (gradients(i, 5) - u * gradients(i, 4)) / rho;
    w(i) = dvdx - dudy;
  }
  return w;
}

std::vector<ProfilePoint> sample_line(const Mesh& mesh, const OperatorTables& tables,
                                      const Vector& nodal, const Vec2& a, const Vec2& b, int n) {
  if (n < 2) throw Error("line sampling needs at least two points");
  std::vector<ProfilePoint> out(n);
  for (int i = 0; i < n; ++i) {
    const Vec2 x = a + (b - a) * (static_cast<double>(i) / (n - 1));
    const int k = mesh.locate(x, 1e-10);
    if (k < 0)
      throw Error("sample point (" + std::to_string(x.x()) + ", " + std::to_string(x.y()) +
                  ") lies outside the mesh");
    Matrix rs(1, 2);
    rs.row(0) = mesh.map_to_reference(k, x).transpose();
    const Matrix row = tables.interp_matrix(rs);
    out[i].x = x;
    out[i].value = (row * nodal.segment(k * tables.n_p, tables.n_p))(0);
  }
  return out;
}

}  // namespace dgviv
