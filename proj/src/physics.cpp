#include "dgviv/physics.hpp"

#include <cmath>

namespace dgviv {

void GasParams::validate() const {
  if (!(gamma > 1.0)) throw ConfigError("gamma must be > 1");
  if (!(prandtl > 0.0)) throw ConfigError("Prandtl number must be > 0");
  if (!(mu >= 0.0)) throw ConfigError("viscosity must be >= 0");
  if (!(c_v > 0.0)) throw ConfigError("c_v must be > 0");
}

double eos_pressure(const State& u, const GasParams& gas) {
  if (!(u(0) > 0.0)) throw PositivityError("nonpositive density");
  const double kinetic = 0.5 * (u(1) * u(1) + u(2) * u(2)) / u(0);
  const double p = (gas.gamma - 1.0) * (u(3) - kinetic);
  if (!(p > 0.0)) throw PositivityError("nonpositive pressure");
  return p;
}

Primitive to_primitive(const State& u, const GasParams& gas) {
  Primitive q;
  q.p = eos_pressure(u, gas);
  q.rho = u(0);
  q.v = Vec2(u(1) / u(0), u(2) / u(0));
  return q;
}

State to_conservative(const Primitive& q, const GasParams& gas) {
  State u;
  u << q.rho, q.rho * q.v.x(), q.rho * q.v.y(),
      q.p / (gas.gamma - 1.0) + 0.5 * q.rho * q.v.squaredNorm();
  return u;
}

double sound_speed(const Primitive& q, const GasParams& gas) {
  return std::sqrt(gas.gamma * q.p / q.rho);
}

double temperature(const State& u, const GasParams& gas) {
  const double kinetic = 0.5 * (u(1) * u(1) + u(2) * u(2)) / u(0);
  return (u(3) - kinetic) / (gas.c_v * u(0));
}

Flux advective_flux(const State& u, const Vec2& v_w, const GasParams& gas) {
  const Primitive q = to_primitive(u, gas);
  Flux f;
  for (int j = 0; j < 2; ++j) {
    const double vj = q.v(j);
    f(0, j) = u(0) * vj;
    f(1, j) = u(1) * vj;
    f(2, j) = u(2) * vj;
    f(3, j) = (u(3) + q.p) * vj;
    f(1 + j, j) += q.p;
    f.col(j) -= v_w(j) * u;
  }
  return f;
}

State normal_flux(const State& u, const Vec2& n, const Vec2& v_w, const GasParams& gas) {
  return advective_flux(u, v_w, gas) * n;
}

Mat8 diffusion_tensor(const State& u, const GasParams& gas) {
  const double rho = u(0);
  if (!(rho > 0.0)) throw PositivityError("nonpositive density");
  const double v1 = u(1) / rho, v2 = u(2) / rho;
  const double vv = v1 * v1 + v2 * v2;
  const double e = u(3) / rho;
  const double gp = gas.gamma / gas.prandtl;
  const double s = gas.mu / rho;

  Mat8 g = Mat8::Zero();
  // G11
  g(1, 0) = -4.0 / 3.0 * v1;
  g(1, 1) = 4.0 / 3.0;
  g(2, 0) = -v2;
  g(2, 2) = 1.0;
  g(3, 0) = -v1 * v1 / 3.0 - vv - gp * (e - vv);
  g(3, 1) = (4.0 / 3.0 - gp) * v1;
  g(3, 2) = (1.0 - gp) * v2;
  g(3, 3) = gp;
  // G12
  g(1, 4) = 2.0 / 3.0 * v2;
  g(1, 6) = -2.0 / 3.0;
  g(2, 4) = -v1;
  g(2, 5) = 1.0;
  g(3, 4) = -v1 * v2 / 3.0;
  g(3, 5) = v2;
  g(3, 6) = -2.0 / 3.0 * v1;
  // G21
  g(5, 0) = -v2;
  g(5, 2) = 1.0;
  g(6, 0) = 2.0 / 3.0 * v1;
  g(6, 1) = -2.0 / 3.0;
  g(7, 0) = -v1 * v2 / 3.0;
  g(7, 1) = -2.0 / 3.0 * v2;
  g(7, 2) = v1;
  // G22
  g(5, 4) = -v1;
  g(5, 5) = 1.0;
  g(6, 4) = -4.0 / 3.0 * v2;
  g(6, 6) = 4.0 / 3.0;
  g(7, 4) = -v2 * v2 / 3.0 - vv - gp * (e - vv);
  g(7, 5) = (1.0 - gp) * v1;
  g(7, 6) = (4.0 / 3.0 - gp) * v2;
  g(7, 7) = gp;
  return s * g;
}

Flux viscous_flux(const Mat8& g, const StateGrad& grad) {
  const StateGrad f = g * grad;
  Flux out;
  out.col(0) = f.head<4>();
  out.col(1) = f.tail<4>();
  return out;
}

StateGrad apply_diffusion(const State& u, const StateGrad& d, const GasParams& gas) {
  const double rho = u(0);
  if (!(rho > 0.0)) throw PositivityError("nonpositive density");
  const double v1 = u(1) / rho, v2 = u(2) / rho;
  const double vv = v1 * v1 + v2 * v2;
  const double e = u(3) / rho;
  const double gp = gas.gamma / gas.prandtl;
  const double s = gas.mu / rho;
  // d = [U_x; U_y]
  const double x0 = d(0), x1 = d(1), x2 = d(2), x3 = d(3);
  const double y0 = d(4), y1 = d(5), y2 = d(6), y3 = d(7);
  StateGrad out;
  out(0) = 0.0;
  out(1) = s * (-4.0 / 3.0 * v1 * x0 + 4.0 / 3.0 * x1 + 2.0 / 3.0 * v2 * y0 - 2.0 / 3.0 * y2);
  out(2) = s * (-v2 * x0 + x2 - v1 * y0 + y1);
  out(3) = s * ((-v1 * v1 / 3.0 - vv - gp * (e - vv)) * x0 + (4.0 / 3.0 - gp) * v1 * x1 +
                (1.0 - gp) * v2 * x2 + gp * x3 - v1 * v2 / 3.0 * y0 + v2 * y1 -
                2.0 / 3.0 * v1 * y2);
  out(4) = 0.0;
  out(5) = s * (-v2 * x0 + x2 - v1 * y0 + y1);
  out(6) = s * (2.0 / 3.0 * v1 * x0 - 2.0 / 3.0 * x1 - 4.0 / 3.0 * v2 * y0 + 4.0 / 3.0 * y2);
  out(7) = s * (-v1 * v2 / 3.0 * x0 - 2.0 / 3.0 * v2 * x1 + v1 * x2 +
                (-v2 * v2 / 3.0 - vv - gp * (e - vv)) * y0 + (1.0 - gp) * v1 * y1 +
                (4.0 / 3.0 - gp) * v2 * y2 + gp * y3);
  return out;
}

RoeAverage roe_average(const State& a, const State& b, const GasParams& gas) {
  const Primitive qa = to_primitive(a, gas);
  const Primitive qb = to_primitive(b, gas);
  const double ra = std::sqrt(qa.rho), rb = std::sqrt(qb.rho);
  const double ha = (a(3) + qa.p) / qa.rho, hb = (b(3) + qb.p) / qb.rho;
  RoeAverage avg;
  avg.rho = ra * rb;
  avg.v = (ra * qa.v + rb * qb.v) / (ra + rb);
  avg.h = (ra * ha + rb * hb) / (ra + rb);
  const double c2 = (gas.gamma - 1.0) * (avg.h - 0.5 * avg.v.squaredNorm());
  if (!(c2 > 0.0)) throw PositivityError("nonpositive Roe-averaged sound speed");
  avg.c = std::sqrt(c2);
  return avg;
}

namespace {

// Right eigenvectors (columns) and eigenvalues of the normal Roe matrix.
void roe_eigensystem(const RoeAverage& avg, const Vec2& n, const Vec2& v_w, Mat4& r,
                     State& lambda) {
  const double u = avg.v.x(), v = avg.v.y(), h = avg.h, c = avg.c;
  const double vn = avg.v.dot(n);
  const double shift = v_w.dot(n);
  const Vec2 t(-n.y(), n.x());
  const double vt = avg.v.dot(t);
  r.col(0) << 1.0, u - c * n.x(), v - c * n.y(), h - c * vn;
  r.col(1) << 1.0, u, v, 0.5 * avg.v.squaredNorm();
  r.col(2) << 0.0, t.x(), t.y(), vt;
  r.col(3) << 1.0, u + c * n.x(), v + c * n.y(), h + c * vn;
  lambda << vn - c - shift, vn - shift, vn - shift, vn + c - shift;
}

}  // namespace

Mat4 roe_matrix(const State& a, const State& b, const Vec2& n, const Vec2& v_w,
                const GasParams& gas) {
  const RoeAverage avg = roe_average(a, b, gas);
  Mat4 r;
  State lambda;
  roe_eigensystem(avg, n, v_w, r, lambda);
  return r * lambda.asDiagonal() * r.inverse();
}

Mat4 roe_abs_matrix(const State& a, const State& b, const Vec2& n, const Vec2& v_w,
                    const GasParams& gas) {
  const RoeAverage avg = roe_average(a, b, gas);
  Mat4 r;
  State lambda;
  roe_eigensystem(avg, n, v_w, r, lambda);
  return r * lambda.cwiseAbs().asDiagonal() * r.inverse();
}

State roe_flux(const State& u_plus, const State& u_minus, const Vec2& n, const Vec2& v_w,
               const GasParams& gas) {
  const RoeAverage avg = roe_average(u_plus, u_minus, gas);
  const State fp = normal_flux(u_plus, n, v_w, gas);
  const State fm = normal_flux(u_minus, n, v_w, gas);

  // Wave strengths of the jump projected on the right eigenvectors.
  const State du = u_minus - u_plus;
  const double g1 = gas.gamma - 1.0;
  const double u = avg.v.x(), v = avg.v.y(), c = avg.c;
  const Vec2 t(-n.y(), n.x());
  const double vn = avg.v.dot(n), vt = avg.v.dot(t);
  const double shift = v_w.dot(n);
  const double q2 = avg.v.squaredNorm();
  const double dmn = du(1) * n.x() + du(2) * n.y();
  const double dmt = du(1) * t.x() + du(2) * t.y();
  // Pressure jump linearized about the Roe state.
  const double dp = g1 * (du(3) - (u * du(1) + v * du(2)) + 0.5 * q2 * du(0));
  const double a1 = 0.5 * (dp - c * (dmn - vn * du(0))) / (c * c);
  const double a4 = 0.5 * (dp + c * (dmn - vn * du(0))) / (c * c);
  const double a2 = du(0) - dp / (c * c);
  const double a3 = dmt - vt * du(0);

  const double l1 = std::abs(vn - c - shift), l2 = std::abs(vn - shift),
               l4 = std::abs(vn + c - shift);
  State diss;
  diss(0) = l1 * a1 + l2 * a2 + l4 * a4;
  diss(1) = l1 * a1 * (u - c * n.x()) + l2 * (a2 * u + a3 * t.x()) + l4 * a4 * (u + c * n.x());
  diss(2) = l1 * a1 * (v - c * n.y()) + l2 * (a2 * v + a3 * t.y()) + l4 * a4 * (v + c * n.y());
  diss(3) = l1 * a1 * (avg.h - c * vn) + l2 * (a2 * 0.5 * q2 + a3 * vt) +
            l4 * a4 * (avg.h + c * vn);
  return 0.5 * (fp + fm) - 0.5 * diss;
}

State wall_ghost(const State& interior, const Vec2& v_w, const GasParams& gas) {
  const Primitive q = to_primitive(interior, gas);
  return to_conservative(Primitive{q.rho, v_w, q.p}, gas);
}

State Freestream::state(const GasParams& gas) const {
  return to_conservative(Primitive{rho, v, p}, gas);
}

}  // namespace dgviv
