#include "dgviv/dg_core.hpp"

#include "dgviv/parallel.hpp"

#include <cmath>

namespace dgviv {

StateField interpolate(const Mesh& mesh, const OperatorTables& tables, const StateFunction& f) {
  StateField field(tables.n_p, mesh.num_elements());
  for (int k = 0; k < mesh.num_elements(); ++k)
    for (int i = 0; i < tables.n_p; ++i) {
      const Vec2 x = mesh.map_to_physical(k, tables.nodes.points.row(i).transpose());
      field.u.row(k * tables.n_p + i) = f(x).transpose();
    }
  return field;
}

StateField uniform_field(const Mesh& mesh, const OperatorTables& tables, const State& u) {
  StateField field(tables.n_p, mesh.num_elements());
  field.u.rowwise() = u.transpose();
  return field;
}

void check_admissible(const StateField& field, const GasParams& gas) {
  for (int k = 0; k < field.num_elements; ++k)
    for (int i = 0; i < field.n_p; ++i) {
      try {
        eos_pressure(field.node(k, i), gas);
      } catch (const PositivityError& e) {
        throw PositivityError(e.reason(), k, i);
      }
    }
}

Matrix broken_gradient(const StateField& field, const Mesh& mesh, const OperatorTables& tables) {
  const int np = tables.n_p;
  Matrix grad(field.u.rows(), 8);
  parallel_for(mesh.num_elements(), [&](int begin, int end) {
    for (int k = begin; k < end; ++k) {
      const ElementGeometry& g = mesh.element(k);
      const NodalState ur = tables.Dr * field.element(k);
      const NodalState us = tables.Ds * field.element(k);
      grad.block(k * np, 0, np, 4) = g.rx() * ur + g.sx() * us;
      grad.block(k * np, 4, np, 4) = g.ry() * ur + g.sy() * us;
    }
  });
  return grad;
}

namespace {

StateGrad stack(const State& a, const State& b) {
  StateGrad s;
  s << a, b;
  return s;
}

}  // namespace

DGOperator::DGOperator(const Mesh& mesh, const OperatorTables& tables, const GasParams& gas,
                       const PenaltyConfig& penalty, BoundaryData boundary,
                       OperatorOptions options)
    : mesh_(mesh),
      tables_(tables),
      gas_(gas),
      penalty_(penalty),
      boundary_(std::move(boundary)),
      options_(std::move(options)) {
  gas_.validate();
  penalty_.validate();
  has_diffusion_ = options_.diffusion && (options_.frozen_diffusion || gas_.mu > 0.0);
  const int nq = tables_.num_face_quad();
  face_rs_.resize(3);
  for (int f = 0; f < 3; ++f) {
    face_rs_[f].resize(nq, 2);
    for (int q = 0; q < nq; ++q) face_rs_[f].row(q) = face_point(f, tables_.quad_xi(q)).transpose();
  }
  trace_u_.resize(3 * mesh_.num_elements() * nq);
  trace_grad_.resize(trace_u_.size());
  flux_.resize(mesh_.num_faces() * nq);
  theta_left_.resize(flux_.size());
  theta_right_.resize(flux_.size());
  sigma_.assign(mesh_.num_faces(), 0.0);
}

Mat8 DGOperator::diffusion(const State& u) const {
  if (options_.frozen_diffusion) return *options_.frozen_diffusion;
  return diffusion_tensor(u, gas_);
}

StateGrad DGOperator::diffusive_flux(const State& u, const StateGrad& grad) const {
  if (options_.frozen_diffusion) return *options_.frozen_diffusion * grad;
  return apply_diffusion(u, grad, gas_);
}

void DGOperator::set_source(const StateFunction& source) {
  const int np = tables_.n_p;
  const int nc = tables_.num_cub();
  NodalState load(np * mesh_.num_elements(), 4);
  for (int k = 0; k < mesh_.num_elements(); ++k) {
    NodalState s(nc, 4);
    const double det = mesh_.element(k).det_j;
    for (int c = 0; c < nc; ++c) {
      const Vec2 x = mesh_.map_to_physical(k, tables_.cub.points.row(c).transpose());
      s.row(c) = tables_.cub.weights(c) * det * source(x).transpose();
    }
    load.middleRows(k * np, np) = tables_.Vq.transpose() * s;
  }
  source_load_ = std::move(load);
}

std::vector<double> DGOperator::compute_penalties(const StateField& field, const Vec2& v_w) const {
  std::vector<double> sigma(mesh_.num_faces(), 0.0);
  if (!has_diffusion_ || penalty_.c1 == 0.0) return sigma;
  const int p = tables_.p;
  parallel_for(mesh_.num_faces(), [&](int begin, int end) {
    for (int g = begin; g < end; ++g) {
      const Face& face = mesh_.face(g);
      const Vec2& n = face.normal;
      double c_inv = trace_inverse_constant(p, face.length, mesh_.element(face.left).area);
      double gbar = 0.0;
      auto visit = [&](const State& u) {
        gbar = std::max(gbar, options_.frozen_diffusion
                                  ? normal_diffusion_norm(*options_.frozen_diffusion, n)
                                  : normal_diffusion_norm(u, n, gas_));
      };
      for (int idx : tables_.nodes.face_index[face.left_face]) {
        const State u = field.node(face.left, idx);
        visit(u);
        if (face.is_boundary() && !options_.frozen_diffusion) {
          if (face.tag == BoundaryTag::Wall) {
            visit(wall_ghost(u, v_w, gas_));
          } else if (boundary_.exterior) {
            const Vec2 x = mesh_.map_to_physical(face.left, tables_.nodes.points.row(idx).transpose());
            visit(boundary_.exterior(x));
          } else {
            visit(boundary_.freestream.state(gas_));
          }
        }
      }
      if (!face.is_boundary()) {
        c_inv = std::max(c_inv,
                         trace_inverse_constant(p, face.length, mesh_.element(face.right).area));
        for (int idx : tables_.nodes.face_index[face.right_face])
          visit(field.node(face.right, idx));
      }
      sigma[g] = penalty_sigma(gbar, c_inv, penalty_);
    }
  });
  return sigma;
}

void DGOperator::begin_step(const StateField& field, const Vec2& v_w) {
  if (penalty_.freeze_per_step) frozen_sigma_ = compute_penalties(field, v_w);
}

void DGOperator::freeze_penalties(std::vector<double> sigma) {
  if (static_cast<int>(sigma.size()) != mesh_.num_faces())
    throw Error("penalty vector size does not match the face count");
  frozen_sigma_ = std::move(sigma);
}

void DGOperator::gather_traces(const StateField& field) {
  const int nq = tables_.num_face_quad();
  const int p = tables_.p;
  parallel_for(mesh_.num_elements(), [&](int begin, int end) {
    NodalState face_nodes(p + 1, 4), uq(nq, 4), ur(nq, 4), us(nq, 4);
    for (int k = begin; k < end; ++k) {
      const ElementGeometry& geo = mesh_.element(k);
      const auto uk = field.element(k);
      for (int f = 0; f < 3; ++f) {
        const auto& idx = tables_.nodes.face_index[f];
        for (int a = 0; a <= p; ++a) face_nodes.row(a) = uk.row(idx[a]);
        uq.noalias() = tables_.face_interp * face_nodes;
        ur.noalias() = tables_.face_Dr[f] * uk;
        us.noalias() = tables_.face_Ds[f] * uk;
        const int base = (3 * k + f) * nq;
        for (int q = 0; q < nq; ++q) {
          trace_u_[base + q] = uq.row(q).transpose();
          const State ux = geo.rx() * ur.row(q).transpose() + geo.sx() * us.row(q).transpose();
          const State uy = geo.ry() * ur.row(q).transpose() + geo.sy() * us.row(q).transpose();
          trace_grad_[base + q] = stack(ux, uy);
        }
      }
    }
  });
}

void DGOperator::face_fluxes(const Vec2& v_w, unsigned parts) {
  const int nq = tables_.num_face_quad();
  const bool want_interior = parts & kInteriorFaces;
  const bool want_boundary = parts & kBoundaryFaces;
  const double theta = penalty_.theta;
  const bool with_theta = has_diffusion_ && theta != 0.0;

  parallel_for(mesh_.num_faces(), [&](int begin, int end) {
    for (int g = begin; g < end; ++g) {
      const Face& face = mesh_.face(g);
      if (face.is_boundary() ? !want_boundary : !want_interior) continue;
      const Vec2& n = face.normal;
      const double sigma = sigma_[g];
      const int lbase = (3 * face.left + face.left_face) * nq;
      for (int q = 0; q < nq; ++q) {
        const State& ul = trace_u_[lbase + q];
        const StateGrad& gl = trace_grad_[lbase + q];
        State h = State::Zero();
        StateGrad tl = StateGrad::Zero(), tr = StateGrad::Zero();
        try {
          if (!face.is_boundary()) {
            const int rbase = (3 * face.right + face.right_face) * nq;
            const State& ur = trace_u_[rbase + nq - 1 - q];
            const StateGrad& gr = trace_grad_[rbase + nq - 1 - q];
            if (options_.advection) h += roe_flux(ul, ur, n, v_w, gas_);
            if (has_diffusion_) {
              const StateGrad fv = 0.5 * (diffusive_flux(ul, gl) + diffusive_flux(ur, gr));
              const State jump = ul - ur;
              h -= n.x() * fv.head<4>() + n.y() * fv.tail<4>();
              h += sigma * jump;
              if (with_theta) {
                const StateGrad nj = stack(n.x() * jump, n.y() * jump);
                tl.noalias() = 0.5 * (diffusion(ul).transpose() * nj);
                tr.noalias() = 0.5 * (diffusion(ur).transpose() * nj);
              }
            }
          } else {
            State ub;
            // State whose diffusion tensor is used on this boundary.
            const State* ug = &ul;
            if (face.tag == BoundaryTag::Wall) {
              ub = wall_ghost(ul, v_w, gas_);
              if (options_.advection) h += normal_flux(ub, n, v_w, gas_);
              ug = &ub;
            } else {
              if (boundary_.exterior) {
                const Vec2 x =
                    mesh_.map_to_physical(face.left, face_rs_[face.left_face].row(q).transpose());
                ub = boundary_.exterior(x);
              } else {
                ub = boundary_.freestream.state(gas_);
              }
              if (options_.advection) h += roe_flux(ul, ub, n, v_w, gas_);
            }
            if (has_diffusion_) {
              const StateGrad fv = diffusive_flux(*ug, gl);
              const State jump = ul - ub;
              h -= n.x() * fv.head<4>() + n.y() * fv.tail<4>();
              h += sigma * jump;
              if (with_theta)
                tl.noalias() = diffusion(*ug).transpose() * stack(n.x() * jump, n.y() * jump);
            }
          }
        } catch (const PositivityError& e) {
          throw PositivityError(e.reason(), face.left, q);
        }
        flux_[g * nq + q] = h;
        theta_left_[g * nq + q] = tl;
        theta_right_[g * nq + q] = tr;
      }
    }
  });
}

void DGOperator::volume(const StateField& field, const Vec2& v_w, NodalState& r) const {
  const int np = tables_.n_p;
  const int nc = tables_.num_cub();
  parallel_for(mesh_.num_elements(), [&](int begin, int end) {
    NodalState fr(nc, 4), fs(nc, 4), uc(nc, 4), ur(nc, 4), us(nc, 4), acc(np, 4);
    for (int k = begin; k < end; ++k) {
      const ElementGeometry& geo = mesh_.element(k);
      const auto uk = field.element(k);
      uc.noalias() = tables_.Vq * uk;
      if (has_diffusion_) {
        ur.noalias() = tables_.Drq * uk;
        us.noalias() = tables_.Dsq * uk;
      }
      for (int c = 0; c < nc; ++c) {
        const State u = uc.row(c).transpose();
        Flux flux = Flux::Zero();
        try {
          if (options_.advection) flux = advective_flux(u, v_w, gas_);
          if (has_diffusion_) {
            const State ux = geo.rx() * ur.row(c).transpose() + geo.sx() * us.row(c).transpose();
            const State uy = geo.ry() * ur.row(c).transpose() + geo.sy() * us.row(c).transpose();
            const StateGrad fv = diffusive_flux(u, stack(ux, uy));
            flux.col(0) -= fv.head<4>();
            flux.col(1) -= fv.tail<4>();
          }
        } catch (const PositivityError& e) {
          throw PositivityError(e.reason(), k, c);
        }
        const double w = tables_.cub.weights(c) * geo.det_j;
        fr.row(c) = w * (geo.rx() * flux.col(0) + geo.ry() * flux.col(1)).transpose();
        fs.row(c) = w * (geo.sx() * flux.col(0) + geo.sy() * flux.col(1)).transpose();
      }
      acc.noalias() = tables_.Drq.transpose() * fr;
      acc.noalias() += tables_.Dsq.transpose() * fs;
      r.middleRows(k * np, np) += acc;
    }
  });
}

void DGOperator::scatter_faces(unsigned parts, NodalState& r) const {
  const int np = tables_.n_p;
  const int nq = tables_.num_face_quad();
  const int p = tables_.p;
  const double theta = penalty_.theta;
  const bool with_theta = has_diffusion_ && theta != 0.0;
  const bool want_interior = parts & kInteriorFaces;
  const bool want_boundary = parts & kBoundaryFaces;

  parallel_for(mesh_.num_elements(), [&](int begin, int end) {
    NodalState hw(nq, 4), tx(nq, 4), ty(nq, 4);
    for (int k = begin; k < end; ++k) {
      const ElementGeometry& geo = mesh_.element(k);
      auto rk = r.middleRows(k * np, np);
      for (int f = 0; f < 3; ++f) {
        const int g = geo.faces[f];
        const Face& face = mesh_.face(g);
        if (face.is_boundary() ? !want_boundary : !want_interior) continue;
        const bool left = face.left == k && face.left_face == f;
        const double half_len = 0.5 * face.length;
        for (int q = 0; q < nq; ++q) {
          const int fq = g * nq + (left ? q : nq - 1 - q);
          const double w = tables_.quad_w(q) * half_len;
          hw.row(q) = (left ? -w : w) * flux_[fq].transpose();
          if (with_theta) {
            const StateGrad& t = left ? theta_left_[fq] : theta_right_[fq];
            tx.row(q) = (theta * w) * t.head<4>().transpose();
            ty.row(q) = (theta * w) * t.tail<4>().transpose();
          }
        }
        const NodalState lifted = tables_.face_interp.transpose() * hw;
        const auto& idx = tables_.nodes.face_index[f];
        for (int a = 0; a <= p; ++a) rk.row(idx[a]) += lifted.row(a);
        if (with_theta) {
          rk += tables_.face_Dr[f].transpose() * (geo.rx() * tx + geo.ry() * ty) +
                tables_.face_Ds[f].transpose() * (geo.sx() * tx + geo.sy() * ty);
        }
      }
    }
  });
}

NodalState DGOperator::residual(const StateField& field, const Vec2& v_w, unsigned parts) {
  if (field.num_elements != mesh_.num_elements() || field.n_p != tables_.n_p)
    throw Error("state field does not match the discretization");
  NodalState r = NodalState::Zero(field.u.rows(), 4);
  if (parts & kVolume) volume(field, v_w, r);
  if (parts & (kInteriorFaces | kBoundaryFaces)) {
    sigma_ = frozen_sigma_ ? *frozen_sigma_ : compute_penalties(field, v_w);
    gather_traces(field);
    face_fluxes(v_w, parts);
    scatter_faces(parts, r);
  }
  if ((parts & kSource) && source_load_) r += *source_load_;
  return r;
}

NodalState DGOperator::apply_inverse_mass(const NodalState& r) const {
  const int np = tables_.n_p;
  NodalState out(r.rows(), 4);
  parallel_for(mesh_.num_elements(), [&](int begin, int end) {
    for (int k = begin; k < end; ++k)
      out.middleRows(k * np, np) =
          (tables_.M_inv * r.middleRows(k * np, np)) / mesh_.element(k).det_j;
  });
  return out;
}

NodalState DGOperator::apply_mass(const NodalState& r) const {
  const int np = tables_.n_p;
  NodalState out(r.rows(), 4);
  for (int k = 0; k < mesh_.num_elements(); ++k)
    out.middleRows(k * np, np) = (tables_.M * r.middleRows(k * np, np)) * mesh_.element(k).det_j;
  return out;
}

CflReport DGOperator::cfl(const StateField& field, const Vec2& v_w) const {
  const std::vector<double> sigma = compute_penalties(field, v_w);
  GasParams gas = gas_;
  if (!has_diffusion_) gas.mu = 0.0;
  return cfl_estimate(mesh_, tables_, field, gas, v_w, sigma, penalty_);
}

}  // namespace dgviv
