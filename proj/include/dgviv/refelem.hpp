#pragma once

// Reference triangle with vertices (-1,-1), (1,-1), (-1,1): nodal set, orthonormal
// modal basis and every operator table shared by all (affine) elements.

#include "dgviv/types.hpp"

#include <array>
#include <utility>
#include <vector>

namespace dgviv {

constexpr int kMaxOrder = 9;

inline int num_nodes(int p) { return (p + 1) * (p + 2) / 2; }

/// Normalized Jacobi polynomial P_n^{(alpha,beta)} evaluated at x.
Vector jacobi_p(const Vector& x, double alpha, double beta, int n);
/// Derivative of the normalized Jacobi polynomial.
Vector grad_jacobi_p(const Vector& x, double alpha, double beta, int n);
/// Gauss-Jacobi nodes and weights, n+1 points.
std::pair<Vector, Vector> jacobi_gq(double alpha, double beta, int n);
/// Gauss-Lobatto-Jacobi nodes, n+1 points.
Vector jacobi_gl(double alpha, double beta, int n);
/// Gauss-Legendre rule with n points on [-1, 1].
std::pair<Vector, Vector> gauss_legendre(int n);

struct NodeSet {
  int p = 0;
  Matrix points;  // N_p x 2, reference coordinates (r, s)
  /// Face f runs from vertex f to vertex (f+1)%3; p+1 node indices in that order.
  std::array<std::vector<int>, 3> face_index;
  /// lattice(i, j) -> node index, i along r and j along s, i + j <= p.
  std::vector<std::vector<int>> lattice;
};

/// Alpha-optimized warp-and-blend nodes. Throws Error for p outside [1, 9].
NodeSet interpolation_nodes(int p);

/// Orthonormal PKD basis evaluated at `points` (rows of (r, s)); graded-lexicographic modes.
Matrix pkd_vandermonde(int p, const Matrix& points);
/// Reference derivatives (d/dr, d/ds) of the PKD modes at `points`.
std::pair<Matrix, Matrix> pkd_grad_vandermonde(int p, const Matrix& points);

struct Cubature {
  Matrix points;   // n x 2
  Vector weights;  // sums to |K̂| = 2
};

/// Collapsed-coordinate tensor Gauss-Legendre rule exact for total degree `degree`.
Cubature volume_cubature(int degree);

/// Point of the reference triangle on face f at edge parameter xi in [-1, 1].
Vec2 face_point(int face, double xi);

struct OperatorTables {
  int p = 0;
  int p_f = 0;
  int n_p = 0;
  NodeSet nodes;

  Matrix V, V_inv;
  Matrix M, M_inv;
  Matrix Dr, Ds;  // nodal differentiation in reference coordinates

  // Volume cubature: basis values and reference derivatives at the cubature points.
  Cubature cub;
  Matrix Vq, Drq, Dsq;  // n_c x N_p

  // Faces. All three reference faces share the same 1D node distribution.
  Vector face_xi;   // p+1 edge parameters of the face nodes
  Matrix M_face;    // (p+1)^2 mass matrix on [-1, 1]
  Vector quad_xi;   // face Gauss-Legendre points
  Vector quad_w;
  Matrix face_interp;  // n_q x (p+1): face nodes -> face quadrature points
  std::array<Matrix, 3> face_Dr, face_Ds;  // n_q x N_p: grad of the nodal basis at face quad points

  int num_cub() const { return static_cast<int>(cub.weights.size()); }
  int num_face_quad() const { return static_cast<int>(quad_w.size()); }

  /// N_p x (p+1) 0/1 extraction map for face f.
  Matrix extraction(int face) const;
  /// Interpolation matrix from nodal values to arbitrary reference points.
  Matrix interp_matrix(const Matrix& points) const;
};

/// Builds every reference table. Requires 1 <= p <= 9 and p_f >= 2p.
OperatorTables build_tables(int p, int p_f);

}  // namespace dgviv
