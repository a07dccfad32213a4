#pragma once

#include <span>
#include <vector>

#include "dpmod/linalg.hpp"
#include "dpmod/mesh.hpp"

namespace dpmod {

/// One scalar per cell.
using CellScalars = std::vector<double>;

/// Piecewise-constant symmetric (0,2)-tensor field; only symmetry is required.
class TensorField {
 public:
  TensorField(MeshPtr mesh, std::vector<Matrix> cells);

  [[nodiscard]] const MeshPtr& mesh() const noexcept { return mesh_; }
  [[nodiscard]] int num_cells() const noexcept { return static_cast<int>(cells_.size()); }
  [[nodiscard]] const Matrix& operator[](int cell) const { return cells_[static_cast<std::size_t>(cell)]; }
  [[nodiscard]] std::span<const Matrix> matrices() const noexcept { return cells_; }

 protected:
  MeshPtr mesh_;
  std::vector<Matrix> cells_;
};

/// Piecewise-constant Riemannian metric: every cell matrix is SPD with
/// smallest eigenvalue above 1e-10. Holds g, g0 and the members g_j of a
/// metric sequence alike.
class MetricField : public TensorField {
 public:
  MetricField(MeshPtr mesh, std::vector<Matrix> cells);

  static MetricField identity(MeshPtr mesh);
  static MetricField constant(MeshPtr mesh, const Matrix& value);

  /// Riemannian volume sum_c sqrt(det G_c) |c|.
  [[nodiscard]] double volume() const;
  /// sqrt(det G_c) * |c|, the dV_g weight of every cell.
  [[nodiscard]] CellScalars volume_weights() const;
};

/// Ascending generalized eigenvalues lambda_i^2 of the pencil (g, g0) per cell.
struct EigenPencil {
  MeshPtr mesh;
  std::vector<Vector> eigenvalues;
};

/// Parameters of the metric class N_{g0}(q1, q2, V1, V2, D).
struct ClassParams {
  double q1 = 2.0;
  double q2 = 2.0;
  double V1 = 1.0;
  double V2 = 1.0;
  double D = 1.0;
};

struct ClassReport {
  double norm_g = 0.0;     ///< ||g||_{L^{q1/2}(g0)}
  double norm_ginv = 0.0;  ///< ||g^-1||_{L^{q2/2}(g0)}
  double diameter = 0.0;   ///< graph Diam(M, g)
  bool metric_bound = false;
  bool inverse_bound = false;
  bool diameter_bound = false;
  [[nodiscard]] bool member() const noexcept { return metric_bound && inverse_bound && diameter_bound; }
};

/// Integral functionals of a sequence member g_j against g0.
struct HypothesisReport {
  double I_g = 0.0;    ///< int |g_j|_{g0}^{n/2} dV_{g0}
  double I_inv = 0.0;  ///< int |g_j^-1 - g0^-1|_{g0}^{n(p-1)/2} dV_{g0}
  double I_eta = 0.0;  ///< int |g_j^-1|_{g0}^{n eta/(p-eta)} dV_{g0}, eta = 5n/12
  double I_33 = 0.0;   ///< (int |g_j^-1 - g0^-1|_{g0}^{p/(2(p-1))} dV_{g0})^{(p-1)/p}
  double diam_g = 0.0;
};

// ---- pointwise tensor algebra (single cell, n x n matrices) ----

/// Eigenvalues of G0^-1 G in ascending order, via Cholesky reduction of G0.
Vector pencil_eigenvalues(const Matrix& g, const Matrix& g0);
/// sqrt(sum lambda_i^4)
double norm_wrt(const Matrix& g, const Matrix& g0);
/// sqrt(sum lambda_i^-4)
double inverse_norm_wrt(const Matrix& g, const Matrix& g0);
/// prod lambda_i^2
double det_wrt(const Matrix& g, const Matrix& g0);
/// Norm of a contravariant (2,0)-tensor T against metric h: ||L^T T L||_F with h = L L^T.
double contravariant_norm(const Matrix& t, const Matrix& h);
/// Norm of a covariant (0,2)-tensor omega against metric g: ||L^-1 omega L^-T||_F.
double covariant_norm(const Matrix& omega, const Matrix& g);
/// |grad f|_g = sqrt(df^T G^-1 df).
double gradient_norm(const Matrix& g, const Vector& df);

// ---- field operations ----

EigenPencil generalized_eigenvalues(const MetricField& g, const MetricField& g0);
CellScalars norm_g_wrt_g0(const EigenPencil& pencil);
CellScalars norm_ginv_wrt_g0(const EigenPencil& pencil);
CellScalars det_wrt_g0(const EigenPencil& pencil);

/// (sum_c field_c^s sqrt(det G0_c) |c|)^(1/s).
double lq_norm(std::span<const double> field, double s, const MetricField& g0);

double pointwise_gradient_norm(const MetricField& g, const Vector& df, int cell);

MetricField scale_metric(const MetricField& g, double lambda);

ClassReport check_class_membership(const MetricField& g, const MetricField& g0,
                                   const ClassParams& params);

HypothesisReport hypothesis_functionals(const MetricField& gj, const MetricField& g0, double p);

}  // namespace dpmod
