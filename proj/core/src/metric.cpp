#include "dpmod/metric.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <cmath>
#include <string>

#include "dpmod/error.hpp"
#include "dpmod/geodesic.hpp"

namespace dpmod {
namespace {

constexpr double kSymmetryTolerance = 1e-12;
constexpr double kMinEigenvalue = 1e-10;

void require_same_mesh(const TensorField& a, const TensorField& b) {
  if (a.mesh() != b.mesh()) throw Error(ErrorCode::MeshMismatch, "fields live on different meshes");
}

Eigen::LLT<Matrix> cholesky(const Matrix& h) {
  Eigen::LLT<Matrix> llt(h);
  if (llt.info() != Eigen::Success) throw Error(ErrorCode::NotSPD, "Cholesky factorization failed");
  return llt;
}

}  // namespace

TensorField::TensorField(MeshPtr mesh, std::vector<Matrix> cells)
    : mesh_(std::move(mesh)), cells_(std::move(cells)) {
  if (!mesh_) throw Error(ErrorCode::MeshMismatch, "null mesh");
  if (static_cast<int>(cells_.size()) != mesh_->num_cells()) {
    throw Error(ErrorCode::MeshMismatch, std::to_string(cells_.size()) + " matrices for " +
                                             std::to_string(mesh_->num_cells()) + " cells");
  }
  const int n = mesh_->dimension();
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    Matrix& m = cells_[c];
    if (m.rows() != n || m.cols() != n) {
      throw Error(ErrorCode::MeshMismatch, "cell " + std::to_string(c) + " matrix is not " +
                                               std::to_string(n) + "x" + std::to_string(n));
    }
    if (!m.allFinite()) throw Error(ErrorCode::NotSymmetric, "cell " + std::to_string(c) + " has non-finite entries");
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > kSymmetryTolerance * scale) {
      throw Error(ErrorCode::NotSymmetric, "cell " + std::to_string(c) + " matrix is not symmetric");
    }
    m = 0.5 * (m + m.transpose()).eval();
  }
}

MetricField::MetricField(MeshPtr mesh, std::vector<Matrix> cells)
    : TensorField(std::move(mesh), std::move(cells)) {
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(cells_[c], Eigen::EigenvaluesOnly);
    if (eig.eigenvalues()[0] <= kMinEigenvalue) {
      throw Error(ErrorCode::NotSPD, "cell " + std::to_string(c) + " has eigenvalue " +
                                         std::to_string(eig.eigenvalues()[0]));
    }
  }
}

MetricField MetricField::identity(MeshPtr mesh) {
  const int n = mesh->dimension();
  return constant(std::move(mesh), Matrix::Identity(n, n));
}

MetricField MetricField::constant(MeshPtr mesh, const Matrix& value) {
  std::vector<Matrix> cells(static_cast<std::size_t>(mesh->num_cells()), value);
  return MetricField(std::move(mesh), std::move(cells));
}

CellScalars MetricField::volume_weights() const {
  CellScalars w(cells_.size());
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    w[c] = std::sqrt(cells_[c].determinant()) * mesh_->cell_euclidean_volume(static_cast<int>(c));
  }
  return w;
}

double MetricField::volume() const {
  double total = 0.0;
  for (double w : volume_weights()) total += w;
  return total;
}

Vector pencil_eigenvalues(const Matrix& g, const Matrix& g0) {
  const auto llt = cholesky(g0);
  const Matrix& l = llt.matrixL();
  // C = L^-1 G L^-T is similar to G0^-1 G and symmetric.
  Matrix c = l.triangularView<Eigen::Lower>().solve(g);
  c = l.triangularView<Eigen::Lower>().solve(c.transpose()).eval();
  c = 0.5 * (c + c.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(c, Eigen::EigenvaluesOnly);
  return eig.eigenvalues();
}

double norm_wrt(const Matrix& g, const Matrix& g0) {
  return std::sqrt(pencil_eigenvalues(g, g0).array().square().sum());
}

double inverse_norm_wrt(const Matrix& g, const Matrix& g0) {
  return std::sqrt(pencil_eigenvalues(g, g0).array().square().inverse().sum());
}

double det_wrt(const Matrix& g, const Matrix& g0) { return pencil_eigenvalues(g, g0).prod(); }

double contravariant_norm(const Matrix& t, const Matrix& h) {
  const auto llt = cholesky(h);
  const Matrix l = llt.matrixL();
  return (l.transpose() * t * l).norm();
}

double covariant_norm(const Matrix& omega, const Matrix& g) {
  const auto llt = cholesky(g);
  const Matrix& l = llt.matrixL();
  Matrix c = l.triangularView<Eigen::Lower>().solve(omega);
  c = l.triangularView<Eigen::Lower>().solve(c.transpose()).eval();
  return c.norm();
}

double gradient_norm(const Matrix& g, const Vector& df) {
  const auto llt = cholesky(g);
  return std::sqrt(std::max(0.0, df.dot(llt.solve(df))));
}

EigenPencil generalized_eigenvalues(const MetricField& g, const MetricField& g0) {
  require_same_mesh(g, g0);
  EigenPencil pencil{g.mesh(), {}};
  pencil.eigenvalues.reserve(static_cast<std::size_t>(g.num_cells()));
  for (int c = 0; c < g.num_cells(); ++c) pencil.eigenvalues.push_back(pencil_eigenvalues(g[c], g0[c]));
  return pencil;
}

CellScalars norm_g_wrt_g0(const EigenPencil& pencil) {
  CellScalars out;
  out.reserve(pencil.eigenvalues.size());
  for (const Vector& l : pencil.eigenvalues) out.push_back(std::sqrt(l.array().square().sum()));
  return out;
}

CellScalars norm_ginv_wrt_g0(const EigenPencil& pencil) {
  CellScalars out;
  out.reserve(pencil.eigenvalues.size());
  for (const Vector& l : pencil.eigenvalues) out.push_back(std::sqrt(l.array().square().inverse().sum()));
  return out;
}

CellScalars det_wrt_g0(const EigenPencil& pencil) {
  CellScalars out;
  out.reserve(pencil.eigenvalues.size());
  for (const Vector& l : pencil.eigenvalues) out.push_back(l.prod());
  return out;
}

double lq_norm(std::span<const double> field, double s, const MetricField& g0) {
  if (!(s > 0.0)) throw Error(ErrorCode::NonpositiveExponent, "exponent " + std::to_string(s));
  if (static_cast<int>(field.size()) != g0.num_cells()) {
    throw Error(ErrorCode::MeshMismatch, "scalar field size does not match cell count");
  }
  const CellScalars w = g0.volume_weights();
  double sum = 0.0;
  for (std::size_t c = 0; c < field.size(); ++c) sum += std::pow(field[c], s) * w[c];
  return std::pow(sum, 1.0 / s);
}

double pointwise_gradient_norm(const MetricField& g, const Vector& df, int cell) {
  if (cell < 0 || cell >= g.num_cells()) throw Error(ErrorCode::BadIndex, "cell " + std::to_string(cell));
  return gradient_norm(g[cell], df);
}

MetricField scale_metric(const MetricField& g, double lambda) {
  if (!(lambda > 0.0)) throw Error(ErrorCode::NonpositiveScale, "scale " + std::to_string(lambda));
  std::vector<Matrix> cells(g.matrices().begin(), g.matrices().end());
  for (Matrix& m : cells) m *= lambda * lambda;
  return MetricField(g.mesh(), std::move(cells));
}

ClassReport check_class_membership(const MetricField& g, const MetricField& g0,
                                   const ClassParams& params) {
  require_same_mesh(g, g0);
  if (!(params.q1 > 1.0) || !(params.q2 > 1.0) || !(params.V1 > 0.0) || !(params.V2 > 0.0) ||
      !(params.D > 0.0)) {
    throw Error(ErrorCode::BadConfig, "class parameters need q1, q2 > 1 and V1, V2, D > 0");
  }
  const EigenPencil pencil = generalized_eigenvalues(g, g0);
  ClassReport report;
  report.norm_g = lq_norm(norm_g_wrt_g0(pencil), params.q1 / 2.0, g0);
  report.norm_ginv = lq_norm(norm_ginv_wrt_g0(pencil), params.q2 / 2.0, g0);
  report.diameter = diameter(all_pairs_distances(g));
  report.metric_bound = report.norm_g <= params.V1;
  report.inverse_bound = report.norm_ginv <= params.V2;
  report.diameter_bound = report.diameter <= params.D;
  return report;
}

HypothesisReport hypothesis_functionals(const MetricField& gj, const MetricField& g0, double p) {
  require_same_mesh(gj, g0);
  const double n = gj.mesh()->dimension();
  if (!(p > n)) throw Error(ErrorCode::BadExponent, "p = " + std::to_string(p) + " must exceed n");
  const double eta = 5.0 * n / 12.0;
  const double e_g = n / 2.0;
  const double e_inv = n * (p - 1.0) / 2.0;
  const double e_eta = n * eta / (p - eta);
  const double e_33 = p / (2.0 * (p - 1.0));

  const CellScalars w = g0.volume_weights();
  HypothesisReport r;
  double sum_33 = 0.0;
  for (int c = 0; c < gj.num_cells(); ++c) {
    const Vector l = pencil_eigenvalues(gj[c], g0[c]);
    const double norm_g = std::sqrt(l.array().square().sum());
    const double norm_ginv = std::sqrt(l.array().square().inverse().sum());
    const Matrix diff = gj[c].inverse() - g0[c].inverse();
    const double norm_diff = contravariant_norm(diff, g0[c]);
    const double wc = w[static_cast<std::size_t>(c)];
    r.I_g += std::pow(norm_g, e_g) * wc;
    r.I_inv += std::pow(norm_diff, e_inv) * wc;
    r.I_eta += std::pow(norm_ginv, e_eta) * wc;
    sum_33 += std::pow(norm_diff, e_33) * wc;
  }
  r.I_33 = std::pow(sum_33, (p - 1.0) / p);
  r.diam_g = diameter(all_pairs_distances(gj));
  return r;
}

}  // namespace dpmod
