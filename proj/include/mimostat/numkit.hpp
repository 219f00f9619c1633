#pragma once

#include <Eigen/Dense>
#include <functional>
#include <span>
#include <vector>

#include "mimostat/common.hpp"

namespace mimostat::numkit {

using ComplexMatrix = Eigen::MatrixXcd;
using MatrixL = Eigen::Matrix<CplxL, Eigen::Dynamic, Eigen::Dynamic>;

inline constexpr double kDefaultMergeTol = 1e-9;

/// Ordered positive eigenvalues with explicit degeneracy clusters.
struct Spectrum {
  struct Cluster {
    double value = 0.0;
    int multiplicity = 0;
  };
  std::vector<double> values;    // descending
  std::vector<Cluster> clusters; // descending representative values

  int dim() const { return static_cast<int>(values.size()); }
  double mergeToleranceUsed = kDefaultMergeTol;

  /// Groups values whose relative separation is below mergeTol.
  static Spectrum fromValues(std::vector<double> v, double mergeTol = kDefaultMergeTol);
};

double vandermonde(std::span<const double> x);
Cplx vandermonde(std::span<const Cplx> x);

/// Determinant by pivoted elimination; rejects non-square input.
Cplx det(const ComplexMatrix& a);

/// Determinant with per-column scaling, returned in log-scaled form.
ScaledValue detScaled(MatrixL m);

bool isHermitian(const ComplexMatrix& a, double relTol = 1e-12);

/// Eigenvalues of a Hermitian positive definite matrix, descending, with
/// degeneracy clusters. Throws on non-Hermitian input, on a non-positive
/// eigenvalue (reporting its index), or if the reconstruction residual
/// exceeds 1e-10 * ||A||.
Spectrum hermitianEigenvalues(const ComplexMatrix& a, double mergeTol = kDefaultMergeTol);

// ---------------------------------------------------------------------------
// Confluent determinant-ratio engine.
//
// Everything downstream reduces to limits of det[f_i(x_j)] / Delta(x) as
// nodes coincide. A coincident group of p nodes replaces its p columns by
// derivative columns of order 0..p-1 and divides by prod_{j<p} j! together
// with the (x_i - x_0)^p cross factors; this is applied independently on the
// row and column variables of a bivariate kernel.
// ---------------------------------------------------------------------------

/// Nodes with multiplicity; order is preserved (ratios are permutation
/// invariant, so grouping order never changes the value).
struct Nodes {
  struct Cluster {
    CplxL value{0.0L, 0.0L};
    int multiplicity = 0;
  };
  std::vector<Cluster> clusters;

  int dim() const;
  static Nodes fromComplex(std::span<const Cplx> values, double mergeTol = kDefaultMergeTol);
  static Nodes fromReal(std::span<const double> values, double mergeTol = kDefaultMergeTol);
  static Nodes fromSpectrum(const Spectrum& s);
  /// Appends a structural cluster (exact repeated value, e.g. zero padding).
  void appendCluster(Cplx value, int multiplicity);
};

/// order-th derivative of a column function evaluated at a (complex) point.
using ColumnFn = std::function<CplxL(int order, CplxL t)>;

/// mixed partial d^a/dt^a d^b/dx^b of a bivariate kernel.
using Kernel2 = std::function<CplxL(int a, int b, CplxL t, CplxL x)>;

/// lim det[cols_j at row nodes]/DeltaConf(rows); cols.size() == rows.dim().
ScaledValue confluentRatioDet(const Nodes& rows, const std::vector<ColumnFn>& cols);

/// lim det[K(t_i, x_j) | extras(t_i)] / (DeltaConf(rows) * DeltaConf(xNodes)).
/// Kernel columns come first (one per x node, derivative columns expanded),
/// extra columns follow.
ScaledValue bivariateRatioDet(const Nodes& rows, const Kernel2& kernel, const Nodes& xNodes,
                              const std::vector<ColumnFn>& extras = {});

/// Generalized Vandermonde of clustered nodes:
/// prod_{k<l} (v_l - v_k)^{p_k p_l} * prod_k prod_{j<p_k} j!.
ScaledValue confluentVandermonde(const Nodes& nodes);

/// Mixed partials of e^{sign * t * x}:
/// d^a/dt^a d^b/dx^b = sum_k C(a,k) (b)_k sign^{a+b-k} t^{b-k} x^{a-k} e^{sign t x}.
Kernel2 expProductKernel(double sign);

/// Column t -> coeff * t^power with its derivatives.
ColumnFn monomialColumn(int power, CplxL coeff = CplxL(1.0L, 0.0L));

// ---------------------------------------------------------------------------
// Spec-facing wrappers on the engine.
// ---------------------------------------------------------------------------

struct ConfluentRatioProblem {
  std::vector<ColumnFn> columnFunctions;
  Nodes nodes;

  static ConfluentRatioProblem fromRealNodes(std::vector<ColumnFn> fns, std::span<const double> nodeValues,
                                             double mergeTol = kDefaultMergeTol);
};

/// lim det[f_i(x_j)]/Delta(x) with coincident nodes handled confluently.
Cplx confluentRatio(const ConfluentRatioProblem& p);

/// Limit of det[f_i(x_j)]/Delta(x) when the functions behave like
/// f_i(x) ~ x^{M-1} sum_k tail[i][k] x^{-k} and (M - finite node count)
/// nodes are sent to +infinity. `p.nodes` holds the finite nodes only.
Cplx asymptoticRatio(const ConfluentRatioProblem& p, const std::vector<std::vector<Cplx>>& tailCoefficients);

}  // namespace mimostat::numkit
