#pragma once

// The dual certificate behind the sharp bound sigma/(1+sigma).
//
// Exact layer: the triangular matrices C and G, F = C G C^{-1} and its
// closed form, the per-block matrices F_i, the block eigenvalues of S', and
// the threshold on sigma for positive semidefiniteness. Everything here is
// rational.
//
// Float layer: for small n the whole matrix S' = alpha I - D^{1/2} J D^{1/2} + A'
// is assembled from enumerated subspaces and checked against the exact layer.

#include "qekr/families.hpp"
#include "qekr/measure.hpp"

#include <Eigen/Dense>

#include <vector>

namespace qekr {

using RatMatrix = std::vector<std::vector<Rational>>;

RatMatrix identity_matrix(int size);
RatMatrix multiply(const RatMatrix& a, const RatMatrix& b);
/// Coefficients c_0..c_m of det(x I - M), lowest degree first.
std::vector<Rational> characteristic_polynomial(const RatMatrix& m);
/// Coefficients of prod (x - r), lowest degree first.
std::vector<Rational> polynomial_from_roots(const std::vector<Rational>& roots);

struct TriangularPack {
  int n = 0;
  int q = 2;
  Rational sigma;
  RatMatrix c;      // [k choose l]
  RatMatrix c_inv;  // [k choose l] (-1)^{k-l} q^C(k-l,2)
  RatMatrix g;      // [n-k choose n-l] (-1)^k sigma^l q^{C(k,2)+C(l,2)}, k <= l
};

/// Throws Error(Invariant) unless C * C_inv is the identity.
TriangularPack build_triangular(int n, const Rational& sigma, int q);

RatMatrix f_by_similarity(const TriangularPack& pack);
/// Closed form; q may be any rational (q = 1 + 10^-d probes the q -> 1 limit).
RatMatrix f_by_formula(int n, const Rational& sigma, const Rational& q);
/// C(n-k, l) sigma^l (1-sigma)^{n-k-l}; zero when k + l > n.
Rational f_q1_limit(int n, const Rational& sigma, int k, int l);

/// (-1)^k sigma^k q^{k(k-1)}.
Rational g_diagonal(int k, const Rational& sigma, int q);

struct FChecks {
  bool anti_triangular = false;
  bool weighted_symmetry = false;
  bool ones_eigenvector = false;
  /// det(xI - F) equals prod_k (x - (-1)^k sigma^k q^{k(k-1)}).
  bool eigenvalues = false;
  bool all() const { return anti_triangular && weighted_symmetry && ones_eigenvector && eigenvalues; }
};

FChecks check_f(const RatMatrix& f, int n, const Rational& sigma, int q);

/// (a'_{k,l})^2 = (F_{k,l}/(1+sigma))^2 phi_k [n,k] / (phi_l [n,l]).
Rational a_prime_squared(int n, const Rational& sigma, int q, int k, int l);
/// a'_{k,l} with the sign of F_{k,l}; requires k + l <= n.
Real a_prime_entry(int n, const Rational& sigma, int q, int k, int l,
                   unsigned bits = kDefaultPrecisionBits);

/// (F_i)_{k,l} for i <= k, l <= n-i, indexed from 0 (row k-i, column l-i),
/// computed from F by the per-block rescaling.
RatMatrix f_block(const RatMatrix& f, int n, int q, int i);
/// (F_{n-2i; sigma q^{2i}})_{k-i,l-i} (-1)^i sigma^i q^{i(i-1)}.
RatMatrix f_block_shifted(int n, const Rational& sigma, int q, int i);

struct BlockEigenvalue {
  int i = 0;
  int k = 0;
  Rational value;
  /// d_i = [n,i] - [n,i-1]
  BigInt multiplicity;
};

struct BlockSpectrum {
  int n = 0;
  int q = 2;
  Rational sigma;
  /// blocks[i] lists k = i..n-i. Entry (0,0) is the direction of D^{1/2} 1, where
  /// the rank-one term cancels A' and the eigenvalue is 0.
  std::vector<std::vector<BlockEigenvalue>> blocks;
  /// The shift identity held for every block.
  bool shift_identity = false;
  /// Each det(xI - F_i) matched its predicted roots.
  bool block_eigenvalues = false;
  Rational min_eigenvalue;
};

BlockSpectrum block_spectrum(int n, const Rational& sigma, int q);

/// q^{-2 floor((n-1)/2) - 1}; requires n >= 1.
Rational psd_threshold(int n, int q);
/// sigma^k q^{k(k-1)} <= sigma for every odd k <= n.
bool psd_condition(int n, const Rational& sigma, int q);

struct CertificateBundle {
  TriangularPack pack;
  RatMatrix f;
  bool f_formula_matches = false;
  FChecks f_checks;
  BlockSpectrum spectrum;
  Rational threshold;
  bool condition = false;
  bool min_eigenvalue_nonnegative = false;
};

CertificateBundle certify(int n, const Rational& sigma, int q);

// --- float layer ---

inline constexpr std::size_t kDefaultFullCertificatePoints = 1000;

struct FullCertificate {
  int n = 0;
  int q = 2;
  Rational sigma;
  double alpha = 0.0;
  /// All subspaces, dimension ascending; layer k occupies [offset[k], offset[k+1]).
  std::vector<Subspace> points;
  std::vector<int> offset;
  Eigen::MatrixXi meet;        // dim(x & y)
  Eigen::VectorXd delta;       // phi(dim x)
  std::vector<long> d;         // d_i
  /// onb[i][k-i]: [n,k] x d_i matrix whose columns are u^k_{i,r} restricted to layer k.
  std::vector<std::vector<Eigen::MatrixXd>> onb;
  double nullspace_residual = 0.0;
  double orthonormality_residual = 0.0;
  double theta_residual = 0.0;
  double theta_symmetry_residual = 0.0;
  Eigen::MatrixXd a_prime;
  Eigen::MatrixXd s_prime;
  double symmetry_residual = 0.0;
  /// max |A'_{x,y}| over pairs with x & y != 0.
  double support_violation = 0.0;
  Eigen::VectorXd spectrum;  // ascending
  Eigen::MatrixXd eigenvectors;
  double spectral_radius = 0.0;
  double min_eigenvalue = 0.0;
  /// min eigenvalue >= -1e-9 (1 + spectral radius)
  bool psd = false;
  /// max |sorted spectrum - sorted block prediction with multiplicities d_i|
  double spectrum_deviation = 0.0;
  Eigen::MatrixXd kernel;  // columns span the numerical kernel
};

/// Throws Error(CapExceeded) when |Omega_n| exceeds max_points and
/// Error(Invariant) when a nullspace does not have dimension d_i.
FullCertificate build_full_certificate(int n, int q, const Rational& sigma,
                                       std::size_t max_points = kDefaultFullCertificatePoints);

/// Indicator vector of a family in the point order of `cert`.
Eigen::VectorXd indicator(const FullCertificate& cert, const Family& family);

struct KernelReport {
  long kernel_dimension = 0;
  long expected_dimension = 0;  // [n,1] + 1
  /// max ||S' v|| / ||v|| over v_0, v_0' and the v_r.
  double construction_residual = 0.0;
  /// Rank of the constructed vectors and whether they span the kernel.
  long construction_rank = 0;
  bool spans_kernel = false;
  double v0_coordinate_deviation = 0.0;
  /// ||S' D^{1/2} x|| for each supplied family.
  std::vector<double> family_residuals;
};

/// Requires sigma strictly below the threshold.
KernelReport kernel_analysis(const FullCertificate& cert, const std::vector<Family>& families = {});

struct DualityGap {
  double measure = 0.0;
  /// tr(S X) with X = x x^T / mu(U)
  double gap = 0.0;
  /// alpha - mu(U)
  double closed_gap = 0.0;
  /// tr(A X); zero for intersecting families
  double trace_ax = 0.0;
};

/// Throws Error(Domain) for empty or non-intersecting families.
DualityGap weak_duality_check(const FullCertificate& cert, const Family& family);

Rational hoffman_bound(const Rational& lambda1, const Rational& lambda_min);
Real hoffman_bound(const Real& lambda1, const Real& lambda_min);

struct HoffmanReport {
  Rational lambda1;
  Rational lambda_min;
  Rational bound;
  double lambda1_numeric = 0.0;
  double lambda_min_numeric = 0.0;
  double bound_numeric = 0.0;
  /// ||A' w - lambda1 w|| for w = D^{1/2} 1
  double eigenvector_residual = 0.0;
  double support_violation = 0.0;
  bool reflects_adjacency = false;
  bool bound_is_sigma_ratio = false;
};

HoffmanReport hoffman_pipeline(int n, int q, const Rational& sigma,
                               std::size_t max_points = kDefaultFullCertificatePoints);
HoffmanReport hoffman_pipeline(const FullCertificate& cert);

}  // namespace qekr
