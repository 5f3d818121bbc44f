#include "qekr/certificate.hpp"

#include <algorithm>
#include <cmath>

namespace qekr {

namespace {

Rational qpow(int q, long e) { return ipow(Rational(q), e); }
Rational sign_power(long e) { return (e % 2 == 0) ? Rational(1) : Rational(-1); }

RatMatrix zeros(int rows, int cols) {
  return RatMatrix(static_cast<std::size_t>(rows), std::vector<Rational>(static_cast<std::size_t>(cols)));
}

/// sigma^k q^C(k,2) [n,k]: phi_k [n,k] without the normalizer.
Rational layer_weight(int n, const Rational& sigma, int q, int k) {
  return ipow(sigma, k) * qpow(q, binom2(k)) * gaussian_binomial(n, k, q);
}

/// (q;q)_m
Rational qq(int q, long m) { return q_shifted_factorial(Rational(q), Rational(q), m); }

}  // namespace

RatMatrix identity_matrix(int size) {
  RatMatrix m = zeros(size, size);
  for (int i = 0; i < size; ++i) m[i][i] = 1;
  return m;
}

RatMatrix multiply(const RatMatrix& a, const RatMatrix& b) {
  const std::size_t rows = a.size();
  const std::size_t inner = b.size();
  const std::size_t cols = inner == 0 ? 0 : b[0].size();
  RatMatrix out(rows, std::vector<Rational>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t k = 0; k < inner; ++k) {
      if (a[i][k] == 0) continue;
      for (std::size_t j = 0; j < cols; ++j) out[i][j] += a[i][k] * b[k][j];
    }
  }
  return out;
}

std::vector<Rational> characteristic_polynomial(const RatMatrix& m) {
  // Faddeev-LeVerrier.
  const int size = static_cast<int>(m.size());
  std::vector<Rational> c(static_cast<std::size_t>(size) + 1);
  c[size] = 1;
  RatMatrix mk = zeros(size, size);
  for (int k = 1; k <= size; ++k) {
    RatMatrix next = multiply(m, mk);
    for (int i = 0; i < size; ++i) next[i][i] += c[size - k + 1];
    mk = std::move(next);
    RatMatrix amk = multiply(m, mk);
    Rational trace = 0;
    for (int i = 0; i < size; ++i) trace += amk[i][i];
    c[size - k] = -trace / k;
  }
  return c;
}

std::vector<Rational> polynomial_from_roots(const std::vector<Rational>& roots) {
  std::vector<Rational> p{Rational(1)};
  for (const auto& r : roots) {
    std::vector<Rational> next(p.size() + 1);
    for (std::size_t i = 0; i < p.size(); ++i) {
      next[i + 1] += p[i];
      next[i] -= r * p[i];
    }
    p = std::move(next);
  }
  return p;
}

TriangularPack build_triangular(int n, const Rational& sigma, int q) {
  if (n < 0) throw Error(ErrorKind::Domain, "n must be nonnegative");
  if (!is_supported_order(q)) throw Error(ErrorKind::Domain, "unsupported field order");
  TriangularPack p;
  p.n = n;
  p.q = q;
  p.sigma = sigma;
  p.c = zeros(n + 1, n + 1);
  p.c_inv = zeros(n + 1, n + 1);
  p.g = zeros(n + 1, n + 1);
  for (int k = 0; k <= n; ++k) {
    for (int l = 0; l <= k; ++l) {
      p.c[k][l] = gaussian_binomial(k, l, q);
      p.c_inv[k][l] = gaussian_binomial(k, l, q) * sign_power(k - l) * qpow(q, binom2(k - l));
    }
    for (int l = k; l <= n; ++l) {
      p.g[k][l] = gaussian_binomial(n - k, n - l, q) * sign_power(k) * ipow(sigma, l) *
                  qpow(q, binom2(k) + binom2(l));
    }
  }
  if (multiply(p.c, p.c_inv) != identity_matrix(n + 1)) {
    throw Error(ErrorKind::Invariant, "C times its closed-form inverse is not the identity");
  }
  return p;
}

RatMatrix f_by_similarity(const TriangularPack& pack) {
  return multiply(multiply(pack.c, pack.g), pack.c_inv);
}

RatMatrix f_by_formula(int n, const Rational& sigma, const Rational& q) {
  if (n < 0) throw Error(ErrorKind::Domain, "n must be nonnegative");
  RatMatrix f = zeros(n + 1, n + 1);
  for (int k = 0; k <= n; ++k) {
    for (int l = 0; l + k <= n; ++l) {
      Rational sum = 0;
      const int m = n - k - l;
      for (int h = 0; h <= m; ++h) {
        sum += gaussian_binomial<Rational>(m, h, q) * sign_power(h) * ipow(sigma, h) *
               ipow(q, static_cast<long>(h) * (h + k + l - 1));
      }
      f[k][l] = gaussian_binomial<Rational>(n - k, l, q) * ipow(sigma, l) *
                ipow(q, static_cast<long>(k) * l + binom2(l)) * sum;
    }
  }
  return f;
}

Rational f_q1_limit(int n, const Rational& sigma, int k, int l) {
  if (k < 0 || l < 0) throw Error(ErrorKind::Domain, "indices must be nonnegative");
  if (k + l > n) return 0;
  return Rational(binomial(n - k, l)) * ipow(sigma, l) * ipow(Rational(1) - sigma, n - k - l);
}

Rational g_diagonal(int k, const Rational& sigma, int q) {
  return sign_power(k) * ipow(sigma, k) * qpow(q, static_cast<long>(k) * (k - 1));
}

FChecks check_f(const RatMatrix& f, int n, const Rational& sigma, int q) {
  FChecks c;
  c.anti_triangular = true;
  c.weighted_symmetry = true;
  c.ones_eigenvector = true;
  std::vector<Rational> w(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) w[k] = layer_weight(n, sigma, q, k);
  for (int k = 0; k <= n; ++k) {
    Rational row = 0;
    for (int l = 0; l <= n; ++l) {
      row += f[k][l];
      if (k + l > n && f[k][l] != 0) c.anti_triangular = false;
      if (f[k][l] * w[k] != f[l][k] * w[l]) c.weighted_symmetry = false;
    }
    if (row != 1) c.ones_eigenvector = false;
  }
  std::vector<Rational> roots;
  for (int k = 0; k <= n; ++k) roots.push_back(g_diagonal(k, sigma, q));
  c.eigenvalues = characteristic_polynomial(f) == polynomial_from_roots(roots);
  return c;
}

Rational a_prime_squared(int n, const Rational& sigma, int q, int k, int l) {
  if (k < 0 || l < 0 || k + l > n) throw Error(ErrorKind::Domain, "a' needs 0 <= k, l and k + l <= n");
  const RatMatrix f = f_by_formula(n, sigma, Rational(q));
  const Rational ratio = f[k][l] / (1 + sigma);
  return ratio * ratio * layer_weight(n, sigma, q, k) / layer_weight(n, sigma, q, l);
}

Real a_prime_entry(int n, const Rational& sigma, int q, int k, int l, unsigned bits) {
  if (sigma <= 0) throw Error(ErrorKind::Domain, "sigma must be positive");
  PrecisionScope scope(bits);
  const RatMatrix f = f_by_formula(n, sigma, Rational(q));
  Real value = sqrt(Real(a_prime_squared(n, sigma, q, k, l)));
  return f[k][l] < 0 ? -value : value;
}

RatMatrix f_block(const RatMatrix& f, int n, int q, int i) {
  if (i < 0 || 2 * i > n) throw Error(ErrorKind::Domain, "block index must lie in [0, n/2]");
  const int size = n - 2 * i + 1;
  RatMatrix out = zeros(size, size);
  for (int k = i; k <= n - i; ++k) {
    for (int l = i; l <= n - i; ++l) {
      out[k - i][l - i] = f[k][l] * sign_power(i) * qpow(q, binom2(i) - static_cast<long>(i) * k) *
                          qq(q, n - k - i) * qq(q, l) / (qq(q, n - k) * qq(q, l - i));
    }
  }
  return out;
}

RatMatrix f_block_shifted(int n, const Rational& sigma, int q, int i) {
  if (i < 0 || 2 * i > n) throw Error(ErrorKind::Domain, "block index must lie in [0, n/2]");
  RatMatrix f = f_by_formula(n - 2 * i, sigma * qpow(q, 2L * i), Rational(q));
  const Rational factor = sign_power(i) * ipow(sigma, i) * qpow(q, static_cast<long>(i) * (i - 1));
  for (auto& row : f) {
    for (auto& x : row) x *= factor;
  }
  return f;
}

BlockSpectrum block_spectrum(int n, const Rational& sigma, int q) {
  BlockSpectrum s;
  s.n = n;
  s.q = q;
  s.sigma = sigma;
  s.shift_identity = true;
  s.block_eigenvalues = true;
  const RatMatrix f = f_by_formula(n, sigma, Rational(q));
  bool first = true;
  for (int i = 0; 2 * i <= n; ++i) {
    const RatMatrix fi = f_block(f, n, q, i);
    if (fi != f_block_shifted(n, sigma, q, i)) s.shift_identity = false;
    std::vector<Rational> roots;
    for (int k = i; k <= n - i; ++k) roots.push_back(g_diagonal(k, sigma, q));
    if (characteristic_polynomial(fi) != polynomial_from_roots(roots)) s.block_eigenvalues = false;

    const BigInt d = gaussian_count(n, i, q) - (i == 0 ? BigInt(0) : gaussian_count(n, i - 1, q));
    std::vector<BlockEigenvalue> block;
    for (int k = i; k <= n - i; ++k) {
      BlockEigenvalue e;
      e.i = i;
      e.k = k;
      e.multiplicity = d;
      e.value = (i == 0 && k == 0) ? Rational(0) : (sigma + g_diagonal(k, sigma, q)) / (1 + sigma);
      if (first || e.value < s.min_eigenvalue) s.min_eigenvalue = e.value;
      first = false;
      block.push_back(std::move(e));
    }
    s.blocks.push_back(std::move(block));
  }
  return s;
}

Rational psd_threshold(int n, int q) {
  if (n < 1) throw Error(ErrorKind::Domain, "threshold needs n >= 1");
  return qpow(q, -(2L * ((n - 1) / 2) + 1));
}

bool psd_condition(int n, const Rational& sigma, int q) {
  for (int k = 1; k <= n; k += 2) {
    if (ipow(sigma, k) * qpow(q, static_cast<long>(k) * (k - 1)) > sigma) return false;
  }
  return true;
}

CertificateBundle certify(int n, const Rational& sigma, int q) {
  if (sigma <= 0) throw Error(ErrorKind::Domain, "sigma must be positive");
  CertificateBundle b;
  b.pack = build_triangular(n, sigma, q);
  b.f = f_by_similarity(b.pack);
  b.f_formula_matches = b.f == f_by_formula(n, sigma, Rational(q));
  b.f_checks = check_f(b.f, n, sigma, q);
  b.spectrum = block_spectrum(n, sigma, q);
  b.threshold = psd_threshold(n, q);
  b.condition = psd_condition(n, sigma, q);
  b.min_eigenvalue_nonnegative = b.spectrum.min_eigenvalue >= 0;
  return b;
}

// --- float layer ---

namespace {

double to_d(const Rational& r) { return r.convert_to<double>(); }

double gauss_d(long n, long k, int q) { return to_d(gaussian_binomial(n, k, q)); }

/// Closed-form eigenvalue of the disjointness block from layer l to layer k on V_i.
double theta(int n, int q, int i, int k, int l) {
  const double sign = (i % 2 == 0) ? 1.0 : -1.0;
  const double expo = static_cast<double>(binom2(i) + static_cast<long>(k) * l) - 0.5 * i * (k + l);
  return sign * std::pow(static_cast<double>(q), expo) * gauss_d(n - k - i, l - i, q) *
         std::sqrt(gauss_d(n - 2 * i, k - i, q) / gauss_d(n - 2 * i, l - i, q));
}

Eigen::MatrixXd nullspace(const Eigen::MatrixXd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double tol = 1e-9 * (sv.size() > 0 ? sv(0) : 0.0);
  Eigen::Index rank = 0;
  for (Eigen::Index j = 0; j < sv.size(); ++j) {
    if (sv(j) > tol) ++rank;
  }
  return svd.matrixV().rightCols(m.cols() - rank);
}

Eigen::Index numerical_rank(const Eigen::MatrixXd& m) {
  if (m.cols() == 0 || m.rows() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  const double tol = 1e-9 * std::max(1.0, sv(0));
  Eigen::Index rank = 0;
  for (Eigen::Index j = 0; j < sv.size(); ++j) {
    if (sv(j) > tol) ++rank;
  }
  return rank;
}

}  // namespace

FullCertificate build_full_certificate(int n, int q, const Rational& sigma, std::size_t max_points) {
  if (sigma <= 0) throw Error(ErrorKind::Domain, "sigma must be positive");
  if (n < 1) throw Error(ErrorKind::Domain, "full certificate needs n >= 1");
  const std::uint64_t total = count_all(n, q);
  if (total > max_points) {
    throw Error(ErrorKind::CapExceeded, "full certificate needs " + std::to_string(total) +
                                            " points, above the limit of " + std::to_string(max_points));
  }
  FullCertificate c;
  c.n = n;
  c.q = q;
  c.sigma = sigma;
  c.alpha = to_d(sigma / (1 + sigma));
  c.points = enumerate_all(n, q, max_points);
  const auto size = static_cast<Eigen::Index>(c.points.size());
  c.offset.assign(static_cast<std::size_t>(n) + 2, 0);
  for (const auto& x : c.points) ++c.offset[static_cast<std::size_t>(x.dim()) + 1];
  for (int k = 0; k <= n; ++k) c.offset[k + 1] += c.offset[k];
  auto layer_size = [&](int k) { return static_cast<Eigen::Index>(c.offset[k + 1] - c.offset[k]); };

  const ExactContext ctx = make_context<Rational>(q, n, sigma);
  c.delta.resize(size);
  c.meet.resize(size, size);
  for (Eigen::Index x = 0; x < size; ++x) {
    c.delta(x) = to_d(ctx.phi[c.points[x].dim()]);
    for (Eigen::Index y = x; y < size; ++y) {
      c.meet(x, y) = c.meet(y, x) = intersection_dim(c.points[x], c.points[y]);
    }
  }
  // Containment blocks W_{k,l} and disjointness blocks Wbar_{k,l}.
  auto w_block = [&](int k, int l) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(layer_size(k), layer_size(l));
    const int lo = std::min(k, l);
    for (Eigen::Index a = 0; a < m.rows(); ++a) {
      for (Eigen::Index b = 0; b < m.cols(); ++b) {
        if (c.meet(c.offset[k] + a, c.offset[l] + b) == lo) m(a, b) = 1.0;
      }
    }
    return m;
  };
  auto wbar_block = [&](int k, int l) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(layer_size(k), layer_size(l));
    for (Eigen::Index a = 0; a < m.rows(); ++a) {
      for (Eigen::Index b = 0; b < m.cols(); ++b) {
        if (c.meet(c.offset[k] + a, c.offset[l] + b) == 0) m(a, b) = 1.0;
      }
    }
    return m;
  };

  // Orthonormal bases u^k_{i,r}.
  Eigen::MatrixXd full_basis(size, size);
  Eigen::Index column = 0;
  for (int i = 0; 2 * i <= n; ++i) {
    Eigen::MatrixXd ui;
    if (i == 0) {
      ui = Eigen::MatrixXd::Ones(1, 1);
    } else {
      const Eigen::MatrixXd w = w_block(i - 1, i);
      ui = nullspace(w);
      c.nullspace_residual = std::max(c.nullspace_residual, (w * ui).cwiseAbs().maxCoeff());
    }
    const long expected = static_cast<long>(gaussian_count(n, i, q) -
                                            (i == 0 ? BigInt(0) : gaussian_count(n, i - 1, q)));
    if (ui.cols() != expected) {
      throw Error(ErrorKind::Invariant,
                  "nullspace of W_{" + std::to_string(i - 1) + "," + std::to_string(i) + "} has dimension " +
                      std::to_string(ui.cols()) + ", expected " + std::to_string(expected) +
                      " (residual " + std::to_string(c.nullspace_residual) + ")");
    }
    c.d.push_back(expected);
    std::vector<Eigen::MatrixXd> layers;
    for (int k = i; k <= n - i; ++k) {
      const double scale = std::pow(static_cast<double>(q), -0.5 * i * (k - i)) /
                           std::sqrt(gauss_d(n - 2 * i, k - i, q));
      Eigen::MatrixXd uk = scale * (w_block(k, i) * ui);
      full_basis.block(c.offset[k], column, uk.rows(), uk.cols()) = uk;
      full_basis.block(0, column, c.offset[k], uk.cols()).setZero();
      full_basis.block(c.offset[k + 1], column, size - c.offset[k + 1], uk.cols()).setZero();
      column += uk.cols();
      layers.push_back(std::move(uk));
    }
    c.onb.push_back(std::move(layers));
  }
  if (column != size) {
    throw Error(ErrorKind::Invariant, "block basis does not have one vector per subspace");
  }
  c.orthonormality_residual =
      (full_basis.transpose() * full_basis - Eigen::MatrixXd::Identity(size, size)).cwiseAbs().maxCoeff();

  for (int i = 0; 2 * i <= n; ++i) {
    for (int k = i; k <= n - i; ++k) {
      for (int l = i; l <= n - i; ++l) {
        const double th = theta(n, q, i, k, l);
        const Eigen::MatrixXd lhs = wbar_block(k, l) * c.onb[i][l - i];
        c.theta_residual = std::max(c.theta_residual, (lhs - th * c.onb[i][k - i]).cwiseAbs().maxCoeff());
        c.theta_symmetry_residual = std::max(c.theta_symmetry_residual, std::abs(th - theta(n, q, i, l, k)));
      }
    }
  }

  c.a_prime = Eigen::MatrixXd::Zero(size, size);
  for (int k = 0; k <= n; ++k) {
    for (int l = 0; k + l <= n; ++l) {
      const double coeff = a_prime_entry(n, sigma, q, k, l).to_double() / theta(n, q, 0, k, l);
      c.a_prime.block(c.offset[k], c.offset[l], layer_size(k), layer_size(l)) = coeff * wbar_block(k, l);
    }
  }
  const Eigen::VectorXd root = c.delta.cwiseSqrt();
  c.s_prime = c.alpha * Eigen::MatrixXd::Identity(size, size) - root * root.transpose() + c.a_prime;
  c.symmetry_residual = (c.s_prime - c.s_prime.transpose()).cwiseAbs().maxCoeff();
  for (Eigen::Index x = 0; x < size; ++x) {
    for (Eigen::Index y = 0; y < size; ++y) {
      if (c.meet(x, y) > 0) c.support_violation = std::max(c.support_violation, std::abs(c.a_prime(x, y)));
    }
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(c.s_prime);
  c.spectrum = eig.eigenvalues();
  c.eigenvectors = eig.eigenvectors();
  c.spectral_radius = c.spectrum.cwiseAbs().maxCoeff();
  c.min_eigenvalue = c.spectrum(0);
  const double tol = 1e-9 * (1.0 + c.spectral_radius);
  c.psd = c.min_eigenvalue >= -tol;

  std::vector<double> predicted;
  const BlockSpectrum exact = block_spectrum(n, sigma, q);
  for (const auto& block : exact.blocks) {
    for (const auto& e : block) {
      for (BigInt m = 0; m < e.multiplicity; ++m) predicted.push_back(to_d(e.value));
    }
  }
  std::sort(predicted.begin(), predicted.end());
  if (static_cast<Eigen::Index>(predicted.size()) != size) {
    throw Error(ErrorKind::Invariant, "block multiplicities do not add up to the number of subspaces");
  }
  for (Eigen::Index j = 0; j < size; ++j) {
    c.spectrum_deviation = std::max(c.spectrum_deviation, std::abs(c.spectrum(j) - predicted[j]));
  }

  std::vector<Eigen::Index> kernel_columns;
  for (Eigen::Index j = 0; j < size; ++j) {
    if (std::abs(c.spectrum(j)) <= tol) kernel_columns.push_back(j);
  }
  c.kernel.resize(size, static_cast<Eigen::Index>(kernel_columns.size()));
  for (std::size_t j = 0; j < kernel_columns.size(); ++j) {
    c.kernel.col(static_cast<Eigen::Index>(j)) = c.eigenvectors.col(kernel_columns[j]);
  }
  return c;
}

Eigen::VectorXd indicator(const FullCertificate& cert, const Family& family) {
  if (family.ambient() != cert.n || family.field_order() != cert.q) {
    throw Error(ErrorKind::Domain, "family and certificate have different ambient spaces");
  }
  Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(cert.points.size()));
  for (const auto& s : family) {
    const int k = s.dim();
    auto first = cert.points.begin() + cert.offset[k];
    auto last = cert.points.begin() + cert.offset[k + 1];
    auto it = std::find(first, last, s);
    if (it == last) throw Error(ErrorKind::Invariant, "family member missing from the enumeration");
    x(it - cert.points.begin()) = 1.0;
  }
  return x;
}

KernelReport kernel_analysis(const FullCertificate& cert, const std::vector<Family>& families) {
  const int n = cert.n;
  const int q = cert.q;
  if (!(cert.sigma < psd_threshold(n, q))) {
    throw Error(ErrorKind::Domain, "kernel analysis needs sigma strictly below the threshold");
  }
  KernelReport r;
  r.kernel_dimension = cert.kernel.cols();
  r.expected_dimension = static_cast<long>(gaussian_count(n, 1, q)) + 1;
  const auto size = static_cast<Eigen::Index>(cert.points.size());
  auto embed = [&](int k, const Eigen::VectorXd& v) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(size);
    out.segment(cert.offset[k], v.size()) = v;
    return out;
  };

  const ExactContext ctx = make_context<Rational>(q, n, cert.sigma);
  const double nu = to_d(-gaussian_binomial(n, 1, q) * cert.sigma / (1 + cert.sigma));
  std::vector<Eigen::VectorXd> built;

  Eigen::VectorXd v0 = Eigen::VectorXd::Zero(size);
  Eigen::VectorXd v0p = Eigen::VectorXd::Zero(size);
  for (int k = 0; k <= n; ++k) {
    const double w = std::sqrt(to_d(ctx.layer_mass[k]));
    v0 += w * embed(k, cert.onb[0][k].col(0));
    v0p += w * (nu + gauss_d(k, 1, q)) * embed(k, cert.onb[0][k].col(0));
  }
  r.v0_coordinate_deviation = (v0 - cert.delta.cwiseSqrt()).cwiseAbs().maxCoeff();
  built.push_back(v0);
  built.push_back(v0p);
  if (n >= 2) {
    for (long col = 0; col < cert.d[1]; ++col) {
      Eigen::VectorXd v = Eigen::VectorXd::Zero(size);
      for (int k = 1; k <= n - 1; ++k) {
        const double qk = std::pow(static_cast<double>(q), k);
        const double qnk = std::pow(static_cast<double>(q), n - k);
        const double eta = std::sqrt(to_d(ctx.layer_mass[k])) * std::sqrt(qk) *
                           std::sqrt((1.0 - qnk) * (1.0 - qk));
        v += eta * embed(k, cert.onb[1][k - 1].col(col));
      }
      built.push_back(std::move(v));
    }
  }
  Eigen::MatrixXd m(size, static_cast<Eigen::Index>(built.size()));
  for (std::size_t j = 0; j < built.size(); ++j) {
    const auto& v = built[j];
    r.construction_residual = std::max(r.construction_residual, (cert.s_prime * v).norm() / v.norm());
    m.col(static_cast<Eigen::Index>(j)) = v / v.norm();
  }
  r.construction_rank = numerical_rank(m);
  Eigen::MatrixXd joined(size, cert.kernel.cols() + m.cols());
  joined << cert.kernel, m;
  r.spans_kernel = r.construction_rank == r.kernel_dimension && numerical_rank(joined) == r.kernel_dimension;

  for (const auto& f : families) {
    const Eigen::VectorXd x = indicator(cert, f);
    r.family_residuals.push_back((cert.s_prime * cert.delta.cwiseSqrt().cwiseProduct(x)).norm());
  }
  return r;
}

DualityGap weak_duality_check(const FullCertificate& cert, const Family& family) {
  if (family.empty()) throw Error(ErrorKind::Domain, "duality check needs a non-empty family");
  if (!is_t_intersecting(family, 1)) throw Error(ErrorKind::Domain, "family is not intersecting");
  const Eigen::VectorXd x = indicator(cert, family);
  const Eigen::VectorXd y = cert.delta.cwiseSqrt().cwiseProduct(x);
  DualityGap g;
  g.measure = cert.delta.dot(x);
  g.gap = y.dot(cert.s_prime * y) / g.measure;
  g.closed_gap = cert.alpha - g.measure;
  g.trace_ax = y.dot(cert.a_prime * y) / g.measure;
  return g;
}

Rational hoffman_bound(const Rational& lambda1, const Rational& lambda_min) {
  if (lambda1 <= lambda_min) throw Error(ErrorKind::Domain, "Hoffman bound needs lambda1 > lambda_min");
  return -lambda_min / (lambda1 - lambda_min);
}

Real hoffman_bound(const Real& lambda1, const Real& lambda_min) {
  if (!(lambda1 > lambda_min)) throw Error(ErrorKind::Domain, "Hoffman bound needs lambda1 > lambda_min");
  return -lambda_min / (lambda1 - lambda_min);
}

HoffmanReport hoffman_pipeline(int n, int q, const Rational& sigma, std::size_t max_points) {
  return hoffman_pipeline(build_full_certificate(n, q, sigma, max_points));
}

HoffmanReport hoffman_pipeline(const FullCertificate& cert) {
  HoffmanReport r;
  const Rational& sigma = cert.sigma;
  r.lambda1 = 1 / (1 + sigma);
  bool first = true;
  for (int k = 1; k <= cert.n; ++k) {
    const Rational v = g_diagonal(k, sigma, cert.q) / (1 + sigma);
    if (first || v < r.lambda_min) r.lambda_min = v;
    first = false;
  }
  r.bound = hoffman_bound(r.lambda1, r.lambda_min);

  const Eigen::VectorXd w = cert.delta.cwiseSqrt();
  r.lambda1_numeric = w.dot(cert.a_prime * w) / w.squaredNorm();
  r.eigenvector_residual = (cert.a_prime * w - r.lambda1_numeric * w).norm();
  r.support_violation = cert.support_violation;
  r.reflects_adjacency = r.support_violation == 0.0 && r.eigenvector_residual < 1e-9;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cert.a_prime);
  const Eigen::VectorXd unit = w.normalized();
  Eigen::Index skip = 0;
  double best = -1.0;
  for (Eigen::Index j = 0; j < eig.eigenvalues().size(); ++j) {
    const double overlap = std::abs(eig.eigenvectors().col(j).dot(unit));
    if (overlap > best) {
      best = overlap;
      skip = j;
    }
  }
  first = true;
  for (Eigen::Index j = 0; j < eig.eigenvalues().size(); ++j) {
    if (j == skip) continue;
    if (first || eig.eigenvalues()(j) < r.lambda_min_numeric) r.lambda_min_numeric = eig.eigenvalues()(j);
    first = false;
  }
  r.bound_numeric = -r.lambda_min_numeric / (r.lambda1_numeric - r.lambda_min_numeric);
  const Rational target = sigma / (1 + sigma);
  r.bound_is_sigma_ratio = r.bound == target && std::abs(r.bound_numeric - to_d(target)) < 1e-9;
  return r;
}

}  // namespace qekr
