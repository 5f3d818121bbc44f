#include "qekr/gfspace.hpp"

#include "qekr/qcombinat.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <memory>
#include <mutex>

namespace qekr {

namespace {

struct PrimePower {
  int p;
  int m;
};

PrimePower factor_order(int q) {
  if (q < 2) {
    throw Error(ErrorKind::Domain, "field order must be at least 2");
  }
  int p = 2;
  while (q % p != 0) ++p;
  int m = 0;
  int rest = q;
  while (rest % p == 0) {
    rest /= p;
    ++m;
  }
  if (rest != 1) {
    throw Error(ErrorKind::Domain, std::to_string(q) + " is not a prime power");
  }
  return {p, m};
}

// Low-order coefficients of x^m in F_p[x]/(f), i.e. -(f - x^m).
std::vector<int> reduction_rule(int q) {
  switch (q) {
    case 4: return {1, 1};        // x^2 = x + 1
    case 8: return {1, 1, 0};     // x^3 = x + 1
    case 9: return {2, 0};        // x^2 = -1
    case 16: return {1, 1, 0, 0};  // x^4 = x + 1
    default: return {};
  }
}

std::vector<int> digits(int value, int p, int m) {
  std::vector<int> d(m);
  for (int i = 0; i < m; ++i) {
    d[i] = value % p;
    value /= p;
  }
  return d;
}

int undigits(const std::vector<int>& d, int p) {
  int v = 0;
  for (int i = static_cast<int>(d.size()) - 1; i >= 0; --i) v = v * p + d[i];
  return v;
}

int poly_mul(int a, int b, int p, int m, const std::vector<int>& rule) {
  auto da = digits(a, p, m);
  auto db = digits(b, p, m);
  std::vector<int> prod(2 * m - 1, 0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
  for (int d = 2 * m - 2; d >= m; --d) {
    int c = prod[d];
    if (c == 0) continue;
    prod[d] = 0;
    for (int i = 0; i < m; ++i) prod[d - m + i] = (prod[d - m + i] + c * rule[i]) % p;
  }
  prod.resize(m);
  return undigits(prod, p);
}

}  // namespace

FiniteField make_field(int q) {
  if (!is_supported_order(q)) {
    auto pm = factor_order(q);  // throws "not a prime power" where that is the reason
    (void)pm;
    throw Error(ErrorKind::Domain, "unsupported field order " + std::to_string(q));
  }
  auto [p, m] = factor_order(q);
  FiniteField f;
  f.q_ = q;
  f.p_ = p;
  f.m_ = m;
  std::size_t qq = static_cast<std::size_t>(q) * q;
  f.add_.resize(qq);
  f.mul_.resize(qq);
  f.neg_.resize(q);
  f.inv_.assign(q, 0);
  auto rule = reduction_rule(q);
  for (int a = 0; a < q; ++a) {
    auto da = digits(a, p, m);
    for (int b = 0; b < q; ++b) {
      auto db = digits(b, p, m);
      std::vector<int> s(m);
      for (int i = 0; i < m; ++i) s[i] = (da[i] + db[i]) % p;
      f.add_[a * q + b] = static_cast<Element>(undigits(s, p));
      f.mul_[a * q + b] = static_cast<Element>(m == 1 ? (a * b) % p : poly_mul(a, b, p, m, rule));
    }
  }
  for (int a = 0; a < q; ++a) {
    for (int b = 0; b < q; ++b) {
      if (f.add_[a * q + b] == 0) f.neg_[a] = static_cast<Element>(b);
      if (f.mul_[a * q + b] == 1) f.inv_[a] = static_cast<Element>(b);
    }
  }
  return f;
}

const FiniteField& field_of(int q) {
  static std::array<std::unique_ptr<FiniteField>, 17> cache;
  static std::once_flag flags[17];
  if (q < 0 || q > 16 || !is_supported_order(q)) {
    make_field(q);  // throws with the precise reason
  }
  std::call_once(flags[q], [q] { cache[q] = std::make_unique<FiniteField>(make_field(q)); });
  return *cache[q];
}

RrefResult rref(const FiniteField& field, FieldMatrix m) {
  int lead_row = 0;
  for (int col = 0; col < m.cols && lead_row < m.rows; ++col) {
    int pivot = -1;
    for (int r = lead_row; r < m.rows; ++r) {
      if (m.at(r, col) != 0) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) continue;
    if (pivot != lead_row) {
      for (int c = 0; c < m.cols; ++c) std::swap(m.at(pivot, c), m.at(lead_row, c));
    }
    Element inv = field.inv(m.at(lead_row, col));
    for (int c = col; c < m.cols; ++c) m.at(lead_row, c) = field.mul(m.at(lead_row, c), inv);
    for (int r = 0; r < m.rows; ++r) {
      if (r == lead_row || m.at(r, col) == 0) continue;
      Element factor = m.at(r, col);
      for (int c = col; c < m.cols; ++c) {
        m.at(r, c) = field.sub(m.at(r, c), field.mul(factor, m.at(lead_row, c)));
      }
    }
    ++lead_row;
  }
  RrefResult out;
  out.rank = lead_row;
  out.basis = FieldMatrix(lead_row, m.cols);
  std::copy_n(m.data.begin(), static_cast<std::size_t>(lead_row) * m.cols, out.basis.data.begin());
  return out;
}

// --- Subspace ---

Subspace::Subspace(int q, const FieldMatrix& spanning) : n_(spanning.cols), q_(q) {
  auto reduced = rref(field_of(q), spanning);
  dim_ = reduced.rank;
  rows_ = std::move(reduced.basis.data);
}

Subspace Subspace::zero(int n, int q) { return Subspace(q, FieldMatrix(0, n)); }

Subspace Subspace::whole(int n, int q) { return coordinate(n, n, q); }

Subspace Subspace::coordinate(int n, int k, int q) {
  FieldMatrix m(k, n);
  for (int i = 0; i < k; ++i) m.at(i, i) = 1;
  return Subspace(q, m);
}

FieldMatrix Subspace::basis() const {
  FieldMatrix m(dim_, n_);
  m.data = rows_;
  return m;
}

std::string Subspace::hex() const {
  if (dim_ == 0) return "-";
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  for (int r = 0; r < dim_; ++r) {
    if (r > 0) out.push_back(',');
    for (int c = 0; c < n_; ++c) out.push_back(kDigits[entry(r, c)]);
  }
  return out;
}

Subspace Subspace::from_hex(int n, int q, const std::string& text) {
  if (text == "-" || text.empty()) return zero(n, q);
  std::vector<std::vector<Element>> rows(1);
  for (char ch : text) {
    if (ch == ',') {
      rows.emplace_back();
      continue;
    }
    int v = (ch >= '0' && ch <= '9') ? ch - '0' : (ch >= 'a' && ch <= 'f') ? ch - 'a' + 10 : -1;
    if (v < 0 || v >= q) throw Error(ErrorKind::Domain, "bad hex subspace encoding: " + text);
    rows.back().push_back(static_cast<Element>(v));
  }
  FieldMatrix m(static_cast<int>(rows.size()), n);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (static_cast<int>(rows[r].size()) != n) {
      throw Error(ErrorKind::Domain, "hex row length differs from ambient dimension");
    }
    std::copy(rows[r].begin(), rows[r].end(), m.data.begin() + static_cast<long>(r) * n);
  }
  return Subspace(q, m);
}

std::strong_ordering operator<=>(const Subspace& a, const Subspace& b) {
  if (auto c = a.n_ <=> b.n_; c != 0) return c;
  if (auto c = a.q_ <=> b.q_; c != 0) return c;
  if (auto c = a.dim_ <=> b.dim_; c != 0) return c;
  return a.rows_ <=> b.rows_;
}

// --- enumeration ---

namespace {

std::uint64_t checked_count(long n, long k, int q) {
  BigInt c = gaussian_count(n, k, q);
  if (c > BigInt(std::numeric_limits<std::uint64_t>::max())) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return c.convert_to<std::uint64_t>();
}

}  // namespace

GrassmannianStream::GrassmannianStream(int n, int k, int q, std::uint64_t cap)
    : n_(n), k_(k), q_(q), size_(checked_count(n, k, q)) {
  field_of(q);
  if (k < 0 || k > n) {
    throw Error(ErrorKind::Domain, "layer must satisfy 0 <= k <= n");
  }
  if (size_ > cap) {
    throw Error(ErrorKind::CapExceeded, "Grassmannian(" + std::to_string(n) + "," +
                                            std::to_string(k) + ") over F_" + std::to_string(q) +
                                            " exceeds the enumeration cap " + std::to_string(cap));
  }
  pivots_.resize(k);
  for (int i = 0; i < k; ++i) pivots_[i] = i;
}

void GrassmannianStream::reset_free() {
  free_slots_.clear();
  std::vector<bool> is_pivot(n_, false);
  for (int p : pivots_) is_pivot[p] = true;
  for (int r = 0; r < k_; ++r) {
    for (int c = pivots_[r] + 1; c < n_; ++c) {
      if (!is_pivot[c]) free_slots_.push_back(static_cast<std::size_t>(r) * n_ + c);
    }
  }
  free_values_.assign(free_slots_.size(), 0);
}

bool GrassmannianStream::advance_pivots() {
  int i = k_ - 1;
  while (i >= 0 && pivots_[i] == n_ - k_ + i) --i;
  if (i < 0) return false;
  ++pivots_[i];
  for (int j = i + 1; j < k_; ++j) pivots_[j] = pivots_[j - 1] + 1;
  return true;
}

std::optional<Subspace> GrassmannianStream::next() {
  if (done_) return std::nullopt;
  if (!started_) {
    started_ = true;
    reset_free();
  } else {
    int i = static_cast<int>(free_values_.size()) - 1;
    while (i >= 0 && free_values_[i] == q_ - 1) {
      free_values_[i] = 0;
      --i;
    }
    if (i >= 0) {
      ++free_values_[i];
    } else {
      if (!advance_pivots()) {
        done_ = true;
        return std::nullopt;
      }
      reset_free();
    }
  }
  Subspace s;
  s.n_ = n_;
  s.q_ = q_;
  s.dim_ = k_;
  s.rows_.assign(static_cast<std::size_t>(k_) * n_, 0);
  for (int r = 0; r < k_; ++r) s.rows_[static_cast<std::size_t>(r) * n_ + pivots_[r]] = 1;
  for (std::size_t j = 0; j < free_slots_.size(); ++j) s.rows_[free_slots_[j]] = free_values_[j];
  return s;
}

std::vector<Subspace> enumerate_grassmannian(int n, int k, int q, std::uint64_t cap) {
  GrassmannianStream stream(n, k, q, cap);
  std::vector<Subspace> out;
  out.reserve(stream.size());
  while (auto s = stream.next()) out.push_back(std::move(*s));
  return out;
}

std::uint64_t count_all(int n, int q) {
  BigInt total = 0;
  for (int k = 0; k <= n; ++k) total += gaussian_count(n, k, q);
  if (total > BigInt(std::numeric_limits<std::uint64_t>::max())) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return total.convert_to<std::uint64_t>();
}

std::vector<Subspace> enumerate_all(int n, int q, std::uint64_t cap) {
  std::uint64_t total = count_all(n, q);
  if (total > cap) {
    throw Error(ErrorKind::CapExceeded, "the subspace lattice of F_" + std::to_string(q) + "^" +
                                            std::to_string(n) + " has " + std::to_string(total) +
                                            " members, above the enumeration cap " +
                                            std::to_string(cap));
  }
  std::vector<Subspace> out;
  out.reserve(total);
  for (int k = 0; k <= n; ++k) {
    GrassmannianStream stream(n, k, q, cap);
    while (auto s = stream.next()) out.push_back(std::move(*s));
  }
  return out;
}

int intersection_dim(const Subspace& x, const Subspace& y) {
  if (x.ambient() != y.ambient() || x.field_order() != y.field_order()) {
    throw Error(ErrorKind::Domain, "subspaces live in different ambient spaces");
  }
  if (x.dim() == 0 || y.dim() == 0) return 0;
  FieldMatrix stacked(x.dim() + y.dim(), x.ambient());
  std::copy(x.rows().begin(), x.rows().end(), stacked.data.begin());
  std::copy(y.rows().begin(), y.rows().end(),
            stacked.data.begin() + static_cast<long>(x.rows().size()));
  int rank = rref(field_of(x.field_order()), std::move(stacked)).rank;
  return x.dim() + y.dim() - rank;
}

bool contains(const Subspace& x, const Subspace& y) { return intersection_dim(x, y) == y.dim(); }

}  // namespace qekr
