#include "qekr/family.hpp"

#include <algorithm>

namespace qekr {

Family::Family(int n, int q, std::vector<Subspace> members)
    : n_(n), q_(q), members_(std::move(members)) {
  for (const auto& s : members_) check_ambient(s);
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

void Family::check_ambient(const Subspace& s) const {
  if (s.ambient() != n_ || s.field_order() != q_) {
    throw Error(ErrorKind::Domain, "family member lives in a different ambient space");
  }
}

void Family::insert(Subspace s) {
  check_ambient(s);
  auto it = std::lower_bound(members_.begin(), members_.end(), s);
  if (it == members_.end() || *it != s) members_.insert(it, std::move(s));
}

bool Family::contains(const Subspace& s) const {
  return std::binary_search(members_.begin(), members_.end(), s);
}

Family Family::layer(int k) const {
  Family out(n_, q_);
  for (const auto& s : members_) {
    if (s.dim() == k) out.members_.push_back(s);
  }
  return out;
}

int Family::uniform_dimension() const {
  if (members_.empty()) return -1;
  int k = members_.front().dim();
  for (const auto& s : members_) {
    if (s.dim() != k) return -1;
  }
  return k;
}

std::strong_ordering operator<=>(const Family& a, const Family& b) {
  if (auto c = a.n_ <=> b.n_; c != 0) return c;
  if (auto c = a.q_ <=> b.q_; c != 0) return c;
  return std::lexicographical_compare_three_way(a.members_.begin(), a.members_.end(),
                                                b.members_.begin(), b.members_.end());
}

}  // namespace qekr
