#pragma once

#include "qekr/gfspace.hpp"

#include <compare>
#include <vector>

namespace qekr {

/// A set of subspaces of one ambient space, kept sorted and duplicate-free.
class Family {
 public:
  Family() : Family(0, 2) {}
  Family(int n, int q) : n_(n), q_(q) {}
  Family(int n, int q, std::vector<Subspace> members);

  void insert(Subspace s);
  bool contains(const Subspace& s) const;

  int ambient() const { return n_; }
  int field_order() const { return q_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  const std::vector<Subspace>& members() const { return members_; }
  auto begin() const { return members_.begin(); }
  auto end() const { return members_.end(); }

  /// Members restricted to one dimension.
  Family layer(int k) const;
  /// The single dimension shared by every member, or -1 (also -1 when empty).
  int uniform_dimension() const;

  friend bool operator==(const Family&, const Family&) = default;
  friend std::strong_ordering operator<=>(const Family& a, const Family& b);

 private:
  void check_ambient(const Subspace& s) const;
  int n_;
  int q_;
  std::vector<Subspace> members_;
};

}  // namespace qekr
