#ifndef GUARD_ULTRADENSE_INDEX_PERM_H
#define GUARD_ULTRADENSE_INDEX_PERM_H

#include <cstdint>
#include <string>
#include <vector>

namespace ultradense {

// Permutation of {1..n}, stored 0-based. Acts on the right: (i)(a*b) = ((i)a)b.
class IndexPerm
{
public:
  IndexPerm() = default;
  explicit IndexPerm(std::vector<int> images); // 0-based images

  static IndexPerm identity(int n);
  // "(1 2)(3 4)" or "()" ; n is the degree.
  static IndexPerm parse(std::string const &cycles, int n);

  int degree() const { return static_cast<int>(_img.size()); }
  // 1-based in, 1-based out.
  int apply(int i) const { return _img.at(i - 1) + 1; }
  std::vector<int> const &images() const { return _img; }

  IndexPerm operator*(IndexPerm const &other) const;
  IndexPerm inverse() const;
  IndexPerm pow(std::int64_t k) const;

  bool is_identity() const;
  int order() const;
  std::vector<int> support() const; // 1-based, ascending
  // Cycles in 1-based labels, fixed points included, each starting at its
  // smallest element.
  std::vector<std::vector<int>> cycles() const;

  std::uint64_t rank() const; // Lehmer code rank in [0, n!)
  bool is_even() const;

  std::string to_string() const;

  bool operator==(IndexPerm const &o) const { return _img == o._img; }
  bool operator<(IndexPerm const &o) const { return _img < o._img; }

private:
  std::vector<int> _img;
};

std::uint64_t factorial(int n);

// All permutations of degree n in lexicographic image order.
std::vector<IndexPerm> all_perms(int n);

// Order of the group generated by gens (closure BFS over S_n).
std::uint64_t generated_order(std::vector<IndexPerm> const &gens, int n);

bool generates_symmetric(std::vector<IndexPerm> const &gens, int n);

} // namespace ultradense

#endif // GUARD_ULTRADENSE_INDEX_PERM_H
