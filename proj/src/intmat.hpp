#pragma once

// Exact integer matrices over GMP integers: Smith normal form with the
// right transform and its inverse, and subgroup lattices of Z^m in Hermite
// normal form.

#include <cstddef>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace ucov {

using Integer = mpz_class;
using IntVector = std::vector<Integer>;

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static IntMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  Integer& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Integer& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  IntVector row(std::size_t i) const;
  IntVector col(std::size_t j) const;

  bool operator==(const IntMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> data_;
};

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);

/// D = U·A·V with D diagonal, d_1 | d_2 | ... and d_i >= 0. Only V and V^-1
/// are kept; U is never needed by the callers.
struct SmithForm {
  std::vector<Integer> diagonal;  // length min(rows, cols), trailing zeros included
  IntMatrix right;                // V, cols x cols, unimodular
  IntMatrix right_inverse;        // V^-1
  std::size_t nonzero = 0;        // number of nonzero diagonal entries
};

SmithForm smith_normal_form(IntMatrix a);

/// Subgroup of Z^dim, stored as a row-style Hermite normal form basis
/// (positive pivots, entries above each pivot reduced into [0, pivot)).
class Lattice {
 public:
  explicit Lattice(std::size_t dim = 0) : dim_(dim) {}
  Lattice(std::size_t dim, const std::vector<IntVector>& generators);

  std::size_t dim() const noexcept { return dim_; }
  const std::vector<IntVector>& basis() const noexcept { return basis_; }
  std::size_t rank() const noexcept { return basis_.size(); }

  bool contains(const IntVector& v) const;
  bool includes(const Lattice& other) const;
  bool operator==(const Lattice& other) const { return dim_ == other.dim_ && basis_ == other.basis_; }

 private:
  void add(IntVector v);

  std::size_t dim_;
  std::vector<IntVector> basis_;
  std::vector<std::size_t> pivots_;
};

std::string to_string(const Integer& v);

}  // namespace ucov
