#include "intmat.hpp"

#include <algorithm>
#include <utility>

namespace ucov {

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntVector IntMatrix::row(std::size_t i) const {
  return IntVector(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                   data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
}

IntVector IntMatrix::col(std::size_t j) const {
  IntVector v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  IntMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (sgn(a(i, k)) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
    }
  return c;
}

std::string to_string(const Integer& v) { return v.get_str(); }

namespace {

// Column operations on A are mirrored on V (same op) and on V^-1 (inverse
// op applied to rows).
struct SmithWork {
  IntMatrix a, v, vinv;

  void swap_rows(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t c = 0; c < a.cols(); ++c) std::swap(a(i, c), a(j, c));
  }
  void swap_cols(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t r = 0; r < a.rows(); ++r) std::swap(a(r, i), a(r, j));
    for (std::size_t r = 0; r < v.rows(); ++r) std::swap(v(r, i), v(r, j));
    for (std::size_t c = 0; c < vinv.cols(); ++c) std::swap(vinv(i, c), vinv(j, c));
  }
  // row_i -= q * row_j
  void sub_row(std::size_t i, std::size_t j, const Integer& q) {
    for (std::size_t c = 0; c < a.cols(); ++c)
      if (sgn(a(j, c)) != 0) a(i, c) -= q * a(j, c);
  }
  // col_i -= q * col_j ; inverse: row_j of V^-1 += q * row_i
  void sub_col(std::size_t i, std::size_t j, const Integer& q) {
    for (std::size_t r = 0; r < a.rows(); ++r)
      if (sgn(a(r, j)) != 0) a(r, i) -= q * a(r, j);
    for (std::size_t r = 0; r < v.rows(); ++r)
      if (sgn(v(r, j)) != 0) v(r, i) -= q * v(r, j);
    for (std::size_t c = 0; c < vinv.cols(); ++c)
      if (sgn(vinv(i, c)) != 0) vinv(j, c) += q * vinv(i, c);
  }
  void negate_col(std::size_t i) {
    for (std::size_t r = 0; r < a.rows(); ++r) a(r, i) = -a(r, i);
    for (std::size_t r = 0; r < v.rows(); ++r) v(r, i) = -v(r, i);
    for (std::size_t c = 0; c < vinv.cols(); ++c) vinv(i, c) = -vinv(i, c);
  }
};

}  // namespace

SmithForm smith_normal_form(IntMatrix input) {
  const std::size_t m = input.rows(), n = input.cols();
  SmithWork w{std::move(input), IntMatrix::identity(n), IntMatrix::identity(n)};
  const std::size_t diag = std::min(m, n);
  std::size_t t = 0;
  for (; t < diag; ++t) {
    while (true) {
      // Smallest nonzero entry of the trailing block becomes the pivot.
      std::size_t pi = m, pj = n;
      for (std::size_t i = t; i < m; ++i)
        for (std::size_t j = t; j < n; ++j)
          if (sgn(w.a(i, j)) != 0 && (pi == m || mpz_cmpabs(w.a(i, j).get_mpz_t(), w.a(pi, pj).get_mpz_t()) < 0)) {
            pi = i;
            pj = j;
          }
      if (pi == m) break;
      w.swap_rows(t, pi);
      w.swap_cols(t, pj);

      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (sgn(w.a(i, t)) == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), w.a(i, t).get_mpz_t(), w.a(t, t).get_mpz_t());
        w.sub_row(i, t, q);
        if (sgn(w.a(i, t)) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (sgn(w.a(t, j)) == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), w.a(t, j).get_mpz_t(), w.a(t, t).get_mpz_t());
        w.sub_col(j, t, q);
        if (sgn(w.a(t, j)) != 0) clean = false;
      }
      if (!clean) continue;

      // Divisibility: fold any offending row into the pivot row and retry.
      bool divides = true;
      for (std::size_t i = t + 1; i < m && divides; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (sgn(w.a(i, j)) != 0 && !mpz_divisible_p(w.a(i, j).get_mpz_t(), w.a(t, t).get_mpz_t())) {
            for (std::size_t c = t; c < n; ++c) w.a(t, c) += w.a(i, c);
            divides = false;
            break;
          }
      if (divides) break;
    }
    if (sgn(w.a(t, t)) == 0) break;
    if (sgn(w.a(t, t)) < 0) w.negate_col(t);
  }

  SmithForm out;
  out.diagonal.resize(diag);
  for (std::size_t i = 0; i < diag; ++i) out.diagonal[i] = w.a(i, i);
  out.nonzero = static_cast<std::size_t>(
      std::count_if(out.diagonal.begin(), out.diagonal.end(), [](const Integer& d) { return sgn(d) != 0; }));
  out.right = std::move(w.v);
  out.right_inverse = std::move(w.vinv);
  return out;
}

// ---------------------------------------------------------------------------

Lattice::Lattice(std::size_t dim, const std::vector<IntVector>& generators) : dim_(dim) {
  for (const auto& g : generators) add(g);
}

void Lattice::add(IntVector v) {
  v.resize(dim_);
  std::size_t k = 0;
  for (std::size_t c = 0; c < dim_; ++c) {
    if (sgn(v[c]) == 0) continue;
    while (k < basis_.size() && pivots_[k] < c) ++k;
    if (k < basis_.size() && pivots_[k] == c) {
      IntVector& b = basis_[k];
      Integer g, s, t;
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), b[c].get_mpz_t(), v[c].get_mpz_t());
      const Integer bc = b[c] / g, vc = v[c] / g;
      IntVector nb(dim_), nv(dim_);
      for (std::size_t j = c; j < dim_; ++j) {
        nb[j] = s * b[j] + t * v[j];
        nv[j] = bc * v[j] - vc * b[j];
      }
      b = std::move(nb);
      v = std::move(nv);
      continue;
    }
    basis_.insert(basis_.begin() + static_cast<std::ptrdiff_t>(k), std::move(v));
    pivots_.insert(pivots_.begin() + static_cast<std::ptrdiff_t>(k), c);
    break;
  }
  // Normalize: positive pivots, entries above pivots reduced.
  for (std::size_t r = 0; r < basis_.size(); ++r) {
    const std::size_t p = pivots_[r];
    if (sgn(basis_[r][p]) < 0)
      for (auto& x : basis_[r]) x = -x;
  }
  for (std::size_t r = basis_.size(); r-- > 0;) {
    const std::size_t p = pivots_[r];
    for (std::size_t above = 0; above < r; ++above) {
      Integer q;
      mpz_fdiv_q(q.get_mpz_t(), basis_[above][p].get_mpz_t(), basis_[r][p].get_mpz_t());
      if (sgn(q) == 0) continue;
      for (std::size_t j = p; j < dim_; ++j) basis_[above][j] -= q * basis_[r][j];
    }
  }
}

bool Lattice::contains(const IntVector& v0) const {
  IntVector v = v0;
  v.resize(dim_);
  for (std::size_t r = 0; r < basis_.size(); ++r) {
    const std::size_t p = pivots_[r];
    for (std::size_t c = (r == 0 ? 0 : pivots_[r - 1] + 1); c < p; ++c)
      if (sgn(v[c]) != 0) return false;
    if (sgn(v[p]) == 0) continue;
    if (!mpz_divisible_p(v[p].get_mpz_t(), basis_[r][p].get_mpz_t())) return false;
    const Integer q = v[p] / basis_[r][p];
    for (std::size_t j = p; j < dim_; ++j) v[j] -= q * basis_[r][j];
  }
  return std::all_of(v.begin(), v.end(), [](const Integer& x) { return sgn(x) == 0; });
}

bool Lattice::includes(const Lattice& other) const {
  return std::all_of(other.basis_.begin(), other.basis_.end(), [&](const IntVector& b) { return contains(b); });
}

}  // namespace ucov
