#pragma once

// Dense linear algebra, deterministic randomness and a small-matrix
// eigensolver. Everything is plain double precision; matrices are row-major.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstring>
#include <limits>
#include <string>
#include <vector>

#include "rhn/common.hpp"

namespace rhn {

using Vector = std::vector<double>;
using Complex = std::complex<double>;

struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;  // row-major, data.size() == rows * cols

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  double* row_ptr(std::size_t i) { return data.data() + i * cols; }
  const double* row_ptr(std::size_t i) const { return data.data() + i * cols; }

  bool empty() const { return data.empty(); }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }
};

inline bool all_finite(const Vector& v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

inline bool all_finite(const Matrix& m) { return all_finite(m.data); }

inline double frobenius_norm(const Matrix& a) {
  double s = 0.0;
  for (double x : a.data) s += x * x;
  return std::sqrt(s);
}

inline double vec_norm2(const Vector& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// y = A x
inline Vector matvec(const Matrix& a, const Vector& x) {
  if (a.cols != x.size()) {
    throw contract_error("matvec: matrix is " + std::to_string(a.rows) + "x" +
                         std::to_string(a.cols) + " but vector has length " +
                         std::to_string(x.size()));
  }
  Vector y(a.rows, 0.0);
  for (std::size_t i = 0; i < a.rows; ++i) {
    const double* row = a.row_ptr(i);
    double acc = 0.0;
    for (std::size_t j = 0; j < a.cols; ++j) acc += row[j] * x[j];
    y[i] = acc;
  }
  return y;
}

// y = A^T x
inline Vector matvec_transposed(const Matrix& a, const Vector& x) {
  if (a.rows != x.size()) {
    throw contract_error("matvec_transposed: dimension mismatch");
  }
  Vector y(a.cols, 0.0);
  for (std::size_t i = 0; i < a.rows; ++i) {
    const double* row = a.row_ptr(i);
    const double xi = x[i];
    for (std::size_t j = 0; j < a.cols; ++j) y[j] += row[j] * xi;
  }
  return y;
}

// C = A B. The k-inner/j-vectorized loop order keeps the per-element
// accumulation order identical to matvec's, so a B=1 product is bit-equal
// to the vector path.
inline Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols != b.rows) throw contract_error("matmul: dimension mismatch");
  Matrix c(a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i) {
    const double* arow = a.row_ptr(i);
    double* crow = c.row_ptr(i);
    for (std::size_t k = 0; k < a.cols; ++k) {
      const double aik = arow[k];
      const double* brow = b.row_ptr(k);
      for (std::size_t j = 0; j < b.cols; ++j) crow[j] += aik * brow[j];
    }
  }
  return c;
}

// C += A^T B  (A: m x n, B: m x k, C: n x k)
inline void add_matmul_At_B(Matrix& c, const Matrix& a, const Matrix& b) {
  if (a.rows != b.rows || c.rows != a.cols || c.cols != b.cols) {
    throw contract_error("add_matmul_At_B: dimension mismatch");
  }
  for (std::size_t k = 0; k < a.rows; ++k) {
    const double* arow = a.row_ptr(k);
    const double* brow = b.row_ptr(k);
    for (std::size_t i = 0; i < a.cols; ++i) {
      const double aki = arow[i];
      double* crow = c.row_ptr(i);
      for (std::size_t j = 0; j < b.cols; ++j) crow[j] += aki * brow[j];
    }
  }
}

// C += A B^T  (A: n x m, B: k x m, C: n x k). Used for gradient outer
// products where m is the batch dimension.
inline void add_matmul_A_Bt(Matrix& c, const Matrix& a, const Matrix& b) {
  if (a.cols != b.cols || c.rows != a.rows || c.cols != b.rows) {
    throw contract_error("add_matmul_A_Bt: dimension mismatch");
  }
  for (std::size_t i = 0; i < a.rows; ++i) {
    const double* arow = a.row_ptr(i);
    double* crow = c.row_ptr(i);
    for (std::size_t j = 0; j < b.rows; ++j) {
      const double* brow = b.row_ptr(j);
      double acc = 0.0;
      for (std::size_t k = 0; k < a.cols; ++k) acc += arow[k] * brow[k];
      crow[j] += acc;
    }
  }
}

inline Matrix transpose(const Matrix& a) {
  Matrix t(a.cols, a.rows);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < a.cols; ++j) t(j, i) = a(i, j);
  return t;
}

// ---------------------------------------------------------------------------
// Deterministic randomness: a splitmix64-expanded seed feeding xoshiro256**.
// The draw sequence is a pure function of the seed on every platform.
// ---------------------------------------------------------------------------
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : seed_(seed) {
    std::uint64_t x = seed;
    for (auto& s : state_) s = splitmix64(x);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5u, 7) * 9u;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform in [0, 1) with 53 random bits.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) {
    if (lo > hi) throw contract_error("RngStream::uniform: lo > hi");
    return lo + (hi - lo) * next_unit();
  }

  // N(0, std^2) via Box-Muller; the second deviate of each pair is cached.
  double gaussian(double std_dev) {
    if (std_dev < 0.0) throw contract_error("RngStream::gaussian: negative std");
    if (has_spare_) {
      has_spare_ = false;
      return spare_ * std_dev;
    }
    const double u1 = 1.0 - next_unit();  // (0, 1]
    const double u2 = next_unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * kPi * u2;
    spare_ = r * std::sin(angle);
    has_spare_ = true;
    return r * std::cos(angle) * std_dev;
  }

  // Independent stream for a worker, derived from (master seed, index).
  RngStream worker_stream(std::uint64_t index) const {
    return RngStream(seed_ ^ (0x9E3779B97F4A7C15ull * (index + 1)));
  }

  std::uint64_t seed() const { return seed_; }

 private:
  static constexpr double kPi = 3.14159265358979323846;

  static std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  static std::uint64_t rotl(std::uint64_t v, int k) {
    return (v << k) | (v >> (64 - k));
  }

  std::uint64_t seed_;
  std::array<std::uint64_t, 4> state_{};
  bool has_spare_ = false;
  double spare_ = 0.0;
};

inline Vector gaussian_vector(RngStream& rng, double std_dev, std::size_t n) {
  if (std_dev < 0.0) throw contract_error("gaussian_vector: negative std");
  Vector v(n);
  for (auto& x : v) x = rng.gaussian(std_dev);
  return v;
}

inline Matrix gaussian_matrix(RngStream& rng, double std_dev, std::size_t rows,
                              std::size_t cols) {
  if (std_dev < 0.0) throw contract_error("gaussian_matrix: negative std");
  Matrix m(rows, cols);
  for (auto& x : m.data) x = rng.gaussian(std_dev);
  return m;
}

inline Vector uniform_vector(RngStream& rng, double lo, double hi, std::size_t n) {
  if (lo > hi) throw contract_error("uniform_vector: lo > hi");
  Vector v(n);
  for (auto& x : v) x = rng.uniform(lo, hi);
  return v;
}

inline Matrix uniform_matrix(RngStream& rng, double lo, double hi,
                             std::size_t rows, std::size_t cols) {
  if (lo > hi) throw contract_error("uniform_matrix: lo > hi");
  Matrix m(rows, cols);
  for (auto& x : m.data) x = rng.uniform(lo, hi);
  return m;
}

// ---------------------------------------------------------------------------
// Largest singular value via power iteration on A^T A (never formed
// explicitly). Converges from below; relative tolerance on the iterate.
// ---------------------------------------------------------------------------
inline double spectral_norm(const Matrix& a, double tol = 1e-12,
                            std::size_t max_iter = 20000) {
  if (a.rows != a.cols) throw contract_error("spectral_norm: matrix not square");
  if (tol <= 0.0) throw contract_error("spectral_norm: tol must be > 0");
  if (!all_finite(a)) throw contract_error("spectral_norm: non-finite entries");
  const std::size_t n = a.rows;
  if (n == 0) return 0.0;

  // Deterministic pseudo-random start vector, almost surely not orthogonal
  // to the dominant singular subspace.
  RngStream rng(0xA11CE5EEDull);
  Vector v = gaussian_vector(rng, 1.0, n);
  double vn = vec_norm2(v);
  if (vn == 0.0) v.assign(n, 1.0), vn = std::sqrt(static_cast<double>(n));
  for (auto& x : v) x /= vn;

  double sigma = 0.0;
  for (std::size_t it = 0; it < max_iter; ++it) {
    Vector w = matvec(a, v);
    const double wn = vec_norm2(w);
    if (wn == 0.0) return 0.0;  // v in the null space and A v = 0 exactly
    Vector u = matvec_transposed(a, w);
    const double un = vec_norm2(u);
    const double next = wn;  // ||A v|| with v unit
    if (un == 0.0) return next;
    for (std::size_t i = 0; i < n; ++i) v[i] = u[i] / un;
    if (it > 0 && std::abs(next - sigma) <= tol * std::max(next, 1e-300)) {
      return next;
    }
    sigma = next;
  }
  throw convergence_error("spectral_norm: no convergence within max_iter", sigma);
}

namespace detail {

// Householder reduction of a square matrix to upper Hessenberg form,
// in place.
inline void hessenberg_reduce(Matrix& h) {
  const std::size_t n = h.rows;
  if (n < 3) return;
  Vector v(n, 0.0);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double norm2 = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) norm2 += h(i, k) * h(i, k);
    const double norm = std::sqrt(norm2);
    if (norm == 0.0) continue;
    const double x0 = h(k + 1, k);
    const double alpha = (x0 >= 0.0) ? norm : -norm;
    double vv = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) v[i] = h(i, k);
    v[k + 1] += alpha;
    for (std::size_t i = k + 1; i < n; ++i) vv += v[i] * v[i];
    if (vv == 0.0) continue;
    const double beta = 2.0 / vv;
    // Left: H <- (I - beta v v^T) H over rows k+1..n-1.
    for (std::size_t j = k; j < n; ++j) {
      double dot = 0.0;
      for (std::size_t i = k + 1; i < n; ++i) dot += v[i] * h(i, j);
      dot *= beta;
      for (std::size_t i = k + 1; i < n; ++i) h(i, j) -= dot * v[i];
    }
    // Right: H <- H (I - beta v v^T) over columns k+1..n-1.
    for (std::size_t i = 0; i < n; ++i) {
      double dot = 0.0;
      for (std::size_t j = k + 1; j < n; ++j) dot += h(i, j) * v[j];
      dot *= beta;
      for (std::size_t j = k + 1; j < n; ++j) h(i, j) -= dot * v[j];
    }
    for (std::size_t i = k + 2; i < n; ++i) h(i, k) = 0.0;
  }
}

}  // namespace detail

// All n eigenvalues (with multiplicity) of a real square matrix, via
// Householder reduction to Hessenberg form followed by Francis double-shift
// QR iteration with exceptional shifts. Order of the returned values is
// unspecified; treat the result as a multiset. Accuracy is validated in the
// test suite against a cofactor-expansion determinant (product of
// eigenvalues) and Gersgorin containment.
//
// Deflation uses an absolute off-diagonal threshold of 1e-12 * ||A||_F and
// the sweep budget is 100 * n; exceeding it raises convergence_error.
inline std::vector<Complex> eigenvalues_dense(const Matrix& a) {
  if (a.rows != a.cols) throw contract_error("eigenvalues_dense: not square");
  const std::size_t n = a.rows;
  if (n == 0) return {};
  if (n > 512) throw contract_error("eigenvalues_dense: n > 512 unsupported");
  if (!all_finite(a)) throw contract_error("eigenvalues_dense: non-finite entries");

  Matrix h = a;
  detail::hessenberg_reduce(h);

  const double thresh =
      std::max(1e-12 * frobenius_norm(a), std::numeric_limits<double>::min());
  std::vector<Complex> eigs;
  eigs.reserve(n);

  long en = static_cast<long>(n) - 1;
  double t = 0.0;  // accumulated exceptional shifts
  long sweeps_left = 100 * static_cast<long>(n);

  auto H = [&h](long i, long j) -> double& {
    return h(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  };

  while (en >= 0) {
    long its = 0;
    for (;;) {
      // Look for a single negligible subdiagonal element.
      long l = en;
      while (l > 0 && std::abs(H(l, l - 1)) > thresh) --l;

      double x = H(en, en);
      if (l == en) {
        eigs.emplace_back(x + t, 0.0);
        --en;
        break;
      }
      const long na = en - 1;
      double y = H(na, na);
      double w = H(en, na) * H(na, en);
      if (l == na) {
        // 2x2 block: closed-form pair.
        double p = (y - x) / 2.0;
        const double q = p * p + w;
        double zz = std::sqrt(std::abs(q));
        x += t;
        if (q >= 0.0) {
          zz = p + std::copysign(zz, p);
          const double l1 = x + zz;
          const double l2 = (zz != 0.0) ? x - w / zz : l1;
          eigs.emplace_back(l1, 0.0);
          eigs.emplace_back(l2, 0.0);
        } else {
          eigs.emplace_back(x + p, zz);
          eigs.emplace_back(x + p, -zz);
        }
        en -= 2;
        break;
      }

      if (sweeps_left-- <= 0) {
        throw convergence_error(
            "eigenvalues_dense: QR iteration exceeded 100*n sweeps", H(en, en));
      }
      if (its > 0 && its % 10 == 0) {
        // Exceptional shift to break limit cycles.
        t += x;
        for (long i = 0; i <= en; ++i) H(i, i) -= x;
        const double s = std::abs(H(en, na)) + std::abs(H(na, en - 2));
        x = y = 0.75 * s;
        w = -0.4375 * s * s;
      }
      ++its;

      // Find two consecutive small subdiagonal elements.
      long m = en - 2;
      double p = 0.0, q = 0.0, r = 0.0;
      for (; m >= l; --m) {
        const double zz = H(m, m);
        const double rr = x - zz;
        const double ss = y - zz;
        p = (rr * ss - w) / H(m + 1, m) + H(m, m + 1);
        q = H(m + 1, m + 1) - zz - rr - ss;
        r = H(m + 2, m + 1);
        const double scale = std::abs(p) + std::abs(q) + std::abs(r);
        p /= scale;
        q /= scale;
        r /= scale;
        if (m == l) break;
        const double tst1 = std::abs(p) * (std::abs(H(m - 1, m - 1)) +
                                           std::abs(zz) + std::abs(H(m + 1, m + 1)));
        const double tst2 =
            tst1 + std::abs(H(m, m - 1)) * (std::abs(q) + std::abs(r));
        if (tst2 == tst1) break;
      }
      for (long i = m + 2; i <= en; ++i) {
        H(i, i - 2) = 0.0;
        if (i > m + 2) H(i, i - 3) = 0.0;
      }

      // Double QR sweep on rows l..en, columns m..en.
      for (long k = m; k <= na; ++k) {
        const bool notlast = (k != na);
        if (k != m) {
          p = H(k, k - 1);
          q = H(k + 1, k - 1);
          r = notlast ? H(k + 2, k - 1) : 0.0;
          x = std::abs(p) + std::abs(q) + std::abs(r);
          if (x == 0.0) continue;
          p /= x;
          q /= x;
          r /= x;
        }
        double s = std::copysign(std::sqrt(p * p + q * q + r * r), p);
        if (s == 0.0) continue;
        if (k != m) {
          H(k, k - 1) = -s * x;
        } else if (l != m) {
          H(k, k - 1) = -H(k, k - 1);
        }
        p += s;
        x = p / s;
        y = q / s;
        const double zz = r / s;
        q /= p;
        r /= p;
        if (notlast) {
          for (long j = k; j <= en; ++j) {
            double pj = H(k, j) + q * H(k + 1, j) + r * H(k + 2, j);
            H(k, j) -= pj * x;
            H(k + 1, j) -= pj * y;
            H(k + 2, j) -= pj * zz;
          }
          const long mmin = std::min(en, k + 3);
          for (long i = l; i <= mmin; ++i) {
            double pi = x * H(i, k) + y * H(i, k + 1) + zz * H(i, k + 2);
            H(i, k) -= pi;
            H(i, k + 1) -= pi * q;
            H(i, k + 2) -= pi * r;
          }
        } else {
          for (long j = k; j <= en; ++j) {
            double pj = H(k, j) + q * H(k + 1, j);
            H(k, j) -= pj * x;
            H(k + 1, j) -= pj * y;
          }
          const long mmin = std::min(en, k + 3);
          for (long i = l; i <= mmin; ++i) {
            double pi = x * H(i, k) + y * H(i, k + 1);
            H(i, k) -= pi;
            H(i, k + 1) -= pi * q;
          }
        }
      }
    }
  }
  return eigs;
}

inline double spectral_radius(const std::vector<Complex>& eigs) {
  double r = 0.0;
  for (const auto& l : eigs) r = std::max(r, std::abs(l));
  return r;
}

}  // namespace rhn
