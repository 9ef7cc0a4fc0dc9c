#pragma once

// Boundary-perturbed path Laplacian
//   D_r^{a,b} = r^2 Delta_l + (a + r)|d_1><d_1| + (b + r)|d_l><d_l|
// and its large-r eigenvalue expansion around the Dirichlet modes
// 2 cos(pi n / (l + 1)).

#include "boxlab/double_double.hpp"
#include "boxlab/errors.hpp"
#include "boxlab/numerics.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace boxlab {

struct TridiagSpec {
  int l = 1;
  double a = 0.0;
  double b = 0.0;
  double r = 1.0;
};

struct DirichletMode {
  int n;
  double energy;  // 2 cos(pi n / (l+1))
  double weight;  // (2/(l+1)) sin^2(pi n / (l+1)) = phi_n(1)^2
  Eigen::VectorXd vector;
};

/// Eigenpairs of the path Laplacian on {1..l}, n = 1..l.
std::vector<DirichletMode> dirichlet_modes(int l);

/// C_{l,n} = (2/(l+1)^2) sin^2(pi n/(l+1)) * sum_{m != n, m = n mod 2}
///           sin^2(pi m/(l+1)) / (cos(pi m/(l+1)) - cos(pi n/(l+1))).
double c_coefficient(int l, int n);

enum class ExpansionOrder { R2, R1, Constant, COverR };

/// Accepts "r2", "r1", "const", "c_over_r"; throws InvalidOrder otherwise.
ExpansionOrder parse_expansion_order(std::string_view token);
const char* to_string(ExpansionOrder order);

struct ExpansionTerms {
  int n;
  double cos_term;     // 2 cos(pi n/(l+1))
  double sine_weight;  // a_n
  double c_n;          // c_coefficient(l, n)
  double predicted;    // through the constant order
};

// ---- symmetric tridiagonal eigensolver ------------------------------------------

template <typename Scalar>
struct TridiagonalEigen {
  std::vector<Scalar> values;  // ascending
  Matrix<Scalar> vectors;      // columns match values; empty when not requested
  int iterations = 0;
};

/// Implicit-shift QL (tql2 lineage) on the symmetric tridiagonal matrix with
/// diagonal `diag` and off-diagonal `off` (off[i] couples i and i+1). Total
/// QL sweeps are capped at 50 n^2.
template <typename Scalar>
TridiagonalEigen<Scalar> tridiagonal_ql(std::vector<Scalar> diag, std::vector<Scalar> off, bool want_vectors) {
  using std::abs;
  using std::hypot;
  const int n = static_cast<int>(diag.size());
  if (n == 0) return {};
  if (static_cast<int>(off.size()) + 1 != n)
    throw LabError(ErrorKind::InvalidArgument, "off-diagonal must have n-1 entries");

  std::vector<Scalar>& d = diag;
  std::vector<Scalar> e(n, Scalar(0.0));
  std::copy(off.begin(), off.end(), e.begin());

  Matrix<Scalar> v;
  if (want_vectors) v = Matrix<Scalar>::Identity(n, n);

  const Scalar eps = Eigen::NumTraits<Scalar>::epsilon();
  const int cap = 50 * n * n;
  int iterations = 0;
  Scalar f(0.0);
  Scalar tst1(0.0);

  for (int l = 0; l < n; ++l) {
    tst1 = std::max(tst1, Scalar(abs(d[l]) + abs(e[l])));
    int m = l;
    while (m < n) {
      if (abs(e[m]) <= eps * tst1) break;
      ++m;
    }
    if (m == n) m = n - 1;
    if (m > l) {
      do {
        if (++iterations > cap)
          throw LabError(ErrorKind::NumericalFailure,
                         "tridiagonal QL did not converge within " + std::to_string(cap) + " sweeps");
        Scalar g = d[l];
        Scalar p = (d[l + 1] - g) / (Scalar(2.0) * e[l]);
        Scalar r = hypot(p, Scalar(1.0));
        if (p < Scalar(0.0)) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const Scalar dl1 = d[l + 1];
        Scalar h = g - d[l];
        for (int i = l + 2; i < n; ++i) d[i] -= h;
        f += h;

        p = d[m];
        Scalar c(1.0), c2(1.0), c3(1.0);
        const Scalar el1 = e[l + 1];
        Scalar s(0.0), s2(0.0);
        for (int i = m - 1; i >= l; --i) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[i];
          h = c * p;
          r = hypot(p, e[i]);
          e[i + 1] = s * r;
          s = e[i] / r;
          c = p / r;
          p = c * d[i] - s * g;
          d[i + 1] = h + s * (c * g + s * d[i]);
          if (want_vectors) {
            for (int k = 0; k < n; ++k) {
              h = v(k, i + 1);
              v(k, i + 1) = s * v(k, i) + c * h;
              v(k, i) = c * v(k, i) - s * h;
            }
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (abs(e[l]) > eps * tst1);
    }
    d[l] = d[l] + f;
    e[l] = Scalar(0.0);
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) { return d[i] < d[j]; });

  TridiagonalEigen<Scalar> out;
  out.iterations = iterations;
  out.values.resize(n);
  for (int k = 0; k < n; ++k) out.values[k] = d[order[k]];
  if (want_vectors) {
    out.vectors.resize(n, n);
    for (int k = 0; k < n; ++k) out.vectors.col(k) = v.col(order[k]);
  }
  return out;
}

// ---- D_r^{a,b} -------------------------------------------------------------------

inline void check_spec(const TridiagSpec& spec) {
  if (spec.l < 1) throw LabError(ErrorKind::InvalidArgument, "tridiagonal size l must be >= 1");
  if (!(spec.r > 0.0)) throw LabError(ErrorKind::InvalidArgument, "r must be positive");
}

/// Diagonal and off-diagonal of D_r^{a,b}.
template <typename Scalar>
std::pair<std::vector<Scalar>, std::vector<Scalar>> boundary_tridiagonal(const TridiagSpec& spec) {
  check_spec(spec);
  const Scalar r(spec.r);
  std::vector<Scalar> diag(spec.l, Scalar(0.0));
  std::vector<Scalar> off(spec.l - 1, r * r);
  diag.front() += Scalar(spec.a) + r;
  diag.back() += Scalar(spec.b) + r;
  return {std::move(diag), std::move(off)};
}

template <typename Scalar>
Matrix<Scalar> boundary_matrix(const TridiagSpec& spec) {
  const auto [diag, off] = boundary_tridiagonal<Scalar>(spec);
  const int l = spec.l;
  Matrix<Scalar> m = Matrix<Scalar>::Zero(l, l);
  for (int i = 0; i < l; ++i) m(i, i) = diag[i];
  for (int i = 0; i + 1 < l; ++i) m(i, i + 1) = m(i + 1, i) = off[i];
  return m;
}

/// Ascending eigenvalues of D_r^{a,b}; each eigenpair is checked against
/// ||D v - lambda v|| <= 1e-10 ||D||.
template <typename Scalar>
std::vector<Scalar> exact_spectrum(const TridiagSpec& spec) {
  auto [diag, off] = boundary_tridiagonal<Scalar>(spec);
  const auto eig = tridiagonal_ql<Scalar>(diag, off, true);
  using std::abs;
  const Matrix<Scalar> m = boundary_matrix<Scalar>(spec);
  Scalar norm(0.0);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Scalar row(0.0);
    for (Eigen::Index j = 0; j < m.cols(); ++j) row += abs(m(i, j));
    norm = std::max(norm, row);
  }
  for (int k = 0; k < spec.l; ++k) {
    const Vector<Scalar> res = m * eig.vectors.col(k) - eig.values[k] * eig.vectors.col(k);
    Scalar rn(0.0);
    for (Eigen::Index i = 0; i < res.size(); ++i) rn += res(i) * res(i);
    using std::sqrt;
    if (sqrt(rn) > Scalar(1e-10) * norm)
      throw LabError(ErrorKind::NumericalFailure, "eigenpair residual above 1e-10 ||D||");
  }
  return eig.values;
}

/// Expansion of the n-th eigenvalue (mode index 1..l) through `order`:
///   r2:       2 r^2 cos(pi n/(l+1))
///   r1:       + (4 r/(l+1)) sin^2
///   const:    + (2 (a+b)/(l+1)) sin^2 - 4 C_n
///   c_over_r: - 4 C_n (a+b) / r
/// The remaining D_n / r term is only known through |D_n| < 16 (l+1)^3 and
/// is left out.
template <typename Scalar>
Scalar predicted_eigenvalue(const TridiagSpec& spec, int n, ExpansionOrder order) {
  check_spec(spec);
  if (n < 1 || n > spec.l) throw LabError(ErrorKind::InvalidArgument, "mode index out of range");
  if (!(spec.r > std::max({std::abs(spec.a), std::abs(spec.b), 1.0})))
    throw LabError(ErrorKind::InvalidArgument, "expansion needs r > max(|a|, |b|, 1)");

  const int lp1 = spec.l + 1;
  const Scalar r(spec.r);
  const Scalar c = cos_pi_fraction<Scalar>(n, lp1);
  const Scalar s = sin_pi_fraction<Scalar>(n, lp1);
  const Scalar s2 = s * s;

  Scalar e = Scalar(2.0) * r * r * c;
  if (order == ExpansionOrder::R2) return e;
  e += Scalar(4.0) * r * s2 / Scalar(static_cast<double>(lp1));
  if (order == ExpansionOrder::R1) return e;
  const double cn = c_coefficient(spec.l, n);
  e += Scalar(2.0 * (spec.a + spec.b)) * s2 / Scalar(static_cast<double>(lp1));
  e -= Scalar(4.0 * cn);
  if (order == ExpansionOrder::Constant) return e;
  e -= Scalar(4.0 * cn * (spec.a + spec.b)) / r;
  return e;
}

ExpansionTerms expansion_terms(const TridiagSpec& spec, int n);

// ---- residual order --------------------------------------------------------------

struct ResidualSample {
  double r;
  double residual;  // max_n |exact - predicted|, sorted pairing
  bool extended;    // recomputed in double-double by the precision guard
};

/// max_n |exact_n - predicted_n| with both lists sorted. Runs in double and
/// escalates to double-double when the precision guard trips.
ResidualSample expansion_residual(const TridiagSpec& spec, ExpansionOrder order = ExpansionOrder::Constant);

struct OrderFit {
  std::vector<ResidualSample> samples;
  bool exact_to_precision = false;
  std::optional<double> slope;
};

/// Residual floor below which the expansion counts as exact.
inline constexpr double kExactFloor = 1e-13;

/// Fits log max-residual against log r. Needs >= 4 values of r spanning a
/// factor >= 8. Reports exact_to_precision when the residual never leaves the
/// floor.
OrderFit residual_order(int l, double a, double b, std::span<const double> r_values,
                        ExpansionOrder order = ExpansionOrder::Constant);

}  // namespace boxlab
