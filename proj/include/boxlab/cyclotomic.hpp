#pragma once

// Exact arithmetic in Q(zeta_m): rational coefficient vectors in the power
// basis of a primitive m-th root of unity, reduced modulo Phi_m.

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

namespace boxlab {

/// Coefficients of Phi_m, constant term first. 1 <= m <= 1e4.
const std::vector<std::int64_t>& cyclotomic_polynomial(int m);

int euler_phi(int m);

/// Shared reduction data for one modulus.
class CyclotomicField {
 public:
  explicit CyclotomicField(int m);

  int modulus() const { return m_; }
  int degree() const { return degree_; }
  /// zeta^k reduced, for 0 <= k < table size (at least max(m, 2 degree - 1)).
  const std::vector<std::int64_t>& power(int k) const;

 private:
  int m_;
  int degree_;
  std::vector<std::vector<std::int64_t>> powers_;
};

class CyclotomicElement {
 public:
  CyclotomicElement(std::shared_ptr<const CyclotomicField> field);

  static CyclotomicElement rational(std::shared_ptr<const CyclotomicField> field, const mpq_class& q);
  /// zeta^k for any integer k.
  static CyclotomicElement root_power(std::shared_ptr<const CyclotomicField> field, long long k);

  int modulus() const { return field_->modulus(); }
  const std::vector<mpq_class>& coeffs() const { return coeffs_; }
  bool is_zero() const;

  CyclotomicElement& operator+=(const CyclotomicElement& o);
  CyclotomicElement& operator-=(const CyclotomicElement& o);
  CyclotomicElement& operator*=(const mpq_class& q);
  friend CyclotomicElement operator+(CyclotomicElement a, const CyclotomicElement& b) { return a += b; }
  friend CyclotomicElement operator-(CyclotomicElement a, const CyclotomicElement& b) { return a -= b; }
  friend CyclotomicElement operator*(CyclotomicElement a, const mpq_class& q) { return a *= q; }
  friend CyclotomicElement operator*(const CyclotomicElement& a, const CyclotomicElement& b);
  friend bool operator==(const CyclotomicElement& a, const CyclotomicElement& b);

  /// Value at zeta = exp(2 pi i / m).
  std::complex<double> evaluate() const;

 private:
  void check_same(const CyclotomicElement& o) const;
  std::shared_ptr<const CyclotomicField> field_;
  std::vector<mpq_class> coeffs_;
};

/// Cached field for modulus m.
std::shared_ptr<const CyclotomicField> cyclotomic_field(int m);

/// cos(pi n / p) in Q(zeta_{2P}); needs p | P and 1 <= n < p.
CyclotomicElement cos_as_element(int n, int p, int P);

/// Exact test of sum_i cos(pi n_i / p_i) = 0 in Q(zeta_{2P}), P = prod p_i, 2P <= 1e4.
bool cos_sum_is_zero(const std::vector<int>& ps, const std::vector<int>& ns);

struct Lemma5Report {
  std::vector<int> ps;
  bool pairwise_coprime = false;
  bool excluded_residues_avoided = false;  // every p_i outside 2N, 3N and {1}
  bool admissible = false;
  long long tuples = 0;
  long long zeros = 0;
  std::vector<std::vector<int>> witnesses;  // lexicographic
};

/// Exhaustive scan over all (n_1..n_d) with 1 <= n_i < p_i; capped at 1e5 tuples.
Lemma5Report verify_lemma5(const std::vector<int>& ps, int threads = 1);

}  // namespace boxlab
