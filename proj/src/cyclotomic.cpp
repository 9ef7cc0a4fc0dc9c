#include "boxlab/cyclotomic.hpp"

#include "boxlab/errors.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <thread>

namespace boxlab {

namespace {

constexpr int kMaxModulus = 10000;

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_add_overflow(a, b, &out)) throw LabError(ErrorKind::NumericalFailure, "int64 overflow in cyclotomic arithmetic");
  return out;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_mul_overflow(a, b, &out)) throw LabError(ErrorKind::NumericalFailure, "int64 overflow in cyclotomic arithmetic");
  return out;
}

// Exact quotient of num by a monic divisor; throws if the remainder is nonzero.
std::vector<std::int64_t> divide_monic(std::vector<std::int64_t> num, const std::vector<std::int64_t>& den) {
  const std::size_t dn = den.size() - 1;
  std::vector<std::int64_t> q(num.size() - dn, 0);
  for (std::size_t i = num.size(); i-- > dn;) {
    const std::int64_t c = num[i];
    q[i - dn] = c;
    if (c == 0) continue;
    for (std::size_t j = 0; j <= dn; ++j) num[i - dn + j] = checked_add(num[i - dn + j], -checked_mul(c, den[j]));
  }
  for (std::size_t i = 0; i < dn; ++i)
    if (num[i] != 0) throw LabError(ErrorKind::NumericalFailure, "cyclotomic division left a remainder");
  return q;
}

std::mutex& cache_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

const std::vector<std::int64_t>& cyclotomic_polynomial(int m) {
  if (m < 1 || m > kMaxModulus) throw LabError(ErrorKind::ModulusCap, "cyclotomic modulus must be in 1..10000");
  static std::map<int, std::vector<std::int64_t>> cache;
  {
    std::lock_guard<std::mutex> lock(cache_mutex());
    if (auto it = cache.find(m); it != cache.end()) return it->second;
  }
  std::vector<std::int64_t> poly(m + 1, 0);
  poly[0] = -1;
  poly[m] = 1;
  for (int d = 1; d < m; ++d)
    if (m % d == 0) poly = divide_monic(std::move(poly), cyclotomic_polynomial(d));
  std::lock_guard<std::mutex> lock(cache_mutex());
  return cache.emplace(m, std::move(poly)).first->second;
}

int euler_phi(int m) {
  if (m < 1) throw LabError(ErrorKind::InvalidArgument, "euler_phi needs m >= 1");
  int result = m;
  for (int p = 2; p * p <= m; ++p)
    if (m % p == 0) {
      while (m % p == 0) m /= p;
      result -= result / p;
    }
  if (m > 1) result -= result / m;
  return result;
}

CyclotomicField::CyclotomicField(int m) : m_(m) {
  const auto& phi = cyclotomic_polynomial(m);
  degree_ = static_cast<int>(phi.size()) - 1;
  const int count = std::max(m, 2 * degree_ - 1);
  powers_.reserve(count);
  std::vector<std::int64_t> cur(degree_, 0);
  if (degree_ > 0) cur[0] = 1;
  for (int k = 0; k < count; ++k) {
    powers_.push_back(cur);
    // multiply by x and fold x^degree = -sum phi_i x^i
    const std::int64_t top = cur[degree_ - 1];
    for (int i = degree_ - 1; i > 0; --i) cur[i] = cur[i - 1];
    cur[0] = 0;
    if (top != 0)
      for (int i = 0; i < degree_; ++i) cur[i] = checked_add(cur[i], -checked_mul(top, phi[i]));
  }
}

const std::vector<std::int64_t>& CyclotomicField::power(int k) const { return powers_.at(k); }

std::shared_ptr<const CyclotomicField> cyclotomic_field(int m) {
  static std::map<int, std::shared_ptr<const CyclotomicField>> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[m];
  if (!slot) slot = std::make_shared<const CyclotomicField>(m);
  return slot;
}

CyclotomicElement::CyclotomicElement(std::shared_ptr<const CyclotomicField> field)
    : field_(std::move(field)), coeffs_(field_->degree()) {}

CyclotomicElement CyclotomicElement::rational(std::shared_ptr<const CyclotomicField> field, const mpq_class& q) {
  CyclotomicElement e(std::move(field));
  e.coeffs_[0] = q;
  return e;
}

CyclotomicElement CyclotomicElement::root_power(std::shared_ptr<const CyclotomicField> field, long long k) {
  const int m = field->modulus();
  const int reduced = static_cast<int>(((k % m) + m) % m);
  CyclotomicElement e(field);
  const auto& row = field->power(reduced);
  for (int i = 0; i < field->degree(); ++i) e.coeffs_[i] = row[i];
  return e;
}

bool CyclotomicElement::is_zero() const {
  for (const auto& c : coeffs_)
    if (c != 0) return false;
  return true;
}

void CyclotomicElement::check_same(const CyclotomicElement& o) const {
  if (o.field_->modulus() != field_->modulus())
    throw LabError(ErrorKind::InvalidArgument, "cyclotomic elements live in different fields");
}

CyclotomicElement& CyclotomicElement::operator+=(const CyclotomicElement& o) {
  check_same(o);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

CyclotomicElement& CyclotomicElement::operator-=(const CyclotomicElement& o) {
  check_same(o);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

CyclotomicElement& CyclotomicElement::operator*=(const mpq_class& q) {
  for (auto& c : coeffs_) c *= q;
  return *this;
}

CyclotomicElement operator*(const CyclotomicElement& a, const CyclotomicElement& b) {
  a.check_same(b);
  const int n = a.field_->degree();
  std::vector<mpq_class> full(std::max(2 * n - 1, 1));
  for (int i = 0; i < n; ++i) {
    if (a.coeffs_[i] == 0) continue;
    for (int j = 0; j < n; ++j)
      if (b.coeffs_[j] != 0) full[i + j] += a.coeffs_[i] * b.coeffs_[j];
  }
  CyclotomicElement out(a.field_);
  for (int i = 0; i < n; ++i) out.coeffs_[i] = full[i];
  for (int k = n; k < 2 * n - 1; ++k) {
    if (full[k] == 0) continue;
    const auto& row = a.field_->power(k);
    for (int i = 0; i < n; ++i)
      if (row[i] != 0) out.coeffs_[i] += full[k] * row[i];
  }
  return out;
}

bool operator==(const CyclotomicElement& a, const CyclotomicElement& b) {
  return a.modulus() == b.modulus() && a.coeffs_ == b.coeffs_;
}

std::complex<double> CyclotomicElement::evaluate() const {
  std::complex<double> sum = 0.0;
  const double step = 2.0 * M_PI / field_->modulus();
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    if (coeffs_[i] != 0) sum += coeffs_[i].get_d() * std::polar(1.0, step * static_cast<double>(i));
  return sum;
}

CyclotomicElement cos_as_element(int n, int p, int P) {
  if (p < 1 || P < 1 || P % p != 0)
    throw LabError(ErrorKind::Embedding, std::to_string(p) + " does not divide " + std::to_string(P));
  if (n < 1 || n >= p) throw LabError(ErrorKind::InvalidArgument, "cos_as_element needs 1 <= n < p");
  if (2LL * P > kMaxModulus) throw LabError(ErrorKind::ModulusCap, "2P exceeds 1e4");
  const auto field = cyclotomic_field(2 * P);
  const long long k = static_cast<long long>(n) * (P / p);
  CyclotomicElement e = CyclotomicElement::root_power(field, k) + CyclotomicElement::root_power(field, 2LL * P - k);
  return e *= mpq_class(1, 2);
}

namespace {

long long modulus_product(const std::vector<int>& ps) {
  long long P = 1;
  for (int p : ps) {
    if (p < 1) throw LabError(ErrorKind::InvalidArgument, "p_i must be positive");
    P *= p;
    if (2 * P > kMaxModulus) throw LabError(ErrorKind::ModulusCap, "2 prod p_i exceeds 1e4");
  }
  return P;
}

}  // namespace

bool cos_sum_is_zero(const std::vector<int>& ps, const std::vector<int>& ns) {
  if (ps.empty() || ps.size() != ns.size()) throw LabError(ErrorKind::InvalidArgument, "need matching ps and ns");
  const int P = static_cast<int>(modulus_product(ps));
  CyclotomicElement sum(cyclotomic_field(2 * P));
  for (std::size_t i = 0; i < ps.size(); ++i) sum += cos_as_element(ns[i], ps[i], P);
  return sum.is_zero();
}

Lemma5Report verify_lemma5(const std::vector<int>& ps, int threads) {
  if (ps.empty()) throw LabError(ErrorKind::InvalidArgument, "need at least one p");
  Lemma5Report rep;
  rep.ps = ps;
  rep.pairwise_coprime = true;
  rep.excluded_residues_avoided = true;
  long long tuples = 1;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (ps[i] < 2) throw LabError(ErrorKind::InvalidArgument, "p_i must be >= 2 to have any n");
    if (ps[i] % 2 == 0 || ps[i] % 3 == 0) rep.excluded_residues_avoided = false;
    for (std::size_t j = i + 1; j < ps.size(); ++j)
      if (std::gcd(ps[i], ps[j]) != 1) rep.pairwise_coprime = false;
    tuples *= ps[i] - 1;
    if (tuples > 100000) throw LabError(ErrorKind::CombinatorialLimit, "more than 1e5 tuples");
  }
  rep.admissible = rep.pairwise_coprime && rep.excluded_residues_avoided;
  rep.tuples = tuples;

  const int P = static_cast<int>(modulus_product(ps));
  std::vector<std::vector<CyclotomicElement>> table(ps.size());
  for (std::size_t i = 0; i < ps.size(); ++i)
    for (int n = 1; n < ps[i]; ++n) table[i].push_back(cos_as_element(n, ps[i], P));
  const auto field = cyclotomic_field(2 * P);

  // tuple t decodes with the last coordinate fastest, so index order is lexicographic
  const auto decode = [&](long long t) {
    std::vector<int> ns(ps.size());
    for (std::size_t i = ps.size(); i-- > 0;) {
      ns[i] = static_cast<int>(t % (ps[i] - 1)) + 1;
      t /= ps[i] - 1;
    }
    return ns;
  };
  std::vector<char> zero(tuples, 0);
  const int workers = std::max(1, std::min<int>(threads, static_cast<int>(tuples)));
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (long long t = w; t < tuples; t += workers) {
        const auto ns = decode(t);
        CyclotomicElement sum(field);
        for (std::size_t i = 0; i < ps.size(); ++i) sum += table[i][ns[i] - 1];
        zero[t] = sum.is_zero();
      }
    });
  for (auto& th : pool) th.join();
  for (long long t = 0; t < tuples; ++t)
    if (zero[t]) {
      ++rep.zeros;
      rep.witnesses.push_back(decode(t));
    }
  return rep;
}

}  // namespace boxlab
