#include "boxlab/tridiag.hpp"

#include <cmath>

namespace boxlab {

std::vector<DirichletMode> dirichlet_modes(int l) {
  if (l < 1) throw LabError(ErrorKind::InvalidArgument, "l must be >= 1");
  std::vector<DirichletMode> modes;
  modes.reserve(l);
  const double norm = std::sqrt(2.0 / (l + 1));
  for (int n = 1; n <= l; ++n) {
    DirichletMode m;
    m.n = n;
    m.energy = 2.0 * cos_pi_fraction<double>(n, l + 1);
    const double s = sin_pi_fraction<double>(n, l + 1);
    m.weight = 2.0 / (l + 1) * s * s;
    m.vector.resize(l);
    for (int x = 1; x <= l; ++x) m.vector(x - 1) = norm * sin_pi_fraction<double>(static_cast<std::int64_t>(n) * x, l + 1);
    modes.push_back(std::move(m));
  }
  return modes;
}

double c_coefficient(int l, int n) {
  if (l < 1 || n < 1 || n > l) throw LabError(ErrorKind::InvalidArgument, "c_coefficient needs 1 <= n <= l");
  const int lp1 = l + 1;
  const double cn = cos_pi_fraction<double>(n, lp1);
  const double sn = sin_pi_fraction<double>(n, lp1);
  double sum = 0.0;
  for (int m = 1; m <= l; ++m) {
    if (m == n || (m - n) % 2 != 0) continue;
    const double sm = sin_pi_fraction<double>(m, lp1);
    sum += sm * sm / (cos_pi_fraction<double>(m, lp1) - cn);
  }
  return 2.0 / (static_cast<double>(lp1) * lp1) * sn * sn * sum;
}

ExpansionOrder parse_expansion_order(std::string_view token) {
  if (token == "r2") return ExpansionOrder::R2;
  if (token == "r1") return ExpansionOrder::R1;
  if (token == "const") return ExpansionOrder::Constant;
  if (token == "c_over_r") return ExpansionOrder::COverR;
  throw LabError(ErrorKind::InvalidOrder, "unknown expansion order '" + std::string(token) + "'");
}

const char* to_string(ExpansionOrder order) {
  switch (order) {
    case ExpansionOrder::R2: return "r2";
    case ExpansionOrder::R1: return "r1";
    case ExpansionOrder::Constant: return "const";
    case ExpansionOrder::COverR: return "c_over_r";
  }
  return "const";
}

ExpansionTerms expansion_terms(const TridiagSpec& spec, int n) {
  ExpansionTerms t;
  t.n = n;
  t.cos_term = 2.0 * cos_pi_fraction<double>(n, spec.l + 1);
  const double s = sin_pi_fraction<double>(n, spec.l + 1);
  t.sine_weight = 2.0 / (spec.l + 1) * s * s;
  t.c_n = c_coefficient(spec.l, n);
  t.predicted = predicted_eigenvalue<double>(spec, n, ExpansionOrder::Constant);
  return t;
}

namespace {

// Predictions sorted ascending; cos(pi n/(l+1)) decreases in n, but lower
// order terms may reorder nearly degenerate values at small r.
template <typename Scalar>
double residual_in(const TridiagSpec& spec, ExpansionOrder order) {
  const std::vector<Scalar> exact = exact_spectrum<Scalar>(spec);
  std::vector<Scalar> pred;
  pred.reserve(spec.l);
  for (int n = 1; n <= spec.l; ++n) pred.push_back(predicted_eigenvalue<Scalar>(spec, n, order));
  std::sort(pred.begin(), pred.end());
  double worst = 0.0;
  for (int k = 0; k < spec.l; ++k) {
    using std::abs;
    worst = std::max(worst, to_double(abs(exact[k] - pred[k])));
  }
  return worst;
}

}  // namespace

ResidualSample expansion_residual(const TridiagSpec& spec, ExpansionOrder order) {
  ResidualSample s{spec.r, residual_in<double>(spec, order), false};
  if (precision_guard_trips(spec.r, s.residual)) {
    s.residual = residual_in<DoubleDouble>(spec, order);
    s.extended = true;
  }
  return s;
}

OrderFit residual_order(int l, double a, double b, std::span<const double> r_values, ExpansionOrder order) {
  if (r_values.size() < 4) throw LabError(ErrorKind::InvalidArgument, "residual_order needs >= 4 values of r");
  const auto [lo, hi] = std::minmax_element(r_values.begin(), r_values.end());
  if (!(*hi >= 8.0 * *lo)) throw LabError(ErrorKind::InvalidArgument, "r values must span a factor >= 8");

  OrderFit fit;
  std::vector<double> xs, ys;
  for (double r : r_values) {
    fit.samples.push_back(expansion_residual({l, a, b, r}, order));
    if (fit.samples.back().residual >= kExactFloor) {
      xs.push_back(r);
      ys.push_back(fit.samples.back().residual);
    }
  }
  if (xs.empty()) {
    fit.exact_to_precision = true;
  } else if (xs.size() >= 2) {
    fit.slope = loglog_slope(xs, ys);
  }
  return fit;
}

}  // namespace boxlab
