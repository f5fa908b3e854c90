#include "ratchet/observables.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <stdexcept>

#include <Eigen/Dense>

namespace ratchet {

double mean_momentum(const MomentumLadder& ladder) {
  double s = 0.0;
  for (std::size_t i = 0; i < ladder.prob.size(); ++i) s += ladder.momentum(i) * ladder.prob[i];
  return s;
}

double mean_square_momentum(const MomentumLadder& ladder) {
  double s = 0.0;
  for (std::size_t i = 0; i < ladder.prob.size(); ++i) {
    const double q = ladder.momentum(i);
    s += q * q * ladder.prob[i];
  }
  return s;
}

double participation_ratio(const MomentumLadder& ladder) {
  double s = 0.0;
  for (double p : ladder.prob) s += p * p;
  return s > 0.0 ? 1.0 / s : 1.0;
}

StepStats step_stats(int kick, const MomentumLadder& ladder) {
  return {kick, mean_momentum(ladder), mean_square_momentum(ladder), participation_ratio(ladder)};
}

double FitResult::operator()(double x) const {
  double y = 0.0;
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) y = y * x + *it;
  return y;
}

FitResult polynomial_fit(std::span<const double> xs, std::span<const double> ys, int degree) {
  if (degree != 1 && degree != 2) throw std::invalid_argument("fit degree must be 1 or 2");
  if (xs.size() != ys.size()) throw std::invalid_argument("fit abscissa and ordinate differ in length");
  if (xs.size() < static_cast<std::size_t>(degree + 2))
    throw std::invalid_argument("fit needs at least degree + 2 points");

  const auto n = static_cast<double>(xs.size());
  double center = 0.0;
  for (double x : xs) center += x;
  center /= n;
  double scale = 0.0;
  for (double x : xs) scale = std::max(scale, std::abs(x - center));
  if (!(scale > 0.0)) throw std::invalid_argument("degenerate fit abscissa");

  // Least squares in t = (x - center) / scale.
  const int m = degree + 1;
  Eigen::MatrixXd v(static_cast<Eigen::Index>(xs.size()), m);
  Eigen::VectorXd y(static_cast<Eigen::Index>(ys.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double t = (xs[i] - center) / scale;
    const auto row = static_cast<Eigen::Index>(i);
    v(row, 0) = 1.0;
    for (int j = 1; j < m; ++j) v(row, j) = v(row, j - 1) * t;
    y(row) = ys[i];
  }
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(v);
  if (qr.rank() < m) throw std::invalid_argument("degenerate fit abscissa");
  const Eigen::VectorXd sol = qr.solve(y);
  std::array<double, 3> b{};
  for (int j = 0; j < m; ++j) b[static_cast<std::size_t>(j)] = sol(j);

  // Expand sum_j b_j ((x - c)/s)^j into powers of x.
  FitResult fit;
  fit.coefficients.assign(static_cast<std::size_t>(m), 0.0);
  const double c = center;
  const double s = scale;
  fit.coefficients[0] = b[0] - b[1] * c / s + (degree == 2 ? b[2] * c * c / (s * s) : 0.0);
  fit.coefficients[1] = b[1] / s - (degree == 2 ? 2.0 * b[2] * c / (s * s) : 0.0);
  if (degree == 2) fit.coefficients[2] = b[2] / (s * s);

  double mean_y = 0.0;
  for (double y : ys) mean_y += y;
  mean_y /= n;
  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double t = (xs[i] - center) / scale;
    double pred = b[0] + b[1] * t;
    if (degree == 2) pred += b[2] * t * t;
    ss_res += (ys[i] - pred) * (ys[i] - pred);
    ss_tot += (ys[i] - mean_y) * (ys[i] - mean_y);
  }
  fit.residual_rms = std::sqrt(ss_res / n);
  fit.r_squared = ss_tot > 0.0 ? std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0) : 1.0;
  return fit;
}

namespace {

template <typename F>
void for_each_order(const MomentumLadder& a, const MomentumLadder& b, F&& f) {
  std::map<int, std::pair<double, double>> merged;
  for (std::size_t i = 0; i < a.orders.size(); ++i) merged[a.orders[i]].first += a.prob[i];
  for (std::size_t i = 0; i < b.orders.size(); ++i) merged[b.orders[i]].second += b.prob[i];
  for (const auto& [order, pq] : merged) f(pq.first, pq.second);
}

}  // namespace

double distribution_distance(const MomentumLadder& a, const MomentumLadder& b) {
  double s = 0.0;
  for_each_order(a, b, [&](double p, double q) { s += std::abs(p - q); });
  return 0.5 * s;
}

double linf_distance(const MomentumLadder& a, const MomentumLadder& b) {
  double m = 0.0;
  for_each_order(a, b, [&](double p, double q) { m = std::max(m, std::abs(p - q)); });
  return m;
}

std::vector<std::size_t> local_maxima(std::span<const double> values) {
  std::vector<std::size_t> out;
  const std::size_t n = values.size();
  for (std::size_t i = 0; i < n; ++i) {
    const bool left = i == 0 || values[i] >= values[i - 1];
    const bool right = i + 1 == n || values[i] >= values[i + 1];
    if (left && right) out.push_back(i);
  }
  return out;
}

}  // namespace ratchet
