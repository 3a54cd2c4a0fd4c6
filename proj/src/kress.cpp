#include "curvquad/kress.hpp"

#include <cmath>

#include "curvquad/error.hpp"

namespace curvquad {

namespace {

void check_sigma(int sigma) {
  if (sigma < 2) throw DomainError("Kress grading sigma must be >= 2");
}

// c(theta) maps [-1, 1] onto [0, 1] with slope 1/sigma at the centre.
struct CubicC {
  double c;
  double dc_dtheta;
};

CubicC cubic_c(double theta, int sigma) {
  const double s = static_cast<double>(sigma);
  const double k = 0.5 - 1.0 / s;
  return {k * theta * theta * theta + theta / s + 0.5, 3.0 * k * theta * theta + 1.0 / s};
}

}  // namespace

double kress_lambda(double tau, double a, double b, int sigma) {
  check_sigma(sigma);
  const double theta = (2.0 * tau - a - b) / (b - a);
  const double c = cubic_c(theta, sigma).c;
  const double cs = std::pow(c, sigma);
  const double ds = std::pow(1.0 - c, sigma);
  return (b - a) * cs / (cs + ds) + a;
}

double kress_lambda_prime(double tau, double a, double b, int sigma) {
  check_sigma(sigma);
  const double theta = (2.0 * tau - a - b) / (b - a);
  const auto [c, dc] = cubic_c(theta, sigma);
  const double cs = std::pow(c, sigma);
  const double ds = std::pow(1.0 - c, sigma);
  const double den = cs + ds;
  const double inner = sigma * std::pow(c, sigma - 1) * std::pow(1.0 - c, sigma - 1) / (den * den);
  return 2.0 * inner * dc;
}

}  // namespace curvquad
