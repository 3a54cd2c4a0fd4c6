#pragma once

namespace curvquad {

/// Sigmoidal change of variable on [a, b] with grading sigma >= 2: lambda(a) = a,
/// lambda(b) = b, and lambda' vanishes to order sigma - 1 at both ends.
double kress_lambda(double tau, double a, double b, int sigma);
double kress_lambda_prime(double tau, double a, double b, int sigma);

}  // namespace curvquad
