#pragma once

namespace laxlab {

double airy_ai(double x);
double airy_ai_prime(double x);
// nu > -1, x >= 0
double bessel_j(double nu, double x);
double bessel_j_prime(double nu, double x);

} // namespace laxlab
