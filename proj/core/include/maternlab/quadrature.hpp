#pragma once

#include <functional>
#include <vector>

#include "maternlab/specfun.hpp"

namespace maternlab::quad {

struct Result {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
};

/// Integrand on a finite interval [a, b]. Receives the abscissa together with
/// its distances to both endpoints, computed without cancellation, so that
/// endpoint singularities like (x - a)^p can be evaluated accurately.
using EndpointIntegrand = std::function<double(double x, double from_a, double to_b)>;

/// Double-exponential (tanh-sinh) quadrature; tolerant of integrable
/// endpoint singularities.
Result tanh_sinh(const EndpointIntegrand& f, double a, double b, double rel_tol = 1e-13,
                 int max_level = 10);

/// exp-sinh quadrature of exp(log_f(x)) over (0, inf). Works in log space
/// so integrands beyond the double range are handled. Returns the
/// integral as a Scaled value.
specfun::Scaled exp_sinh_log(const std::function<double(double)>& log_f, double rel_tol = 1e-13,
                             int max_level = 12);

/// Adaptive 15-point Gauss-Kronrod on [a, b].
Result gauss_kronrod(const std::function<double(double)>& f, double a, double b,
                     double abs_tol, double rel_tol, int max_depth = 40);

/// Wynn epsilon extrapolation of a sequence of partial sums. Returns the
/// best estimate of the limit.
double wynn_epsilon(const std::vector<double>& partial_sums);

}  // namespace maternlab::quad
