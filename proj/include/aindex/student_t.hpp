#pragma once

namespace aindex {

/// Regularized incomplete beta I_x(a, b) for a, b > 0 and x in [0, 1],
/// evaluated with a modified-Lentz continued fraction to relative
/// tolerance 1e-12.
double regularized_incomplete_beta(double x, double a, double b);

/// P(|T| >= |t|) for Student's t with `df` degrees of freedom.
double student_t_two_tailed_p(double t, double df);

}  // namespace aindex
