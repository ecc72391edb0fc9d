#pragma once

namespace insight {

/// Regularized incomplete beta I_x(a, b) for a, b > 0 and x in [0, 1].
double regularized_incomplete_beta(double a, double b, double x);

/// P(F > f) for F ~ F(df1, df2). Equals I_x(df2/2, df1/2) at x = df2 / (df2 + df1 f).
/// Throws InvalidDegreesOfFreedom when either df < 1, InvalidArgument when f < 0 or NaN.
double f_upper_tail(double f, int df1, int df2);

}  // namespace insight
