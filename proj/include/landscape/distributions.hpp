#pragma once

#include <cmath>

#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "landscape/error.hpp"

// Thin wrappers over Boost.Math; all of them evaluate the regularized
// incomplete beta function, so tails keep full relative precision.
namespace landscape::dist {

inline void require_positive_df(double df) {
  if (!(df > 0.0)) {
    throw ContractError("degrees of freedom must be positive");
  }
}

inline double student_cdf(double t, double df) {
  require_positive_df(df);
  if (std::isinf(t)) {
    return t > 0 ? 1.0 : 0.0;
  }
  return boost::math::cdf(boost::math::students_t(df), t);
}

/// P(|T| >= |t|).
inline double student_two_sided(double t, double df) {
  require_positive_df(df);
  if (std::isinf(t)) {
    return 0.0;
  }
  return 2.0 * boost::math::cdf(boost::math::complement(boost::math::students_t(df), std::abs(t)));
}

inline double student_quantile(double prob, double df) {
  require_positive_df(df);
  if (!(prob > 0.0 && prob < 1.0)) {
    throw ContractError("student_quantile: probability must lie in (0, 1)");
  }
  return boost::math::quantile(boost::math::students_t(df), prob);
}

inline double f_cdf(double x, double df1, double df2) {
  require_positive_df(df1);
  require_positive_df(df2);
  if (x <= 0.0) {
    return 0.0;
  }
  if (std::isinf(x)) {
    return 1.0;
  }
  return boost::math::cdf(boost::math::fisher_f(df1, df2), x);
}

/// P(F >= x).
inline double f_upper_tail(double x, double df1, double df2) {
  require_positive_df(df1);
  require_positive_df(df2);
  if (x <= 0.0) {
    return 1.0;
  }
  if (std::isinf(x)) {
    return 0.0;
  }
  return boost::math::cdf(boost::math::complement(boost::math::fisher_f(df1, df2), x));
}

inline double f_quantile(double prob, double df1, double df2) {
  require_positive_df(df1);
  require_positive_df(df2);
  if (!(prob >= 0.0 && prob < 1.0)) {
    throw ContractError("f_quantile: probability must lie in [0, 1)");
  }
  return boost::math::quantile(boost::math::fisher_f(df1, df2), prob);
}

inline double normal_cdf(double x) {
  return boost::math::cdf(boost::math::normal(0.0, 1.0), x);
}

}  // namespace landscape::dist
