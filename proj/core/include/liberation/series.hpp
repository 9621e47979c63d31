#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace liberation {

/// Truncated power series c[0] + c[1] z + ... + c[n-1] z^{n-1}.
using Series = std::vector<double>;

/// Cauchy product truncated to `order` coefficients.
Series series_mul(const Series& a, const Series& b, std::size_t order);

/// Square root with s[0] = sqrt(a[0]); requires a[0] > 0.
Series series_sqrt(const Series& a, std::size_t order);

/// Coefficients of 1/(1 - z^2).
Series even_geometric(std::size_t order);

/// Value and first two z-derivatives of a series at z, by Horner's scheme.
struct SeriesValue {
  std::complex<double> value;
  std::complex<double> d1;
  std::complex<double> d2;
};
SeriesValue series_eval(const Series& c, std::complex<double> z);

}  // namespace liberation
