#include "liberation/series.hpp"

#include <algorithm>
#include <cmath>

#include "liberation/errors.hpp"

namespace liberation {

Series series_mul(const Series& a, const Series& b, std::size_t order) {
  Series out(order, 0.0);
  for (std::size_t i = 0; i < std::min(order, a.size()); ++i) {
    if (a[i] == 0.0) continue;
    for (std::size_t j = 0; j < b.size() && i + j < order; ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

Series series_sqrt(const Series& a, std::size_t order) {
  if (a.empty() || !(a[0] > 0.0)) {
    throw DomainError("series_sqrt: constant term must be positive");
  }
  Series s(order, 0.0);
  if (order == 0) return s;
  s[0] = std::sqrt(a[0]);
  for (std::size_t n = 1; n < order; ++n) {
    double acc = n < a.size() ? a[n] : 0.0;
    for (std::size_t k = 1; k < n; ++k) acc -= s[k] * s[n - k];
    s[n] = acc / (2.0 * s[0]);
  }
  return s;
}

Series even_geometric(std::size_t order) {
  Series g(order, 0.0);
  for (std::size_t n = 0; n < order; n += 2) g[n] = 1.0;
  return g;
}

SeriesValue series_eval(const Series& c, std::complex<double> z) {
  SeriesValue v{0.0, 0.0, 0.0};
  for (std::size_t k = c.size(); k-- > 0;) {
    v.d2 = v.d2 * z + 2.0 * v.d1;
    v.d1 = v.d1 * z + v.value;
    v.value = v.value * z + c[k];
  }
  return v;
}

}  // namespace liberation
