#include "pdcov/fdr.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "pdcov/error.hpp"

namespace pdcov {

std::vector<std::size_t> bh_select(std::span<const double> p_values,
                                   double alpha,
                                   std::optional<std::size_t> d_bar) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw DomainError("BH level must lie in (0, 1)");
  }
  for (double p : p_values) {
    if (!(p > 0.0 && p <= 1.0)) {
      throw DomainError("p-values must lie in (0, 1], got " + std::to_string(p));
    }
  }
  const std::size_t m = d_bar.value_or(p_values.size());
  if (m < p_values.size()) {
    throw DomainError("d_bar smaller than the number of p-values");
  }

  std::vector<std::size_t> order(p_values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return p_values[a] < p_values[b];
  });

  std::size_t s = 0;
  for (std::size_t i = 1; i <= order.size(); ++i) {
    if (p_values[order[i - 1]] <=
        alpha * static_cast<double>(i) / static_cast<double>(m)) {
      s = i;
    }
  }
  std::vector<std::size_t> rejected(order.begin(),
                                    order.begin() + static_cast<std::ptrdiff_t>(s));
  std::sort(rejected.begin(), rejected.end());
  return rejected;
}

}  // namespace pdcov
