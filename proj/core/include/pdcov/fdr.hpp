#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace pdcov {

// Benjamini-Hochberg step-up rule. With P_(1) <= ... <= P_(m) the sorted
// p-values, s = max{i : P_(i) <= alpha * i / d_bar} and the s smallest are
// rejected (ties in stable index order). d_bar defaults to the number of
// p-values and may be larger when some hypotheses could not be tested.
// Returns the rejected positions in ascending order.
std::vector<std::size_t> bh_select(std::span<const double> p_values,
                                   double alpha,
                                   std::optional<std::size_t> d_bar = {});

}  // namespace pdcov
