#pragma once

/**
 * @file quadrature.hpp
 * @brief Periodic trapezoidal rule with node doubling.
 *
 * For a smooth 2*pi-periodic g the trapezoidal mean (1/N) sum g(2 pi k / N)
 * converges geometrically to (1/2pi) * integral of g. Doubling N reuses all
 * previous nodes, so an adaptive run costs no more than its last level.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <utility>

#include "qspec/errors.hpp"

namespace qspec {

struct QuadratureOptions {
  std::size_t initial_nodes = 64;
  std::size_t max_nodes = 8192;
  double tol = 1e-10;
};

template <class Value>
struct QuadratureResult {
  Value value;
  std::size_t nodes = 0;
  double error_estimate = 0.0;
};

/// (1/N) sum_{k<N} g(2 pi k / N), accumulated in node order.
template <class Value, class Integrand>
Value periodic_mean(Integrand&& g, std::size_t nodes) {
  if (nodes == 0) throw InvalidArgument("quadrature needs at least one node");
  const double step = 2.0 * std::numbers::pi / static_cast<double>(nodes);
  Value sum = g(0.0);
  for (std::size_t k = 1; k < nodes; ++k) sum += g(step * static_cast<double>(k));
  return sum * (1.0 / static_cast<double>(nodes));
}

/// Doubles N from options.initial_nodes until the N and 2N means agree to
/// tol * max(1, |mean_2N|). Throws QuadratureDivergence past max_nodes.
template <class Value, class Integrand, class Magnitude>
QuadratureResult<Value> adaptive_periodic_mean(Integrand&& g, Magnitude&& magnitude, const QuadratureOptions& options) {
  if (options.initial_nodes == 0 || options.max_nodes < options.initial_nodes) {
    throw InvalidArgument("quadrature node limits are inconsistent");
  }
  std::size_t nodes = options.initial_nodes;
  const double step0 = 2.0 * std::numbers::pi / static_cast<double>(nodes);
  Value sum = g(0.0);
  for (std::size_t k = 1; k < nodes; ++k) sum += g(step0 * static_cast<double>(k));
  Value mean = sum * (1.0 / static_cast<double>(nodes));

  double last_change = 0.0;
  while (2 * nodes <= options.max_nodes) {
    const std::size_t fine = 2 * nodes;
    const double step = 2.0 * std::numbers::pi / static_cast<double>(fine);
    for (std::size_t k = 1; k < fine; k += 2) sum += g(step * static_cast<double>(k));
    Value refined = sum * (1.0 / static_cast<double>(fine));
    Value change = refined;
    change -= mean;
    last_change = magnitude(change);
    mean = std::move(refined);
    nodes = fine;
    if (last_change <= options.tol * std::max(1.0, magnitude(mean))) return {std::move(mean), nodes, last_change};
  }
  throw QuadratureDivergence("trapezoidal estimates did not settle within " + std::to_string(options.max_nodes) +
                             " nodes (last change " + std::to_string(last_change) + ")");
}

}  // namespace qspec
