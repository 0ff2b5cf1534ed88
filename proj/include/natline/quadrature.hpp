#pragma once

// Composite Gauss-Kronrod (G7/K15) quadrature with global adaptive
// bisection. Works for real and complex integrands. Results are a
// deterministic function of the inputs: panels are refined in a fixed
// order and the final sum runs left to right.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <queue>
#include <span>
#include <sstream>
#include <type_traits>
#include <vector>

#include "natline/errors.hpp"

namespace natline::quad {

template <class T>
struct Result {
  T value{};
  double error = 0.0;
  std::size_t evaluations = 0;
};

namespace detail {

inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7).
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
};

}  // namespace detail

template <class F>
using value_t = std::decay_t<std::invoke_result_t<F&, double>>;

/// Single G7/K15 panel. The error estimate is |K15 - G7|.
template <class F>
Result<value_t<F>> gauss_kronrod15(F& f, double a, double b) {
  using T = value_t<F>;
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const T fc = f(center);
  T kronrod = fc * detail::kKronrodWeights[7];
  T gauss = fc * detail::kGaussWeights[3];
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * detail::kKronrodNodes[j];
    const T pair = f(center - dx) + f(center + dx);
    kronrod += pair * detail::kKronrodWeights[j];
    if (j % 2 == 1) gauss += pair * detail::kGaussWeights[j / 2];
  }
  Result<T> r;
  r.value = kronrod * half;
  using std::abs;
  r.error = abs((kronrod - gauss) * half);
  r.evaluations = 15;
  return r;
}

struct Options {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  std::size_t max_panels = 200000;
};

/// Integrates f over consecutive panels [edges[i], edges[i+1]], bisecting
/// the panel with the largest error estimate until the total estimate
/// drops below max(abs_tol, rel_tol * |value|). Throws QuadratureFailure
/// when max_panels is reached first.
template <class F>
Result<value_t<F>> integrate(F&& f, std::span<const double> edges,
                             const Options& opt = {}) {
  using T = value_t<F>;
  struct Item {
    detail::Panel panel;
    Result<T> r;
    std::size_t order;
  };
  struct ByError {
    bool operator()(const Item& x, const Item& y) const {
      if (x.r.error != y.r.error) return x.r.error < y.r.error;
      return x.order > y.order;
    }
  };

  Result<T> total;
  if (edges.size() < 2) return total;

  std::priority_queue<Item, std::vector<Item>, ByError> queue;
  std::size_t counter = 0;
  double err_sum = 0.0;
  T val_sum{};
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    if (!(edges[i + 1] > edges[i])) continue;
    auto r = gauss_kronrod15(f, edges[i], edges[i + 1]);
    total.evaluations += r.evaluations;
    err_sum += r.error;
    val_sum += r.value;
    queue.push(Item{{edges[i], edges[i + 1]}, r, counter++});
  }

  auto tolerance = [&] {
    return std::max(opt.abs_tol, opt.rel_tol * std::abs(val_sum));
  };

  while (err_sum > tolerance()) {
    if (queue.size() >= opt.max_panels) {
      std::ostringstream msg;
      msg << "quadrature did not converge: error estimate " << err_sum
          << " exceeds tolerance " << tolerance();
      throw QuadratureFailure(msg.str(), err_sum);
    }
    Item worst = queue.top();
    const double mid = 0.5 * (worst.panel.a + worst.panel.b);
    if (!(mid > worst.panel.a && mid < worst.panel.b)) {
      throw QuadratureFailure("quadrature panel width underflow", err_sum);
    }
    queue.pop();
    auto left = gauss_kronrod15(f, worst.panel.a, mid);
    auto right = gauss_kronrod15(f, mid, worst.panel.b);
    total.evaluations += left.evaluations + right.evaluations;
    err_sum += left.error + right.error - worst.r.error;
    val_sum += left.value + right.value - worst.r.value;
    queue.push(Item{{worst.panel.a, mid}, left, counter++});
    queue.push(Item{{mid, worst.panel.b}, right, counter++});
  }

  std::vector<Item> items;
  items.reserve(queue.size());
  while (!queue.empty()) {
    items.push_back(queue.top());
    queue.pop();
  }
  std::sort(items.begin(), items.end(), [](const Item& x, const Item& y) {
    return x.panel.a < y.panel.a;
  });
  for (const auto& it : items) {
    total.value += it.r.value;
    total.error += it.r.error;
  }
  return total;
}

template <class F>
Result<value_t<F>> integrate(F&& f, double a, double b,
                             const Options& opt = {}) {
  const std::array<double, 2> edges{a, b};
  return integrate(std::forward<F>(f), std::span<const double>(edges), opt);
}

/// Splits [a, b] into the fewest equal panels no wider than max_width and
/// appends the interior and right edges to out (a itself is not appended).
inline void append_uniform(std::vector<double>& out, double a, double b,
                           double max_width) {
  const double len = b - a;
  std::size_t n = 1;
  if (max_width > 0.0 && len > max_width) {
    n = static_cast<std::size_t>(std::ceil(len / max_width));
  }
  for (std::size_t k = 1; k < n; ++k) {
    out.push_back(a + len * static_cast<double>(k) / static_cast<double>(n));
  }
  out.push_back(b);
}

}  // namespace natline::quad
