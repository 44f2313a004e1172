#pragma once

#include <algorithm>
#include <functional>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

namespace cpde {

template <typename Scalar>
struct SimplexResult {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x;
  Scalar value = 0;
  int iterations = 0;
  long evaluations = 0;
};

/// Downhill simplex minimization. Deterministic: ties resolve by index, the
/// initial simplex is the start point plus one step along each coordinate.
template <typename Scalar, typename F>
SimplexResult<Scalar> nelder_mead(F&& f, const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& start,
                                  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& steps,
                                  Scalar tol_rel = Scalar(1e-12), int max_iters = 4000) {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const Eigen::Index n = start.size();
  long evals = 0;
  auto eval = [&](const Vec& x) {
    ++evals;
    return f(x);
  };

  std::vector<Vec> pts(static_cast<size_t>(n) + 1, start);
  std::vector<Scalar> vals(static_cast<size_t>(n) + 1);
  for (Eigen::Index i = 0; i < n; ++i) pts[static_cast<size_t>(i) + 1][i] += steps[i];
  for (size_t i = 0; i < pts.size(); ++i) vals[i] = eval(pts[i]);

  std::vector<size_t> order(pts.size());
  auto sort_simplex = [&] {
    std::iota(order.begin(), order.end(), size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return vals[a] < vals[b]; });
  };

  int iter = 0;
  for (; iter < max_iters; ++iter) {
    sort_simplex();
    const size_t best = order.front(), worst = order.back(), second = order[order.size() - 2];
    const Scalar spread = std::abs(vals[worst] - vals[best]);
    if (spread <= tol_rel * (Scalar(1) + std::abs(vals[best]))) break;

    Vec centroid = Vec::Zero(n);
    for (size_t i = 0; i < pts.size(); ++i)
      if (i != worst) centroid += pts[i];
    centroid /= Scalar(n);

    const Vec reflected = centroid + (centroid - pts[worst]);
    const Scalar fr = eval(reflected);
    if (fr < vals[best]) {
      const Vec expanded = centroid + Scalar(2) * (centroid - pts[worst]);
      const Scalar fe = eval(expanded);
      if (fe < fr) {
        pts[worst] = expanded;
        vals[worst] = fe;
      } else {
        pts[worst] = reflected;
        vals[worst] = fr;
      }
    } else if (fr < vals[second]) {
      pts[worst] = reflected;
      vals[worst] = fr;
    } else {
      const Vec contracted = centroid + Scalar(0.5) * (pts[worst] - centroid);
      const Scalar fc = eval(contracted);
      if (fc < vals[worst]) {
        pts[worst] = contracted;
        vals[worst] = fc;
      } else {
        for (size_t i = 0; i < pts.size(); ++i) {
          if (i == best) continue;
          pts[i] = pts[best] + Scalar(0.5) * (pts[i] - pts[best]);
          vals[i] = eval(pts[i]);
        }
      }
    }
  }
  sort_simplex();
  SimplexResult<Scalar> out;
  out.x = pts[order.front()];
  out.value = vals[order.front()];
  out.iterations = iter;
  out.evaluations = evals;
  return out;
}

}  // namespace cpde
