#include "skewlqu/optimize.hpp"

#include "skewlqu/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace skewlqu {

NelderMeadResult nelder_mead(const std::function<double(const RVector&)>& f, const RVector& x0,
                             const NelderMeadOptions& opts) {
  const Eigen::Index d = x0.size();
  const double dd = double(std::max<Eigen::Index>(d, 1));
  const double alpha = 1.0;
  const double gamma = 1.0 + 2.0 / dd;
  const double rho = 0.75 - 1.0 / (2.0 * dd);
  const double sigma = 1.0 - 1.0 / dd;

  NelderMeadResult result;
  auto eval = [&](const RVector& x) {
    ++result.evaluations;
    const double v = f(x);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  };

  std::vector<RVector> simplex(static_cast<std::size_t>(d + 1), x0);
  std::vector<double> values(static_cast<std::size_t>(d + 1));
  values[0] = eval(x0);
  for (Eigen::Index i = 0; i < d; ++i) {
    simplex[static_cast<std::size_t>(i + 1)](i) += opts.initial_step;
    values[static_cast<std::size_t>(i + 1)] = eval(simplex[static_cast<std::size_t>(i + 1)]);
  }

  std::vector<std::size_t> order(simplex.size());
  for (; result.iterations < opts.max_iters; ++result.iterations) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second_worst = order[order.size() - 2];

    if (values[worst] - values[best] <= opts.tol) {
      result.converged = true;
      break;
    }

    RVector centroid = RVector::Zero(d);
    for (std::size_t k = 0; k + 1 < order.size(); ++k) centroid += simplex[order[k]];
    centroid /= dd;

    const RVector reflected = centroid + alpha * (centroid - simplex[worst]);
    const double f_reflected = eval(reflected);
    if (f_reflected < values[best]) {
      const RVector expanded = centroid + gamma * (reflected - centroid);
      const double f_expanded = eval(expanded);
      if (f_expanded < f_reflected) {
        simplex[worst] = expanded;
        values[worst] = f_expanded;
      } else {
        simplex[worst] = reflected;
        values[worst] = f_reflected;
      }
      continue;
    }
    if (f_reflected < values[second_worst]) {
      simplex[worst] = reflected;
      values[worst] = f_reflected;
      continue;
    }

    const bool outside = f_reflected < values[worst];
    const RVector contracted = outside ? RVector(centroid + rho * (reflected - centroid))
                                       : RVector(centroid + rho * (simplex[worst] - centroid));
    const double f_contracted = eval(contracted);
    if (f_contracted < (outside ? f_reflected : values[worst])) {
      simplex[worst] = contracted;
      values[worst] = f_contracted;
      continue;
    }

    for (std::size_t k = 1; k < order.size(); ++k) {
      auto& vertex = simplex[order[k]];
      vertex = simplex[best] + sigma * (vertex - simplex[best]);
      values[order[k]] = eval(vertex);
    }
  }

  const auto best = static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin());
  result.x = simplex[best];
  result.value = values[best];
  return result;
}

CMatrix hermitian_from_coordinates(const RVector& theta, Eigen::Index n) {
  CMatrix h = CMatrix::Zero(n, n);
  Eigen::Index idx = 0;
  for (Eigen::Index k = 0; k < n; ++k) h(k, k) = theta(idx++);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = j + 1; k < n; ++k) {
      const Complex z(theta(idx), theta(idx + 1));
      idx += 2;
      h(j, k) = z;
      h(k, j) = std::conj(z);
    }
  }
  return h;
}

CMatrix unitary_exp(const CMatrix& hermitian) {
  const auto es = hermitian_eig(hermitian);
  const CVector phases = es.eigenvalues.unaryExpr([](double x) { return std::polar(1.0, x); });
  return es.eigenvectors * phases.asDiagonal() * es.eigenvectors.adjoint();
}

namespace {

struct LocalSearch {
  CMatrix unitary;
  double value;
};

// One restart: Nelder-Mead in a chart around `start`, re-centered after each
// collapse until a pass no longer improves by more than tol.
LocalSearch search_from(Eigen::Index n, const UnitaryObjective& f, CMatrix start, const UnitarySearchOptions& opts) {
  LocalSearch best{std::move(start), 0.0};
  best.value = f(best.unitary);
  int budget = opts.max_iters;
  double step = 0.5;
  while (budget > 0) {
    const CMatrix center = best.unitary;
    auto chart = [&](const RVector& theta) -> CMatrix {
      return center * unitary_exp(hermitian_from_coordinates(theta, n));
    };
    NelderMeadOptions nm{opts.tol, step, budget};
    const auto r = nelder_mead([&](const RVector& theta) { return f(chart(theta)); }, RVector::Zero(n * n), nm);
    budget -= std::max(r.iterations, 1);
    const double improvement = best.value - r.value;
    if (r.value < best.value) {
      best.unitary = chart(r.x);
      best.value = r.value;
    }
    if (improvement <= opts.tol) break;
    step = std::max(0.2 * step, 1e-3);
  }
  return best;
}

}  // namespace

UnitarySearchResult minimize_over_unitaries(Eigen::Index n, const UnitaryObjective& f,
                                            std::span<const CMatrix> seeds, const UnitarySearchOptions& opts) {
  Rng rng(derive_seed({opts.seed, 0x756e6974ULL}));
  const std::size_t total = std::max<std::size_t>(static_cast<std::size_t>(std::max(opts.restarts, 1)), seeds.size());

  UnitarySearchResult result;
  result.value = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < total; ++r) {
    CMatrix start = r < seeds.size() ? seeds[r] : haar_unitary(n, rng);
    if (start.rows() != n || start.cols() != n) {
      throw Error(ErrorKind::DimensionMismatch, "seed unitary has the wrong dimension");
    }
    const auto local = search_from(n, f, std::move(start), opts);
    result.restart_values.push_back(local.value);
    if (local.value < result.value) {
      result.value = local.value;
      result.unitary = local.unitary;
    }
  }
  result.restarts_used = static_cast<int>(total);

  std::vector<double> sorted = result.restart_values;
  std::sort(sorted.begin(), sorted.end());
  result.converged = sorted.size() < 2 || sorted[1] - sorted[0] <= 10.0 * opts.tol;
  return result;
}

}  // namespace skewlqu
