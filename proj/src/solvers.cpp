#include "steprec/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace steprec {

ObjectiveError::ObjectiveError(std::vector<double> arg)
    : std::runtime_error("objective returned a non-finite value at argument (" +
                         [&arg] {
                           std::string s;
                           for (size_t i = 0; i < arg.size(); ++i)
                             s += (i ? ", " : "") + std::to_string(arg[i]);
                           return s;
                         }() +
                         ")"),
      arg_(std::move(arg)) {}

namespace {

struct BestTracker {
  double x = 0.0;
  double f = std::numeric_limits<double>::infinity();
  bool set = false;
  void consider(double xi, double fi) {
    if (!set || fi < f || (fi == f && xi < x)) {
      x = xi;
      f = fi;
      set = true;
    }
  }
};

}  // namespace

ScalarResult minimize_scalar(const ScalarProblem& prob) {
  if (!(prob.lo <= prob.hi))
    throw std::invalid_argument("minimize_scalar: lo > hi");
  if (!(prob.tol > 0.0)) throw std::invalid_argument("minimize_scalar: tol <= 0");

  auto eval = [&](double x) {
    const double f = prob.objective(x);
    if (!std::isfinite(f)) throw ObjectiveError({x});
    return f;
  };

  BestTracker best;
  if (prob.hi - prob.lo < prob.tol) {
    best.consider(prob.lo, eval(prob.lo));
    return {best.x, best.f};
  }

  const int n = kPresampleCount;
  double xs[kPresampleCount];
  int best_i = 0;
  for (int i = 0; i < n; ++i) {
    xs[i] = prob.lo + (prob.hi - prob.lo) * i / (n - 1);
    const double f = eval(xs[i]);
    if (f < best.f) best_i = i;
    best.consider(xs[i], f);
  }

  // Golden-section refinement of the bracket around the best sample.
  double a = xs[std::max(best_i - 1, 0)];
  double b = xs[std::min(best_i + 1, n - 1)];
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = eval(x1);
  double f2 = eval(x2);
  best.consider(x1, f1);
  best.consider(x2, f2);
  while (b - a > prob.tol) {
    if (f1 <= f2) {  // <= biases flat valleys toward the smaller argument
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = eval(x1);
      best.consider(x1, f1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = eval(x2);
      best.consider(x2, f2);
    }
  }
  const double xm = std::clamp(0.5 * (a + b), prob.lo, prob.hi);
  best.consider(xm, eval(xm));
  return {std::clamp(best.x, prob.lo, prob.hi), best.f};
}

namespace {

void clip_to_box(std::vector<double>& v, const std::vector<double>& lo,
                 const std::vector<double>& hi) {
  for (size_t i = 0; i < v.size(); ++i) v[i] = std::clamp(v[i], lo[i], hi[i]);
}

/// One Nelder-Mead run; every trial point is clipped into the box before
/// evaluation so all simplex vertices stay feasible.
BoxResult nelder_mead(const BoxProblem& prob, const std::vector<double>& start) {
  const size_t n = prob.lo.size();
  auto eval = [&](std::vector<double>& v) {
    clip_to_box(v, prob.lo, prob.hi);
    const double f = prob.objective(v);
    if (!std::isfinite(f)) throw ObjectiveError(v);
    return f;
  };

  std::vector<std::vector<double>> pts(n + 1, start);
  std::vector<double> fv(n + 1);
  for (size_t i = 0; i < n; ++i) {
    double h = 0.15 * (prob.hi[i] - prob.lo[i]);
    if (h == 0.0) continue;
    if (start[i] + h > prob.hi[i]) h = -h;
    pts[i + 1][i] += h;
  }
  for (size_t i = 0; i <= n; ++i) fv[i] = eval(pts[i]);

  std::vector<size_t> order(n + 1);
  for (int iter = 0; iter < prob.max_iter; ++iter) {
    for (size_t i = 0; i <= n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return fv[a] < fv[b]; });
    const size_t lo_i = order[0], hi_i = order[n], nh_i = order[n - 1];

    double spread = 0.0;
    for (size_t i = 0; i <= n; ++i)
      for (size_t d = 0; d < n; ++d)
        spread = std::max(spread, std::abs(pts[i][d] - pts[lo_i][d]));
    if (spread < prob.tol || fv[hi_i] - fv[lo_i] < 1e-15) break;

    std::vector<double> centroid(n, 0.0);
    for (size_t i = 0; i <= n; ++i) {
      if (i == hi_i) continue;
      for (size_t d = 0; d < n; ++d) centroid[d] += pts[i][d] / double(n);
    }

    auto mix = [&](double coef) {
      std::vector<double> v(n);
      for (size_t d = 0; d < n; ++d)
        v[d] = centroid[d] + coef * (centroid[d] - pts[hi_i][d]);
      return v;
    };

    std::vector<double> refl = mix(1.0);
    const double f_refl = eval(refl);
    if (f_refl < fv[lo_i]) {
      std::vector<double> exp_pt = mix(2.0);
      const double f_exp = eval(exp_pt);
      if (f_exp < f_refl) {
        pts[hi_i] = std::move(exp_pt);
        fv[hi_i] = f_exp;
      } else {
        pts[hi_i] = std::move(refl);
        fv[hi_i] = f_refl;
      }
    } else if (f_refl < fv[nh_i]) {
      pts[hi_i] = std::move(refl);
      fv[hi_i] = f_refl;
    } else {
      std::vector<double> contr = mix(f_refl < fv[hi_i] ? 0.5 : -0.5);
      const double f_contr = eval(contr);
      if (f_contr < std::min(f_refl, fv[hi_i])) {
        pts[hi_i] = std::move(contr);
        fv[hi_i] = f_contr;
      } else {
        // shrink toward the best vertex
        for (size_t i = 0; i <= n; ++i) {
          if (i == lo_i) continue;
          for (size_t d = 0; d < n; ++d)
            pts[i][d] = pts[lo_i][d] + 0.5 * (pts[i][d] - pts[lo_i][d]);
          fv[i] = eval(pts[i]);
        }
      }
    }
  }

  size_t bi = 0;
  for (size_t i = 1; i <= n; ++i)
    if (fv[i] < fv[bi]) bi = i;
  return {pts[bi], fv[bi]};
}

}  // namespace

BoxResult minimize_box(const BoxProblem& prob) {
  const size_t n = prob.lo.size();
  if (prob.hi.size() != n || prob.init.size() != n)
    throw std::invalid_argument("minimize_box: dimension mismatch");
  if (!(prob.tol > 0.0)) throw std::invalid_argument("minimize_box: tol <= 0");
  for (size_t i = 0; i < n; ++i) {
    if (!(prob.lo[i] <= prob.hi[i]))
      throw std::invalid_argument("minimize_box: lo > hi in dimension " +
                                  std::to_string(i));
    if (!(prob.lo[i] <= prob.init[i] && prob.init[i] <= prob.hi[i]))
      throw std::invalid_argument("minimize_box: infeasible init in dimension " +
                                  std::to_string(i));
  }

  std::vector<std::vector<double>> starts;
  starts.push_back(prob.init);
  for (size_t mask = 0; mask < (size_t(1) << n); ++mask) {
    std::vector<double> s(n);
    for (size_t d = 0; d < n; ++d) {
      const double corner = (mask >> d) & 1 ? prob.hi[d] : prob.lo[d];
      s[d] = 0.5 * (prob.init[d] + corner);
    }
    starts.push_back(std::move(s));
  }
  for (auto s : prob.extra_inits) {
    if (s.size() != n)
      throw std::invalid_argument("minimize_box: extra init dimension mismatch");
    clip_to_box(s, prob.lo, prob.hi);
    starts.push_back(std::move(s));
  }

  BoxResult best;
  best.value = std::numeric_limits<double>::infinity();
  for (const auto& s : starts) {
    // every start point is itself a simplex vertex, so value <= f(start)
    BoxResult r = nelder_mead(prob, s);
    if (r.value < best.value) best = std::move(r);
  }
  clip_to_box(best.argmin, prob.lo, prob.hi);
  return best;
}

}  // namespace steprec
