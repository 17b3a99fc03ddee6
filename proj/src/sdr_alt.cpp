#include "sepbeam/sdr_alt.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "sepbeam/kernels.hpp"
#include "sepbeam/numerics.hpp"
#include "sepbeam/sep_metrics.hpp"

namespace sepbeam {

namespace {

// Projection onto {<A_B, X> >= t_b} n {Tr X <= P} in the Frobenius geometry
// of Hermitian matrices.  aa = <A_B, A_B>, ai = Tr A_B.
CMat proj_halfspaces(const CMat& y, const CMat& a_b, double aa, double ai, double t_b,
                     double p) {
  const int n = y.rows;
  const double gb = inner(a_b, y);
  const double gt = trace(y).real();
  if (gb >= t_b && gt <= p) return y;

  // Bob constraint alone.
  CMat x = add(y, scale(a_b, std::max(0.0, t_b - gb) / aa));
  if (trace(x).real() <= p && inner(a_b, x) >= t_b - 1e-15 * std::max(1.0, std::abs(t_b)))
    return x;

  // Trace constraint alone.
  x = sub(y, scale(identity(n), std::max(0.0, gt - p) / n));
  if (inner(a_b, x) >= t_b) return x;

  // Both active: X = Y + a A_B - b I with <A_B, X> = t_b, Tr X = P.
  const double det = -aa * n + ai * ai;
  const double rhs1 = t_b - gb;
  const double rhs2 = p - gt;
  const double a = (-n * rhs1 + ai * rhs2) / det;
  const double b = (-ai * rhs1 + aa * rhs2) / det;
  return add(y, sub(scale(a_b, a), scale(identity(n), b)));
}

}  // namespace

double bob_threshold(const WiretapSystem& sys, double bob_sep_max, cdouble amplitude) {
  if (!(bob_sep_max > 0.0) || bob_sep_max > 0.5)
    throw std::domain_error("bob_threshold: bob_sep_max must lie in (0, 0.5]");
  const double amp = std::abs(amplitude);
  if (!(amp > 0.0)) throw std::invalid_argument("bob_threshold: amplitude must be nonzero");
  const double qd = (bob_sep_max == 0.5) ? 0.0 : q_inv(bob_sep_max);
  const double ratio = qd / amp;
  return sys.n_b / 2.0 * ratio * ratio;
}

SdrSolution solve_sdr(const WiretapSystem& sys, double bob_sep_max, cdouble amplitude,
                      const SdrOptions& opt) {
  const auto problems = validate_system(sys);
  if (!problems.empty()) throw std::invalid_argument("solve_sdr: " + problems.front());

  const CMat a_b = gram(sys.h_b);
  const CMat a_e = gram(sys.h_e);
  const int n = a_b.rows;
  const double p = sys.power;

  SdrSolution sol;
  sol.t_b = bob_threshold(sys, bob_sep_max, amplitude);
  const double lmax = herm_eig(a_b).values.back();
  sol.feasible = sol.t_b <= p * lmax * (1.0 + 1e-9);
  if (!sol.feasible) return sol;

  const double aa = inner(a_b, a_b);
  const double ai = trace(a_b).real();
  // The x-update displaces the iterate by A_E / rho, so the penalty must be
  // commensurate with the objective norm or the iteration limit-cycles with
  // amplitude ~ ||A_E|| / rho around the feasible set.
  double rho = std::max(opt.rho, opt.rho * fro_norm(a_e) / std::max(1.0, p));

  CMat x = scale(identity(n), p / n);
  CMat z = x;
  CMat u(n, n);
  double r = 0.0, s = 0.0;
  bool converged = false;
  int iters = 0;

  for (int it = 1; it <= opt.max_iters; ++it) {
    iters = it;
    x = proj_halfspaces(sub(sub(z, u), scale(a_e, 1.0 / rho)), a_b, aa, ai, sol.t_b, p);
    const CMat xhat = add(scale(x, opt.over_relax), scale(z, 1.0 - opt.over_relax));
    const CMat zold = z;
    z = psd_project(add(xhat, u));
    u = sub(add(xhat, u), z);
    r = fro_norm(sub(x, z));
    s = rho * fro_norm(sub(z, zold));
    if (r <= opt.tol && s <= opt.tol) {
      converged = true;
      break;
    }
    // Rebalance the penalty while far from the fixed point only: a rescale of
    // the scaled dual near convergence ejects an almost-converged iterate.
    if (it % 50 == 0 && std::max(r, s) > 100.0 * opt.tol) {
      if (r > 10.0 * s) {
        rho *= 2.0;
        u = scale(u, 0.5);
      } else if (s > 10.0 * r) {
        rho /= 2.0;
        u = scale(u, 2.0);
      }
    }
  }

  sol.x = z;
  sol.objective = std::max(0.0, inner(a_e, z));
  sol.bob_value = inner(a_b, z);
  sol.trace = trace(z).real();
  sol.iters = iters;
  sol.primal_residual = r;
  sol.dual_residual = s;
  sol.rho_final = rho;
  sol.converged = converged;
  return sol;
}

SdrBeam randomize_beam(const SdrSolution& sol, const WiretapSystem& sys, cdouble amplitude,
                       std::uint64_t key, const SdrOptions& opt) {
  if (!sol.feasible || sol.x.rows == 0)
    throw std::logic_error("randomize_beam: relaxation was not solved feasibly");
  const CMat a_b = gram(sys.h_b);
  const CMat a_e = gram(sys.h_e);
  const int n = sol.x.rows;
  const double p = sys.power;

  // Clamp the trace into the budget before factorising, so every phase draw
  // starts power-feasible (||F e||^2 = Tr X exactly for unit-modulus e).
  CMat x = sol.x;
  if (sol.trace > p && sol.trace > 0.0) x = scale(x, p / sol.trace);
  EigenPairs eig = herm_eig(x);

  SdrBeam best;
  bool have = false;
  std::vector<double> g(2 * static_cast<std::size_t>(n));
  for (int l = 0; l < opt.rand_samples; ++l) {
    kernels::fill_normals(g.data(), g.size(),
                          static_cast<std::uint64_t>(l) * g.size(), key);
    CVec w(static_cast<std::size_t>(n), cdouble(0, 0));
    for (int j = 0; j < n; ++j) {
      const double lam = std::max(0.0, eig.values[static_cast<std::size_t>(j)]);
      cdouble e(g[2 * static_cast<std::size_t>(j)], g[2 * static_cast<std::size_t>(j) + 1]);
      const double m = std::abs(e);
      e = (m > 0.0) ? e / m : cdouble(1, 0);
      const cdouble coef = std::sqrt(lam) * e;
      for (int k = 0; k < n; ++k) {
        w[static_cast<std::size_t>(k)] +=
            eig.vectors[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] * coef;
      }
    }

    double bob = quad_form(a_b, w);
    if (bob < sol.t_b) {
      if (!(bob > 0.0)) {
        ++best.rejected_samples;  // cannot rescale a dark direction
        continue;
      }
      const double sscale = std::sqrt(sol.t_b / bob);
      for (auto& v : w) v *= sscale;
      bob = quad_form(a_b, w);
    }
    const double nn = norm2(w);
    if (nn * nn > p + 1e-12) {
      ++best.rejected_samples;
      continue;
    }
    const double eve = quad_form(a_e, w);
    ++best.accepted_samples;
    if (!have || eve < best.eve_energy) {
      best.w = w;
      best.eve_energy = eve;
      best.bob_energy = bob;
      have = true;
    }
  }
  if (!have)
    throw NoFeasibleSample("randomize_beam: no draw satisfied both constraints; "
                           "increase rand_samples or relax the Bob target");

  best.w = canonical_phase(best.w);
  best.sep_bob = sep_antipodal(sys.h_b, best.w, amplitude, sys.n_b);
  best.sep_eve = sep_antipodal(sys.h_e, best.w, amplitude, sys.n_e);
  return best;
}

}  // namespace sepbeam
