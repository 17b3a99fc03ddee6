#include "sepbeam/simulate.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>

#include "sepbeam/philox.hpp"

namespace sepbeam {

namespace {

constexpr std::uint64_t kChunk = 65536;
constexpr double kZ95 = 1.9599639845400543;  // Phi^-1(0.975)

}  // namespace

McEstimate mc_estimate(std::uint64_t errors, std::uint64_t trials) {
  McEstimate e;
  e.errors = errors;
  e.trials = trials;
  if (trials == 0) return e;
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(errors) / n;
  const double z2 = kZ95 * kZ95;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = kZ95 * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  e.ser = p;
  e.ci_lo = std::max(0.0, center - half);
  e.ci_hi = std::min(1.0, center + half);
  return e;
}

McEstimate run_ser_mc(const kernels::SerProblem& problem, std::uint64_t trials,
                      std::uint64_t key, int threads) {
  if (trials == 0) return mc_estimate(0, 0);
  if (threads < 1) threads = 1;
  const std::uint64_t nchunks = (trials + kChunk - 1) / kChunk;
  const unsigned workers =
      static_cast<unsigned>(std::min<std::uint64_t>(static_cast<std::uint64_t>(threads), nchunks));

  if (workers <= 1) {
    return mc_estimate(kernels::count_ser_errors(problem, 0, trials, key), trials);
  }

  std::vector<std::uint64_t> partial(workers, 0);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      std::uint64_t sum = 0;
      for (std::uint64_t c = w; c < nchunks; c += workers) {
        const std::uint64_t t0 = c * kChunk;
        const std::uint64_t n = std::min(kChunk, trials - t0);
        sum += kernels::count_ser_errors(problem, t0, n, key);
      }
      partial[w] = sum;
    });
  }
  for (auto& t : pool) t.join();
  std::uint64_t total = 0;
  for (const auto v : partial) total += v;
  return mc_estimate(total, trials);
}

std::vector<double> antipodal_rx_points(const CMat& h, const CVec& w, cdouble amplitude) {
  if (h.cols != static_cast<int>(w.size()))
    throw std::invalid_argument("antipodal_rx_points: dimension mismatch");
  const CVec hw = matvec(h, w);
  std::vector<double> pts(static_cast<std::size_t>(4) * hw.size());
  for (std::size_t k = 0; k < hw.size(); ++k) {
    const cdouble v = amplitude * hw[k];
    pts[2 * k] = v.real();
    pts[2 * k + 1] = v.imag();
    pts[2 * hw.size() + 2 * k] = -v.real();
    pts[2 * hw.size() + 2 * k + 1] = -v.imag();
  }
  return pts;
}

std::vector<double> mary_rx_points(const RMat& h_tilde, const RMat& w_tilde,
                                   const std::vector<RVec>& symbols) {
  if (h_tilde.cols != w_tilde.rows)
    throw std::invalid_argument("mary_rx_points: dimension mismatch");
  std::vector<double> pts;
  pts.reserve(symbols.size() * static_cast<std::size_t>(h_tilde.rows));
  for (const auto& s : symbols) {
    if (static_cast<int>(s.size()) != w_tilde.cols)
      throw std::invalid_argument("mary_rx_points: symbol dimension mismatch");
    const RVec y = rmatvec(h_tilde, rmatvec(w_tilde, s));
    pts.insert(pts.end(), y.begin(), y.end());
  }
  return pts;
}

McEstimate simulate_antipodal_ser(const CMat& h, double n0, const CVec& w, cdouble amplitude,
                                  std::uint64_t trials, std::uint64_t key, int threads) {
  const std::vector<double> pts = antipodal_rx_points(h, w, amplitude);
  kernels::SerProblem p;
  p.points = pts.data();
  p.m = 2;
  p.dim = 2 * h.rows;
  p.sigma = std::sqrt(n0 / 2.0);
  return run_ser_mc(p, trials, key, threads);
}

McEstimate simulate_mary_ser(const RMat& h_tilde, double n0, const RMat& w_tilde,
                             const std::vector<RVec>& symbols, std::uint64_t trials,
                             std::uint64_t key, int threads) {
  const std::vector<double> pts = mary_rx_points(h_tilde, w_tilde, symbols);
  kernels::SerProblem p;
  p.points = pts.data();
  p.m = static_cast<int>(symbols.size());
  p.dim = h_tilde.rows;
  p.sigma = std::sqrt(n0 / 2.0);
  return run_ser_mc(p, trials, key, threads);
}

CMat gen_gaussian_channel(int rows, int cols, double sigma, bool complex_entries,
                          std::uint64_t seed, std::uint64_t stream) {
  if (rows < 1 || cols < 1)
    throw std::invalid_argument("gen_gaussian_channel: dimensions must be positive");
  if (!(sigma > 0.0)) throw std::invalid_argument("gen_gaussian_channel: sigma must be positive");
  const std::uint64_t key = derive_key(seed, stream);
  const std::size_t n = static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
  CMat h(rows, cols);
  std::vector<double> z(complex_entries ? 2 * n : n);
  kernels::fill_normals(z.data(), z.size(), 0, key);
  const double inv_sqrt2 = 0.70710678118654752440;
  for (std::size_t i = 0; i < n; ++i) {
    if (complex_entries) {
      h.a[i] = cdouble(sigma * inv_sqrt2 * z[2 * i], sigma * inv_sqrt2 * z[2 * i + 1]);
    } else {
      h.a[i] = cdouble(sigma * z[i], 0.0);
    }
  }
  return h;
}

}  // namespace sepbeam
