#pragma once

// Shared implementation of the Monte-Carlo kernels, written once against a
// small lane-abstraction and instantiated for a scalar lane and for four AVX2
// lanes.  Every floating-point operation is an elementwise IEEE operation
// performed in the same order in both instantiations, and the transcendental
// functions (log, sin/cos) are evaluated from explicit polynomials rather
// than libm, so the two variants produce bit-identical results lane by lane.

#include <bit>
#include <cstdint>
#include <cstring>
#include <stdexcept>

#include "sepbeam/kernels.hpp"
#include "sepbeam/philox.hpp"

#if defined(__AVX2__)
#include <immintrin.h>
#endif

namespace sepbeam::kernels::detail {

// ---------------------------------------------------------------------------
// Lane abstractions.  vd = lanes of double, vu = lanes of uint64 (the Philox
// state keeps one 32-bit word per 64-bit lane so 32x32->64 multiplies stay
// exact), md = comparison mask.  blendd(a, b, m) selects b where m is set.
// ---------------------------------------------------------------------------

struct LaneScalar {
  static constexpr int width = 1;
  using vd = double;
  using vu = std::uint64_t;
  using md = bool;

  static vd set1d(double x) { return x; }
  static vu set1u(std::uint64_t x) { return x; }
  static vd addd(vd a, vd b) { return a + b; }
  static vd subd(vd a, vd b) { return a - b; }
  static vd muld(vd a, vd b) { return a * b; }
  static vd divd(vd a, vd b) { return a / b; }
  static vd sqrtd(vd a) { return __builtin_sqrt(a); }
  static vd floord(vd a) { return __builtin_floor(a); }
  static vd mind(vd a, vd b) { return a < b ? a : b; }
  static vd negd_if(vd a, md m) { return m ? -a : a; }

  static vu addu(vu a, vu b) { return a + b; }
  static vu xoru(vu a, vu b) { return a ^ b; }
  static vu andu(vu a, vu b) { return a & b; }
  static vu oru(vu a, vu b) { return a | b; }
  template <int N>
  static vu shru(vu a) {
    return a >> N;
  }
  // Low 32 bits of each lane of a and b, multiplied to a full 64-bit product.
  static vu mul32(vu a, vu b) { return (a & 0xFFFFFFFFULL) * (b & 0xFFFFFFFFULL); }

  // Lane value is < 2^52; exact conversion.
  static vd u2d(vu a) { return static_cast<double>(a); }
  static vu dbits(vd a) { return std::bit_cast<std::uint64_t>(a); }
  static vd fromdbits(vu a) { return std::bit_cast<double>(a); }

  static md gtd(vd a, vd b) { return a > b; }
  static md ltd(vd a, vd b) { return a < b; }
  static md eqd(vd a, vd b) { return a == b; }
  static md neqd(vd a, vd b) { return a != b; }
  static md orm(md a, md b) { return a || b; }
  static vd blendd(vd a, vd b, md m) { return m ? b : a; }
  static int movemask(md m) { return m ? 1 : 0; }
  static void unpack_pairs(vd a, vd b, double* out) {
    out[0] = a;
    out[1] = b;
  }
};

#if defined(__AVX2__)
struct LaneAvx2 {
  static constexpr int width = 4;
  using vd = __m256d;
  using vu = __m256i;
  using md = __m256d;

  static vd set1d(double x) { return _mm256_set1_pd(x); }
  static vu set1u(std::uint64_t x) { return _mm256_set1_epi64x(static_cast<long long>(x)); }
  static vd addd(vd a, vd b) { return _mm256_add_pd(a, b); }
  static vd subd(vd a, vd b) { return _mm256_sub_pd(a, b); }
  static vd muld(vd a, vd b) { return _mm256_mul_pd(a, b); }
  static vd divd(vd a, vd b) { return _mm256_div_pd(a, b); }
  static vd sqrtd(vd a) { return _mm256_sqrt_pd(a); }
  static vd floord(vd a) { return _mm256_floor_pd(a); }
  static vd mind(vd a, vd b) { return _mm256_min_pd(a, b); }
  static vd negd_if(vd a, md m) {
    return _mm256_xor_pd(a, _mm256_and_pd(m, _mm256_set1_pd(-0.0)));
  }

  static vu addu(vu a, vu b) { return _mm256_add_epi64(a, b); }
  static vu xoru(vu a, vu b) { return _mm256_xor_si256(a, b); }
  static vu andu(vu a, vu b) { return _mm256_and_si256(a, b); }
  static vu oru(vu a, vu b) { return _mm256_or_si256(a, b); }
  template <int N>
  static vu shru(vu a) {
    return _mm256_srli_epi64(a, N);
  }
  static vu mul32(vu a, vu b) { return _mm256_mul_epu32(a, b); }

  static vd u2d(vu a) {
    // Lane value < 2^52: OR into the mantissa of 2^52 and subtract the bias.
    const vd magic = _mm256_set1_pd(4503599627370496.0);  // 2^52
    const vu bits = _mm256_or_si256(a, _mm256_castpd_si256(magic));
    return _mm256_sub_pd(_mm256_castsi256_pd(bits), magic);
  }
  static vu dbits(vd a) { return _mm256_castpd_si256(a); }
  static vd fromdbits(vu a) { return _mm256_castsi256_pd(a); }

  static md gtd(vd a, vd b) { return _mm256_cmp_pd(a, b, _CMP_GT_OQ); }
  static md ltd(vd a, vd b) { return _mm256_cmp_pd(a, b, _CMP_LT_OQ); }
  static md eqd(vd a, vd b) { return _mm256_cmp_pd(a, b, _CMP_EQ_OQ); }
  static md neqd(vd a, vd b) { return _mm256_cmp_pd(a, b, _CMP_NEQ_OQ); }
  static md orm(md a, md b) { return _mm256_or_pd(a, b); }
  static vd blendd(vd a, vd b, md m) { return _mm256_blendv_pd(a, b, m); }
  static int movemask(md m) { return _mm256_movemask_pd(m); }
  static void unpack_pairs(vd a, vd b, double* out) {
    // a = (a0 a1 a2 a3), b = (b0 b1 b2 b3) -> out = a0 b0 a1 b1 a2 b2 a3 b3.
    alignas(32) double ta[4];
    alignas(32) double tb[4];
    _mm256_store_pd(ta, a);
    _mm256_store_pd(tb, b);
    for (int i = 0; i < 4; ++i) {
      out[2 * i] = ta[i];
      out[2 * i + 1] = tb[i];
    }
  }
};
#endif  // __AVX2__

// ---------------------------------------------------------------------------
// Philox4x32-10 over lanes: each lane carries an independent counter; the key
// is shared.  Word layout matches sepbeam::philox4x32_10.
// ---------------------------------------------------------------------------

template <class L>
struct PhiloxBlock {
  typename L::vu x0, x1, x2, x3;  // one 32-bit output word per lane each
};

template <class L>
inline PhiloxBlock<L> philox_lanes(typename L::vu index_lo, typename L::vu index_hi,
                                   std::uint64_t call, std::uint64_t key64) {
  using vu = typename L::vu;
  constexpr std::uint64_t kM0 = 0xD2511F53ULL;
  constexpr std::uint64_t kM1 = 0xCD9E8D57ULL;
  constexpr std::uint32_t kW0 = 0x9E3779B9U;
  constexpr std::uint32_t kW1 = 0xBB67AE85U;
  const vu mask32 = L::set1u(0xFFFFFFFFULL);
  const vu m0 = L::set1u(kM0);
  const vu m1 = L::set1u(kM1);

  vu c0 = index_lo;
  vu c1 = index_hi;
  vu c2 = L::set1u(call & 0xFFFFFFFFULL);
  vu c3 = L::set1u(call >> 32);
  std::uint32_t k0 = static_cast<std::uint32_t>(key64);
  std::uint32_t k1 = static_cast<std::uint32_t>(key64 >> 32);

  for (int round = 0; round < 10; ++round) {
    const vu p0 = L::mul32(m0, c0);
    const vu p1 = L::mul32(m1, c2);
    const vu n0 = L::xoru(L::xoru(L::template shru<32>(p1), c1), L::set1u(k0));
    const vu n1 = L::andu(p1, mask32);
    const vu n2 = L::xoru(L::xoru(L::template shru<32>(p0), c3), L::set1u(k1));
    const vu n3 = L::andu(p0, mask32);
    c0 = n0;
    c1 = n1;
    c2 = n2;
    c3 = n3;
    k0 += kW0;
    k1 += kW1;
  }
  return {c0, c1, c2, c3};
}

// ---------------------------------------------------------------------------
// Transcendentals.  log_u01 takes u in (0, 1] (a normal double), sincos_2pi
// takes u in [0, 1).  Both stay within a few ulp of the correctly rounded
// value, far below Monte-Carlo resolution; what matters here is that they are
// deterministic, branch-free, and identical across lane widths.
// ---------------------------------------------------------------------------

template <class L>
inline typename L::vd log_u01(typename L::vd u) {
  using vd = typename L::vd;
  using vu = typename L::vu;
  constexpr double kLn2Hi = 0.6931471803691238;
  constexpr double kLn2Lo = 1.9082150941723213e-10;
  constexpr double kSqrt2 = 1.4142135623730951;

  const vu bits = L::dbits(u);
  vd e = L::subd(L::u2d(L::template shru<52>(bits)), L::set1d(1023.0));
  const vu mant =
      L::oru(L::andu(bits, L::set1u(0x000FFFFFFFFFFFFFULL)), L::set1u(0x3FF0000000000000ULL));
  vd m = L::fromdbits(mant);  // m in [1, 2)

  // Renormalise to m in (sqrt(1/2), sqrt(2)] so the atanh argument is small.
  const auto big = L::gtd(m, L::set1d(kSqrt2));
  m = L::blendd(m, L::muld(m, L::set1d(0.5)), big);
  e = L::blendd(e, L::addd(e, L::set1d(1.0)), big);

  // log m = 2 atanh(s), s = (m-1)/(m+1); |s| <= 0.1716 so the odd series
  // truncated at s^21 is accurate to ~1e-16 relative.
  const vd s = L::divd(L::subd(m, L::set1d(1.0)), L::addd(m, L::set1d(1.0)));
  const vd t = L::muld(s, s);
  vd p = L::set1d(1.0 / 21.0);
  p = L::addd(L::muld(p, t), L::set1d(1.0 / 19.0));
  p = L::addd(L::muld(p, t), L::set1d(1.0 / 17.0));
  p = L::addd(L::muld(p, t), L::set1d(1.0 / 15.0));
  p = L::addd(L::muld(p, t), L::set1d(1.0 / 13.0));
  p = L::addd(L::muld(p, t), L::set1d(1.0 / 11.0));
  p = L::addd(L::muld(p, t), L::set1d(1.0 / 9.0));
  p = L::addd(L::muld(p, t), L::set1d(1.0 / 7.0));
  p = L::addd(L::muld(p, t), L::set1d(1.0 / 5.0));
  p = L::addd(L::muld(p, t), L::set1d(1.0 / 3.0));
  p = L::addd(L::muld(p, t), L::set1d(1.0));
  const vd lnm = L::muld(L::muld(L::set1d(2.0), s), p);
  return L::addd(L::muld(e, L::set1d(kLn2Hi)),
                 L::addd(L::muld(e, L::set1d(kLn2Lo)), lnm));
}

template <class L>
struct SinCos {
  typename L::vd sin, cos;
};

template <class L>
inline SinCos<L> sincos_2pi(typename L::vd u) {
  using vd = typename L::vd;
  // Quarter-period reduction: k = floor(4u + 1/2) in {0..4}, x = u - k/4 in
  // [-1/8, 1/8].  The subtraction is exact for every representable u in
  // [0, 1), so no extended-precision reduction is needed.
  const vd kf = L::floord(L::addd(L::muld(u, L::set1d(4.0)), L::set1d(0.5)));
  const vd x = L::subd(u, L::muld(kf, L::set1d(0.25)));
  const vd t = L::muld(x, x);

  // Taylor polynomials of sin(2 pi x), cos(2 pi x); the x^15 / x^16 tails are
  // below 3e-14 on |x| <= 1/8.
  vd s = L::set1d(-0.71812230177850051223);
  s = L::addd(L::muld(s, t), L::set1d(3.8199525848482821277));
  s = L::addd(L::muld(s, t), L::set1d(-15.094642576822990392));
  s = L::addd(L::muld(s, t), L::set1d(42.058693944897653145));
  s = L::addd(L::muld(s, t), L::set1d(-76.705859753061385842));
  s = L::addd(L::muld(s, t), L::set1d(81.605249276075054203));
  s = L::addd(L::muld(s, t), L::set1d(-41.341702240399760234));
  s = L::addd(L::muld(s, t), L::set1d(6.2831853071795864769));
  s = L::muld(s, x);

  vd c = L::set1d(0.28200596845579121507);
  c = L::addd(L::muld(c, t), L::set1d(-1.7143907110886720654));
  c = L::addd(L::muld(c, t), L::set1d(7.9035363713184688042));
  c = L::addd(L::muld(c, t), L::set1d(-26.426256783374397453));
  c = L::addd(L::muld(c, t), L::set1d(60.244641371876660363));
  c = L::addd(L::muld(c, t), L::set1d(-85.456817206693727736));
  c = L::addd(L::muld(c, t), L::set1d(64.939394022668291491));
  c = L::addd(L::muld(c, t), L::set1d(-19.739208802178717238));
  c = L::addd(L::muld(c, t), L::set1d(1.0));

  // Quadrant rotation; k = 4 wraps to quadrant 0 with x = u - 1.
  const auto is1 = L::eqd(kf, L::set1d(1.0));
  const auto is2 = L::eqd(kf, L::set1d(2.0));
  const auto is3 = L::eqd(kf, L::set1d(3.0));
  const auto odd = L::orm(is1, is3);
  const vd sin_base = L::blendd(s, c, odd);
  const vd cos_base = L::blendd(c, s, odd);
  SinCos<L> out;
  out.sin = L::negd_if(sin_base, L::orm(is2, is3));
  out.cos = L::negd_if(cos_base, L::orm(is1, is2));
  return out;
}

// Box-Muller: two 32-bit words -> two standard normals.  u1 lies in (0, 1]
// (never zero, so the log is finite); u2 lies in [0, 1).
template <class L>
inline void normals_from_words(typename L::vu w0, typename L::vu w1, typename L::vd& z0,
                               typename L::vd& z1) {
  using vd = typename L::vd;
  constexpr double kTwoN32 = 2.3283064365386962890625e-10;  // 2^-32
  const vd u1 = L::muld(L::u2d(L::addu(w0, L::set1u(1))), L::set1d(kTwoN32));
  const vd u2 = L::muld(L::u2d(w1), L::set1d(kTwoN32));
  const vd r = L::sqrtd(L::muld(L::set1d(-2.0), log_u01<L>(u1)));
  const SinCos<L> sc = sincos_2pi<L>(u2);
  z0 = L::muld(r, sc.cos);
  z1 = L::muld(r, sc.sin);
}

// ---------------------------------------------------------------------------
// Kernels.  Each lane processes one trial (or one normal pair); the counter
// is (item index, call), so any partition of the index range gives identical
// results.
// ---------------------------------------------------------------------------

template <class L>
inline std::uint64_t count_ser_errors_impl(const SerProblem& pb, std::uint64_t trial0,
                                           std::uint64_t trials, std::uint64_t key) {
  using vd = typename L::vd;
  using vu = typename L::vu;
  constexpr int W = L::width;

  const int m = pb.m;
  const int dim = pb.dim;
  std::uint64_t errors = 0;

  std::uint64_t i = 0;
  for (; i + W <= trials; i += W) {
    vu idx_lo, idx_hi;
    if constexpr (W == 1) {
      const std::uint64_t trial = trial0 + i;
      idx_lo = static_cast<std::uint32_t>(trial);
      idx_hi = static_cast<std::uint32_t>(trial >> 32);
    } else {
#if defined(__AVX2__)
      alignas(32) std::uint64_t lo[4], hi[4];
      for (int lane = 0; lane < 4; ++lane) {
        const std::uint64_t trial = trial0 + i + static_cast<std::uint64_t>(lane);
        lo[lane] = trial & 0xFFFFFFFFULL;
        hi[lane] = trial >> 32;
      }
      idx_lo = _mm256_load_si256(reinterpret_cast<const __m256i*>(lo));
      idx_hi = _mm256_load_si256(reinterpret_cast<const __m256i*>(hi));
#endif
    }

    // Call 0, word 0: transmitted-point index, uniform over {0, ..., m-1}.
    const PhiloxBlock<L> head = philox_lanes<L>(idx_lo, idx_hi, 0, key);
    constexpr double kTwoN32 = 2.3283064365386962890625e-10;
    const vd u = L::muld(L::u2d(head.x0), L::set1d(kTwoN32));
    const vd sym = L::mind(L::floord(L::muld(u, L::set1d(static_cast<double>(m)))),
                           L::set1d(static_cast<double>(m - 1)));

    // Calls 1..: four standard normals per call.
    vd z[kMaxDim];
    for (int d = 0; d < dim; d += 4) {
      const PhiloxBlock<L> blk =
          philox_lanes<L>(idx_lo, idx_hi, 1 + static_cast<std::uint64_t>(d / 4), key);
      vd z0, z1, z2, z3;
      normals_from_words<L>(blk.x0, blk.x1, z0, z1);
      normals_from_words<L>(blk.x2, blk.x3, z2, z3);
      z[d] = z0;
      if (d + 1 < dim) z[d + 1] = z1;
      if (d + 2 < dim) z[d + 2] = z2;
      if (d + 3 < dim) z[d + 3] = z3;
    }

    // Received vector y = point[sym] + sigma * z, with the transmitted point
    // gathered by per-lane blends.
    vd y[kMaxDim];
    for (int d = 0; d < dim; ++d) {
      vd px = L::set1d(pb.points[d]);  // point 0
      for (int k = 1; k < m; ++k) {
        px = L::blendd(px, L::set1d(pb.points[static_cast<std::size_t>(k) * dim + d]),
                       L::eqd(sym, L::set1d(static_cast<double>(k))));
      }
      y[d] = L::addd(px, L::muld(L::set1d(pb.sigma), z[d]));
    }

    // Minimum-distance decision; ties keep the lowest index.
    vd best = L::set1d(0.0);
    for (int d = 0; d < dim; ++d) {
      const vd diff = L::subd(y[d], L::set1d(pb.points[d]));
      best = L::addd(best, L::muld(diff, diff));
    }
    vd best_idx = L::set1d(0.0);
    for (int k = 1; k < m; ++k) {
      vd dist = L::set1d(0.0);
      for (int d = 0; d < dim; ++d) {
        const vd diff =
            L::subd(y[d], L::set1d(pb.points[static_cast<std::size_t>(k) * dim + d]));
        dist = L::addd(dist, L::muld(diff, diff));
      }
      const auto better = L::ltd(dist, best);
      best = L::blendd(best, dist, better);
      best_idx = L::blendd(best_idx, L::set1d(static_cast<double>(k)), better);
    }

    const int mask = L::movemask(L::neqd(best_idx, sym));
    errors += static_cast<std::uint64_t>(__builtin_popcount(static_cast<unsigned>(mask)));
  }

  if constexpr (W > 1) {
    if (i < trials) {
      errors += count_ser_errors_impl<LaneScalar>(pb, trial0 + i, trials - i, key);
    }
  }
  return errors;
}

template <class L>
inline void fill_normals_impl(double* out, std::size_t n, std::uint64_t idx0,
                              std::uint64_t key) {
  using vd = typename L::vd;
  using vu = typename L::vu;
  constexpr int W = L::width;

  const auto scalar_pair = [key](std::uint64_t pair, double zz[2]) {
    const auto words = philox4x32_10(pair, 0, key);
    typename LaneScalar::vd a, b;
    normals_from_words<LaneScalar>(words[0], words[1], a, b);
    LaneScalar::unpack_pairs(a, b, zz);
  };

  std::size_t produced = 0;
  // Head: align to an even absolute index so lanes own whole pairs.
  while (produced < n && ((idx0 + produced) & 1) != 0) {
    double zz[2];
    scalar_pair((idx0 + produced) >> 1, zz);
    out[produced++] = zz[1];
  }

  while (n - produced >= 2 * static_cast<std::size_t>(W)) {
    const std::uint64_t pair0 = (idx0 + produced) >> 1;
    vu idx_lo, idx_hi;
    if constexpr (W == 1) {
      idx_lo = static_cast<std::uint32_t>(pair0);
      idx_hi = static_cast<std::uint32_t>(pair0 >> 32);
    } else {
#if defined(__AVX2__)
      alignas(32) std::uint64_t lo[4], hi[4];
      for (int lane = 0; lane < 4; ++lane) {
        const std::uint64_t pair = pair0 + static_cast<std::uint64_t>(lane);
        lo[lane] = pair & 0xFFFFFFFFULL;
        hi[lane] = pair >> 32;
      }
      idx_lo = _mm256_load_si256(reinterpret_cast<const __m256i*>(lo));
      idx_hi = _mm256_load_si256(reinterpret_cast<const __m256i*>(hi));
#endif
    }
    const PhiloxBlock<L> blk = philox_lanes<L>(idx_lo, idx_hi, 0, key);
    vd z0, z1;
    normals_from_words<L>(blk.x0, blk.x1, z0, z1);
    L::unpack_pairs(z0, z1, out + produced);
    produced += 2 * static_cast<std::size_t>(W);
  }

  // Tail: finish pair by pair (and possibly a half pair).
  while (produced < n) {
    double zz[2];
    scalar_pair((idx0 + produced) >> 1, zz);
    out[produced++] = zz[0];
    if (produced < n) out[produced++] = zz[1];
  }
}

}  // namespace sepbeam::kernels::detail
