#pragma once

#include <string>

#include "sodcalc/errors.hpp"

namespace sodcalc {

// Arithmetic context of a run: degree-n cover, divisor degree parameter d,
// Lefschetz length m, and the derived residual length M = m - (n-1)d.
// Twists are unbounded integers throughout; only weights reduce mod n.
struct Params {
  int n = 0;
  int d = 0;
  int m = 0;
  int M = 0;

  static Params make(int n, int d, int m) {
    if (n < 2) fail(errc::invalid_n, "cover degree n must be >= 2, got " + std::to_string(n));
    if (d < 1) fail(errc::invalid_d, "divisor parameter d must be >= 1, got " + std::to_string(d));
    if (m < 1) fail(errc::nd_exceeds_m, "length m must be >= 1, got " + std::to_string(m));
    if (n * d > m)
      fail(errc::nd_exceeds_m, "need n*d <= m, got n*d = " + std::to_string(n * d) +
                                   " > m = " + std::to_string(m));
    Params p;
    p.n = n;
    p.d = d;
    p.m = m;
    p.M = m - (n - 1) * d;
    return p;
  }

  // Residue representative in [0, n-1].
  int norm_w(int k) const {
    int r = k % n;
    return r < 0 ? r + n : r;
  }

  // At the boundary m = n*d the category of B-type objects on the branch
  // divisor is empty; several windows are undefined there.
  bool bz_defined() const { return m > n * d; }

  bool operator==(const Params& o) const { return n == o.n && d == o.d && m == o.m; }
  bool operator!=(const Params& o) const { return !(*this == o); }

  std::string str() const {
    return "(n=" + std::to_string(n) + ", d=" + std::to_string(d) + ", m=" + std::to_string(m) +
           ", M=" + std::to_string(M) + ")";
  }
};

inline Params make_params(int n, int d, int m) { return Params::make(n, d, m); }

}  // namespace sodcalc
