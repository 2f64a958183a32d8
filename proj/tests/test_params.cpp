#include <doctest.h>

#include "sodcalc/params.hpp"
#include "test_helpers.hpp"

using namespace sodcalc;
using sodtest::thrown_code;

TEST_CASE("parameter construction computes the derived length") {
  Params p = Params::make(2, 1, 4);
  CHECK(p.M == 3);
  CHECK(Params::make(3, 1, 5).M == 3);
  CHECK(Params::make(2, 2, 4).M == 2);   // boundary m = n*d
  CHECK(Params::make(5, 2, 12).M == 4);
}

TEST_CASE("parameter validation rejects inadmissible triples with distinct codes") {
  CHECK(thrown_code([] { Params::make(3, 2, 5); }) == errc::nd_exceeds_m);
  CHECK(thrown_code([] { Params::make(1, 1, 4); }) == errc::invalid_n);
  CHECK(thrown_code([] { Params::make(0, 1, 4); }) == errc::invalid_n);
  CHECK(thrown_code([] { Params::make(2, 0, 4); }) == errc::invalid_d);
  CHECK(thrown_code([] { Params::make(2, -1, 4); }) == errc::invalid_d);
  CHECK(thrown_code([] { Params::make(2, 1, 1); }) == errc::nd_exceeds_m);
}

TEST_CASE("weights normalize into [0, n-1]") {
  Params p = Params::make(3, 1, 5);
  CHECK(p.norm_w(3) == 0);
  CHECK(p.norm_w(-1) == 2);
  CHECK(p.norm_w(7) == 1);
  CHECK(p.norm_w(0) == 0);
}

TEST_CASE("derived length is never stored inconsistently") {
  for (int n = 2; n <= 5; ++n)
    for (int d = 1; d <= 3; ++d)
      for (int m = n * d; m <= 12; ++m) {
        Params p = Params::make(n, d, m);
        CHECK(p.M == p.m - (p.n - 1) * p.d);
        CHECK(p.M >= p.d);
      }
}
