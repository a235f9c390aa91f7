// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "doctest.h"
#include "infhbd/analysis.hpp"
#include "infhbd/error.hpp"
#include "support/sigfig.hpp"

using namespace infhbd;
using infhbd::testing::matches_sig_figs;

namespace {

BoundParams params(double ps, int k, int r, int tp = 32, int nodes = 2000) {
  BoundParams p;
  p.p_s = ps;
  p.k = k;
  p.r = r;
  p.tp_size = tp;
  p.nodes = nodes;
  return p;
}

}  // namespace

TEST_CASE("breakpoint expectation") {
  CHECK(breakpoint_expectation(params(0.0, 3, 4)).per_middle_node == 0.0);
  CHECK(breakpoint_expectation(params(1.0, 2, 4)).per_middle_node ==
        doctest::Approx(4.0));
  CHECK(breakpoint_expectation(params(0.0722, 3, 8)).per_middle_node ==
        doctest::Approx(7.53e-4).epsilon(0.01));
  auto e = breakpoint_expectation(params(0.1, 2, 4, 32, 500));
  CHECK(e.cluster_bound == doctest::Approx(500 * e.per_middle_node));
}

TEST_CASE("waste ratio bound reproduces the reference grid") {
  struct Cell {
    int r;
    int k;
    double reference;
  };
  // R=4 uses the P99-derived 3.68% node rate, R=8 the raw 7.22%.
  const Cell cells[] = {{4, 2, 0.0754}, {4, 3, 0.0028}, {4, 4, 1.02e-4},
                        {8, 2, 0.2502}, {8, 3, 0.0181}, {8, 4, 0.0013}};
  for (const auto& cell : cells) {
    double ps = cell.r == 4 ? 0.0368 : 0.0722;
    double bound = waste_ratio_bound(params(ps, cell.k, cell.r));
    CHECK_MESSAGE(matches_sig_figs(bound, cell.reference, 2),
                  "R=", cell.r, " K=", cell.k, " bound=", bound);
  }
  // The R=4 row also matches with the directly rounded 3.67% rate.
  for (const auto& cell : cells) {
    if (cell.r != 4) continue;
    double bound = waste_ratio_bound(params(0.0367, cell.k, 4));
    CHECK(matches_sig_figs(bound, cell.reference, 2));
  }
}

TEST_CASE("bound is monotone in P_s and N_t, decreasing in K") {
  CHECK(waste_ratio_bound(params(0.03, 2, 4)) <
        waste_ratio_bound(params(0.05, 2, 4)));
  CHECK(waste_ratio_bound(params(0.05, 2, 4, 16)) <
        waste_ratio_bound(params(0.05, 2, 4, 32)));
  CHECK(waste_ratio_bound(params(0.05, 3, 4)) <
        waste_ratio_bound(params(0.05, 2, 4)));
}

TEST_CASE("monte carlo waste is exactly zero without faults") {
  auto mc = monte_carlo_waste(params(0.0, 2, 4, 32, 400), 20, 9);
  CHECK(mc.mean == 0.0);
  CHECK(mc.absolute_mean == 0.0);
}

TEST_CASE("monte carlo mean stays below the bound") {
  auto p = params(0.0367, 2, 4, 32, 1000);
  auto mc = monte_carlo_waste(p, 60, 11);
  CHECK(mc.mean <= waste_ratio_bound(p) + mc.ci_half_width);
  CHECK(mc.mean <= 0.0754);  // reference K=2, R=4 cell
  CHECK(mc.absolute_mean >= mc.mean);
}

TEST_CASE("bound parameters are validated") {
  CHECK_THROWS_AS(waste_ratio_bound(params(1.5, 2, 4)), ConfigError);
  CHECK_THROWS_AS(waste_ratio_bound(params(0.1, 2, 4, 30)), ConfigError);
  CHECK_THROWS_AS(monte_carlo_waste(params(0.1, 2, 4), 0, 1), ConfigError);
}
