// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>

#include "ccss/rng.hpp"
#include "ccss/sysperf.hpp"
#include "support/oracles.hpp"

using namespace ccss;
using Catch::Approx;

namespace {

// Exact rational-arithmetic binomial upper tail. The double p is converted
// exactly, so the only departure from the library value is its log-space
// summation.
double exact_binom_tail(int k_total, int k1, double p) {
  using boost::multiprecision::cpp_rational;
  cpp_rational rp(p);  // exact dyadic conversion
  cpp_rational q = 1 - rp;
  cpp_rational sum = 0;
  for (int j = k1; j <= k_total; ++j) {
    boost::multiprecision::cpp_int comb = 1;
    for (int i = 0; i < j; ++i) comb = comb * (k_total - i) / (i + 1);
    cpp_rational term(comb);
    for (int i = 0; i < j; ++i) term *= rp;
    for (int i = 0; i < k_total - j; ++i) term *= q;
    sum += term;
  }
  return static_cast<double>(boost::multiprecision::cpp_bin_float_50(sum));
}

channels::FadingLink rep_link(double m, double snr_db) {
  return channels::FadingLink::from_snr_db(m, snr_db);
}

}  // namespace

TEST_CASE("success probabilities, m = 1") {
  channels::FadingLink rep{1.0, 1.0, 1.0};
  SECTION("symmetric report and pure-noise limits") {
    CHECK(sysperf::success_probs_m1(0.5, 0.5, rep).p1 == Approx(0.5).epsilon(1e-15));
    channels::FadingLink tiny{1.0, 1e-18, 1.0};
    CHECK(sysperf::success_probs_m1(0.93, 0.02, tiny).p1 == Approx(0.5).margin(1e-9));
  }
  SECTION("frozen value and Monte Carlo of P(y >= 0 | H1)") {
    auto sp = sysperf::success_probs_m1(0.9, 0.03, rep);
    CHECK(sp.p1 == Approx(0.5 + 0.4 / std::sqrt(2.0)).epsilon(1e-14));
    long hits = 0;
    const long n = 4000000;
    for (long i = 0; i < n; ++i) {
      rng::Stream s(41, 0, static_cast<uint64_t>(i));
      int u = s.uniform01() < 0.9 ? 1 : -1;
      double h = std::sqrt(s.gamma(1.0, 2.0));
      if (u * h + s.normal() >= 0.0) ++hits;
    }
    CHECK(sp.p1 == Approx(static_cast<double>(hits) / n).margin(0.001));
  }
  SECTION("affine in pd with slope sqrt(alpha_sf)") {
    auto rep2 = rep_link(1.0, 7.0);
    double s = std::sqrt(rep2.alpha());
    for (double pd : {0.1, 0.35, 0.8}) {
      CHECK(sysperf::success_probs_m1(pd, 0.03, rep2).p1 ==
            Approx(0.5 * (1.0 - s) + s * pd).epsilon(1e-14));
    }
  }
  SECTION("p1 >= p0 whenever pd >= pf") {
    auto sp = sysperf::success_probs_m1(0.7, 0.1, rep_link(1.0, 3.0));
    CHECK(sp.p1 >= sp.p0);
  }
}

TEST_CASE("success probabilities, m = 2") {
  channels::FadingLink rep{2.0, 1.0, 1.0};
  SECTION("numeric route: frozen value and Monte Carlo") {
    auto sp = sysperf::success_probs_m2(0.95, 0.03, rep);
    CHECK(sp.p1 == Approx(0.8977475644174328).margin(1e-8));
    long hits = 0;
    const long n = 4000000;
    for (long i = 0; i < n; ++i) {
      rng::Stream s(43, 0, static_cast<uint64_t>(i));
      int u = s.uniform01() < 0.95 ? 1 : -1;
      double h = std::sqrt(s.gamma(2.0, 2.0));
      if (u * h + s.normal() >= 0.0) ++hits;
    }
    CHECK(sp.p1 == Approx(static_cast<double>(hits) / n).margin(0.001));
  }
  SECTION("literal printed expression disagrees and is recorded") {
    auto lit = sysperf::success_probs_m2(0.5, 0.5, rep, /*literal=*/true);
    auto num = sysperf::success_probs_m2(0.5, 0.5, rep);
    CHECK(lit.p1 == Approx(0.375).epsilon(1e-12));  // first term only at pd = 1/2
    CHECK(num.p1 == Approx(0.5).margin(1e-9));      // a symmetric report must give 1/2
    CHECK(std::fabs(lit.p1 - num.p1) > 0.1);
  }
  SECTION("vanishing signal power gives 1/2") {
    channels::FadingLink tiny{2.0, 1e-16, 1.0};
    CHECK(sysperf::success_probs_m2(0.9, 0.1, tiny).p1 == Approx(0.5).margin(1e-6));
  }
}

TEST_CASE("binomial system probabilities") {
  SECTION("edge thresholds") {
    CHECK(sysperf::system_pd(7, 0, 0.3) == 1.0);
    CHECK(sysperf::system_pd(4, 4, 0.5) == Approx(1.0 / 16.0).epsilon(1e-12));
  }
  SECTION("matches the exact rational oracle") {
    for (auto [k, k1, p] : {std::tuple{20, 14, 0.83}, {20, 14, 0.12}, {5, 3, 0.4},
                            {50, 35, 0.66}, {12, 1, 0.07}}) {
      CHECK(sysperf::system_pd(k, k1, p) ==
            Approx(exact_binom_tail(k, k1, p)).epsilon(1e-12));
    }
  }
  SECTION("monotone in K1 and in p") {
    for (int k1 = 1; k1 <= 20; ++k1) {
      CHECK(sysperf::system_pd(20, k1, 0.6) <= sysperf::system_pd(20, k1 - 1, 0.6));
      CHECK(sysperf::system_pf(20, k1, 0.1) <= sysperf::system_pf(20, k1 - 1, 0.1));
    }
    double prev = 0.0;
    for (double p : {0.05, 0.2, 0.4, 0.6, 0.8, 0.95}) {
      double v = sysperf::system_pd(15, 8, p);
      CHECK(v >= prev);
      prev = v;
    }
  }
  SECTION("domain checks") {
    CHECK_THROWS_AS(sysperf::system_pd(5, 6, 0.5), std::domain_error);
    CHECK_THROWS_AS(sysperf::system_pd(5, -1, 0.5), std::domain_error);
  }
}

TEST_CASE("total error") {
  SECTION("p1 = p0 pins total error at one") {
    for (int l = 0; l <= 10; ++l)
      CHECK(sysperf::total_error(10, l, 0.37, 0.37) == Approx(1.0).margin(1e-12));
  }
  SECTION("l = 0 always alarms") {
    auto s = sysperf::system_point(12, 0, 0.9, 0.1);
    CHECK(s.p_f == 1.0);
    CHECK(s.p_m == 0.0);
    CHECK(s.p_tot == 1.0);
  }
  SECTION("u-shaped sweep has an interior minimum for a separated pair") {
    double p1 = 0.8, p0 = 0.25;
    int k_total = 20;
    double prev = sysperf::total_error(k_total, 1, p1, p0);
    double best = prev;
    int best_l = 1;
    bool fell = false, rose = false;
    for (int l = 2; l <= k_total; ++l) {
      double v = sysperf::total_error(k_total, l, p1, p0);
      if (v < prev - 1e-15) fell = true;
      if (fell && v > prev + 1e-15) rose = true;
      if (v < best) { best = v; best_l = l; }
      prev = v;
    }
    CHECK(fell);
    CHECK(rose);
    CHECK(best_l == sysperf::optimal_l(k_total, p1, p0));
  }
  SECTION("symmetric pair ties at the ceiling boundary; either endpoint is fine") {
    // p1 = 1 - p0 makes D(10) = D(11) exactly for K = 20
    double p1 = 0.8, p0 = 0.2;
    int fast = sysperf::optimal_l(20, p1, p0);
    CHECK(fast == 10);
    CHECK(sysperf::total_error(20, 10, p1, p0) ==
          Approx(sysperf::total_error(20, 11, p1, p0)).margin(1e-12));
  }
}

TEST_CASE("optimal cooperating count") {
  SECTION("symmetric channel reduces to majority") {
    CHECK(sysperf::optimal_l(20, 0.8, 0.2) == 10);
    CHECK(sysperf::optimal_l(15, 0.8, 0.2) == 8);  // ceil(7.5)
  }
  SECTION("rejects a degenerate pair") {
    CHECK_THROWS_AS(sysperf::optimal_l(10, 0.3, 0.3), std::domain_error);
    CHECK_THROWS_AS(sysperf::optimal_l(10, 0.2, 0.5), std::domain_error);
    CHECK_THROWS_AS(sysperf::optimal_l(10, 1.0, 0.5), std::domain_error);
  }
  SECTION("brute force agreement on 1000 random instances") {
    rng::Stream s(2718, 0, 0);
    for (int inst = 0; inst < 1000; ++inst) {
      int k_total = 1 + static_cast<int>(s.uniform01() * 50);
      double p0 = 0.02 + 0.9 * s.uniform01();
      double p1 = p0 + (0.999 - p0) * (0.05 + 0.95 * s.uniform01());
      if (!(p1 < 1.0 && p1 > p0)) continue;
      int fast = sysperf::optimal_l(k_total, p1, p0);
      int slow = 1;
      double best = sysperf::total_error(k_total, 1, p1, p0);
      for (int l = 2; l <= k_total; ++l) {
        double v = sysperf::total_error(k_total, l, p1, p0);
        if (v < best - 1e-15) { best = v; slow = l; }
      }
      INFO("K=" << k_total << " p1=" << p1 << " p0=" << p0);
      // ties at the ceiling boundary may legitimately differ by one
      bool tie_ok = std::fabs(sysperf::total_error(k_total, fast, p1, p0) - best) <= 1e-15;
      CHECK(tie_ok);
    }
  }
  SECTION("neighbor inequalities D(l+1) >= D(l) iff l >= K/(1+beta)") {
    double p1 = 0.82, p0 = 0.07;
    int k_total = 25;
    double beta = std::log(p1 / p0) / std::log((1.0 - p0) / (1.0 - p1));
    double pivot = k_total / (1.0 + beta);
    auto d_of = [&](int l) {
      return sysperf::system_pf(k_total, l, p0) - sysperf::system_pd(k_total, l, p1);
    };
    for (int l = 1; l < k_total; ++l) {
      bool nondecreasing = d_of(l + 1) >= d_of(l) - 1e-15;
      CHECK(nondecreasing == (l >= pivot - 1e-12));
    }
  }
}
