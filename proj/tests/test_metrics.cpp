#include <doctest.h>

#include <cmath>

#include "latmax/metrics.hpp"
#include "latmax/rng.hpp"
#include "latmax/synthetic.hpp"
#include "oracles.hpp"

using namespace latmax;

namespace {

double reevaluate_ratio(const ObjectiveOracle& f, const RatioCertificate& cert,
                        bool dr_orientation) {
  REQUIRE(cert.element.has_value());
  double dv = testsupport::unit_gain(f, cert.v, *cert.element);
  double dw = testsupport::unit_gain(f, cert.w, *cert.element);
  return dr_orientation ? dv / dw : dw / dv;
}

}  // namespace

TEST_CASE("dr ratio on single-element tabulations") {
  SUBCASE("modular is 1") {
    ModularObjective f({2.0, 0.75});
    CHECK(exact_dr_ratio(f, BoxConstraint({3, 3}, 6)).value == 1.0);
  }
  SUBCASE("concave tabulation is DR-submodular") {
    TabulatedObjective f({3}, {0.0, 2.0, 3.0, 3.5});
    CHECK(exact_dr_ratio(f, BoxConstraint({3}, 3)).value == 1.0);
  }
  SUBCASE("convex step gives 1/2") {
    TabulatedObjective f({2}, {0.0, 1.0, 3.0});
    RatioResult r = exact_dr_ratio(f, BoxConstraint({2}, 2));
    CHECK(r.value == 0.5);  // delta(0)=1 vs delta(1)=2
    REQUIRE(r.certificate.has_value());
    CHECK(r.certificate->v == LatticeVector{0});
    CHECK(r.certificate->w == LatticeVector{1});
  }
}

TEST_CASE("curvature on single-element tabulations") {
  SUBCASE("modular is 0") {
    ModularObjective f({2.0, 0.75});
    CHECK(exact_curvature(f, BoxConstraint({3, 3}, 6)).value == 0.0);
  }
  SUBCASE("diminishing steps give 1/2") {
    TabulatedObjective f({2}, {0.0, 2.0, 3.0});
    CHECK(exact_curvature(f, BoxConstraint({2}, 2)).value == 0.5);
  }
  SUBCASE("increasing gains clamp to 0") {
    TabulatedObjective f({2}, {0.0, 1.0, 3.0});
    CHECK(exact_curvature(f, BoxConstraint({2}, 2)).value == 0.0);
  }
}

TEST_CASE("submodularity ratio on single-element tabulations") {
  SUBCASE("modular is 1") {
    ModularObjective f({2.0, 0.75});
    CHECK(exact_submodularity_ratio(f, BoxConstraint({2, 2}, 4)).value == 1.0);
  }
  SUBCASE("convex step gives 2/3") {
    TabulatedObjective f({2}, {0.0, 1.0, 3.0});
    RatioResult r = exact_submodularity_ratio(f, BoxConstraint({2}, 2));
    CHECK(r.value == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    REQUIRE(r.certificate.has_value());
    CHECK(r.certificate->v == LatticeVector{0});
    CHECK(r.certificate->w == LatticeVector{2});
  }
}

TEST_CASE("exact enumerators agree with direct definition scans") {
  Rng rng(31337);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t n = 1 + rng.below(3);
    std::vector<long long> bounds;
    for (std::size_t s = 0; s < n; ++s) bounds.push_back(rng.range(1, 3));
    BoxConstraint box(bounds, 12);
    auto f = TabulatedObjective::random_monotone(bounds, rng.next_u64());

    CHECK(exact_dr_ratio(f, box).value ==
          doctest::Approx(testsupport::naive_dr_ratio(f, box)).epsilon(1e-12));
    CHECK(exact_curvature(f, box).value ==
          doctest::Approx(testsupport::naive_curvature(f, box)).epsilon(1e-12));
    CHECK(exact_submodularity_ratio(f, box).value ==
          doctest::Approx(testsupport::naive_submodularity_ratio(f, box))
              .epsilon(1e-12));
  }
}

TEST_CASE("gamma_d <= gamma_s on every enumerated instance") {
  Rng rng(90210);
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t n = 1 + rng.below(3);
    std::vector<long long> bounds;
    for (std::size_t s = 0; s < n; ++s) bounds.push_back(rng.range(1, 3));
    BoxConstraint box(bounds, 12);
    auto f = TabulatedObjective::random_monotone(bounds, rng.next_u64());
    NonSubmodReport report = exact_report(f, box);
    CHECK(report.gamma_d <= report.gamma_s);
    CHECK(report.gamma_d >= 0.0);
    CHECK(report.gamma_d <= 1.0);
    CHECK(report.gamma_s <= 1.0);
    CHECK(report.alpha >= 0.0);
    CHECK(report.alpha <= 1.0);
  }
}

TEST_CASE("certificates re-evaluate to their reported ratios") {
  Rng rng(440);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<long long> bounds{3, rng.range(1, 3)};
    BoxConstraint box(bounds, 9);
    auto f = TabulatedObjective::random_monotone(bounds, rng.next_u64());

    RatioResult dr = exact_dr_ratio(f, box);
    if (dr.certificate.has_value())
      CHECK(std::abs(reevaluate_ratio(f, *dr.certificate, true) -
                     dr.certificate->ratio) <= 1e-12);

    RatioResult curv = exact_curvature(f, box);
    if (curv.certificate.has_value())
      CHECK(std::abs(reevaluate_ratio(f, *curv.certificate, false) -
                     curv.certificate->ratio) <= 1e-12);

    RatioResult sub = exact_submodularity_ratio(f, box);
    if (sub.certificate.has_value()) {
      const RatioCertificate& cert = *sub.certificate;
      double den = f.evaluate(cert.w) - f.evaluate(cert.v);
      double num = 0.0;
      for (std::size_t s = 0; s < box.dim(); ++s)
        if (cert.w[s] > cert.v[s])
          num += static_cast<double>(cert.w[s] - cert.v[s]) *
                 testsupport::unit_gain(f, cert.v, s);
      CHECK(std::abs(num / den - cert.ratio) <= 1e-12);
    }
  }
}

TEST_CASE("enumeration caps are hard errors") {
  ModularObjective f(std::vector<double>(8, 1.0));
  BoxConstraint box = BoxConstraint::uniform(8, 10, 80);
  EnumerationLimits tight{100, 100};
  CHECK_THROWS_AS(exact_dr_ratio(f, box, tight), EnumerationCapError);
  CHECK_THROWS_AS(exact_submodularity_ratio(f, box, tight),
                  EnumerationCapError);
}

TEST_CASE("greedy ratio variants dominate the exact ones") {
  Rng rng(6021);
  for (int trial = 0; trial < 8; ++trial) {
    EpsPerturbedCoverageObjective f(3, 0.4, rng.next_u64());
    BoxConstraint box = BoxConstraint::uniform(3, 3, 4);
    double gamma_s = exact_submodularity_ratio(f, box).value;
    double gamma_d = exact_dr_ratio(f, box).value;

    GreedyResult tg = threshold_greedy(f, box, 0.9, 0.1);
    GreedyRatioReport tg_report =
        greedy_submodularity_ratio(f, tg.trace, box, Algorithm::Threshold);
    CHECK(tg_report.gamma_s_greedy >= gamma_s - 1e-12);
    REQUIRE(tg_report.gamma_d_tg.has_value());
    CHECK(*tg_report.gamma_d_tg >= gamma_d - 1e-12);

    GreedyResult fg = fast_greedy(f, box, 0.9, 0.9, 0.1);
    GreedyRatioReport fg_report =
        greedy_submodularity_ratio(f, fg.trace, box, Algorithm::Fast);
    CHECK(fg_report.gamma_s_greedy >= gamma_s - 1e-12);

    GreedyResult sg = standard_greedy(f, box);
    GreedyRatioReport sg_report =
        greedy_submodularity_ratio(f, sg.trace, box, Algorithm::Standard);
    CHECK(sg_report.gamma_s_greedy >= gamma_s - 1e-12);
  }
}

TEST_CASE("greedy ratios match an independent definition scan") {
  Rng rng(7272);
  for (int trial = 0; trial < 6; ++trial) {
    EpsPerturbedCoverageObjective f(3, 0.5, rng.next_u64());
    BoxConstraint box = BoxConstraint::uniform(3, 3, 4);

    GreedyResult tg = threshold_greedy(f, box, 0.9, 0.1);
    GreedyRatioReport tg_report =
        greedy_submodularity_ratio(f, tg.trace, box, Algorithm::Threshold);
    CHECK(tg_report.gamma_s_greedy ==
          doctest::Approx(testsupport::naive_greedy_submod_ratio(
                              f, tg.trace.solution_sequence(), box))
              .epsilon(1e-12));
    REQUIRE(tg_report.gamma_d_tg.has_value());
    CHECK(*tg_report.gamma_d_tg ==
          doctest::Approx(
              testsupport::naive_threshold_dr_ratio(f, tg.trace, box))
              .epsilon(1e-12));

    GreedyResult fg = fast_greedy(f, box, 0.9, 0.9, 0.1);
    std::vector<LatticeVector> fg_sequence;
    for (std::uint32_t r = 0; r < fg.trace.rounds_started; ++r)
      fg_sequence.push_back(fg.trace.vector_before_round(r));
    GreedyRatioReport fg_report =
        greedy_submodularity_ratio(f, fg.trace, box, Algorithm::Fast);
    CHECK(fg_report.gamma_s_greedy ==
          doctest::Approx(
              testsupport::naive_greedy_submod_ratio(f, fg_sequence, box))
              .epsilon(1e-12));
  }
}

TEST_CASE("greedy ratios on modular instances are 1") {
  ModularObjective f({2, 1, 3});
  BoxConstraint box({2, 2, 2}, 3);
  GreedyResult tg = threshold_greedy(f, box, 0.95, 0.05);
  GreedyRatioReport report =
      greedy_submodularity_ratio(f, tg.trace, box, Algorithm::Threshold);
  CHECK(report.gamma_s_greedy == 1.0);
  CHECK(*report.gamma_d_tg == 1.0);

  GreedyResult sg = standard_greedy(f, box);
  CHECK(greedy_submodularity_ratio(f, sg.trace, box, Algorithm::Standard)
            .gamma_s_greedy == 1.0);
}

TEST_CASE("trace and variant must match") {
  ModularObjective f({2, 1});
  BoxConstraint box({2, 2}, 2);
  GreedyResult sg = standard_greedy(f, box);
  CHECK_THROWS_AS(
      greedy_submodularity_ratio(f, sg.trace, box, Algorithm::Threshold),
      std::invalid_argument);
  CHECK_THROWS_AS(threshold_greedy_dr_ratio(f, sg.trace, box),
                  std::invalid_argument);
}

TEST_CASE("threshold-greedy DR ratio on DR-submodular instances is 1") {
  // concave per-coordinate tabulation: definition collapses
  TabulatedObjective f({3, 3}, [] {
    std::vector<double> vals;
    auto g = [](long long c) { return c == 0 ? 0.0 : (c == 1 ? 2.0 : (c == 2 ? 3.0 : 3.5)); };
    for (long long a = 0; a <= 3; ++a)
      for (long long b = 0; b <= 3; ++b) vals.push_back(g(a) + 0.5 * g(b));
    return vals;
  }());
  BoxConstraint box({3, 3}, 5);
  GreedyResult tg = threshold_greedy(f, box, 0.9, 0.1);
  CHECK(threshold_greedy_dr_ratio(f, tg.trace, box) == 1.0);
}

TEST_CASE("threshold-greedy DR ratio dominates gamma_d on coverage") {
  EpsPerturbedCoverageObjective f(3, 0.4, 99);
  BoxConstraint box = BoxConstraint::uniform(3, 3, 4);
  GreedyResult tg = threshold_greedy(f, box, 0.9, 0.1);
  CHECK(threshold_greedy_dr_ratio(f, tg.trace, box) >=
        exact_dr_ratio(f, box).value - 1e-12);
}

TEST_CASE("performance bound formula") {
  CHECK(performance_bound(0.95, 0.9, 0.69857, 0.0) ==
        doctest::Approx(0.449692).epsilon(1e-6));
  CHECK(performance_bound(0.7, 0.0, 0.9, 0.0) == 0.0);
  CHECK(performance_bound(1.0, 1.0, 1.0, 0.0) ==
        doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));
  CHECK_THROWS_AS(performance_bound(1.5, 0.5, 0.5, 0.0), std::invalid_argument);
}

TEST_CASE("performance bound monotone in each argument") {
  Rng rng(7117);
  for (int trial = 0; trial < 200; ++trial) {
    double kappa = rng.uniform(0.05, 0.95);
    double beta = rng.uniform(0.05, 0.95);
    double gs = rng.uniform(0.05, 0.95);
    double eps = rng.uniform(0.0, 0.4);
    double base = performance_bound(kappa, beta, gs, eps);
    double bump = 0.04;
    CHECK(performance_bound(kappa + bump, beta, gs, eps) >= base);
    CHECK(performance_bound(kappa, beta + bump, gs, eps) >= base);
    CHECK(performance_bound(kappa, beta, gs + bump, eps) >= base);
    CHECK(performance_bound(kappa, beta, gs, eps + bump) <= base);
  }
}

TEST_CASE("report serialization is flat key=value text") {
  TabulatedObjective f({2}, {0.0, 1.0, 3.0});
  NonSubmodReport report = exact_report(f, BoxConstraint({2}, 2));
  std::string text = serialize_report(report);
  CHECK(text.find("gamma_d=0.5\n") != std::string::npos);
  CHECK(text.find("gamma_s=0.66666666666666") != std::string::npos);
  CHECK(text.find("alpha=0\n") != std::string::npos);
  CHECK(text.find("gamma_d.certificate.v=0\n") != std::string::npos);
  CHECK(text.find("search.k=2\n") != std::string::npos);
}
