#include <doctest.h>

#include <cmath>
#include <numeric>

#include "bargain/dynamics.hpp"
#include "bargain/elementary.hpp"
#include "bargain/linear_model.hpp"
#include "bargain/rng.hpp"

using namespace bargain;

namespace {

void check_matrix(const Matrix& a, const std::vector<std::vector<double>>& expected) {
  REQUIRE(a.rows() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    REQUIRE(a.cols() == expected[i].size());
    for (std::size_t j = 0; j < expected[i].size(); ++j)
      CHECK(a(i, j) == doctest::Approx(expected[i][j]).epsilon(1e-15));
  }
}

}  // namespace

TEST_CASE("build_path") {
  SUBCASE("n=2 at alpha=1 is the half tridiagonal") {
    const auto model = build_path(2, 0.0, 0.0, 1.0);
    check_matrix(model.a, {{0.0, 0.5}, {0.5, 0.0}});
    CHECK(model.b == std::vector<double>{0.5, 0.0});
  }
  SUBCASE("n=3, boundary offsets land on the first and last rows") {
    const auto model = build_path(3, 0.0, 0.0, 1.0);
    CHECK(model.b == std::vector<double>{0.5, 0.0, 0.0});
    const auto shifted = build_path(3, 0.25, 0.125, 1.0);
    CHECK(shifted.b == std::vector<double>{0.375, 0.0, 0.0625});
  }
  SUBCASE("n=1 collapses both boundary terms onto the single row") {
    const auto model = build_path(1, 0.25, 0.125, 1.0);
    CHECK(model.b == std::vector<double>{0.5 * (1.0 - 0.25 + 0.125)});
    CHECK(model.a(0, 0) == 0.0);
  }
  SUBCASE("alpha shift: (1 - alpha) I + alpha A0") {
    const auto model = build_path(2, 0.0, 0.0, 0.5);
    check_matrix(model.a, {{0.5, 0.25}, {0.25, 0.5}});
    CHECK(model.b == std::vector<double>{0.25, 0.0});
  }
}

TEST_CASE("build_cycle") {
  SUBCASE("n=2 special case") {
    const auto model = build_cycle(2, 1.0);
    check_matrix(model.a, {{0.0, 1.0}, {1.0, 0.0}});
  }
  SUBCASE("n=4 circulant row") {
    const auto model = build_cycle(4, 1.0);
    check_matrix(model.a, {{0.0, 0.5, 0.0, 0.5},
                           {0.5, 0.0, 0.5, 0.0},
                           {0.0, 0.5, 0.0, 0.5},
                           {0.5, 0.0, 0.5, 0.0}});
  }
  SUBCASE("b is always zero") {
    for (int n : {2, 3, 7})
      for (double v : build_cycle(n, 1.0).b) CHECK(v == 0.0);
  }
}

TEST_CASE("build_blossom") {
  SUBCASE("n=1, m=2, Case 1: every row matches the gateway recursion") {
    // x_1' = y_1/2; y_1' = (x_1 + y_2)/2; y_2' = (1 + y_1 - x_1)/2
    const auto model = build_blossom(1, 2, 1, 1.0);
    check_matrix(model.a, {{0.0, 0.5, 0.0}, {0.5, 0.0, 0.5}, {-0.5, 0.5, 0.0}});
    CHECK(model.b == std::vector<double>{0.0, 0.0, 0.5});
  }
  SUBCASE("Case 1 vs Case 2 differ only in the gateway row and b") {
    const auto case1 = build_blossom(3, 4, 1, 1.0);
    const auto case2 = build_blossom(3, 4, 2, 1.0);
    for (int i = 0; i < 7; ++i)
      for (int j = 0; j < 7; ++j)
        if (i != 2) CHECK(case1.a(i, j) == case2.a(i, j));
    // Case 1: +1/2 on y_1; Case 2: -1/2 on y_m with the offset moving to b
    CHECK(case1.a(2, 3) == 0.5);
    CHECK(case1.a(2, 6) == 0.0);
    CHECK(case2.a(2, 3) == 0.0);
    CHECK(case2.a(2, 6) == -0.5);
    CHECK(case1.b == std::vector<double>{0, 0, 0, 0, 0, 0, 0.5});
    CHECK(case2.b == std::vector<double>{0, 0, 0.5, 0, 0, 0, 0.5});
  }
  SUBCASE("entries stay within the block alphabet") {
    const auto model = build_blossom(4, 5, 2, 1.0);
    for (int i = 0; i < model.dim; ++i)
      for (int j = 0; j < model.dim; ++j) {
        const double v = model.a(i, j);
        CHECK((v == 0.0 || v == 0.5 || v == -0.5));
      }
  }
}

TEST_CASE("build_bicycle") {
  // Loop branch convention: case 1 means the loop end-sum is <= 1, i.e. the
  // gateway max is attained by 1 - (first loop value).
  SUBCASE("(2,1) has the two-entry offset vector (1/2, 0, ..., 0, 1/2)") {
    const auto model = build_bicycle(3, 2, 4, 2, 1, 1.0);
    std::vector<double> expected(9, 0.0);
    expected[0] = 0.5;
    expected[8] = 0.5;
    CHECK(model.b == expected);
  }
  SUBCASE("(2,2) adds +1/2 on the x_n row") {
    const auto model = build_bicycle(3, 2, 4, 2, 2, 1.0);
    std::vector<double> expected(9, 0.0);
    expected[0] = 0.5;
    expected[4] = 0.5;  // row of x_n = l + n - 1
    expected[8] = 0.5;
    CHECK(model.b == expected);
  }
  SUBCASE("(1,1) adds +1/2 on the x_1 row") {
    const auto model = build_bicycle(3, 2, 4, 1, 1, 1.0);
    std::vector<double> expected(9, 0.0);
    expected[0] = 0.5;
    expected[3] = 0.5;  // row of x_1 = l
    expected[8] = 0.5;
    CHECK(model.b == expected);
  }
  SUBCASE("loop-2 blocks equal the blossom blocks entrywise") {
    const int l = 3, n = 2, m = 4;
    const auto bi = build_bicycle(l, n, m, 2, 1, 1.0);
    const auto blossom = build_blossom(n, m, 1, 1.0);
    // rows/cols l.. of the bicycle against the blossom, skipping the x_1 row
    // whose loop-1 coupling has no blossom counterpart
    for (int i = 1; i < n + m; ++i)
      for (int j = 0; j < n + m; ++j) CHECK(bi.a(l + i, l + j) == blossom.a(i, j));
  }
  SUBCASE("all four case matrices share the gateway-free rows") {
    const auto base = build_bicycle(3, 2, 5, 1, 1, 1.0);
    for (int c1 : {1, 2})
      for (int c2 : {1, 2}) {
        const auto other = build_bicycle(3, 2, 5, c1, c2, 1.0);
        for (int i = 0; i < base.dim; ++i) {
          if (i == 3 || i == 4) continue;  // x_1 and x_n rows
          for (int j = 0; j < base.dim; ++j) CHECK(base.a(i, j) == other.a(i, j));
        }
      }
  }
}

TEST_CASE("linear_step and linear_simulate") {
  SUBCASE("path n=2 fixed point is stationary") {
    const auto model = build_path(2, 0.0, 0.0, 1.0);
    const auto v = linear_step(model, {2.0 / 3.0, 1.0 / 3.0});
    CHECK(v[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(v[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  }
  SUBCASE("cycle preserves the coordinate sum every step") {
    const auto model = build_cycle(5, 0.7);
    auto v = Rng(8).uniform_vector(5);
    const double sum0 = std::accumulate(v.begin(), v.end(), 0.0);
    for (int t = 0; t < 100; ++t) {
      v = linear_step(model, v);
      CHECK(std::abs(std::accumulate(v.begin(), v.end(), 0.0) - sum0) <= 1e-12);
    }
  }
  SUBCASE("zero map fixes zero") {
    const auto model = build_cycle(4, 1.0);
    const auto v = linear_step(model, {0, 0, 0, 0});
    for (double x : v) CHECK(x == 0.0);
  }
  SUBCASE("dimension mismatch") {
    CHECK_THROWS_AS(static_cast<void>(linear_step(build_cycle(4, 1.0), {1.0, 2.0})), Error);
  }
  SUBCASE("linear_simulate converges on the path") {
    const auto traj = linear_simulate(build_path(2, 0.0, 0.0, 1.0), {0.0, 0.0},
                                      {1.0, 1e-12, 1000});
    CHECK(traj.converged);
    CHECK(traj.last()[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
  }
}

TEST_CASE("fixed_point") {
  SUBCASE("path n=2 with zero boundaries: (2/3, 1/3)") {
    const auto x = fixed_point(build_path(2, 0.0, 0.0, 1.0));
    CHECK(std::abs(x[0] - 2.0 / 3.0) <= 1e-12);
    CHECK(std::abs(x[1] - 1.0 / 3.0) <= 1e-12);
  }
  SUBCASE("path n=1: the even split") {
    const auto x = fixed_point(build_path(1, 0.0, 0.0, 1.0));
    CHECK(x == std::vector<double>{0.5});
  }
  SUBCASE("alpha does not move the fixed point") {
    const auto a = fixed_point(build_path(3, 0.2, 0.7, 1.0));
    const auto b = fixed_point(build_path(3, 0.2, 0.7, 0.3));
    for (int i = 0; i < 3; ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-13);
  }
  SUBCASE("cycle is singular: the limit depends on the initial condition") {
    CHECK_THROWS_AS(static_cast<void>(fixed_point(build_cycle(4, 1.0))), Error);
    CHECK_THROWS_AS(static_cast<void>(fixed_point(build_cycle(5, 0.5))), Error);
  }
  SUBCASE("blossom fixed points are step-invariant for both cases") {
    for (int c : {1, 2}) {
      const auto model = build_blossom(3, 4, c, 1.0);
      const auto x = fixed_point(model);
      CHECK(sup_norm_diff(linear_step(model, x), x) <= 1e-12);
    }
  }
}

TEST_CASE("loop_sum_closed_form") {
  SUBCASE("m=2 from zeros follows 1 - 2^{-t}") {
    CHECK(loop_sum_closed_form(2, {0.0, 0.0}, 0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(loop_sum_closed_form(2, {0.0, 0.0}, 3) == doctest::Approx(0.875).epsilon(1e-12));
  }
  SUBCASE("t=0 telescopes to y_1 + y_m") {
    Rng rng(17);
    for (int m : {2, 3, 5, 8}) {
      const auto y0 = rng.uniform_vector(m);
      CHECK(loop_sum_closed_form(m, y0, 0) ==
            doctest::Approx(y0.front() + y0.back()).epsilon(1e-12));
    }
  }
  SUBCASE("limit is 1") {
    const auto y0 = Rng(3).uniform_vector(6);
    CHECK(loop_sum_closed_form(6, y0, 4000) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("tracks the simulated loop sum and ignores the stem (autonomy)") {
    const ElementarySpec spec{ElementarySpec::Kind::blossom, 2, 4};
    const auto inst = build(spec);
    Rng rng(99);
    const auto y0 = rng.uniform_vector(4);
    std::vector<double> sums_a, sums_b;
    for (int run = 0; run < 2; ++run) {
      std::vector<double> v = rng.uniform_vector(2);  // stem differs per run
      v.insert(v.end(), y0.begin(), y0.end());
      auto x = from_reduced(inst, v);
      auto& sums = run == 0 ? sums_a : sums_b;
      for (int t = 0; t <= 120; ++t) {
        const auto r = reduced_view(inst, x);
        sums.push_back(r[2] + r[5]);
        CHECK(std::abs(sums.back() - loop_sum_closed_form(4, y0, t)) <= 1e-11);
        x = step(inst.network, inst.matching, x, 1.0);
      }
    }
    for (std::size_t t = 0; t < sums_a.size(); ++t)
      CHECK(std::abs(sums_a[t] - sums_b[t]) <= 1e-12);
  }
  SUBCASE("one-step recursion of the full loop sum") {
    // sum y(t+1) = sum y(t) - (y_1 + y_m)/2 + 1/2
    const auto inst = build(ElementarySpec{ElementarySpec::Kind::blossom, 3, 5});
    auto x = from_reduced(inst, Rng(41).uniform_vector(8));
    for (int t = 0; t < 150; ++t) {
      const auto r = reduced_view(inst, x);
      const double sum_now = std::accumulate(r.begin() + 3, r.end(), 0.0);
      x = step(inst.network, inst.matching, x, 1.0);
      const auto rn = reduced_view(inst, x);
      const double sum_next = std::accumulate(rn.begin() + 3, rn.end(), 0.0);
      CHECK(std::abs(sum_next - (sum_now - 0.5 * (r[3] + r[7]) + 0.5)) <= 1e-12);
    }
  }
}

TEST_CASE("detect_linearization") {
  const DynamicsConfig cfg{1.0, 1e-13, 2000};
  SUBCASE("blossom m=2 from zeros: sum stays below 1, Case 1 from the start") {
    const auto inst = build(ElementarySpec{ElementarySpec::Kind::blossom, 1, 2});
    const auto report = detect_linearization(inst, from_reduced(inst, {0.3, 0.0, 0.0}), cfg);
    CHECK(report.t0 == 0);
    REQUIRE(report.loops.size() == 1);
    CHECK(report.loops[0].settled_case == 1);
  }
  SUBCASE("blossom m=2 from y=0.8: sum stays above 1, Case 2 from the start") {
    const auto inst = build(ElementarySpec{ElementarySpec::Kind::blossom, 1, 2});
    const auto report = detect_linearization(inst, from_reduced(inst, {0.3, 0.8, 0.8}), cfg);
    CHECK(report.t0 == 0);
    CHECK(report.loops[0].settled_case == 2);
  }
  SUBCASE("exact tie resolves to Case 1") {
    const auto inst = build(ElementarySpec{ElementarySpec::Kind::blossom, 1, 2});
    const auto report = detect_linearization(inst, from_reduced(inst, {0.3, 0.5, 0.5}), cfg);
    CHECK(report.t0 == 0);
    CHECK(report.loops[0].settled_case == 1);
  }
  SUBCASE("bicycle reports both loops") {
    const auto inst = build(ElementarySpec{ElementarySpec::Kind::bicycle, 2, 5, 3});
    const auto x0 = from_reduced(inst, Rng(12).uniform_vector(10));
    const auto report = detect_linearization(inst, x0, cfg);
    REQUIRE(report.loops.size() == 2);
    for (const auto& loop : report.loops) {
      CHECK((loop.settled_case == 1 || loop.settled_case == 2));
      CHECK(loop.t0 >= 0);
    }
    CHECK(report.t0 == std::max(report.loops[0].t0, report.loops[1].t0));
  }
  SUBCASE("rejects families without a gateway") {
    const auto inst = build(ElementarySpec{ElementarySpec::Kind::path, 2});
    CHECK_THROWS_AS(
        static_cast<void>(detect_linearization(inst, from_reduced(inst, {0.0, 0.0}), cfg)),
        Error);
  }
  SUBCASE("odd loop excited along the alternating mode never settles") {
    // For odd m the loop spectrum pairs lambda_1 with -lambda_1. Starting on
    // the fixed profile plus the alternating eigenvector keeps flipping the
    // gateway branch at every step while it decays, so no T0 exists and the
    // detector must refuse rather than report a bogus settlement.
    const int n = 1, m = 3;
    const auto inst = build(ElementarySpec{ElementarySpec::Kind::blossom, n, m});
    const auto star = fixed_point(build_blossom(n, m, 1, 1.0));
    std::vector<double> v(star.begin(), star.end());
    const double angle = 3.0 * std::acos(-1.0) / (m + 1);
    for (int i = 1; i <= m; ++i) v[n + i - 1] += 0.05 * std::sin(angle * i);
    bool refused = false;
    try {
      static_cast<void>(detect_linearization(inst, from_reduced(inst, v), {1.0, 1e-13, 4000}));
    } catch (const Error& e) {
      refused = e.code() == Errc::horizon_too_short;
    }
    CHECK(refused);
  }
}

// After T0 each nonlinear step must equal the settled-case linear step.
TEST_CASE("agreement after T0") {
  Rng rng(555);
  for (const char* text : {"blossom:n=3,m=4", "bicycle:l=3,n=2,m=5"}) {
    const auto spec = parse_elementary_spec(text);
    const auto inst = build(spec);
    const auto x0 = from_reduced(inst, rng.uniform_vector(spec.reduced_dim()));
    const DynamicsConfig cfg{1.0, 1e-15, default_linearization_horizon(spec)};
    const auto report = detect_linearization(inst, x0, cfg);
    const auto model = settled_model(spec, report, 1.0);
    ProfitState x = report.trajectory.states[report.t0];
    for (int t = 0; t < 100; ++t) {
      const auto linear = linear_step(model, reduced_view(inst, x));
      x = step(inst.network, inst.matching, x, 1.0);
      CHECK(sup_norm_diff(reduced_view(inst, x), linear) <= 1e-14);
    }
  }
}
