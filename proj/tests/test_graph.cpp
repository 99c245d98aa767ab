#include <doctest.h>

#include <algorithm>

#include "bargain/dynamics.hpp"
#include "bargain/elementary.hpp"
#include "bargain/graph.hpp"
#include "bargain/linear_model.hpp"

using namespace bargain;

namespace {

bool has_code(const std::vector<Violation>& violations, Errc code) {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.code == code; });
}

ExchangeNetwork triangle() {
  return ExchangeNetwork(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}});
}

}  // namespace

TEST_CASE("validate accepts a triangle with one matched edge") {
  const auto v = validate(triangle(), Matching{{{0, 1}}});
  CHECK(is_valid(v));
  CHECK(v.empty());
}

TEST_CASE("validate reports each violation") {
  SUBCASE("negative weight") {
    ExchangeNetwork net(2, {{0, 1, -0.5}});
    CHECK(has_code(validate(net, {}), Errc::negative_weight));
  }
  SUBCASE("overlapping match: node 1 repeated") {
    const auto v = validate(triangle(), Matching{{{0, 1}, {1, 2}}});
    CHECK(has_code(v, Errc::overlapping_match));
    CHECK_FALSE(is_valid(v));
  }
  SUBCASE("self loop and duplicate edge") {
    ExchangeNetwork net(3, {{1, 1, 1.0}, {0, 2, 1.0}, {2, 0, 0.5}});
    const auto v = validate(net, {});
    CHECK(has_code(v, Errc::self_loop));
    CHECK(has_code(v, Errc::duplicate_edge));
  }
  SUBCASE("matched pair that is not an edge") {
    CHECK(has_code(validate(triangle(), Matching{{{0, 1}, {2, 3}}}), Errc::match_not_an_edge));
  }
  SUBCASE("pinned node matched") {
    ExchangeNetwork net(2, {{0, 1, 1.0}}, {{1, 0.5}});
    CHECK(has_code(validate(net, Matching{{{0, 1}}}), Errc::pinned_node_matched));
  }
  SUBCASE("zero-weight matched edge is a warning, not an error") {
    ExchangeNetwork net(2, {{0, 1, 0.0}});
    const auto v = validate(net, Matching{{{0, 1}}});
    CHECK(has_code(v, Errc::zero_weight_matched_edge));
    CHECK(is_valid(v));
  }
}

TEST_CASE("best_alternate") {
  SUBCASE("isolated matched pair defaults to 0") {
    ExchangeNetwork net(2, {{0, 1, 1.0}});
    CHECK(best_alternate(net, Matching{{{0, 1}}}, {0.2, 0.8}, 0) == 0.0);
  }
  SUBCASE("single unmatched neighbor") {
    ExchangeNetwork net(3, {{0, 1, 1.0}, {0, 2, 1.0}});
    const Matching m{{{0, 1}}};
    CHECK(best_alternate(net, m, {0.0, 1.0, 0.3}, 0) == doctest::Approx(0.7));
    // negative surplus is clamped by (.)+
    CHECK(best_alternate(net, m, {0.0, 1.0, 1.5}, 0) == 0.0);
  }
  SUBCASE("unmatched node is rejected") {
    CHECK_THROWS_AS(static_cast<void>(best_alternate(triangle(), Matching{{{0, 1}}},
                                                     {0.0, 0.0, 0.0}, 2)),
                    Error);
  }
  SUBCASE("invariant under neighbor enumeration order") {
    // same graph, edges inserted in opposite orders
    ExchangeNetwork a(4, {{0, 1, 1.0}, {0, 2, 0.8}, {0, 3, 0.9}});
    ExchangeNetwork b(4, {{0, 3, 0.9}, {0, 2, 0.8}, {0, 1, 1.0}});
    const Matching m{{{0, 1}}};
    const ProfitState x{0.1, 0.9, 0.4, 0.25};
    CHECK(best_alternate(a, m, x, 0) == best_alternate(b, m, x, 0));
  }
}

TEST_CASE("edge and node slacks") {
  SUBCASE("matched pair with x_i + x_j = w has zero edge slack") {
    ExchangeNetwork net(2, {{0, 1, 1.0}});
    CHECK(edge_slack(net, {0.4, 0.6}, 0, 1) == 0.0);
  }
  SUBCASE("edge slack is the literal expression x_i + x_j - w") {
    ExchangeNetwork net(2, {{0, 1, 0.7}});
    const ProfitState x{0.123456, 0.654321};
    CHECK(edge_slack(net, x, 0, 1) == x[0] + x[1] - 0.7);
    CHECK(edge_slack(net, x, 1, 0) == edge_slack(net, x, 0, 1));
  }
  SUBCASE("missing edge") {
    ExchangeNetwork net(3, {{0, 1, 1.0}});
    CHECK_THROWS_AS(static_cast<void>(edge_slack(net, {0, 0, 0}, 0, 2)), Error);
  }
  SUBCASE("node slack with no unmatched neighbors equals x_i") {
    ExchangeNetwork net(2, {{0, 1, 1.0}});
    CHECK(node_slack(net, Matching{{{0, 1}}}, {0.4, 0.6}, 0) == 0.4);
  }
  SUBCASE("node slack is bounded by x_i") {
    ExchangeNetwork net(3, {{0, 1, 1.0}, {0, 2, 1.0}});
    const Matching m{{{0, 1}}};
    const ProfitState x{0.4, 0.6, 0.1};
    CHECK(node_slack(net, m, x, 0) <= x[0]);
    CHECK(node_slack(net, m, x, 0) == doctest::Approx(0.4 + 0.1 - 1.0));
  }
}

TEST_CASE("interior unmatched edge of the n=2 path fixed point is unstable") {
  const auto inst = build(ElementarySpec{ElementarySpec::Kind::path, 2});
  const auto x = from_reduced(inst, fixed_point(build_path(2, 0.0, 0.0, 1.0)));
  // interior unmatched edge joins the two 1/3 nodes
  CHECK(edge_slack(inst.network, x, 1, 2) == doctest::Approx(-1.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("check_outcome") {
  SUBCASE("symmetric Nash split is stable and balanced") {
    ExchangeNetwork net(2, {{0, 1, 1.0}});
    const auto report = check_outcome(net, Matching{{{0, 1}}}, {0.5, 0.5}, 1e-9);
    CHECK(report.stable);
    CHECK(report.balanced);
    CHECK(report.worst_stability_violation == 0.0);
    CHECK(report.worst_balance_residual == 0.0);
  }
  SUBCASE("competing edge breaks both properties") {
    // matched pair (0,1) at (1,0), plus unmatched edge (1,2) with x_2 = 0:
    // stability violated by 1 on (1,2); balance residual |1 - (0 - 1)| = 2.
    ExchangeNetwork net(3, {{0, 1, 1.0}, {1, 2, 1.0}});
    const auto report = check_outcome(net, Matching{{{0, 1}}}, {1.0, 0.0, 0.0}, 1e-9);
    CHECK_FALSE(report.stable);
    CHECK_FALSE(report.balanced);
    CHECK(report.worst_stability_violation == doctest::Approx(1.0));
    CHECK(report.worst_balance_residual == doctest::Approx(2.0));
  }
  SUBCASE("monotone in the tolerance") {
    ExchangeNetwork net(3, {{0, 1, 1.0}, {1, 2, 1.0}});
    const ProfitState x{0.5 - 2e-7, 0.5, 0.9999};
    const auto strict = check_outcome(net, Matching{{{0, 1}}}, x, 1e-9);
    const auto loose = check_outcome(net, Matching{{{0, 1}}}, x, 1e-3);
    if (strict.stable) CHECK(loose.stable);
    if (strict.balanced) CHECK(loose.balanced);
    CHECK(loose.stable);
    CHECK(loose.balanced);
  }
  SUBCASE("limit of the simulated n=2 path is balanced but not stable") {
    const auto inst = build(ElementarySpec{ElementarySpec::Kind::path, 2});
    const auto traj = simulate(inst.network, inst.matching,
                               from_reduced(inst, {0.0, 0.0}), {1.0, 1e-12, 10000});
    REQUIRE(traj.converged);
    // step-invariance at the limit
    CHECK(sup_norm_diff(step(inst.network, inst.matching, traj.last(), 1.0), traj.last()) <=
          1e-10);
    const auto report = check_outcome(inst.network, inst.matching, traj.last(), 1e-8);
    CHECK(report.balanced);
    CHECK_FALSE(report.stable);  // the interior unmatched edge has slack -1/3
  }
}
