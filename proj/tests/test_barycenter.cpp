#include <catch2/catch.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "fairot/barycenter.hpp"
#include "test_helpers.hpp"

using fairot::BarycenterResult;
using fairot::DiscreteDistribution;
using fairot::detail::Rng;

namespace {

DiscreteDistribution delta(std::vector<double> point) {
  const std::size_t k = point.size();
  return DiscreteDistribution(std::move(point), k, {1.0});
}

std::vector<double> sorted_flat(const DiscreteDistribution& d) {
  // canonical order for support comparisons: lexicographic by point
  std::vector<std::vector<double>> pts;
  for (std::size_t i = 0; i < d.size(); ++i) {
    pts.emplace_back(d.point(i).begin(), d.point(i).end());
  }
  std::sort(pts.begin(), pts.end());
  std::vector<double> flat;
  for (const auto& p : pts) flat.insert(flat.end(), p.begin(), p.end());
  return flat;
}

}  // namespace

TEST_CASE("single group maps to itself") {
  Rng rng(1);
  const auto g = helpers::random_distribution(rng, 5, 2);
  const BarycenterResult res = fairot::approximate_barycenter({g}, {1.0});
  REQUIRE(res.barycenter.size() == g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t d = 0; d < 2; ++d) {
      REQUIRE(res.per_group_targets[0][i * 2 + d] == Approx(g.point(i)[d]).margin(1e-12));
      REQUIRE(res.barycenter.point(i)[d] == Approx(g.point(i)[d]).margin(1e-12));
    }
  }
}

TEST_CASE("two point masses average to their midpoint") {
  const auto res =
      fairot::approximate_barycenter({delta({0.0, 0.0}), delta({2.0, 4.0})}, {0.5, 0.5});
  REQUIRE(res.barycenter.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    REQUIRE(res.barycenter.point(i)[0] == Approx(1.0).margin(1e-12));
    REQUIRE(res.barycenter.point(i)[1] == Approx(2.0).margin(1e-12));
    REQUIRE(res.barycenter.weights()[i] == Approx(0.5).margin(1e-12));
  }
}

TEST_CASE("barycenter weights follow group sizes") {
  Rng rng(2);
  const auto a = helpers::random_distribution(rng, 3, 2);
  const auto b = helpers::random_distribution(rng, 5, 2);
  const auto weights = fairot::size_proportional_weights({a, b});
  REQUIRE(weights[0] == Approx(3.0 / 8.0));
  REQUIRE(weights[1] == Approx(5.0 / 8.0));
  const BarycenterResult res = fairot::approximate_barycenter({a, b}, weights);
  REQUIRE(res.barycenter.size() == 8);
  for (std::size_t i = 0; i < 3; ++i) {
    REQUIRE(res.barycenter.weights()[i] == Approx(weights[0] / 3.0).margin(1e-12));
  }
  for (std::size_t i = 3; i < 8; ++i) {
    REQUIRE(res.barycenter.weights()[i] == Approx(weights[1] / 5.0).margin(1e-12));
  }
  // target rows are exactly the barycenter supports, group by group
  std::size_t row = 0;
  for (std::size_t s = 0; s < 2; ++s) {
    const auto& targets = res.per_group_targets[s];
    for (std::size_t i = 0; i * 2 < targets.size(); ++i, ++row) {
      REQUIRE(targets[i * 2] == res.barycenter.point(row)[0]);
      REQUIRE(targets[i * 2 + 1] == res.barycenter.point(row)[1]);
    }
  }
}

TEST_CASE("objective examples") {
  Rng rng(3);
  const auto g = helpers::random_distribution(rng, 4, 2);
  REQUIRE(fairot::barycenter_objective(g, {g}, {1.0}) == Approx(0.0).margin(1e-12));

  const auto a = delta({0.0});
  const auto b = delta({2.0});
  REQUIRE(fairot::barycenter_objective(delta({1.0}), {a, b}, {0.5, 0.5}) ==
          Approx(1.0).margin(1e-12));
}

TEST_CASE("exact oracle on two point masses is the midpoint") {
  const auto bary = fairot::exact_barycenter_oracle({delta({0.0, 0.0}), delta({2.0, 4.0})},
                                                    {0.5, 0.5});
  REQUIRE(bary.size() == 1);
  REQUIRE(bary.point(0)[0] == Approx(1.0).margin(1e-12));
  REQUIRE(bary.point(0)[1] == Approx(2.0).margin(1e-12));
}

TEST_CASE("exact oracle on a single group returns the group") {
  Rng rng(4);
  const auto g = helpers::random_distribution(rng, 4, 2);
  const auto bary = fairot::exact_barycenter_oracle({g}, {1.0});
  REQUIRE(bary.flat_supports() == g.flat_supports());
}

TEST_CASE("exact oracle refuses oversized tuple spaces") {
  Rng rng(5);
  const auto a = helpers::random_distribution(rng, 20, 1);
  const auto b = helpers::random_distribution(rng, 20, 1);
  REQUIRE_THROWS_AS(fairot::exact_barycenter_oracle({a, b}, {0.5, 0.5}, 100),
                    fairot::InputError);
}

TEST_CASE("exact oracle beats every candidate we try") {
  Rng rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<DiscreteDistribution> groups;
    for (int s = 0; s < 3; ++s) groups.push_back(helpers::random_distribution(rng, 3, 2));
    const std::vector<double> p{0.3, 0.3, 0.4};
    const auto oracle = fairot::exact_barycenter_oracle(groups, p);
    const double best = fairot::barycenter_objective(oracle, groups, p);

    const auto approx = fairot::approximate_barycenter(groups, p);
    REQUIRE(best <= fairot::barycenter_objective(approx.barycenter, groups, p) + 1e-9);
    for (const auto& g : groups) {
      REQUIRE(best <= fairot::barycenter_objective(g, groups, p) + 1e-9);
    }
    REQUIRE(best <=
            fairot::barycenter_objective(helpers::random_distribution(rng, 4, 2), groups, p) + 1e-9);
  }
}

TEST_CASE("pairwise approximation stays within twice the oracle objective") {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<DiscreteDistribution> groups;
    for (int s = 0; s < 3; ++s) {
      groups.push_back(helpers::random_distribution(rng, 3 + rng.below(3), 2));
    }
    const auto p = fairot::size_proportional_weights(groups);
    const auto approx = fairot::approximate_barycenter(groups, p);
    const double psi_approx = fairot::barycenter_objective(approx.barycenter, groups, p);
    const double psi_exact =
        fairot::barycenter_objective(fairot::exact_barycenter_oracle(groups, p), groups, p);
    REQUIRE(psi_approx <= 2.0 * psi_exact + 1e-9);
    REQUIRE(psi_exact <= psi_approx + 1e-9);
  }
}

TEST_CASE("barycenters are translation equivariant") {
  Rng rng(8);
  std::vector<DiscreteDistribution> groups;
  for (int s = 0; s < 3; ++s) groups.push_back(helpers::random_distribution(rng, 3, 2));
  const std::vector<double> p{0.25, 0.25, 0.5};
  const std::vector<double> t{1.5, -0.75};

  std::vector<DiscreteDistribution> moved;
  for (const auto& g : groups) moved.push_back(helpers::translated(g, t));

  const auto base = fairot::approximate_barycenter(groups, p).barycenter;
  const auto shifted = fairot::approximate_barycenter(moved, p).barycenter;
  for (std::size_t i = 0; i < base.size(); ++i) {
    for (std::size_t d = 0; d < 2; ++d) {
      REQUIRE(shifted.point(i)[d] == Approx(base.point(i)[d] + t[d]).margin(1e-9));
    }
  }

  const auto base_exact = sorted_flat(fairot::exact_barycenter_oracle(groups, p));
  auto shifted_exact = sorted_flat(fairot::exact_barycenter_oracle(moved, p));
  REQUIRE(base_exact.size() == shifted_exact.size());
  for (std::size_t i = 0; i < base_exact.size(); ++i) {
    REQUIRE(shifted_exact[i] == Approx(base_exact[i] + t[i % 2]).margin(1e-9));
  }
}

TEST_CASE("barycenters scale with the data") {
  Rng rng(9);
  std::vector<DiscreteDistribution> groups;
  for (int s = 0; s < 2; ++s) groups.push_back(helpers::random_distribution(rng, 4, 2));
  const std::vector<double> p{0.5, 0.5};
  const double c = 3.0;

  std::vector<DiscreteDistribution> scaled;
  for (const auto& g : groups) scaled.push_back(helpers::scaled(g, c));

  const auto base = fairot::approximate_barycenter(groups, p).barycenter;
  const auto big = fairot::approximate_barycenter(scaled, p).barycenter;
  for (std::size_t i = 0; i < base.size(); ++i) {
    for (std::size_t d = 0; d < 2; ++d) {
      REQUIRE(big.point(i)[d] == Approx(c * base.point(i)[d]).margin(1e-9));
    }
  }
  REQUIRE(fairot::barycenter_objective(big, scaled, p) ==
          Approx(c * c * fairot::barycenter_objective(base, groups, p)).epsilon(1e-9));
}

TEST_CASE("the approximation objective ignores point order within groups") {
  Rng rng(10);
  const auto a = helpers::random_distribution(rng, 4, 2);
  const auto b = helpers::random_distribution(rng, 5, 2);
  const std::vector<double> p = fairot::size_proportional_weights({a, b});
  const double psi = fairot::barycenter_objective(
      fairot::approximate_barycenter({a, b}, p).barycenter, {a, b}, p);

  // reverse the points of the first group
  std::vector<double> flat;
  for (std::size_t i = a.size(); i-- > 0;) {
    flat.insert(flat.end(), a.point(i).begin(), a.point(i).end());
  }
  const auto a_rev = DiscreteDistribution::uniform(std::move(flat), 2);
  const double psi_rev = fairot::barycenter_objective(
      fairot::approximate_barycenter({a_rev, b}, p).barycenter, {a_rev, b}, p);
  REQUIRE(psi_rev == Approx(psi).margin(1e-9));
}

TEST_CASE("identical groups have a zero objective") {
  Rng rng(11);
  const auto g = helpers::random_distribution(rng, 5, 2);
  const std::vector<double> p{1.0 / 3, 1.0 / 3, 1.0 / 3};
  const auto approx = fairot::approximate_barycenter({g, g, g}, p);
  REQUIRE(fairot::barycenter_objective(approx.barycenter, {g, g, g}, p) ==
          Approx(0.0).margin(1e-9));
}

TEST_CASE("group weight validation") {
  Rng rng(12);
  const auto g = helpers::random_distribution(rng, 3, 2);
  REQUIRE_THROWS_AS(fairot::approximate_barycenter({g, g}, {0.5, 0.4}), fairot::InputError);
  REQUIRE_THROWS_AS(fairot::approximate_barycenter({}, {}), fairot::InputError);
  const auto h = helpers::random_distribution(rng, 3, 1);
  REQUIRE_THROWS_AS(fairot::approximate_barycenter({g, h}, {0.5, 0.5}), fairot::InputError);
}
