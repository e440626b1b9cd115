#include <doctest.h>

#include <random>

#include "bary/bary.hpp"
#include "support/instances.hpp"

using namespace bary;
using fixtures::frac;
using fixtures::measure;

TEST_CASE("squared_distance") {
  Point<Rat> a({Rat(0), Rat(0)}), b({Rat(1), Rat(0)}), c({Rat(0), Rat(1)});
  CHECK(squared_distance(a, b) == Rat(1));
  CHECK(squared_distance(c, b) == Rat(2));
  CHECK(squared_distance(a, a) == Rat(0));
  Point<Rat> d1({Rat(1)});
  CHECK_THROWS_AS(squared_distance(a, d1), data_error);
}

TEST_CASE("weighted_centroid") {
  std::vector<Rat> half{frac<Rat>(1, 2), frac<Rat>(1, 2)};
  Point<Rat> c1 = weighted_centroid<Rat>({Point<Rat>({Rat(0), Rat(1)}), Point<Rat>({Rat(0), Rat(0)})}, half);
  CHECK(c1.equals(Point<Rat>({Rat(0), frac<Rat>(1, 2)})));
  Point<Rat> c2 = weighted_centroid<Rat>({Point<Rat>({Rat(1), Rat(0)}), Point<Rat>({Rat(1), Rat(1)})}, half);
  CHECK(c2.equals(Point<Rat>({Rat(1), frac<Rat>(1, 2)})));
  Point<Rat> x({Rat(3), Rat(7)});
  std::vector<Rat> lam{frac<Rat>(1, 3), frac<Rat>(1, 3), frac<Rat>(1, 3)};
  CHECK(weighted_centroid<Rat>({x, x, x}, lam).equals(x));
  CHECK_THROWS_AS(weighted_centroid<Rat>({x}, half), data_error);
}

TEST_CASE("measure construction") {
  CHECK_THROWS_AS(measure<Rat>({{{Rat(0)}, Rat(0)}}), data_error);
  CHECK_THROWS_AS(measure<Rat>({{{Rat(0)}, frac<Rat>(1, 2)}}), data_error);
  // coincident points merge
  Measure<Rat> m = measure<Rat>({{{Rat(1)}, frac<Rat>(1, 2)}, {{Rat(1)}, frac<Rat>(1, 2)}});
  CHECK(m.size() == 1);
  CHECK(m.atom(0).mass == Rat(1));
  // atoms come out lexicographically sorted
  Measure<Rat> s = measure<Rat>({{{Rat(2), Rat(0)}, frac<Rat>(1, 2)}, {{Rat(0), Rat(5)}, frac<Rat>(1, 2)}});
  CHECK(s.atom(0).point.equals(Point<Rat>({Rat(0), Rat(5)})));
  // partial measures may sum below 1 but not above
  CHECK_NOTHROW(measure<Rat>({{{Rat(0)}, frac<Rat>(1, 4)}}, MeasureKind::partial));
  CHECK_THROWS_AS(measure<Rat>({{{Rat(0)}, frac<Rat>(5, 4)}}, MeasureKind::partial), data_error);
}

TEST_CASE("weights") {
  CHECK_THROWS_AS(Weights<Rat>({Rat(1), Rat(1)}), data_error);
  CHECK_THROWS_AS(Weights<Rat>({frac<Rat>(3, 2), frac<Rat>(-1, 2)}), data_error);
  auto u = Weights<Rat>::uniform(4);
  CHECK(u[0] == frac<Rat>(1, 4));
  auto n = Weights<Rat>::normalized({Rat(2), Rat(6)});
  CHECK(n[0] == frac<Rat>(1, 4));
  CHECK(n[1] == frac<Rat>(3, 4));
}

TEST_CASE("union_support") {
  auto ms = fixtures::example1<Rat>();
  auto u = union_support(ms);
  CHECK(u.size() == 6);
  CHECK(u.front().equals(Point<Rat>({Rat(0), Rat(0)})));
  CHECK(u.back().equals(Point<Rat>({Rat(2), Rat(1)})));

  std::vector<Measure<Rat>> twice{ms[0], ms[0]};
  CHECK(union_support(twice).size() == ms[0].size());

  std::vector<Measure<Rat>> singles{measure<Rat>({{{Rat(0), Rat(0)}, Rat(1)}}),
                                    measure<Rat>({{{Rat(1), Rat(0)}, Rat(1)}})};
  CHECK(union_support(singles).size() == 2);
}

TEST_CASE("centroid_set") {
  auto ms = fixtures::example1<Rat>();
  auto lambda = Weights<Rat>::uniform(2);
  auto s = centroid_set(ms, lambda);
  // nine pairs collapse to seven distinct centroids: (1,1/2) arises three times
  CHECK(s.size() == 7);
  std::vector<Point<Rat>> expected{
      Point<Rat>({Rat(0), frac<Rat>(1, 2)}), Point<Rat>({frac<Rat>(1, 2), Rat(0)}),
      Point<Rat>({frac<Rat>(1, 2), Rat(1)}), Point<Rat>({Rat(1), frac<Rat>(1, 2)}),
      Point<Rat>({frac<Rat>(3, 2), Rat(0)}), Point<Rat>({frac<Rat>(3, 2), Rat(1)}),
      Point<Rat>({Rat(2), frac<Rat>(1, 2)})};
  REQUIRE(s.size() == expected.size());
  for (std::size_t i = 0; i < s.size(); ++i) CHECK(s[i].equals(expected[i]));

  std::vector<Measure<Rat>> singles{measure<Rat>({{{Rat(0), Rat(0)}, Rat(1)}}),
                                    measure<Rat>({{{Rat(1), Rat(0)}, Rat(1)}})};
  auto mid = centroid_set(singles, lambda);
  REQUIRE(mid.size() == 1);
  CHECK(mid[0].equals(Point<Rat>({frac<Rat>(1, 2), Rat(0)})));

  std::vector<Measure<Rat>> same{singles[0], singles[0], singles[0]};
  auto one = centroid_set(same, Weights<Rat>::uniform(3));
  REQUIRE(one.size() == 1);
  CHECK(one[0].equals(singles[0].atom(0).point));

  CHECK_THROWS_AS(centroid_set(ms, lambda, 8), cap_error);
}

TEST_CASE("sparsity_bound") {
  auto ms = fixtures::example1<Rat>();
  CHECK(sparsity_bound(ms) == 5);
  std::vector<Measure<Rat>> singles{measure<Rat>({{{Rat(0)}, Rat(1)}}),
                                    measure<Rat>({{{Rat(1)}, Rat(1)}}),
                                    measure<Rat>({{{Rat(2)}, Rat(1)}})};
  CHECK(sparsity_bound(singles) == 1);
  // four full 16x16 grids
  std::vector<Measure<Rat>> grids;
  for (int i = 0; i < 4; ++i) {
    std::vector<Atom<Rat>> atoms;
    for (int r = 0; r < 16; ++r)
      for (int c = 0; c < 16; ++c)
        atoms.push_back({Point<Rat>({Rat(c), Rat(r)}), frac<Rat>(1, 256)});
    grids.emplace_back(std::move(atoms));
  }
  CHECK(sparsity_bound(grids) == 1021);
}

TEST_CASE("centroid identity and minimality") {
  // sum_i lambda_i |s-x_i|^2 = |s-c|^2 + sum_i lambda_i |c-x_i|^2, exactly
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> coord(-4, 4), wd(1, 5), nd(2, 5), dd(1, 3);
  for (int rep = 0; rep < 50; ++rep) {
    int n = nd(rng), d = dd(rng);
    std::vector<Point<Rat>> xs;
    for (int i = 0; i < n; ++i) {
      std::vector<Rat> c;
      for (int t = 0; t < d; ++t) c.push_back(frac<Rat>(coord(rng), 2));
      xs.emplace_back(std::move(c));
    }
    std::vector<Rat> w;
    for (int i = 0; i < n; ++i) w.emplace_back(wd(rng));
    auto lambda = Weights<Rat>::normalized(std::move(w));
    Point<Rat> c = weighted_centroid(xs, lambda.values());
    std::vector<Rat> sc;
    for (int t = 0; t < d; ++t) sc.push_back(frac<Rat>(coord(rng), 3));
    Point<Rat> s(std::move(sc));

    Rat lhs(0), tail(0);
    for (int i = 0; i < n; ++i) {
      lhs += lambda[i] * squared_distance(s, xs[i]);
      tail += lambda[i] * squared_distance(c, xs[i]);
    }
    CHECK(lhs == squared_distance(s, c) + tail);
    if (!s.equals(c)) CHECK(lhs > tail);  // the centroid is the strict minimizer
  }
}
