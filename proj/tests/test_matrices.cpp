#include "doctest.h"

#include "glocal/matrix.hpp"

#include <random>

using namespace glocal;

namespace {

Mat random_invertible(const GLContext& ctx, std::mt19937_64& rng) {
  const Ring& R = *ctx.ring();
  std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(R.order() - 1));
  while (true) {
    Mat m(ctx.ring(), ctx.n());
    for (auto& e : m.entries()) e = {pick(rng)};
    if (is_invertible(m)) return m;
  }
}

// Plain-integer 2x2 matrices mod 9 for the brute-force inverse oracle.
int mod9(int x) { return ((x % 9) + 9) % 9; }

}  // namespace

TEST_CASE("closing identities on concrete values over zmod:9") {
  auto R = Ring::make("zmod:9");
  GLContext ctx(R, 3);
  Mat c = commutator(ctx.transvection(1, 2, R->from_int(2)), ctx.transvection(2, 3, R->from_int(3)));
  CHECK(c == ctx.transvection(1, 3, R->from_int(6)));
  Mat s = ctx.transvection(1, 2, R->from_int(2)) * ctx.transvection(1, 2, R->from_int(5));
  CHECK(s == ctx.transvection(1, 2, R->from_int(7)));
  CHECK(transpose(ctx.sigma12()) == ctx.sigma12());
}

TEST_CASE("both commutator conventions give E + ab E_13 over twist:9:1") {
  auto R = Ring::make("twist:9:1");
  GLContext ctx(R, 3);
  for (auto a : R->elements())
    for (auto b : R->elements()) {
      Mat x = ctx.transvection(1, 2, a), y = ctx.transvection(2, 3, b);
      Mat want = ctx.transvection(1, 3, R->mul(a, b));
      REQUIRE(commutator(x, y) == want);
      REQUIRE(commutator_inner(x, y) == want);
    }
}

TEST_CASE("constructors") {
  auto R = Ring::make("zmod:9");
  Mat p = Mat::perm_swap(R, 3, 1, 2);
  CHECK(p.str() == "[0 1 0; 1 0 0; 0 0 1]");
  CHECK(Mat::elementary(R, 3, 1, 2, R->zero()).is_identity());
  Elem m1 = R->neg(R->one());
  std::vector<Elem> d{R->one(), m1, m1};
  Mat dm = Mat::diag(R, d);
  CHECK((dm * dm).is_identity());
  CHECK_THROWS_AS(Mat::elementary(R, 3, 2, 2, R->one()), Error);
  CHECK_THROWS_AS(Mat::perm_swap(R, 3, 1, 4), Error);
}

TEST_CASE("invertibility and inverses") {
  auto R = Ring::make("zmod:9");
  GLContext ctx(R, 3);
  for (auto a : R->elements()) {
    Mat t = ctx.transvection(1, 2, a);
    CHECK(is_invertible(t));
    CHECK(inverse(t) == ctx.transvection(1, 2, R->neg(a)));
  }
  std::vector<Elem> d{R->from_int(3), R->one(), R->one()};
  CHECK_FALSE(is_invertible(Mat::diag(R, d)));
  CHECK_THROWS_AS(inverse(Mat::diag(R, d)), Error);
  Mat radical(R, 3);
  for (auto& e : radical.entries()) e = R->from_int(3 * (e.code % 3 + 1));
  CHECK_FALSE(is_invertible(radical));
  CHECK(inverse(ctx.sigma12()) == ctx.sigma12());
  std::vector<Elem> dinv{R->from_int(5), R->one(), R->from_int(2)};
  CHECK(inverse(ctx.D()) == Mat::diag(R, dinv));

  auto G = Ring::make("gf:3");
  CHECK_THROWS_AS(mul(Mat::identity(R, 3), Mat::identity(G, 3)), Error);
  CHECK_THROWS_AS(mul(Mat::identity(R, 3), Mat::identity(R, 2)), Error);
}

TEST_CASE("inverse properties on random matrices") {
  std::mt19937_64 rng(7);
  for (const char* spec : {"zmod:9", "gf:9", "dual:3:2", "twist:9:1", "zmod:25"}) {
    CAPTURE(spec);
    for (int n : {1, 2, 3, 4}) {
      GLContext ctx(Ring::make(spec), n);
      for (int trial = 0; trial < 30; ++trial) {
        Mat a = random_invertible(ctx, rng), b = random_invertible(ctx, rng);
        REQUIRE((a * inverse(a)).is_identity());
        REQUIRE((inverse(a) * a).is_identity());
        REQUIRE(inverse(a * b) == inverse(b) * inverse(a));
        REQUIRE(transpose(transpose(a)) == a);
        if (ctx.ring()->commutative()) REQUIRE(transpose(a * b) == transpose(b) * transpose(a));
      }
    }
  }
}

TEST_CASE("is_invertible agrees with brute-force inverse search on 2x2 over zmod:9") {
  auto R = Ring::make("zmod:9");
  std::vector<std::array<int, 4>> all;
  for (int c = 0; c < 6561; ++c) all.push_back({c / 729, c / 81 % 9, c / 9 % 9, c % 9});
  auto is_e = [](const std::array<int, 4>& a, const std::array<int, 4>& b) {
    return mod9(a[0] * b[0] + a[1] * b[2]) == 1 && mod9(a[0] * b[1] + a[1] * b[3]) == 0 &&
           mod9(a[2] * b[0] + a[3] * b[2]) == 0 && mod9(a[2] * b[1] + a[3] * b[3]) == 1;
  };
  int invertible = 0;
  for (const auto& a : all) {
    bool found = false;
    for (const auto& b : all)
      if (is_e(a, b) && is_e(b, a)) {
        found = true;
        break;
      }
    Mat m(R, 2);
    for (int i = 0; i < 4; ++i) m.entries()[i] = R->from_int(a[i]);
    REQUIRE(is_invertible(m) == found);
    invertible += found;
  }
  CHECK(invertible == 3888);
}

TEST_CASE("group orders: enumeration agrees with formula") {
  // Oracle counts: determinant is a unit, by plain integer loops.
  auto count2 = [](int q, int p) {
    int c = 0;
    for (int a = 0; a < q; ++a)
      for (int b = 0; b < q; ++b)
        for (int x = 0; x < q; ++x)
          for (int y = 0; y < q; ++y) c += ((a * y - b * x) % p + p) % p != 0;
    return c;
  };
  REQUIRE(count2(3, 3) == 48);
  REQUIRE((9 - 1) * (9 - 3) == 48);
  REQUIRE(count2(9, 3) == 3888);
  REQUIRE(48 * 81 == 3888);
  REQUIRE((27 - 1) * (27 - 3) * (27 - 9) == 11232);

  auto g23 = group_order(GLContext(Ring::make("gf:3"), 2), OrderMode::both);
  CHECK(g23.enumerated == 48u);
  CHECK(g23.formula == 48u);
  auto z92 = group_order(GLContext(Ring::make("zmod:9"), 2), OrderMode::both);
  CHECK(z92.enumerated == 3888u);
  CHECK(z92.formula == 3888u);
  auto g33 = group_order(GLContext(Ring::make("gf:3"), 3), OrderMode::both);
  CHECK(g33.enumerated == 11232u);
  CHECK(g33.formula == 11232u);

  for (const char* spec : {"dual:3:2", "zmod:25", "gf:9", "gf:5"}) {
    CAPTURE(spec);
    auto g = group_order(GLContext(Ring::make(spec), 2), OrderMode::both);
    CHECK(g.enumerated == g.formula);
  }
  CHECK_THROWS_AS(group_order(GLContext(Ring::make("zmod:9"), 3), OrderMode::enumerate), Error);
  CHECK(group_order(GLContext(Ring::make("zmod:9"), 3), OrderMode::formula).value() == 11232ull * 19683ull);
}

TEST_CASE("parallel scan is independent of worker count") {
  GLContext ctx(Ring::make("gf:3"), 3);
  Limits one, four;
  four.workers = 4;
  auto a = GLGroup::enumerate(ctx, one);
  auto b = GLGroup::enumerate(ctx, four);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); i += 97) CHECK(a.element(i) == b.element(i));
}

TEST_CASE("GLGroup lookups") {
  GLContext ctx(Ring::make("gf:3"), 2);
  auto g = GLGroup::enumerate(ctx);
  REQUIRE(g.size() == 48);
  CHECK(g.element(g.identity_index()).is_identity());
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(g.mul(i, g.inverse(i)) == g.identity_index());
    CHECK(power(g.element(i), g.element_order(i)).is_identity());
  }
}
