#include "doctest.h"

#include "glocal/substructure.hpp"

#include <random>

using namespace glocal;

namespace {

std::vector<Mat> frame_with_identity(const GLContext& ctx) {
  auto f = mi_frame(ctx);
  std::vector<Mat> out{ctx.identity()};
  out.insert(out.end(), f.members.begin(), f.members.end());
  return out;
}

// Brute-force oracle: try every injective map (tiny sizes only).
bool brute_embeds(const PartialStructure& p, const EmbeddingTarget& t) {
  std::vector<std::size_t> f(p.size());
  std::vector<bool> used(t.size());
  auto rec = [&](auto&& self, std::size_t i) -> bool {
    if (i == p.size()) return verify_embedding(p, t, f);
    for (std::size_t x = 0; x < t.size(); ++x) {
      if (used[x]) continue;
      used[x] = true;
      f[i] = x;
      if (self(self, i + 1)) return true;
      used[x] = false;
    }
    return false;
  };
  return rec(rec, 0);
}

}  // namespace

TEST_CASE("restrict examples") {
  auto R = Ring::make("gf:3");
  GLContext c3(R, 3);
  std::vector<Mat> e{c3.identity()};
  auto pe = restrict(e);
  CHECK(pe.size() == 1);
  CHECK(pe.prod().size() == 1);
  CHECK(pe.id() == 0u);
  CHECK(pe.inv().size() == 1);

  auto frame = frame_with_identity(c3);
  auto pf = restrict(frame);
  CHECK(pf.size() == 8);
  CHECK(pf.prod().size() == 64);
  CHECK(pf.inv().size() == 8);

  GLContext c2(R, 2);
  std::vector<Mat> u{c2.transvection(1, 2, R->one()), c2.transvection(1, 2, R->from_int(2))};
  auto pu = restrict(u);
  CHECK(pu.product(0, 0) == 1u);
  CHECK(pu.product(1, 1) == 0u);  // 4 = 1 in GF(3)
  CHECK(pu.inverse(0) == 1u);
  CHECK(pu.inverse(1) == 0u);
  CHECK(pu.product(0, 1) == PartialStructure::none);  // E is not in the set
  CHECK(pu.product(1, 0) == PartialStructure::none);
  CHECK_FALSE(pu.id());

  std::vector<Mat> dup{c2.identity(), c2.identity()};
  CHECK(restrict(dup).size() == 1);
  std::vector<Mat> mixed{c2.identity(), c3.identity()};
  CHECK_THROWS_AS(restrict(mixed), Error);
  std::vector<Mat> rings{c2.identity(), Mat::identity(Ring::make("gf:5"), 2)};
  CHECK_THROWS_AS(restrict(rings), Error);
}

TEST_CASE("partial structure validation") {
  CHECK_THROWS_AS(PartialStructure({"a"}, {{0, 0, 1}}, {}, std::nullopt), Error);
  CHECK_THROWS_AS(PartialStructure({"a", "b"}, {{0, 0, 0}, {0, 0, 1}}, {}, std::nullopt), Error);
  CHECK_THROWS_AS(PartialStructure({"e", "a"}, {{0, 0, 0}}, {}, 0u), Error);
  CHECK_NOTHROW(PartialStructure({"e", "a"}, {{0, 0, 0}, {0, 1, 1}, {1, 0, 1}}, {{0, 0}}, 0u));
}

TEST_CASE("embedding examples") {
  auto G3 = Ring::make("gf:3");
  GLContext c3(G3, 3);
  auto pf = restrict(frame_with_identity(c3));

  auto self = find_embedding(pf, c3);
  CHECK(self.status == EmbedStatus::found);

  auto into = find_embedding(pf, GLContext(Ring::make("gf:9"), 2));
  CHECK(into.status == EmbedStatus::no_embedding);

  for (const char* spec : {"gf:3", "zmod:9", "gf:5"})
    for (int n : {1, 2}) {
      CAPTURE(spec);
      GLContext ctx(Ring::make(spec), n);
      std::vector<Mat> one{c3.sign_flip(1)};
      auto r = find_embedding(restrict(one), ctx);
      REQUIRE(r.status == EmbedStatus::found);
      CHECK((r.images[0] * r.images[0]).is_identity());
      CHECK_FALSE(r.images[0].is_identity());
    }

  Limits tight;
  tight.budget = 3;
  CHECK(find_embedding(pf, GLContext(Ring::make("gf:9"), 2), tight).status == EmbedStatus::budget_exceeded);
}

TEST_CASE("embedding search agrees with brute force on small targets") {
  auto R = Ring::make("gf:3");
  GLContext c2(R, 2);
  auto g = GLGroup::enumerate(c2);
  GroupTarget t(g);
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    // Sources from GL_2(GF(3)) and from GL_1(GF(9)), embedded into GL_2(GF(3)).
    std::vector<Mat> pick;
    std::size_t k = 1 + rng() % 3;
    if (trial % 2 == 0) {
      for (std::size_t i = 0; i < k; ++i) pick.push_back(g.element(rng() % g.size()));
    } else {
      auto F = Ring::make("gf:9");
      for (std::size_t i = 0; i < k; ++i) {
        std::vector<Elem> d{F->at(1 + rng() % 8)};
        pick.push_back(Mat::diag(F, d));
      }
    }
    auto p = restrict(pick);
    auto res = embed(p, t, 1'000'000);
    CHECK((res.status == EmbedStatus::found) == brute_embeds(p, t));
  }
}

TEST_CASE("restrict then embed into the ambient group") {
  GLContext c3(Ring::make("gf:3"), 3);
  auto g = GLGroup::enumerate(c3);
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Mat> pick;
    std::size_t k = 1 + rng() % 10;
    for (std::size_t i = 0; i < k; ++i) pick.push_back(g.element(rng() % g.size()));
    auto p = restrict(pick);
    auto a = embed(p, GroupTarget(g), Limits{}.budget);
    auto b = embed(p, GroupTarget(g), Limits{}.budget);
    REQUIRE(a.status == EmbedStatus::found);
    CHECK(a.images == b.images);
  }
}

TEST_CASE("partial isomorphism") {
  auto G3 = Ring::make("gf:3");
  auto pf3 = restrict(frame_with_identity(GLContext(G3, 3)));
  auto pf2 = restrict(frame_with_identity(GLContext(G3, 2)));
  auto pz3 = restrict(frame_with_identity(GLContext(Ring::make("zmod:9"), 3)));
  CHECK(is_isomorphic_partial(pf3, pf3));
  CHECK_FALSE(is_isomorphic_partial(pf3, pf2));
  CHECK(is_isomorphic_partial(pf3, pz3));
  CHECK(is_isomorphic_partial(pz3, pf3));

  // Cyclic group of order 4 vs the frame of GL_2: same size, not isomorphic.
  GLContext c2(Ring::make("gf:5"), 2);
  std::vector<Elem> d{Ring::make("gf:5")->from_int(2), Ring::make("gf:5")->one()};
  Mat x = Mat::diag(c2.ring(), d);
  std::vector<Mat> cyc{c2.identity(), x, x * x, x * x * x};
  auto pc = restrict(cyc);
  CHECK(pc.prod().size() == pf2.prod().size());
  CHECK_FALSE(is_isomorphic_partial(pc, pf2));

  // Transitivity spot check on three relabelled copies of one structure.
  std::vector<Mat> fr = frame_with_identity(GLContext(G3, 3));
  std::vector<Mat> rev(fr.rbegin(), fr.rend());
  auto pr = restrict(rev);
  CHECK(is_isomorphic_partial(pf3, pr));
  CHECK(is_isomorphic_partial(pr, pz3));
}

TEST_CASE("desk check") {
  auto G3 = Ring::make("gf:3");
  auto d = desk_check_theorem(GLContext(G3, 2), GLContext(G3, 3));
  CHECK(d.distinguished);
  CHECK(d.separator == "max-commuting-involutions");
  CHECK(d.first.max_commuting == 3);
  CHECK(d.second.max_commuting == 7);
  CHECK(d.frame_bound_holds == true);
  CHECK(d.first.order == 48);
  CHECK(d.first.involutions == 13);
  CHECK(d.first.mi_exponent == 2);

  auto same = desk_check_theorem(GLContext(G3, 2), GLContext(G3, 2));
  CHECK_FALSE(same.distinguished);
  CHECK(same.separator.empty());
  CHECK_FALSE(same.frame_bound_holds);
}
