#include "glocal/substructure.hpp"

#include <algorithm>
#include <numeric>

namespace glocal {

PartialStructure::PartialStructure(std::vector<std::string> labels, std::vector<std::array<std::uint32_t, 3>> prod,
                                   std::vector<std::array<std::uint32_t, 2>> inv, std::optional<std::uint32_t> id)
    : labels_(std::move(labels)), prod_(std::move(prod)), inv_(std::move(inv)), id_(id) {
  const std::size_t n = labels_.size();
  auto bad = [](const std::string& what) { throw Error(Errc::parse, "partial structure: " + what); };
  prod_table_.assign(n * n, none);
  inv_table_.assign(n, none);
  std::sort(prod_.begin(), prod_.end());
  prod_.erase(std::unique(prod_.begin(), prod_.end()), prod_.end());
  std::sort(inv_.begin(), inv_.end());
  inv_.erase(std::unique(inv_.begin(), inv_.end()), inv_.end());
  for (const auto& [a, b, c] : prod_) {
    if (a >= n || b >= n || c >= n) bad("product index out of range");
    auto& slot = prod_table_[a * n + b];
    if (slot != none) bad("two products for one pair");
    slot = c;
  }
  for (const auto& [a, b] : inv_) {
    if (a >= n || b >= n) bad("inverse index out of range");
    if (inv_table_[a] != none) bad("two inverses for one element");
    inv_table_[a] = b;
  }
  if (id_) {
    if (*id_ >= n) bad("identity index out of range");
    for (std::uint32_t a = 0; a < n; ++a)
      if (product(*id_, a) != a || product(a, *id_) != a) bad("identity law fails for " + labels_[a]);
  }
}

std::size_t PartialStructure::degree(std::uint32_t a) const {
  std::size_t d = 0;
  for (const auto& t : prod_) d += (t[0] == a) + (t[1] == a) + (t[2] == a);
  for (const auto& p : inv_) d += (p[0] == a) + (p[1] == a);
  return d;
}

PartialStructure restrict(std::span<const Mat> elements) {
  std::vector<Mat> set;
  for (const auto& m : elements) {
    if (!set.empty()) {
      if (!same_ring(m.ring(), set[0].ring())) throw Error(Errc::ring_mismatch, "restrict: mixed rings");
      if (m.n() != set[0].n()) throw Error(Errc::dimension_mismatch, "restrict: mixed sizes");
    }
    if (!is_invertible(m)) throw Error(Errc::not_invertible, "restrict: " + m.str() + " is not in GL_n");
    if (std::find(set.begin(), set.end(), m) == set.end()) set.push_back(m);
  }
  auto find = [&](const Mat& x) -> std::optional<std::uint32_t> {
    for (std::uint32_t i = 0; i < set.size(); ++i)
      if (set[i] == x) return i;
    return std::nullopt;
  };
  std::vector<std::string> labels;
  std::vector<std::array<std::uint32_t, 3>> prod;
  std::vector<std::array<std::uint32_t, 2>> inv;
  std::optional<std::uint32_t> id;
  for (std::uint32_t a = 0; a < set.size(); ++a) {
    labels.push_back(set[a].str());
    if (set[a].is_identity()) id = a;
    if (auto b = find(inverse(set[a]))) inv.push_back({a, *b});
    for (std::uint32_t b = 0; b < set.size(); ++b)
      if (auto c = find(set[a] * set[b])) prod.push_back({a, b, *c});
  }
  return PartialStructure(std::move(labels), std::move(prod), std::move(inv), id);
}

std::optional<std::size_t> PartialTarget::mul(std::size_t a, std::size_t b) const {
  auto c = p_.product(static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b));
  if (c == PartialStructure::none) return std::nullopt;
  return c;
}

std::optional<std::size_t> PartialTarget::inv(std::size_t a) const {
  auto b = p_.inverse(static_cast<std::uint32_t>(a));
  if (b == PartialStructure::none) return std::nullopt;
  return b;
}

std::optional<std::size_t> PartialTarget::identity() const {
  if (auto id = p_.id()) return *id;
  return std::nullopt;
}

namespace {

constexpr std::size_t kFree = static_cast<std::size_t>(-1);

// Search state with an undo trail. Each trail entry restores one slot.
class Search {
 public:
  Search(const PartialStructure& p, const EmbeddingTarget& t, std::uint64_t budget)
      : p_(p), t_(t), budget_(budget), n_(p.size()), f_(n_, kFree), forced_(n_, kFree),
        used_(t.size(), kFree), forbidden_(t.size(), 0), self_inverse_(t.size()) {
    for (std::size_t x = 0; x < t.size(); ++x) {
      auto y = t.inv(x);
      self_inverse_[x] = y && *y == x;
    }
    order_.resize(n_);
    std::iota(order_.begin(), order_.end(), 0);
    std::vector<std::size_t> deg(n_);
    for (std::size_t a = 0; a < n_; ++a) deg[a] = p.degree(static_cast<std::uint32_t>(a));
    std::stable_sort(order_.begin(), order_.end(), [&](auto a, auto b) { return deg[a] > deg[b]; });
  }

  EmbedResult run() {
    EmbedResult res;
    auto tid = t_.identity();
    bool ok = true;
    if (auto e = p_.id()) {
      if (!tid) ok = false;
      else forced_[*e] = *tid;
    } else if (tid) {
      ++forbidden_[*tid];
    }
    if (ok && n_ > t_.size()) ok = false;
    if (ok) {
      try {
        if (descend(0)) {
          res.status = EmbedStatus::found;
          res.images = f_;
        }
      } catch (const BudgetHit&) {
        res.status = EmbedStatus::budget_exceeded;
      }
    }
    res.attempts = attempts_;
    return res;
  }

 private:
  struct BudgetHit {};
  enum Slot { F, USED, FORCED, FORBID };
  struct Undo {
    Slot slot;
    std::size_t index;
    std::size_t old;
  };

  void set(Slot s, std::size_t i, std::size_t v) {
    auto& ref = s == F ? f_[i] : s == USED ? used_[i] : s == FORCED ? forced_[i] : forbidden_[i];
    trail_.push_back({s, i, ref});
    ref = v;
  }

  void undo_to(std::size_t mark) {
    while (trail_.size() > mark) {
      auto u = trail_.back();
      trail_.pop_back();
      (u.slot == F ? f_ : u.slot == USED ? used_ : u.slot == FORCED ? forced_ : forbidden_)[u.index] = u.old;
    }
  }

  // Force source element c to target y, or fail.
  bool force(std::size_t c, std::size_t y) {
    if (f_[c] != kFree) return f_[c] == y;
    if (forced_[c] != kFree) return forced_[c] == y;
    if (used_[y] != kFree || forbidden_[y] > 0) return false;
    set(FORCED, c, y);
    return true;
  }

  // The result y of an operation on assigned elements: defined source result
  // c forces c to y; an undefined source result keeps y out of the image.
  bool relate(std::uint32_t c, std::optional<std::size_t> y) {
    if (c != PartialStructure::none) return y && force(c, *y);
    if (!y) return true;
    if (used_[*y] != kFree) return false;
    for (std::size_t s = 0; s < n_; ++s)
      if (f_[s] == kFree && forced_[s] == *y) return false;
    set(FORBID, *y, forbidden_[*y] + 1);
    return true;
  }

  bool assign(std::size_t a, std::size_t x) {
    if (used_[x] != kFree || forbidden_[x] > 0) return false;
    if (forced_[a] != kFree && forced_[a] != x) return false;
    // a is self-inverse in the source exactly when its image is.
    if (self_inverse_[x] != (p_.inverse(static_cast<std::uint32_t>(a)) == a)) return false;
    set(F, a, x);
    set(USED, x, a);
    auto ai = static_cast<std::uint32_t>(a);
    if (!relate(p_.inverse(ai), t_.inv(x))) return false;
    for (std::size_t b = 0; b < n_; ++b) {
      if (f_[b] == kFree) continue;
      auto bi = static_cast<std::uint32_t>(b);
      if (!relate(p_.product(ai, bi), t_.mul(x, f_[b]))) return false;
      if (b != a && !relate(p_.product(bi, ai), t_.mul(f_[b], x))) return false;
    }
    return true;
  }

  std::size_t pick() const {
    for (auto a : order_)
      if (f_[a] == kFree && forced_[a] != kFree) return a;
    for (auto a : order_)
      if (f_[a] == kFree) return a;
    return kFree;
  }

  bool descend(std::size_t depth) {
    if (depth == n_) return true;
    std::size_t a = pick();
    auto attempt = [&](std::size_t x) {
      if (++attempts_ > budget_) throw BudgetHit{};
      std::size_t mark = trail_.size();
      if (assign(a, x) && descend(depth + 1)) return true;
      undo_to(mark);
      return false;
    };
    if (forced_[a] != kFree) return attempt(forced_[a]);
    for (std::size_t x = 0; x < t_.size(); ++x)
      if (used_[x] == kFree && forbidden_[x] == 0 && attempt(x)) return true;
    return false;
  }

  const PartialStructure& p_;
  const EmbeddingTarget& t_;
  std::uint64_t budget_;
  std::uint64_t attempts_ = 0;
  std::size_t n_;
  std::vector<std::size_t> f_, forced_, used_, forbidden_;
  std::vector<bool> self_inverse_;
  std::vector<std::size_t> order_;
  std::vector<Undo> trail_;
};

}  // namespace

bool verify_embedding(const PartialStructure& p, const EmbeddingTarget& t, std::span<const std::size_t> f) {
  const std::size_t n = p.size();
  if (f.size() != n) return false;
  std::vector<std::size_t> back(t.size(), kFree);
  for (std::size_t a = 0; a < n; ++a) {
    if (f[a] >= t.size() || back[f[a]] != kFree) return false;
    back[f[a]] = a;
  }
  auto matches = [&](std::uint32_t c, std::optional<std::size_t> y) {
    if (c != PartialStructure::none) return y && *y == f[c];
    return !y || back[*y] == kFree;
  };
  for (std::uint32_t a = 0; a < n; ++a) {
    if (!matches(p.inverse(a), t.inv(f[a]))) return false;
    for (std::uint32_t b = 0; b < n; ++b)
      if (!matches(p.product(a, b), t.mul(f[a], f[b]))) return false;
  }
  auto tid = t.identity();
  if (p.id()) return tid && f[*p.id()] == *tid;
  return !tid || back[*tid] == kFree;
}

EmbedResult embed(const PartialStructure& p, const EmbeddingTarget& target, std::uint64_t budget) {
  auto res = Search(p, target, budget).run();
  if (res.status == EmbedStatus::found && !verify_embedding(p, target, res.images))
    throw std::logic_error("embedding search returned an invalid embedding");
  return res;
}

Embedding find_embedding(const PartialStructure& p, const GLContext& target, const Limits& limits) {
  auto g = GLGroup::enumerate(target, limits);
  auto res = embed(p, GroupTarget(g), limits.budget);
  Embedding out;
  out.status = res.status;
  out.attempts = res.attempts;
  for (auto i : res.images) out.images.push_back(g.element(i));
  return out;
}

bool is_isomorphic_partial(const PartialStructure& p, const PartialStructure& q, std::uint64_t budget) {
  if (p.size() != q.size() || p.prod().size() != q.prod().size() || p.inv().size() != q.inv().size() ||
      p.id().has_value() != q.id().has_value())
    return false;
  auto res = embed(p, PartialTarget(q), budget);
  if (res.status == EmbedStatus::budget_exceeded)
    throw Error(Errc::budget_exceeded, "isomorphism search exceeded the budget");
  return res.status == EmbedStatus::found;
}

GroupInvariants group_invariants(const GLContext& ctx, const Limits& limits) {
  GroupInvariants inv;
  inv.group = ctx.name();
  inv.order = GLGroup::enumerate(ctx, limits).size();
  auto mc = max_commuting_involutions(ctx, CliqueMode::exhaustive, limits);
  inv.involutions = mc.involution_count;
  inv.max_commuting = mc.max;

  // Close the frame under products, then take the lcm of element orders.
  auto frame = mi_frame(ctx);
  std::vector<Mat> sub{ctx.identity()};
  for (std::size_t i = 0; i < sub.size(); ++i)
    for (const auto& g : frame.members) {
      Mat x = sub[i] * g;
      if (std::find(sub.begin(), sub.end(), x) == sub.end()) sub.push_back(x);
    }
  std::uint64_t e = 1;
  for (const auto& x : sub) {
    std::uint64_t k = 1;
    for (Mat y = x; !y.is_identity(); y = y * x) ++k;
    e = std::lcm(e, k);
  }
  inv.mi_exponent = e;
  return inv;
}

DeskCheck desk_check_theorem(const GLContext& a, const GLContext& b, const Limits& limits) {
  DeskCheck out;
  out.first = group_invariants(a, limits);
  out.second = group_invariants(b, limits);
  auto values = [](const GroupInvariants& g) {
    return std::array<std::uint64_t, 4>{g.max_commuting, g.order, g.involutions, g.mi_exponent};
  };
  auto va = values(out.first), vb = values(out.second);
  for (std::size_t i = 0; i < va.size(); ++i)
    if (va[i] != vb[i]) out.separating.push_back(kInvariantNames[i]);
  out.distinguished = !out.separating.empty();
  if (out.distinguished) out.separator = out.separating.front();
  if (a.n() != b.n()) {
    auto bound = [](const GLContext& c, const GroupInvariants& g) {
      return g.max_commuting == (std::uint64_t{1} << c.n()) - 1;
    };
    out.frame_bound_holds = bound(a, out.first) && bound(b, out.second);
  }
  return out;
}

}  // namespace glocal
