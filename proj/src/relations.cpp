#include "glocal/relations.hpp"

#include <algorithm>
#include <array>
#include <random>

namespace glocal {

namespace {

Mat conj(const Mat& g, const Mat& x) { return g * x * inverse(g); }

bool commute(const Mat& a, const Mat& b) { return a * b == b * a; }

std::string range_over(const GLContext& ctx, int arity, std::size_t values) {
  if (arity == 0) return ctx.name();
  std::string vars = arity == 1 ? "alpha" : "alpha, beta";
  return vars + " over " + std::to_string(values) + " values of " + ctx.ring()->name() + ", n = " +
         std::to_string(ctx.n());
}

}  // namespace

std::vector<Identity> sigma_identities(const GLContext& ctx, const std::optional<Mat>& sigma12) {
  const Mat s12 = sigma12 ? *sigma12 : ctx.sigma12();
  const Mat s23 = ctx.sigma23();
  const Mat E = ctx.identity();
  std::vector<Identity> out;
  auto fixed = [&](std::string name, Mat lhs, Mat rhs) {
    out.push_back({std::move(name), 0, [lhs, rhs](std::span<const Elem>) { return std::pair{lhs, rhs}; }});
  };
  for (int k = 3; k <= ctx.n(); ++k) {
    Mat ik = ctx.sign_flip(k);
    fixed("sigma12 I_" + std::to_string(k) + " = I_" + std::to_string(k) + " sigma12", s12 * ik, ik * s12);
  }
  fixed("sigma12^2 = E", s12 * s12, E);
  fixed("sigma12 I_1 sigma12 = I_2", s12 * ctx.sign_flip(1) * s12, ctx.sign_flip(2));
  for (int k = 1; k <= ctx.n(); ++k) {
    if (k == 2 || k == 3) continue;
    Mat ik = ctx.sign_flip(k);
    fixed("sigma23 I_" + std::to_string(k) + " = I_" + std::to_string(k) + " sigma23", s23 * ik, ik * s23);
  }
  fixed("sigma23^2 = E", s23 * s23, E);
  fixed("sigma23 I_2 sigma23 = I_3", s23 * ctx.sign_flip(2) * s23, ctx.sign_flip(3));
  return out;
}

std::vector<Identity> transvection_identities(const GLContext& ctx) {
  const GLContext c = ctx;
  c.sigma12();  // BadIndex for n < 3
  std::vector<Identity> out;
  out.push_back({"(diag) D (E + a E_12) D^-1 = (E + a E_12)^2", 1, [c](std::span<const Elem> p) {
                   Mat x = c.transvection(1, 2, p[0]);
                   return std::pair{conj(c.D(), x), x * x};
                 }});
  out.push_back({"(units) (I_2 (E + a E_12))^2 = E", 1, [c](std::span<const Elem> p) {
                   Mat y = c.sign_flip(2) * c.transvection(1, 2, p[0]);
                   return std::pair{y * y, c.identity()};
                 }});
  out.push_back({"(rockstar) (I_2 sigma12 (E + E_12))^3 = E", 0, [c](std::span<const Elem>) {
                   Mat y = c.sign_flip(2) * c.sigma12() * c.transvection(1, 2, c.ring()->one());
                   return std::pair{y * y * y, c.identity()};
                 }});
  out.push_back({"(sigma) sigma23 (E + a E_12) sigma23 commutes with E + a E_12", 1,
                 [c](std::span<const Elem> p) {
                   Mat x = c.transvection(1, 2, p[0]);
                   Mat y = c.sigma23() * x * c.sigma23();
                   return std::pair{x * y, y * x};
                 }});
  return out;
}

std::vector<Identity> closing_identities(const GLContext& ctx) {
  const GLContext c = ctx;
  c.sigma12();
  std::vector<Identity> out;
  out.push_back({"(E + a E_12)(E + b E_12) = E + (a + b) E_12", 2, [c](std::span<const Elem> p) {
                   return std::pair{c.transvection(1, 2, p[0]) * c.transvection(1, 2, p[1]),
                                    c.transvection(1, 2, c.ring()->add(p[0], p[1]))};
                 }});
  out.push_back({"[E + a E_12, E + b E_23] = E + ab E_13", 2, [c](std::span<const Elem> p) {
                   return std::pair{commutator(c.transvection(1, 2, p[0]), c.transvection(2, 3, p[1])),
                                    c.transvection(1, 3, c.ring()->mul(p[0], p[1]))};
                 }});
  out.push_back({"E + a E_23 = sigma12 sigma23 (E + a E_12) sigma23 sigma12", 1, [c](std::span<const Elem> p) {
                   return std::pair{c.transvection(2, 3, p[0]),
                                    c.sigma12() * c.sigma23() * c.transvection(1, 2, p[0]) * c.sigma23() * c.sigma12()};
                 }});
  out.push_back({"E + a E_13 = [E + E_12, E + a E_23]", 1, [c](std::span<const Elem> p) {
                   return std::pair{c.transvection(1, 3, p[0]),
                                    commutator(c.transvection(1, 2, c.ring()->one()), c.transvection(2, 3, p[0]))};
                 }});
  return out;
}

RelationReport check_identity(const GLContext& ctx, const Identity& id, std::span<const Elem> values,
                              const std::string& range) {
  RelationReport rep;
  rep.identity = id.name;
  rep.ring = ctx.ring()->name();
  rep.n = ctx.n();
  rep.range = range;
  std::vector<std::size_t> pos(id.arity, 0);
  std::vector<Elem> params(id.arity);
  if (id.arity > 0 && values.empty()) return rep;
  while (true) {
    for (int i = 0; i < id.arity; ++i) params[i] = values[pos[i]];
    auto [lhs, rhs] = id.sides(params);
    ++rep.checked;
    if (!(lhs == rhs)) {
      rep.pass = false;
      rep.counterexample = Counterexample{params, lhs, rhs};
      return rep;
    }
    int i = id.arity - 1;
    while (i >= 0 && ++pos[i] == values.size()) pos[i--] = 0;
    if (i < 0) return rep;
  }
}

namespace {

std::vector<RelationReport> run_all(const GLContext& ctx, const std::vector<Identity>& ids,
                                    std::span<const Elem> values) {
  std::vector<RelationReport> out;
  for (const auto& id : ids) out.push_back(check_identity(ctx, id, values, range_over(ctx, id.arity, values.size())));
  return out;
}

}  // namespace

std::vector<RelationReport> verify_sigma_relations(const GLContext& ctx, const std::optional<Mat>& sigma12) {
  return run_all(ctx, sigma_identities(ctx, sigma12), {});
}

std::vector<RelationReport> verify_transvection_relations(const GLContext& ctx, std::span<const Elem> alphas) {
  return run_all(ctx, transvection_identities(ctx), alphas);
}

std::vector<RelationReport> verify_closing_identities(const GLContext& ctx, std::span<const Elem> alphas) {
  return run_all(ctx, closing_identities(ctx), alphas);
}

bool recheck(const GLContext& ctx, const RelationReport& report, const std::optional<Mat>& sigma12) {
  if (report.pass) return !report.counterexample;
  if (!report.counterexample) return false;
  std::vector<Identity> all = sigma_identities(ctx, sigma12);
  for (auto& id : transvection_identities(ctx)) all.push_back(std::move(id));
  for (auto& id : closing_identities(ctx)) all.push_back(std::move(id));
  const auto& cx = *report.counterexample;
  for (const auto& id : all) {
    if (id.name != report.identity) continue;
    if (static_cast<std::size_t>(id.arity) != cx.params.size()) return false;
    auto [lhs, rhs] = id.sides(cx.params);
    return !(lhs == rhs) && lhs == cx.lhs && rhs == cx.rhs;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Constraint solvers. All work at n = 3 with a 2x2 upper-left corner and a
// single tail entry. Stage one filters corners on the corner blocks of the
// equations (necessary conditions); stage two checks the full 3x3 system.

namespace {

constexpr std::uint64_t kSolverMaxOrder = 81;

using Corner = std::array<Elem, 4>;

Corner cmul(const Ring& R, const Corner& a, const Corner& b) {
  return {R.add(R.mul(a[0], b[0]), R.mul(a[1], b[2])), R.add(R.mul(a[0], b[1]), R.mul(a[1], b[3])),
          R.add(R.mul(a[2], b[0]), R.mul(a[3], b[2])), R.add(R.mul(a[2], b[1]), R.mul(a[3], b[3]))};
}

Corner cdiag(const Ring& R, long long x, long long y) { return {R.from_int(x), R.zero(), R.zero(), R.from_int(y)}; }

bool is_e2(const Ring& R, const Corner& c) {
  return c[0] == R.one() && c[1] == R.zero() && c[2] == R.zero() && c[3] == R.one();
}

Mat assemble(const RingPtr& ring, const Corner& c, Elem tail) {
  Mat m(ring, 3);
  m(0, 0) = c[0];
  m(0, 1) = c[1];
  m(1, 0) = c[2];
  m(1, 1) = c[3];
  m(2, 2) = tail;
  return m;
}

Mat signed_diag(const RingPtr& ring, std::initializer_list<long long> d) {
  std::vector<Elem> e;
  for (long long x : d) e.push_back(ring->from_int(x));
  return Mat::diag(ring, e);
}

// Diagonal unit matrices d with d s d^-1 = target, entry by entry with
// pruning once every entry touching d_1..d_k is fixed. Indices are
// i1 |U|^2 + i2 |U| + i3 into `units`.
std::vector<std::uint32_t> diagonal_conjugators(const Ring& R, const std::vector<Elem>& units,
                                                const std::vector<Elem>& inv, const Mat& s, const Mat& target) {
  std::vector<std::uint32_t> out;
  const std::size_t u = units.size();
  auto ok = [&](const std::array<std::size_t, 3>& d, int k) {
    for (int i = 0; i <= k; ++i)
      for (int j = 0; j <= k; ++j) {
        if (std::max(i, j) != k) continue;
        if (!(R.mul(R.mul(units[d[i]], s(i, j)), inv[d[j]]) == target(i, j))) return false;
      }
    return true;
  };
  std::array<std::size_t, 3> d{};
  for (d[0] = 0; d[0] < u; ++d[0]) {
    if (!ok(d, 0)) continue;
    for (d[1] = 0; d[1] < u; ++d[1]) {
      if (!ok(d, 1)) continue;
      for (d[2] = 0; d[2] < u; ++d[2])
        if (ok(d, 2)) out.push_back(static_cast<std::uint32_t>((d[0] * u + d[1]) * u + d[2]));
    }
  }
  return out;
}

Mat diagonal_from_index(const RingPtr& ring, const std::vector<Elem>& units, std::uint32_t idx) {
  const std::size_t u = units.size();
  std::vector<Elem> e{units[idx / (u * u)], units[idx / u % u], units[idx % u]};
  return Mat::diag(ring, e);
}

void require_solver_ring(const Ring& R) {
  if (R.order() > kSolverMaxOrder)
    throw Error(Errc::cap_exceeded, "constraint solvers enumerate rings of order <= 81, got " + R.name());
}

// Calls f(corner) for every corner passing `keep`, in code order.
template <class Keep, class F>
std::uint64_t for_corners(const Ring& R, Keep keep, F f) {
  const auto els = R.elements();
  std::uint64_t seen = 0;
  Corner c;
  for (auto a : els)
    for (auto b : els)
      for (auto x : els)
        for (auto y : els) {
          c = {a, b, x, y};
          ++seen;
          if (keep(c)) f(c);
        }
  return seen;
}

struct Collected {
  std::vector<std::pair<Mat, ConstraintSolution>> items;

  ConstraintSolution& get(const Mat& m) {
    for (auto& [k, v] : items)
      if (k == m) return v;
    items.push_back({m, ConstraintSolution{m, std::nullopt, 0, {}, {}}});
    return items.back().second;
  }

  std::vector<ConstraintSolution> sorted() {
    std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
      auto ea = a.first.entries(), eb = b.first.entries();
      return std::lexicographical_compare(ea.begin(), ea.end(), eb.begin(), eb.end());
    });
    std::vector<ConstraintSolution> out;
    for (auto& [k, v] : items) out.push_back(std::move(v));
    return out;
  }
};

std::vector<Elem> units_of(const Ring& R) {
  std::vector<Elem> u;
  for (auto e : R.elements())
    if (R.is_unit(e)) u.push_back(e);
  return u;
}

std::vector<Elem> inverses_of(const Ring& R, const std::vector<Elem>& u) {
  std::vector<Elem> out;
  for (auto e : u) out.push_back(R.inverse(e));
  return out;
}

// --- sigma_12 images -------------------------------------------------------

struct SigmaBranch {
  std::string name;
  long long sign;
};

const std::vector<SigmaBranch> kSigmaBranches{{"I_k", 1}, {"-I_k", -1}};

bool sigma_equations(const RingPtr& ring, const Mat& d, long long sign) {
  Mat i1 = signed_diag(ring, {-sign, sign, sign});
  Mat i2 = signed_diag(ring, {sign, -sign, sign});
  Mat i3 = signed_diag(ring, {sign, sign, -sign});
  return d * i3 == i3 * d && (d * d).is_identity() && d * i1 * d == i2;
}

std::map<std::string, bool> sigma_flags(const Ring& R, const Mat& d) {
  Elem m1 = R.neg(R.one());
  bool unit_pair = R.is_unit(d(0, 1)) && d(1, 0) == R.inverse(d(0, 1));
  return {{"zero_corner_diagonal", d(0, 0) == R.zero() && d(1, 1) == R.zero()},
          {"unit_antidiagonal_pair", unit_pair},
          {"tail_pm1", d(2, 2) == R.one() || d(2, 2) == m1}};
}

// --- images of E + E_12 ----------------------------------------------------

struct TransvectionBranch {
  std::string name;
  long long sigma12_tail;
  long long sigma23_head;
};

const std::vector<TransvectionBranch> kTransvectionBranches{{"sigma12 tail +1, sigma23 head +1", 1, 1},
                                                            {"sigma12 tail +1, sigma23 head -1", 1, -1},
                                                            {"sigma12 tail -1, sigma23 head +1", -1, 1},
                                                            {"sigma12 tail -1, sigma23 head -1", -1, -1}};

Mat branch_sigma12(const RingPtr& ring, long long tail) {
  Mat s(ring, 3);
  s(0, 1) = ring->one();
  s(1, 0) = ring->one();
  s(2, 2) = ring->from_int(tail);
  return s;
}

Mat branch_sigma23(const RingPtr& ring, long long head) {
  Mat s(ring, 3);
  s(0, 0) = ring->from_int(head);
  s(1, 2) = ring->one();
  s(2, 1) = ring->one();
  return s;
}

// Every equation but (diag), which needs the diagonal image.
bool transvection_equations(const RingPtr& ring, const Mat& t, const TransvectionBranch& b) {
  Mat i2 = signed_diag(ring, {1, -1, 1});
  Mat i3 = signed_diag(ring, {1, 1, -1});
  if (!(t * i3 == i3 * t)) return false;
  Mat u = i2 * t;
  if (!(u * u).is_identity()) return false;
  Mat r = i2 * branch_sigma12(ring, b.sigma12_tail) * t;
  if (!(r * r * r).is_identity()) return false;
  Mat s23 = branch_sigma23(ring, b.sigma23_head);
  return commute(s23 * t * s23, t);
}

std::map<std::string, bool> transvection_flags(const Ring& R, const Mat& t) {
  Elem m1 = R.neg(R.one());
  auto corner_is = [&](Elem a, Elem b, Elem c, Elem d) {
    return t(0, 0) == a && t(0, 1) == b && t(1, 0) == c && t(1, 1) == d;
  };
  return {{"corner_E+E12", corner_is(R.one(), R.one(), R.zero(), R.one())},
          {"corner_E-E21", corner_is(R.one(), R.zero(), m1, R.one())},
          {"t22_is_1", t(1, 1) == R.one()},
          {"t21t12_is_0", R.mul(t(1, 0), t(0, 1)) == R.zero()},
          {"tail_is_1", t(2, 2) == R.one()}};
}

bool transvection_classified(const std::map<std::string, bool>& f) {
  return (f.at("corner_E+E12") || f.at("corner_E-E21")) && f.at("t22_is_1") && f.at("t21t12_is_0") &&
         f.at("tail_is_1");
}

// --- commuting family ------------------------------------------------------

bool family_equations(const RingPtr& ring, const Mat& s) {
  GLContext ctx(ring, 3);
  Mat x = ctx.transvection(1, 2, ring->one());
  Mat i2 = ctx.sign_flip(2), i3 = ctx.sign_flip(3);
  Mat u = i2 * s;
  return commute(s, x) && commute(s, i3) && (u * u).is_identity();
}

std::map<std::string, bool> family_flags(const Ring& R, const Mat& s) {
  bool form = s(0, 0) == R.one() && s(1, 1) == R.one() && s(2, 2) == R.one() && s(1, 0) == R.zero();
  return {{"form_E+bE12", form}};
}

}  // namespace

ConstraintSolutionSet solve_sigma_image_constraints(const RingPtr& ring, const Limits&) {
  const Ring& R = *ring;
  require_solver_ring(R);
  ConstraintSolutionSet set;
  set.lemma = "sigma";
  set.ring = R.name();
  set.equations = {"d I_3 = I_3 d", "d^2 = E", "d I_1 d = I_2"};
  Collected found;
  for (const auto& br : kSigmaBranches) {
    set.branches.push_back(br.name);
    Corner j1 = cdiag(R, -br.sign, br.sign), j2 = cdiag(R, br.sign, -br.sign);
    std::uint64_t count = 0;
    set.candidates += for_corners(
        R,
        [&](const Corner& c) {
          return is_e2(R, cmul(R, c, c)) && cmul(R, cmul(R, c, j1), c) == j2;
        },
        [&](const Corner& c) {
          for (auto tail : R.elements()) {
            ++set.candidates;
            Mat d = assemble(ring, c, tail);
            if (!sigma_equations(ring, d, br.sign)) continue;
            ++count;
            found.get(d).branches.push_back(br.name);
          }
        });
    set.branch_counts[br.name] = count;
  }
  set.solutions = found.sorted();
  for (auto& s : set.solutions) {
    s.flags = sigma_flags(R, s.matrix);
    for (auto& [k, v] : s.flags) set.all_classified = set.all_classified && v;
  }
  return set;
}

ConstraintSolutionSet solve_transvection_image_constraints(const RingPtr& ring, const Limits&) {
  const Ring& R = *ring;
  require_solver_ring(R);
  const auto units = units_of(R);
  const auto inv = inverses_of(R, units);
  ConstraintSolutionSet set;
  set.lemma = "transvection";
  set.ring = R.name();
  set.equations = {"(diag) A t A^-1 = t^2 for a diagonal unit A", "(units) (I_2 t)^2 = E",
                   "(rockstar) (I_2 sigma12' t)^3 = E", "(sigma) sigma23' t sigma23' commutes with t",
                   "t I_3 = I_3 t"};
  const Corner j = cdiag(R, 1, -1);
  const Corner s{R.zero(), R.one(), R.one(), R.zero()};
  const Corner js = cmul(R, j, s);
  Collected found;
  for (const auto& br : kTransvectionBranches) set.branches.push_back(br.name);
  std::map<std::string, std::uint64_t> counts;
  set.candidates += for_corners(
      R,
      [&](const Corner& c) {
        Corner u = cmul(R, j, c);
        if (!is_e2(R, cmul(R, u, u))) return false;
        Corner r = cmul(R, js, c);
        return is_e2(R, cmul(R, cmul(R, r, r), r));
      },
      [&](const Corner& c) {
        for (auto tail : R.elements()) {
          Mat t = assemble(ring, c, tail);
          std::optional<std::vector<std::uint32_t>> ds;
          for (const auto& br : kTransvectionBranches) {
            ++set.candidates;
            if (!transvection_equations(ring, t, br)) continue;
            if (!ds) ds = diagonal_conjugators(R, units, inv, t, t * t);
            if (ds->empty()) continue;
            ++counts[br.name];
            auto& sol = found.get(t);
            sol.branches.push_back(br.name);
            sol.diagonal_images = ds->size();
            sol.diagonal_image = diagonal_from_index(ring, units, ds->front());
          }
        }
      });
  for (const auto& br : kTransvectionBranches) set.branch_counts[br.name] = counts[br.name];
  set.solutions = found.sorted();
  for (auto& s : set.solutions) {
    s.flags = transvection_flags(R, s.matrix);
    set.all_classified = set.all_classified && transvection_classified(s.flags);
  }
  return set;
}

ConstraintSolutionSet solve_commuting_family_constraints(const RingPtr& ring, int family_size,
                                                         const Limits& limits) {
  const Ring& R = *ring;
  require_solver_ring(R);
  if (family_size < 1 || family_size > 3) throw Error(Errc::bad_index, "family size must be 1, 2 or 3");
  const auto units = units_of(R);
  const auto inv = inverses_of(R, units);
  ConstraintSolutionSet set;
  set.lemma = "family";
  set.ring = R.name();
  set.family_size = family_size;
  set.equations = {"s commutes with E + E_12", "s I_3 = I_3 s", "(I_2 s)^2 = E",
                   "d s d^-1 = s^2 for a diagonal unit d shared by the family",
                   "family members commute pairwise"};
  set.branches = {"I_k"};
  const Corner x{R.one(), R.one(), R.zero(), R.one()};
  const Corner j = cdiag(R, 1, -1);
  std::vector<Mat> members;
  std::vector<std::vector<bool>> dsets;
  set.candidates += for_corners(
      R,
      [&](const Corner& c) {
        if (!(cmul(R, c, x) == cmul(R, x, c))) return false;
        Corner u = cmul(R, j, c);
        return is_e2(R, cmul(R, u, u));
      },
      [&](const Corner& c) {
        for (auto tail : R.elements()) {
          ++set.candidates;
          Mat s = assemble(ring, c, tail);
          if (!family_equations(ring, s)) continue;
          auto ds = diagonal_conjugators(R, units, inv, s, s * s);
          if (ds.empty()) continue;
          ConstraintSolution sol{s, diagonal_from_index(ring, units, ds.front()), ds.size(), {"I_k"}, {}};
          set.solutions.push_back(std::move(sol));
          members.push_back(s);
          if (family_size > 1) {
            std::vector<bool> bits(units.size() * units.size() * units.size());
            for (auto i : ds) bits[i] = true;
            dsets.push_back(std::move(bits));
          }
        }
      });
  set.branch_counts["I_k"] = set.solutions.size();
  for (auto& s : set.solutions) {
    s.flags = family_flags(R, s.matrix);
    set.all_classified = set.all_classified && s.flags.at("form_E+bE12");
  }

  // Ordered tuples of distinct members, pairwise commuting, with a shared d.
  const std::size_t m = members.size();
  if (family_size == 1) {
    set.tuples = m;
    return set;
  }
  std::uint64_t space = 1;
  for (int i = 0; i < family_size; ++i) space *= m;
  if (space > limits.budget) throw Error(Errc::budget_exceeded, "family tuple space exceeds the budget");
  std::vector<std::vector<bool>> comm(m, std::vector<bool>(m));
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) comm[a][b] = commute(members[a], members[b]);
  const std::size_t nd = dsets.empty() ? 0 : dsets[0].size();
  auto shared = [&](std::initializer_list<std::size_t> idx) {
    for (std::size_t d = 0; d < nd; ++d) {
      bool all = true;
      for (auto i : idx) all = all && dsets[i][d];
      if (all) return true;
    }
    return false;
  };
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) {
      if (a == b || !comm[a][b]) continue;
      if (family_size == 2) {
        set.tuples += shared({a, b});
        continue;
      }
      for (std::size_t c = 0; c < m; ++c) {
        if (c == a || c == b || !comm[a][c] || !comm[b][c]) continue;
        set.tuples += shared({a, b, c});
      }
    }
  return set;
}

bool recheck(const RingPtr& ring, const ConstraintSolutionSet& set) {
  const Ring& R = *ring;
  for (const auto& sol : set.solutions) {
    const Mat& m = sol.matrix;
    if (m.n() != 3 || !same_ring(m.ring(), ring)) return false;
    for (int i = 0; i < 2; ++i)
      if (!(m(i, 2) == R.zero()) || !(m(2, i) == R.zero())) return false;
    if (sol.branches.empty()) return false;
    auto diag_ok = [&]() {
      if (!sol.diagonal_image || !sol.diagonal_image->is_diagonal()) return false;
      const Mat& d = *sol.diagonal_image;
      for (int i = 0; i < 3; ++i)
        if (!R.is_unit(d(i, i))) return false;
      return conj(d, m) == m * m;
    };
    for (const auto& name : sol.branches) {
      if (set.lemma == "sigma") {
        auto it = std::find_if(kSigmaBranches.begin(), kSigmaBranches.end(),
                               [&](const auto& b) { return b.name == name; });
        if (it == kSigmaBranches.end() || !sigma_equations(ring, m, it->sign)) return false;
      } else if (set.lemma == "transvection") {
        auto it = std::find_if(kTransvectionBranches.begin(), kTransvectionBranches.end(),
                               [&](const auto& b) { return b.name == name; });
        if (it == kTransvectionBranches.end() || !transvection_equations(ring, m, *it) || !diag_ok())
          return false;
      } else if (set.lemma == "family") {
        if (!family_equations(ring, m) || !diag_ok()) return false;
      } else {
        return false;
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------

ReconstructedRing reconstruct_ring(const GLContext& ctx, const Limits& limits) {
  const Ring& R = *ctx.ring();
  const auto els = R.elements(limits.element_cap);
  if (static_cast<std::uint64_t>(els.size()) * els.size() > limits.budget)
    throw Error(Errc::cap_exceeded, "ring tables exceed the budget");
  ReconstructedRing out;
  out.ring = R.name();
  out.addition_route = "(E + a E_12)(E + b E_12)";
  out.multiplication_route =
      "sigma23 [E + a E_12, sigma12 sigma23 (E + b E_12) sigma23 sigma12] sigma23, commutator x y x^-1 y^-1";
  for (auto a : els) out.carrier.push_back(ctx.transvection(1, 2, a));

  const Mat& s12 = ctx.sigma12();
  const Mat& s23 = ctx.sigma23();
  std::vector<Mat> slot23;
  for (const auto& x : out.carrier) slot23.push_back(s12 * s23 * x * s23 * s12);

  // A matrix lies in the carrier iff it equals the carrier member named by
  // its (1,2) entry.
  auto decode = [&](const Mat& m) -> std::optional<std::uint32_t> {
    std::uint32_t i = m(0, 1).code;
    if (out.carrier[i] == m) return i;
    return std::nullopt;
  };
  const std::size_t q = els.size();
  out.add.assign(q, std::vector<std::uint32_t>(q));
  out.mul.assign(q, std::vector<std::uint32_t>(q));
  bool iso = true, swapped = true;
  for (std::size_t a = 0; a < q; ++a)
    for (std::size_t b = 0; b < q; ++b) {
      auto sum = decode(out.carrier[a] * out.carrier[b]);
      auto prod = decode(s23 * commutator(out.carrier[a], slot23[b]) * s23);
      auto alt = decode(s23 * commutator(out.carrier[b], slot23[a]) * s23);
      if (!sum || !prod || !alt) {
        out.closed = false;
        iso = swapped = false;
        continue;
      }
      out.add[a][b] = *sum;
      out.mul[a][b] = *prod;
      iso = iso && *sum == R.add(els[a], els[b]).code && *prod == R.mul(els[a], els[b]).code;
      swapped = swapped && *alt == R.mul(els[a], els[b]).code;
    }
  out.isomorphic = iso;
  out.swapped_order_matches = swapped;
  return out;
}

// ---------------------------------------------------------------------------

InverseTransposeReport inverse_transpose_check(const GLContext& ctx, CheckMode mode, std::uint64_t seed,
                                               std::size_t samples, const Limits& limits) {
  InverseTransposeReport rep;
  rep.group = ctx.name();
  rep.mode = mode;

  if (mode == CheckMode::exhaustive) {
    auto g = GLGroup::enumerate(ctx, limits);
    const std::size_t m = g.size();
    if (static_cast<std::uint64_t>(m) * m > limits.budget)
      throw Error(Errc::cap_exceeded, "pair count " + std::to_string(m) + "^2 exceeds the budget");
    rep.elements = m;
    std::vector<std::size_t> phi(m);
    std::vector<bool> hit(m);
    for (std::size_t i = 0; i < m; ++i) {
      Mat t = transpose(g.element(i));
      if (!is_invertible(t)) {
        rep.bijective = rep.multiplicative = false;
        rep.non_invertible_transpose = g.element(i);
        return rep;
      }
      phi[i] = *g.index_of(inverse(t));
      if (hit[phi[i]]) rep.bijective = false;
      hit[phi[i]] = true;
    }
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b) {
        ++rep.pairs_checked;
        if (phi[g.mul(a, b)] != g.mul(phi[a], phi[b])) {
          rep.multiplicative = false;
          rep.witness = std::pair{g.element(a), g.element(b)};
          return rep;
        }
      }
    return rep;
  }

  const Ring& R = *ctx.ring();
  const int n = ctx.n();
  const auto els = R.elements(limits.element_cap);
  std::vector<Mat> gens;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      if (i != j)
        for (auto a : els) gens.push_back(ctx.transvection(i, j, a));
  for (int i = 0; i < n; ++i)
    for (auto u : els) {
      if (!R.is_unit(u)) continue;
      Mat d = ctx.identity();
      d(i, i) = u;
      gens.push_back(d);
    }
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) gens.push_back(Mat::perm_swap(ctx.ring(), n, i, j));
  std::vector<Mat> pool = gens;
  std::mt19937_64 rng(seed);
  for (std::size_t s = 0; s < samples; ++s) {
    std::size_t len = 2 + rng() % 4;
    Mat x = gens[rng() % gens.size()];
    for (std::size_t k = 1; k < len; ++k) x = x * gens[rng() % gens.size()];
    pool.push_back(x);
  }
  rep.elements = pool.size();
  if (static_cast<std::uint64_t>(pool.size()) * pool.size() > limits.budget)
    throw Error(Errc::cap_exceeded, "sample pair count exceeds the budget");
  std::vector<Mat> phi;
  for (const auto& x : pool) {
    Mat t = transpose(x);
    if (!is_invertible(t)) {
      rep.bijective = rep.multiplicative = false;
      rep.non_invertible_transpose = x;
      return rep;
    }
    phi.push_back(inverse(t));
  }
  // phi(ab) = phi(a) phi(b)  <=>  (ab)^T phi(a) phi(b) = E
  for (std::size_t a = 0; a < pool.size(); ++a)
    for (std::size_t b = 0; b < pool.size(); ++b) {
      ++rep.pairs_checked;
      if (!(transpose(pool[a] * pool[b]) * (phi[a] * phi[b])).is_identity()) {
        rep.multiplicative = false;
        rep.witness = std::pair{pool[a], pool[b]};
        return rep;
      }
    }
  return rep;
}

}  // namespace glocal
