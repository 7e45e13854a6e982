#include "glocal/involution.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

namespace glocal {
namespace {

// Incremental row-echelon basis over a field, used to pick columns whose
// residues are linearly independent.
class EchelonBasis {
 public:
  explicit EchelonBasis(const Ring& field) : field_(field) {}

  // Adds v if it is independent of the current span; returns whether it was.
  bool insert(std::vector<Elem> v) {
    for (std::size_t b = 0; b < rows_.size(); ++b) {
      Elem f = v[pivots_[b]];
      if (f == field_.zero()) continue;
      for (std::size_t k = 0; k < v.size(); ++k) v[k] = field_.sub(v[k], field_.mul(f, rows_[b][k]));
    }
    auto it = std::find_if(v.begin(), v.end(), [&](Elem e) { return e != field_.zero(); });
    if (it == v.end()) return false;
    std::size_t p = static_cast<std::size_t>(it - v.begin());
    Elem inv = field_.inverse(v[p]);
    for (auto& e : v) e = field_.mul(inv, e);
    rows_.push_back(std::move(v));
    pivots_.push_back(p);
    return true;
  }

  std::size_t rank() const noexcept { return rows_.size(); }

 private:
  const Ring& field_;
  std::vector<std::vector<Elem>> rows_;
  std::vector<std::size_t> pivots_;
};

Mat signed_diag(const RingPtr& ring, int plus, int minus) {
  std::vector<Elem> d(plus, ring->one());
  d.insert(d.end(), minus, ring->neg(ring->one()));
  return Mat::diag(ring, d);
}

bool commute(const Mat& a, const Mat& b) { return a * b == b * a; }

}  // namespace

Mat InvolutionForm::diagonal() const { return signed_diag(conjugator.ring(), signature.plus, signature.minus); }

InvolutionForm canonical_form(const Mat& I) {
  const Ring& R = I.r();
  const int n = I.n();
  if (!(I * I).is_identity()) throw Error(Errc::not_involution, I.str() + " does not square to E");
  if (!R.has_half()) throw Error(Errc::no_half, "involution canonical form needs 1/2 in " + R.name());

  const Mat E = Mat::identity(I.ring(), n);
  const Mat P = scale(E + I, R.half());
  const Mat N = scale(E - I, R.half());

  const Ring& field = *R.residue_field();
  EchelonBasis basis(field);
  std::vector<std::vector<Elem>> columns;
  int plus = 0;
  auto take_columns = [&](const Mat& proj) {
    int taken = 0;
    for (int c = 0; c < n; ++c) {
      std::vector<Elem> col(n), res(n);
      for (int r = 0; r < n; ++r) {
        col[r] = proj(r, c);
        res[r] = R.residue(col[r]);
      }
      if (basis.insert(res)) {
        columns.push_back(std::move(col));
        ++taken;
      }
    }
    return taken;
  };
  plus = take_columns(P);
  const int minus = take_columns(N);
  if (plus + minus != n)
    throw Error(Errc::not_involution, "eigenmodules of " + I.str() + " do not span the space");

  Mat T(I.ring(), n);
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < n; ++r) T(r, c) = columns[c][r];

  InvolutionForm form{inverse(T), {plus, minus}};
  if (!(form.conjugator * I * T == form.diagonal()))
    throw Error(Errc::not_involution, "conjugation check failed for " + I.str());
  return form;
}

SimultaneousForm simultaneous_diagonalize(std::span<const Mat> inputs) {
  if (inputs.empty()) throw Error(Errc::bad_index, "simultaneous_diagonalize needs at least one matrix");
  const RingPtr& ring = inputs.front().ring();
  const int n = inputs.front().n();
  for (const auto& I : inputs) {
    if (!same_ring(I.ring(), ring)) throw Error(Errc::ring_mismatch, "inputs live over different rings");
    if (I.n() != n) throw Error(Errc::dimension_mismatch, "inputs have different sizes");
    if (!(I * I).is_identity()) throw Error(Errc::not_involution, I.str() + " does not square to E");
  }
  for (std::size_t a = 0; a < inputs.size(); ++a)
    for (std::size_t b = a + 1; b < inputs.size(); ++b)
      if (!commute(inputs[a], inputs[b]))
        throw Error(Errc::not_commuting, inputs[a].str() + " and " + inputs[b].str() + " do not commute");
  if (!ring->has_half()) throw Error(Errc::no_half, "simultaneous diagonalization needs 1/2 in " + ring->name());
  if (std::all_of(inputs.begin(), inputs.end(), [](const Mat& m) { return m.is_diagonal(); }))
    return {Mat::identity(ring, n), std::vector<Mat>(inputs.begin(), inputs.end())};

  // T's columns form a basis; blocks are runs of columns spanning common
  // invariant submodules. Each new involution splits every block in two.
  Mat T = Mat::identity(ring, n);
  std::vector<std::pair<int, int>> blocks{{0, n}};
  for (const auto& I : inputs) {
    const Mat A = inverse(T) * I * T;
    Mat change = Mat::identity(ring, n);
    std::vector<std::pair<int, int>> next;
    for (auto [start, size] : blocks) {
      for (int r = 0; r < n; ++r)
        for (int c = start; c < start + size; ++c)
          if ((r < start || r >= start + size) && A(r, c) != ring->zero())
            throw Error(Errc::not_commuting, "invariant block decomposition broke down");
      Mat sub(ring, size);
      for (int r = 0; r < size; ++r)
        for (int c = 0; c < size; ++c) sub(r, c) = A(start + r, start + c);
      InvolutionForm f = canonical_form(sub);
      Mat to_basis = inverse(f.conjugator);
      for (int r = 0; r < size; ++r)
        for (int c = 0; c < size; ++c) change(start + r, start + c) = to_basis(r, c);
      if (f.signature.plus) next.emplace_back(start, f.signature.plus);
      if (f.signature.minus) next.emplace_back(start + f.signature.plus, f.signature.minus);
    }
    T = T * change;
    blocks = std::move(next);
  }

  SimultaneousForm out{inverse(T), {}};
  for (const auto& I : inputs) {
    Mat d = out.conjugator * I * T;
    if (!d.is_diagonal()) throw Error(Errc::not_commuting, "result is not diagonal for " + I.str());
    out.diagonal.push_back(std::move(d));
  }
  return out;
}

MIFrame mi_frame(const GLContext& ctx) {
  const int n = ctx.n();
  const RingPtr& ring = ctx.ring();
  MIFrame frame{ctx.identity(), {}, {}, std::vector<std::vector<std::size_t>>(n), {}, {}, {}};
  const Elem minus_one = ring->neg(ring->one());
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    std::vector<Elem> d(n, ring->one());
    for (int k = 0; k < n; ++k)
      if (mask >> k & 1) d[k] = minus_one;
    frame.classes[std::popcount(mask) - 1].push_back(frame.members.size());
    frame.members.push_back(Mat::diag(ring, d));
    frame.masks.push_back(mask);
  }
  frame.marked_minus_counts.push_back(1);
  if (n - 1 > 1) frame.marked_minus_counts.push_back(n - 1);
  for (int k = 1; k <= n; ++k) {
    frame.single_flips.push_back(ctx.sign_flip(k));
    frame.co_single_flips.push_back(-ctx.sign_flip(k));
  }
  return frame;
}

std::vector<Mat> involutions(const GLContext& ctx, const Limits& limits) {
  const Ring& R = *ctx.ring();
  const int n = ctx.n();
  const std::size_t nn = static_cast<std::size_t>(n) * n;
  auto codes = scan_matrices(ctx, limits, [&R, n, nn](const Elem* m) {
    std::vector<Elem> sq(nn);
    mul_into(R, n, m, m, sq.data());
    bool is_e = true, sq_e = true;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Elem want = i == j ? R.one() : R.zero();
        sq_e = sq_e && sq[i * n + j] == want;
        is_e = is_e && m[i * n + j] == want;
      }
    return sq_e && !is_e;
  });
  std::vector<Mat> out;
  out.reserve(codes.size());
  for (auto code : codes) {
    Mat m(ctx.ring(), n);
    decode_matrix(R, n, code, m.entries().data());
    out.push_back(std::move(m));
  }
  return out;
}

CommutingInvolutions max_commuting_involutions(const GLContext& ctx, CliqueMode mode, const Limits& limits) {
  CommutingInvolutions result;
  if (mode == CliqueMode::greedy_certified) {
    MIFrame frame = mi_frame(ctx);
    for (std::size_t a = 0; a < frame.size(); ++a) {
      if (!(frame.members[a] * frame.members[a]).is_identity())
        throw Error(Errc::not_involution, "frame member is not an involution");
      for (std::size_t b = a + 1; b < frame.size(); ++b)
        if (!commute(frame.members[a], frame.members[b]))
          throw Error(Errc::not_commuting, "frame members do not commute");
    }
    result.max = frame.size();
    result.exact = false;
    result.witness = frame.members;
    return result;
  }

  auto inv = involutions(ctx, limits);
  result.involution_count = inv.size();
  BitGraph g(inv.size());
  for (std::size_t a = 0; a < inv.size(); ++a)
    for (std::size_t b = a + 1; b < inv.size(); ++b)
      if (commute(inv[a], inv[b])) g.add_edge(a, b);
  auto clique = maximum_clique(g);
  result.max = clique.size();
  result.exact = true;
  for (auto v : clique) result.witness.push_back(inv[v]);
  return result;
}

BitGraph::BitGraph(std::size_t n) : n_(n), rows_(n, std::vector<std::uint64_t>((n + 63) / 64, 0)) {}

void BitGraph::add_edge(std::size_t a, std::size_t b) {
  if (a == b) return;
  rows_[a][b >> 6] |= std::uint64_t{1} << (b & 63);
  rows_[b][a >> 6] |= std::uint64_t{1} << (a & 63);
}

std::size_t BitGraph::degree(std::size_t v) const {
  std::size_t d = 0;
  for (auto w : rows_[v]) d += static_cast<std::size_t>(std::popcount(w));
  return d;
}

namespace {

class CliqueSearch {
 public:
  explicit CliqueSearch(const BitGraph& g) : g_(g) {}

  std::vector<std::size_t> run() {
    std::vector<std::size_t> order(g_.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return g_.degree(a) > g_.degree(b); });
    expand(order);
    std::sort(best_.begin(), best_.end());
    return best_;
  }

 private:
  // Greedy sequential colouring; colour[i] bounds the clique size reachable
  // from candidates[0..i].
  void colour(const std::vector<std::size_t>& cand, std::vector<std::size_t>& sorted,
              std::vector<std::size_t>& bound) const {
    std::vector<std::vector<std::size_t>> classes;
    for (auto v : cand) {
      std::size_t k = 0;
      for (; k < classes.size(); ++k) {
        bool clash = false;
        for (auto u : classes[k])
          if (g_.adjacent(u, v)) {
            clash = true;
            break;
          }
        if (!clash) break;
      }
      if (k == classes.size()) classes.emplace_back();
      classes[k].push_back(v);
    }
    sorted.clear();
    bound.clear();
    for (std::size_t k = 0; k < classes.size(); ++k)
      for (auto v : classes[k]) {
        sorted.push_back(v);
        bound.push_back(k + 1);
      }
  }

  void expand(const std::vector<std::size_t>& cand) {
    std::vector<std::size_t> sorted, bound;
    colour(cand, sorted, bound);
    for (std::size_t i = sorted.size(); i-- > 0;) {
      if (current_.size() + bound[i] <= best_.size()) return;
      const std::size_t v = sorted[i];
      current_.push_back(v);
      std::vector<std::size_t> next;
      for (std::size_t j = 0; j < i; ++j)
        if (g_.adjacent(v, sorted[j])) next.push_back(sorted[j]);
      if (next.empty()) {
        if (current_.size() > best_.size()) best_ = current_;
      } else {
        expand(next);
      }
      current_.pop_back();
    }
  }

  const BitGraph& g_;
  std::vector<std::size_t> current_, best_;
};

}  // namespace

std::vector<std::size_t> maximum_clique(const BitGraph& g) {
  if (g.size() == 0) return {};
  return CliqueSearch(g).run();
}

}  // namespace glocal
