#include "glocal/matrix.hpp"

#include <algorithm>
#include <thread>

namespace glocal {
namespace {

void check_same(const Mat& a, const Mat& b) {
  if (!same_ring(a.ring(), b.ring()))
    throw Error(Errc::ring_mismatch, a.r().name() + " vs " + b.r().name());
  if (a.n() != b.n())
    throw Error(Errc::dimension_mismatch, std::to_string(a.n()) + " vs " + std::to_string(b.n()));
}

// Rank of an n x n block over a field ring, destroying `m`.
int rank_in_place(const Ring& field, int rows, int cols, std::vector<Elem>& m) {
  int rank = 0;
  for (int c = 0; c < cols && rank < rows; ++c) {
    int pivot = -1;
    for (int r = rank; r < rows; ++r)
      if (m[r * cols + c] != field.zero()) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    for (int k = 0; k < cols; ++k) std::swap(m[pivot * cols + k], m[rank * cols + k]);
    Elem inv = field.inverse(m[rank * cols + c]);
    for (int k = 0; k < cols; ++k) m[rank * cols + k] = field.mul(inv, m[rank * cols + k]);
    for (int r = 0; r < rows; ++r) {
      if (r == rank) continue;
      Elem f = m[r * cols + c];
      if (f == field.zero()) continue;
      for (int k = 0; k < cols; ++k)
        m[r * cols + k] = field.sub(m[r * cols + k], field.mul(f, m[rank * cols + k]));
    }
    ++rank;
  }
  return rank;
}

std::optional<std::uint64_t> checked_pow(std::uint64_t base, std::uint64_t exp) {
  unsigned __int128 r = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    r *= base;
    if (r > (static_cast<unsigned __int128>(1) << 63)) return std::nullopt;
  }
  return static_cast<std::uint64_t>(r);
}

}  // namespace

Mat::Mat(RingPtr ring, int n) : ring_(std::move(ring)), n_(n), e_(static_cast<std::size_t>(n) * n) {
  if (n < 1) throw Error(Errc::bad_index, "matrix dimension must be at least 1");
}

Mat Mat::identity(RingPtr ring, int n) {
  Mat m(std::move(ring), n);
  for (int i = 0; i < n; ++i) m(i, i) = m.r().one();
  return m;
}

Mat Mat::diag(RingPtr ring, std::span<const Elem> entries) {
  Mat m(std::move(ring), static_cast<int>(entries.size()));
  for (int i = 0; i < m.n(); ++i) m(i, i) = entries[i];
  return m;
}

Mat Mat::elementary(RingPtr ring, int n, int i, int j, Elem a) {
  if (i == j || i < 1 || j < 1 || i > n || j > n)
    throw Error(Errc::bad_index, "elementary matrix needs distinct indices in 1.." + std::to_string(n));
  Mat m = identity(std::move(ring), n);
  m(i - 1, j - 1) = a;
  return m;
}

Mat Mat::perm_swap(RingPtr ring, int n, int i, int j) {
  if (i == j || i < 1 || j < 1 || i > n || j > n)
    throw Error(Errc::bad_index, "transposition needs distinct indices in 1.." + std::to_string(n));
  Mat m = identity(std::move(ring), n);
  m(i - 1, i - 1) = m(j - 1, j - 1) = m.r().zero();
  m(i - 1, j - 1) = m(j - 1, i - 1) = m.r().one();
  return m;
}

bool Mat::is_identity() const {
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      if ((*this)(i, j) != (i == j ? r().one() : r().zero())) return false;
  return true;
}

bool Mat::is_diagonal() const {
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      if (i != j && (*this)(i, j) != r().zero()) return false;
  return true;
}

bool Mat::operator==(const Mat& other) const {
  return n_ == other.n_ && same_ring(ring_, other.ring_) && e_ == other.e_;
}

std::string Mat::str() const {
  std::string s = "[";
  for (int i = 0; i < n_; ++i) {
    if (i) s += "; ";
    for (int j = 0; j < n_; ++j) {
      if (j) s += ' ';
      std::string x = r().format((*this)(i, j));
      s += x.find(',') == std::string::npos ? x : "(" + x + ")";
    }
  }
  return s + "]";
}

void mul_into(const Ring& ring, int n, const Elem* a, const Elem* b, Elem* out) {
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Elem acc = ring.zero();
      for (int k = 0; k < n; ++k) acc = ring.add(acc, ring.mul(a[i * n + k], b[k * n + j]));
      out[i * n + j] = acc;
    }
}

Mat mul(const Mat& a, const Mat& b) {
  check_same(a, b);
  Mat out(a.ring(), a.n());
  mul_into(a.r(), a.n(), a.entries().data(), b.entries().data(), out.entries().data());
  return out;
}

Mat operator*(const Mat& a, const Mat& b) { return mul(a, b); }

Mat operator+(const Mat& a, const Mat& b) {
  check_same(a, b);
  Mat out(a.ring(), a.n());
  for (std::size_t i = 0; i < out.entries().size(); ++i) out.entries()[i] = a.r().add(a.entries()[i], b.entries()[i]);
  return out;
}

Mat operator-(const Mat& a) {
  Mat out(a.ring(), a.n());
  for (std::size_t i = 0; i < out.entries().size(); ++i) out.entries()[i] = a.r().neg(a.entries()[i]);
  return out;
}

Mat operator-(const Mat& a, const Mat& b) { return a + (-b); }

Mat scale(const Mat& a, Elem s) {
  Mat out(a.ring(), a.n());
  for (std::size_t i = 0; i < out.entries().size(); ++i) out.entries()[i] = a.r().mul(a.entries()[i], s);
  return out;
}

Mat transpose(const Mat& a) {
  Mat out(a.ring(), a.n());
  for (int i = 0; i < a.n(); ++i)
    for (int j = 0; j < a.n(); ++j) out(j, i) = a(i, j);
  return out;
}

Mat power(const Mat& a, std::uint64_t e) {
  Mat result = Mat::identity(a.ring(), a.n());
  Mat base = a;
  while (e) {
    if (e & 1) result = result * base;
    base = base * base;
    e >>= 1;
  }
  return result;
}

Mat commutator(const Mat& a, const Mat& b) { return a * b * inverse(a) * inverse(b); }

Mat commutator_inner(const Mat& a, const Mat& b) { return inverse(a) * inverse(b) * a * b; }

Mat residue(const Mat& a) {
  Mat out(a.r().residue_field(), a.n());
  for (std::size_t i = 0; i < out.entries().size(); ++i) out.entries()[i] = a.r().residue(a.entries()[i]);
  return out;
}

int field_rank(const Mat& a) {
  std::vector<Elem> m(a.entries().begin(), a.entries().end());
  return rank_in_place(a.r(), a.n(), a.n(), m);
}

int residue_rank(const Mat& a) { return field_rank(residue(a)); }

bool residue_invertible(const Ring& ring, int n, const Elem* a) {
  const Ring& field = *ring.residue_field();
  std::vector<Elem> m(static_cast<std::size_t>(n) * n);
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = ring.residue(a[i]);
  return rank_in_place(field, n, n, m) == n;
}

bool is_invertible(const Mat& a) { return residue_invertible(a.r(), a.n(), a.entries().data()); }

Mat inverse(const Mat& a) {
  const Ring& R = a.r();
  const int n = a.n();
  Mat work = a;
  Mat inv = Mat::identity(a.ring(), n);
  for (int c = 0; c < n; ++c) {
    int pivot = -1;
    for (int r = c; r < n; ++r)
      if (R.is_unit(work(r, c))) {
        pivot = r;
        break;
      }
    if (pivot < 0) throw Error(Errc::not_invertible, "no unit pivot in column " + std::to_string(c + 1) + " of " + a.str());
    for (int k = 0; k < n; ++k) {
      std::swap(work(pivot, k), work(c, k));
      std::swap(inv(pivot, k), inv(c, k));
    }
    Elem p = R.inverse(work(c, c));
    for (int k = 0; k < n; ++k) {
      work(c, k) = R.mul(p, work(c, k));
      inv(c, k) = R.mul(p, inv(c, k));
    }
    for (int r = 0; r < n; ++r) {
      if (r == c) continue;
      Elem f = work(r, c);
      if (f == R.zero()) continue;
      for (int k = 0; k < n; ++k) {
        work(r, k) = R.sub(work(r, k), R.mul(f, work(c, k)));
        inv(r, k) = R.sub(inv(r, k), R.mul(f, inv(c, k)));
      }
    }
  }
  if (!(inv * a).is_identity() || !(a * inv).is_identity())
    throw Error(Errc::not_invertible, "elimination produced a one-sided inverse for " + a.str());
  return inv;
}

GLContext::GLContext(RingPtr ring, int n) : ring_(std::move(ring)), n_(n), identity_(Mat::identity(ring_, n)) {
  if (n_ >= 3) {
    sigma12_ = Mat::perm_swap(ring_, n_, 1, 2);
    sigma23_ = Mat::perm_swap(ring_, n_, 2, 3);
    if (ring_->has_half()) {
      std::vector<Elem> diag(n_, ring_->one());
      diag[0] = ring_->from_int(2);
      diag[2] = ring_->half();
      d_ = Mat::diag(ring_, diag);
    }
  }
}

std::string GLContext::name() const { return "GL_" + std::to_string(n_) + "(" + ring_->name() + ")"; }

void GLContext::require3() const {
  if (n_ < 3) throw Error(Errc::bad_index, "this construction needs n >= 3, got n = " + std::to_string(n_));
}

const Mat& GLContext::sigma12() const {
  require3();
  return *sigma12_;
}

const Mat& GLContext::sigma23() const {
  require3();
  return *sigma23_;
}

const Mat& GLContext::D() const {
  require3();
  if (!d_) throw Error(Errc::no_half, "D = diag[2, 1, 1/2, ...] needs 1/2 in " + ring_->name());
  return *d_;
}

Mat GLContext::sign_flip(int k) const {
  if (k < 1 || k > n_) throw Error(Errc::bad_index, "sign flip index out of range");
  Mat m = identity_;
  m(k - 1, k - 1) = ring_->neg(ring_->one());
  return m;
}

std::optional<std::uint64_t> GLContext::matrix_count() const {
  return checked_pow(ring_->order(), static_cast<std::uint64_t>(n_) * n_);
}

void decode_matrix(const Ring& ring, int n, std::uint64_t code, Elem* out) {
  const std::uint64_t q = ring.order();
  for (int i = n * n; i-- > 0;) {
    out[i] = {static_cast<std::uint32_t>(code % q)};
    code /= q;
  }
}

std::uint64_t encode_matrix(const Ring& ring, int n, const Elem* entries) {
  std::uint64_t code = 0;
  for (int i = 0; i < n * n; ++i) code = code * ring.order() + entries[i].code;
  return code;
}

std::vector<std::uint64_t> scan_matrices(const GLContext& ctx, const Limits& limits, const MatrixPredicate& keep) {
  auto total = ctx.matrix_count();
  if (!total || *total > limits.matrix_cap)
    throw Error(Errc::cap_exceeded, ctx.name() + " needs " +
                                        (total ? std::to_string(*total) : std::string("more than 2^63")) +
                                        " matrices, cap is " + std::to_string(limits.matrix_cap));
  const Ring& R = *ctx.ring();
  const int n = ctx.n();
  const std::uint64_t q = R.order();
  const unsigned workers = std::max(1u, std::min<unsigned>(limits.workers, static_cast<unsigned>(*total)));
  std::vector<std::vector<std::uint64_t>> parts(workers);

  auto run = [&](unsigned w) {
    const std::uint64_t begin = *total * w / workers;
    const std::uint64_t end = *total * (w + 1) / workers;
    std::vector<Elem> m(static_cast<std::size_t>(n) * n);
    decode_matrix(R, n, begin, m.data());
    for (std::uint64_t code = begin; code < end; ++code) {
      if (keep(m.data())) parts[w].push_back(code);
      // odometer increment, last entry fastest
      for (int i = n * n; i-- > 0;) {
        if (++m[i].code < q) break;
        m[i].code = 0;
      }
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
  }
  std::vector<std::uint64_t> out;
  for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

GroupOrder group_order(const GLContext& ctx, OrderMode mode, const Limits& limits) {
  GroupOrder result;
  const Ring& R = *ctx.ring();
  const int n = ctx.n();
  if (mode != OrderMode::enumerate) {
    // |GL_n(F_q)| = prod_{i<n} (q^n - q^i), then lift through the radical.
    const std::uint64_t q = R.residue_field_size();
    auto qn = checked_pow(q, n);
    auto lift = checked_pow(R.radical_size(), static_cast<std::uint64_t>(n) * n);
    if (!qn || !lift) throw Error(Errc::cap_exceeded, "group order of " + ctx.name() + " overflows 64 bits");
    unsigned __int128 v = 1;
    for (int i = 0; i < n; ++i) v *= *qn - *checked_pow(q, i);
    v *= *lift;
    if (v >> 63) throw Error(Errc::cap_exceeded, "group order of " + ctx.name() + " overflows 64 bits");
    result.formula = static_cast<std::uint64_t>(v);
  }
  if (mode != OrderMode::formula) {
    auto codes = scan_matrices(ctx, limits, [&R, n](const Elem* m) { return residue_invertible(R, n, m); });
    result.enumerated = codes.size();
  }
  return result;
}

GLGroup GLGroup::enumerate(const GLContext& ctx, const Limits& limits) {
  GLGroup g(ctx);
  const Ring& R = *ctx.ring();
  const int n = ctx.n();
  g.nn_ = static_cast<std::size_t>(n) * n;
  g.codes_ = scan_matrices(ctx, limits, [&R, n](const Elem* m) { return residue_invertible(R, n, m); });
  g.entries_.resize(g.codes_.size() * g.nn_);
  for (std::size_t i = 0; i < g.codes_.size(); ++i) decode_matrix(R, n, g.codes_[i], g.entries_.data() + i * g.nn_);
  g.identity_ = *g.index_of(ctx.identity());
  return g;
}

Mat GLGroup::element(std::size_t i) const {
  Mat m(ctx_.ring(), ctx_.n());
  std::copy_n(data(i), nn_, m.entries().begin());
  return m;
}

std::optional<std::size_t> GLGroup::index_of_entries(const Elem* entries) const {
  const std::uint64_t code = encode_matrix(*ctx_.ring(), ctx_.n(), entries);
  auto it = std::lower_bound(codes_.begin(), codes_.end(), code);
  if (it == codes_.end() || *it != code) return std::nullopt;
  return static_cast<std::size_t>(it - codes_.begin());
}

std::optional<std::size_t> GLGroup::index_of(const Mat& m) const {
  if (!same_ring(m.ring(), ctx_.ring()) || m.n() != ctx_.n()) return std::nullopt;
  return index_of_entries(m.entries().data());
}

std::size_t GLGroup::mul(std::size_t a, std::size_t b) const {
  Elem buf[64];
  std::vector<Elem> heap;
  Elem* out = buf;
  if (nn_ > 64) {
    heap.resize(nn_);
    out = heap.data();
  }
  mul_into(*ctx_.ring(), ctx_.n(), data(a), data(b), out);
  return *index_of_entries(out);
}

std::size_t GLGroup::inverse(std::size_t a) const { return *index_of(glocal::inverse(element(a))); }

std::uint32_t GLGroup::element_order(std::size_t i) const {
  if (orders_.empty()) {
    orders_.assign(size(), 0);
    std::vector<Elem> cur(nn_), next(nn_);
    for (std::size_t g = 0; g < size(); ++g) {
      std::copy_n(data(g), nn_, cur.begin());
      std::uint32_t k = 1;
      while (encode_matrix(*ctx_.ring(), ctx_.n(), cur.data()) != codes_[identity_]) {
        mul_into(*ctx_.ring(), ctx_.n(), cur.data(), data(g), next.data());
        std::swap(cur, next);
        ++k;
      }
      orders_[g] = k;
    }
  }
  return orders_[i];
}

}  // namespace glocal
