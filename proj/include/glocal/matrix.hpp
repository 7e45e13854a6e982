#pragma once

#include "glocal/ring.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace glocal {

// Square matrix over a catalog ring. Entries are stored row-major.
//
// Products of entries always keep the left factor's entry on the left, so
// (ab)_ij = sum_k a_ik * b_kj also over noncommutative rings.
class Mat {
 public:
  Mat(RingPtr ring, int n);

  static Mat identity(RingPtr ring, int n);
  static Mat diag(RingPtr ring, std::span<const Elem> entries);
  // E + a*E_ij with 1-based indices, i != j.
  static Mat elementary(RingPtr ring, int n, int i, int j, Elem a);
  // Permutation matrix swapping basis vectors i and j (1-based).
  static Mat perm_swap(RingPtr ring, int n, int i, int j);

  const RingPtr& ring() const noexcept { return ring_; }
  const Ring& r() const noexcept { return *ring_; }
  int n() const noexcept { return n_; }

  Elem operator()(int row, int col) const { return e_[row * n_ + col]; }
  Elem& operator()(int row, int col) { return e_[row * n_ + col]; }
  std::span<const Elem> entries() const noexcept { return e_; }
  std::span<Elem> entries() noexcept { return e_; }

  bool is_identity() const;
  bool is_diagonal() const;

  bool operator==(const Mat& other) const;

  std::string str() const;

 private:
  RingPtr ring_;
  int n_;
  std::vector<Elem> e_;
};

Mat operator*(const Mat& a, const Mat& b);
Mat operator+(const Mat& a, const Mat& b);
Mat operator-(const Mat& a, const Mat& b);
Mat operator-(const Mat& a);
// Every entry multiplied on the right by s.
Mat scale(const Mat& a, Elem s);

Mat mul(const Mat& a, const Mat& b);
Mat transpose(const Mat& a);
Mat power(const Mat& a, std::uint64_t e);

// Commutator [a, b] = a b a^-1 b^-1. With this convention
// [E + x E_12, E + y E_23] = E + x y E_13 over every catalog ring.
Mat commutator(const Mat& a, const Mat& b);
// The other convention a^-1 b^-1 a b, kept for comparison.
Mat commutator_inner(const Mat& a, const Mat& b);

// Entry-wise reduction modulo the radical.
Mat residue(const Mat& a);
// Rank over a field (the ring must be a field).
int field_rank(const Mat& a);
int residue_rank(const Mat& a);
bool is_invertible(const Mat& a);
// Gauss-Jordan with the first unit entry of each column as pivot.
// Throws NotInvertible.
Mat inverse(const Mat& a);

// Raw kernel used by enumeration code: out = a * b for n x n blocks.
void mul_into(const Ring& ring, int n, const Elem* a, const Elem* b, Elem* out);
bool residue_invertible(const Ring& ring, int n, const Elem* a);

// A ring and a dimension together with the matrices the relation suites
// refer to: sigma_12, sigma_23, D = diag[2, 1, 1/2, 1, ..., 1] and the
// single sign flips I_k.
class GLContext {
 public:
  GLContext(RingPtr ring, int n);

  const RingPtr& ring() const noexcept { return ring_; }
  int n() const noexcept { return n_; }
  std::string name() const;

  const Mat& identity() const { return identity_; }
  // Throws BadIndex when n < 3.
  const Mat& sigma12() const;
  const Mat& sigma23() const;
  const Mat& D() const;
  // diag with -1 at position k (1-based), +1 elsewhere.
  Mat sign_flip(int k) const;
  // E + a E_ij.
  Mat transvection(int i, int j, Elem a) const { return Mat::elementary(ring_, n_, i, j, a); }

  // Number of n x n matrices over the ring, or nullopt past 2^63.
  std::optional<std::uint64_t> matrix_count() const;

 private:
  void require3() const;

  RingPtr ring_;
  int n_;
  Mat identity_;
  std::optional<Mat> sigma12_, sigma23_, d_;
};

enum class OrderMode { enumerate, formula, both };

struct GroupOrder {
  std::optional<std::uint64_t> enumerated;
  std::optional<std::uint64_t> formula;
  std::uint64_t value() const { return enumerated ? *enumerated : *formula; }
};

// |GL_n(R)| by counting invertible matrices and/or |GL_n(R/J)| * |J|^(n^2).
// Throws CapExceeded if enumeration is requested beyond limits.matrix_cap.
GroupOrder group_order(const GLContext& ctx, OrderMode mode, const Limits& limits = {});

// Codes of all matrices in canonical order satisfying `keep`, scanned in
// parallel chunks and merged in code order. The matrix code is the entry
// vector read big-endian in base |R|.
// `keep` runs concurrently on disjoint ranges and must not share mutable state.
using MatrixPredicate = std::function<bool(const Elem*)>;
std::vector<std::uint64_t> scan_matrices(const GLContext& ctx, const Limits& limits, const MatrixPredicate& keep);

void decode_matrix(const Ring& ring, int n, std::uint64_t code, Elem* out);
std::uint64_t encode_matrix(const Ring& ring, int n, const Elem* entries);

// GL_n(R) held in canonical order with products resolved by binary search.
class GLGroup {
 public:
  static GLGroup enumerate(const GLContext& ctx, const Limits& limits = {});

  const GLContext& context() const noexcept { return ctx_; }
  std::size_t size() const noexcept { return codes_.size(); }
  Mat element(std::size_t i) const;
  const Elem* data(std::size_t i) const { return entries_.data() + i * nn_; }
  std::optional<std::size_t> index_of(const Mat& m) const;
  std::optional<std::size_t> index_of_entries(const Elem* entries) const;
  std::size_t identity_index() const noexcept { return identity_; }
  std::size_t mul(std::size_t a, std::size_t b) const;
  std::size_t inverse(std::size_t a) const;
  // Multiplicative order of element i (computed once for the whole group).
  std::uint32_t element_order(std::size_t i) const;

 private:
  explicit GLGroup(const GLContext& ctx) : ctx_(ctx) {}

  GLContext ctx_;
  std::size_t nn_ = 0;
  std::vector<std::uint64_t> codes_;
  std::vector<Elem> entries_;
  std::size_t identity_ = 0;
  mutable std::vector<std::uint32_t> orders_;
};

}  // namespace glocal
