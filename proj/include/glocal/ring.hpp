#pragma once

// Finite local rings with exact arithmetic.
//
// Every ring in the catalog is one of
//   zmod:<n>       Z/nZ for n = p^k
//   gf:<q>         the finite field with q elements
//   dual:<q>:<k>   GF(q)[t]/(t^k)
//   twist:<q>:<r>  GF(q)[t; s]/(t^2) with t*a = s(a)*t, s = Frobenius^r
// optionally followed by "!nohalf" to admit rings in which 2 is not a unit.
//
// Elements are dense codes in [0, order). For zmod the code is the least
// residue. For the other kinds an element is a coefficient vector over the
// prime field, flattened in monomial order (t^0 block first, inside each
// block u^0 first) and read big-endian, so code order is lexicographic order
// on the coefficient vector.

#include "glocal/error.hpp"

#include <compare>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace glocal {

enum class RingKind { zmod, gf, dual, twist };

struct RingSpec {
  RingKind kind = RingKind::zmod;
  std::uint32_t prime = 0;
  std::uint32_t exponent = 1;         // zmod: n = prime^exponent
  std::uint32_t field_size = 0;       // gf/dual/twist: q
  std::uint32_t nil_index = 1;        // dual: k in t^k = 0
  std::uint32_t frobenius_power = 0;  // twist: r
  bool allow_no_half = false;

  static RingSpec parse(std::string_view text);
  std::string str() const;

  bool operator==(const RingSpec&) const = default;
};

struct Elem {
  std::uint32_t code = 0;
  auto operator<=>(const Elem&) const = default;
};

class Ring;
using RingPtr = std::shared_ptr<const Ring>;

class Ring {
 public:
  static RingPtr make(const RingSpec& spec);
  static RingPtr make(std::string_view spec) { return make(RingSpec::parse(spec)); }

  const RingSpec& spec() const noexcept { return spec_; }
  std::string name() const { return spec_.str(); }

  std::uint64_t order() const noexcept { return order_; }
  std::uint64_t characteristic() const noexcept { return characteristic_; }
  std::uint64_t residue_field_size() const noexcept { return residue_size_; }
  std::uint64_t radical_size() const noexcept { return order_ / residue_size_; }
  bool commutative() const noexcept { return commutative_; }
  bool has_half() const noexcept { return has_half_; }

  Elem zero() const noexcept { return {0}; }
  Elem one() const noexcept { return one_; }
  Elem from_int(long long value) const;
  Elem at(std::uint64_t code) const;

  Elem add(Elem a, Elem b) const {
    return tabled_ ? Elem{add_[a.code * order_ + b.code]} : slow_add(a, b);
  }
  Elem mul(Elem a, Elem b) const {
    return tabled_ ? Elem{mul_[a.code * order_ + b.code]} : slow_mul(a, b);
  }
  Elem neg(Elem a) const { return tabled_ ? Elem{neg_[a.code]} : slow_neg(a); }
  Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }

  bool is_unit(Elem a) const;
  bool radical_member(Elem a) const { return !is_unit(a); }
  // Throws NotAUnit.
  Elem inverse(Elem a) const;
  // Throws NoHalf when 2 is not a unit.
  Elem half() const;
  Elem pow(Elem a, std::uint64_t e) const;

  // Image in the residue field R/J, an element of residue_field().
  Elem residue(Elem a) const;
  const RingPtr& residue_field() const;

  std::string format(Elem a) const;
  Elem parse(std::string_view text) const;

  // All elements in code order. Throws CapExceeded past `cap`.
  std::vector<Elem> elements(std::uint64_t cap = Limits{}.element_cap) const;

  bool operator==(const Ring& other) const { return spec_ == other.spec_; }

 private:
  explicit Ring(const RingSpec& spec);

  // Componentwise view: `components_` coordinates, each an element of the
  // coefficient field GF(q) (or a residue for zmod).
  std::vector<std::uint32_t> split(Elem a) const;
  Elem join(const std::vector<std::uint32_t>& parts) const;

  Elem slow_add(Elem a, Elem b) const;
  Elem slow_mul(Elem a, Elem b) const;
  Elem slow_neg(Elem a) const;

  std::uint32_t f_add(std::uint32_t a, std::uint32_t b) const { return field_add_[a * field_q_ + b]; }
  std::uint32_t f_mul(std::uint32_t a, std::uint32_t b) const { return field_mul_[a * field_q_ + b]; }

  RingSpec spec_;
  std::uint64_t order_ = 0;
  std::uint64_t characteristic_ = 0;
  std::uint64_t residue_size_ = 0;
  bool commutative_ = true;
  bool has_half_ = false;
  Elem one_{};

  // Coefficient field GF(q) tables (unused for zmod).
  std::uint32_t field_q_ = 0;
  std::uint32_t field_one_ = 0;
  std::vector<std::uint32_t> field_add_, field_mul_, field_neg_, frobenius_;
  std::uint32_t components_ = 1;
  std::uint32_t digits_ = 1;  // prime digits per element

  bool tabled_ = false;
  std::vector<std::uint32_t> add_, mul_, neg_;
  mutable RingPtr residue_field_;
};

// Pointer-level identity check used by matrices and groups.
inline bool same_ring(const RingPtr& a, const RingPtr& b) {
  return a == b || (a && b && *a == *b);
}

// Catalog of rings exercised by the exhaustive suites.
std::vector<std::string> ring_catalog();

struct LocalityReport {
  bool local = false;
  std::uint64_t unit_count = 0;
  std::uint64_t radical_size = 0;
  std::uint64_t residue_field_size = 0;
  bool residue_is_field = false;
  bool two_is_unit = false;
  std::string residue_field;
  std::string failure;
};

// Exhaustively determines the units by inverse search and checks that the
// non-units form a two-sided ideal with R/J a (skew) field.
LocalityReport verify_local(const Ring& ring, std::uint64_t cap = Limits{}.element_cap);

// All x with x*x = 1 by exhaustive scan.
std::vector<Elem> sqrt_one(const Ring& ring, std::uint64_t cap = Limits{}.element_cap);

}  // namespace glocal
