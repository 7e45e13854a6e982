#pragma once

// Finite partial substructures of matrix groups and an embedding search that
// decides whether one is isomorphic to an induced substructure of another.

#include "glocal/involution.hpp"
#include "glocal/matrix.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace glocal {

// A finite set with the group product and inverse restricted to the tuples
// whose results stay inside the set.
class PartialStructure {
 public:
  static constexpr std::uint32_t none = 0xffffffffu;

  PartialStructure() = default;
  // Validates functionality and the identity laws; throws ParseError.
  PartialStructure(std::vector<std::string> labels, std::vector<std::array<std::uint32_t, 3>> prod,
                   std::vector<std::array<std::uint32_t, 2>> inv, std::optional<std::uint32_t> id);

  std::size_t size() const noexcept { return labels_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  // Sorted triples (a, b, c) with a b = c and pairs (a, b) with a^-1 = b.
  const std::vector<std::array<std::uint32_t, 3>>& prod() const noexcept { return prod_; }
  const std::vector<std::array<std::uint32_t, 2>>& inv() const noexcept { return inv_; }
  std::optional<std::uint32_t> id() const noexcept { return id_; }

  std::uint32_t product(std::uint32_t a, std::uint32_t b) const { return prod_table_[a * size() + b]; }
  std::uint32_t inverse(std::uint32_t a) const { return inv_table_[a]; }
  // Number of relation facts mentioning a.
  std::size_t degree(std::uint32_t a) const;

 private:
  std::vector<std::string> labels_;
  std::vector<std::array<std::uint32_t, 3>> prod_;
  std::vector<std::array<std::uint32_t, 2>> inv_;
  std::optional<std::uint32_t> id_;
  std::vector<std::uint32_t> prod_table_;
  std::vector<std::uint32_t> inv_table_;
};

// Induced partial structure on a set of matrices from one GL_n(R). Repeated
// matrices are kept once, at their first position. Labels are Mat::str().
// Throws RingMismatch, DimensionMismatch, NotInvertible.
PartialStructure restrict(std::span<const Mat> elements);

// Something to embed into: a group or another partial structure.
class EmbeddingTarget {
 public:
  virtual ~EmbeddingTarget() = default;
  virtual std::size_t size() const = 0;
  virtual std::optional<std::size_t> mul(std::size_t a, std::size_t b) const = 0;
  virtual std::optional<std::size_t> inv(std::size_t a) const = 0;
  virtual std::optional<std::size_t> identity() const = 0;
};

class GroupTarget final : public EmbeddingTarget {
 public:
  explicit GroupTarget(const GLGroup& g) : g_(g) {}
  std::size_t size() const override { return g_.size(); }
  std::optional<std::size_t> mul(std::size_t a, std::size_t b) const override { return g_.mul(a, b); }
  std::optional<std::size_t> inv(std::size_t a) const override { return g_.inverse(a); }
  std::optional<std::size_t> identity() const override { return g_.identity_index(); }

 private:
  const GLGroup& g_;
};

class PartialTarget final : public EmbeddingTarget {
 public:
  explicit PartialTarget(const PartialStructure& p) : p_(p) {}
  std::size_t size() const override { return p_.size(); }
  std::optional<std::size_t> mul(std::size_t a, std::size_t b) const override;
  std::optional<std::size_t> inv(std::size_t a) const override;
  std::optional<std::size_t> identity() const override;

 private:
  const PartialStructure& p_;
};

enum class EmbedStatus { found, no_embedding, budget_exceeded };

struct EmbedResult {
  EmbedStatus status = EmbedStatus::no_embedding;
  std::vector<std::size_t> images;  // target index per source element when found
  std::uint64_t attempts = 0;
};

// Backtracking with forward checking. The result is the first embedding with
// source elements taken by descending degree and target candidates in index
// order; budget counts candidate assignments.
EmbedResult embed(const PartialStructure& p, const EmbeddingTarget& target, std::uint64_t budget);

// True when `images` realises p as an induced substructure of the target.
bool verify_embedding(const PartialStructure& p, const EmbeddingTarget& target,
                      std::span<const std::size_t> images);

struct Embedding {
  EmbedStatus status = EmbedStatus::no_embedding;
  std::vector<Mat> images;
  std::uint64_t attempts = 0;
};

// Enumerates GL_n(R) (throws CapExceeded) and embeds p into it.
Embedding find_embedding(const PartialStructure& p, const GLContext& target, const Limits& limits = {});

bool is_isomorphic_partial(const PartialStructure& p, const PartialStructure& q,
                           std::uint64_t budget = Limits{}.budget);

struct GroupInvariants {
  std::string group;
  std::uint64_t order = 0;
  std::uint64_t involutions = 0;
  std::uint64_t max_commuting = 0;
  std::uint64_t mi_exponent = 0;  // exponent of the subgroup generated by the frame
};

struct DeskCheck {
  GroupInvariants first, second;
  bool distinguished = false;
  std::string separator;                   // first differing invariant, or empty
  std::vector<std::string> separating;     // all differing invariants
  std::optional<bool> frame_bound_holds;   // n != m: max commuting == 2^n - 1 on both sides
};

// Invariant names in the order separators are reported.
inline constexpr std::array<const char*, 4> kInvariantNames{"max-commuting-involutions", "group-order",
                                                            "involution-count", "mi-exponent"};

GroupInvariants group_invariants(const GLContext& ctx, const Limits& limits = {});
DeskCheck desk_check_theorem(const GLContext& a, const GLContext& b, const Limits& limits = {});

}  // namespace glocal
