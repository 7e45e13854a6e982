#pragma once

// Matrix identities relating sigma_12, sigma_23, D and transvections, the
// constraint systems they impose on images of those matrices, and the
// reconstruction of the ring from the transvection subgroup.

#include "glocal/matrix.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace glocal {

// An identity lhs(params) == rhs(params) over the ring parameters `params`.
struct Identity {
  std::string name;
  int arity = 0;
  std::function<std::pair<Mat, Mat>(std::span<const Elem>)> sides;
};

struct Counterexample {
  std::vector<Elem> params;
  Mat lhs;
  Mat rhs;
};

struct RelationReport {
  std::string identity;
  std::string ring;
  int n = 0;
  std::string range;
  std::uint64_t checked = 0;
  bool pass = true;
  std::optional<Counterexample> counterexample;
};

// sigma_12 commutes with I_k (k > 2), squares to E, conjugates I_1 to I_2;
// likewise for sigma_23 with I_2, I_3. `sigma12` replaces the standard
// sigma_12 when given. Throws BadIndex when n < 3.
std::vector<Identity> sigma_identities(const GLContext& ctx, const std::optional<Mat>& sigma12 = std::nullopt);

// (diag), (units), (rockstar), (sigma) and their one-parameter versions.
std::vector<Identity> transvection_identities(const GLContext& ctx);

// Addition, commutator and conjugation identities that tie ring operations
// to products of transvections.
std::vector<Identity> closing_identities(const GLContext& ctx);

// Checks each identity on every parameter tuple drawn from `values`.
RelationReport check_identity(const GLContext& ctx, const Identity& id, std::span<const Elem> values,
                              const std::string& range);

std::vector<RelationReport> verify_sigma_relations(const GLContext& ctx,
                                                   const std::optional<Mat>& sigma12 = std::nullopt);
std::vector<RelationReport> verify_transvection_relations(const GLContext& ctx, std::span<const Elem> alphas);
std::vector<RelationReport> verify_closing_identities(const GLContext& ctx, std::span<const Elem> alphas);

// Re-evaluates a failing report at its counterexample. True when the
// counterexample still violates the identity and reproduces both sides.
bool recheck(const GLContext& ctx, const RelationReport& report,
             const std::optional<Mat>& sigma12 = std::nullopt);

struct ConstraintSolution {
  Mat matrix;
  std::optional<Mat> diagonal_image;  // first D image satisfying the system, if any
  std::uint64_t diagonal_images = 0;  // number of such D images
  std::vector<std::string> branches;
  std::map<std::string, bool> flags;
};

struct ConstraintSolutionSet {
  std::string lemma;
  std::string ring;
  int n = 3;
  int family_size = 1;
  std::vector<std::string> equations;
  std::vector<std::string> branches;
  std::map<std::string, std::uint64_t> branch_counts;
  std::uint64_t candidates = 0;
  std::uint64_t tuples = 0;  // family solver: admissible k-tuples
  std::vector<ConstraintSolution> solutions;
  bool all_classified = true;
};

// Images of sigma_12: block matrices d with d I_k = I_k d (k > 2), d^2 = E,
// d I_1 d = I_2, with both sign branches for I_1, I_2 (up to -E).
ConstraintSolutionSet solve_sigma_image_constraints(const RingPtr& ring, const Limits& limits = {});

// Images t of E + E_12 and diag[a_1, a_2, a_3] of D satisfying (diag),
// (units), (rockstar), (sigma), over both sign branches of the +-1 entries of
// the sigma_12 and sigma_23 images.
ConstraintSolutionSet solve_transvection_image_constraints(const RingPtr& ring, const Limits& limits = {});

// Images s of E + a E_12 commuting with E + E_12 and I_3, with
// (I_2 s)^2 = E and d s d^-1 = s^2 for some diagonal unit d shared by the
// family; `family_size` members must pairwise commute.
ConstraintSolutionSet solve_commuting_family_constraints(const RingPtr& ring, int family_size = 1,
                                                         const Limits& limits = {});

// Re-evaluates every solution against the lemma's equations from scratch.
bool recheck(const RingPtr& ring, const ConstraintSolutionSet& set);

struct ReconstructedRing {
  std::string ring;
  std::vector<Mat> carrier;  // E + a E_12, in the ring's element order
  std::vector<std::vector<std::uint32_t>> add;
  std::vector<std::vector<std::uint32_t>> mul;
  bool closed = true;                   // every table entry landed in the carrier
  bool isomorphic = false;              // tables equal the ring's under a -> E + a E_12
  bool swapped_order_matches = false;   // the b-then-a route also reproduces a*b
  std::string addition_route;
  std::string multiplication_route;
};

// Addition is the product (E + a E_12)(E + b E_12). Multiplication moves
// E + b E_12 to E + b E_23 by sigma_12 sigma_23 conjugation, takes the
// commutator [E + a E_12, E + b E_23] = E + ab E_13 and moves back to the
// (1,2) slot by sigma_23 conjugation. Throws CapExceeded past the element cap.
ReconstructedRing reconstruct_ring(const GLContext& ctx, const Limits& limits = {});

enum class CheckMode { exhaustive, sampled };

struct InverseTransposeReport {
  std::string group;
  CheckMode mode = CheckMode::sampled;
  bool bijective = true;
  bool multiplicative = true;
  std::uint64_t elements = 0;
  std::uint64_t pairs_checked = 0;
  std::optional<std::pair<Mat, Mat>> witness;  // a, b with phi(ab) != phi(a)phi(b)
  std::optional<Mat> non_invertible_transpose;

  bool automorphism() const { return bijective && multiplicative; }
};

// phi(x) = (x^T)^-1. Exhaustive mode walks all pairs of GL_n(R) (pair count
// bounded by limits.budget); sampled mode uses elementary, diagonal and
// permutation generators plus `samples` random products.
InverseTransposeReport inverse_transpose_check(const GLContext& ctx, CheckMode mode, std::uint64_t seed = 0,
                                               std::size_t samples = 200, const Limits& limits = {});

}  // namespace glocal
