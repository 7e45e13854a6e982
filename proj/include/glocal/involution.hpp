#pragma once

#include "glocal/matrix.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace glocal {

struct Signature {
  int plus = 0;   // t
  int minus = 0;  // s
  bool operator==(const Signature&) const = default;
};

// conjugator * I * conjugator^-1 == diag(1 x t, -1 x s).
struct InvolutionForm {
  Mat conjugator;
  Signature signature;

  Mat diagonal() const;
};

// Splits the space into the +1 and -1 eigenmodules through the projectors
// (E + I)/2 and (E - I)/2 and takes a basis from their columns.
// Throws NotInvolution, NoHalf.
InvolutionForm canonical_form(const Mat& involution);

struct SimultaneousForm {
  Mat conjugator;              // C with C * I_j * C^-1 diagonal for all j
  std::vector<Mat> diagonal;   // C * I_j * C^-1, in input order
};

// Throws NotInvolution, NotCommuting, NoHalf.
SimultaneousForm simultaneous_diagonalize(std::span<const Mat> involutions);

// The 2^n - 1 diagonal +-1 involutions other than E.
//
// Members are ordered by their sign mask: bit k-1 set means -1 at position k,
// masks 1 .. 2^n - 1. classes[j - 1] lists the members with exactly j minus
// signs. Both n-element classes (one minus sign, n - 1 minus signs) are
// marked; the frame does not pick one of them.
struct MIFrame {
  Mat basis;
  std::vector<Mat> members;
  std::vector<std::uint32_t> masks;
  std::vector<std::vector<std::size_t>> classes;
  std::vector<int> marked_minus_counts;
  std::vector<Mat> single_flips;      // I_k, one -1 at place k
  std::vector<Mat> co_single_flips;   // one +1 at place k

  std::size_t size() const noexcept { return members.size(); }
};

MIFrame mi_frame(const GLContext& ctx);

// Every x != E with x^2 = E, in canonical order.
std::vector<Mat> involutions(const GLContext& ctx, const Limits& limits = {});

enum class CliqueMode { exhaustive, greedy_certified };

struct CommutingInvolutions {
  std::size_t max = 0;
  bool exact = false;           // false: greedy-certified lower bound only
  std::size_t involution_count = 0;
  std::vector<Mat> witness;
};

// Largest set of pairwise commuting involutions in GL_n(R). Exhaustive mode
// runs a maximum clique search on the commutation graph of all involutions;
// greedy-certified mode only verifies the diagonal frame and reports 2^n - 1
// as a lower bound, without enumerating the group.
CommutingInvolutions max_commuting_involutions(const GLContext& ctx, CliqueMode mode,
                                               const Limits& limits = {});

// Simple undirected graph on dense vertex ids with bitset rows.
class BitGraph {
 public:
  explicit BitGraph(std::size_t n);
  std::size_t size() const noexcept { return n_; }
  void add_edge(std::size_t a, std::size_t b);
  bool adjacent(std::size_t a, std::size_t b) const { return (rows_[a][b >> 6] >> (b & 63)) & 1; }
  std::size_t degree(std::size_t v) const;

 private:
  std::size_t n_;
  std::vector<std::vector<std::uint64_t>> rows_;
};

// Maximum clique by branch and bound with greedy colouring bounds; vertices
// are visited by non-increasing degree. Returns the first maximum clique met,
// sorted ascending.
std::vector<std::size_t> maximum_clique(const BitGraph& g);

}  // namespace glocal
