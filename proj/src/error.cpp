#include "glocal/error.hpp"

namespace glocal {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::bad_spec: return "BadSpec";
    case Errc::no_half: return "NoHalf";
    case Errc::not_a_unit: return "NotAUnit";
    case Errc::cap_exceeded: return "CapExceeded";
    case Errc::budget_exceeded: return "BudgetExceeded";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::ring_mismatch: return "RingMismatch";
    case Errc::not_invertible: return "NotInvertible";
    case Errc::bad_index: return "BadIndex";
    case Errc::not_involution: return "NotInvolution";
    case Errc::not_commuting: return "NotCommuting";
    case Errc::parse: return "ParseError";
  }
  return "Error";
}

}  // namespace glocal
