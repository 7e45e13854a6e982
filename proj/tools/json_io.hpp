#pragma once

// JSON forms of the library's values, shared by the CLI and the tests.

#include "glocal/involution.hpp"
#include "glocal/matrix.hpp"
#include "glocal/relations.hpp"
#include "glocal/ring.hpp"
#include "glocal/substructure.hpp"

#include "json.hpp"

namespace glocal::io {

using json = nlohmann::ordered_json;

// A matrix is an array of rows; entries are element strings (integers are
// accepted on input). Throws ParseError.
json to_json(const Mat& m);
Mat mat_from_json(const RingPtr& ring, const json& j);
std::vector<Mat> mats_from_json(const RingPtr& ring, const json& j);

json to_json(const LocalityReport& r);
json to_json(const InvolutionForm& f);
json to_json(const SimultaneousForm& f);
json to_json(const MIFrame& f);
json to_json(const CommutingInvolutions& c);
json to_json(const RelationReport& r);
json to_json(const ConstraintSolutionSet& s);
json to_json(const ReconstructedRing& r);
json to_json(const InverseTransposeReport& r);
json to_json(const PartialStructure& p);
PartialStructure partial_from_json(const json& j);
json to_json(const GroupInvariants& g);
json to_json(const DeskCheck& d);

std::string status_name(EmbedStatus s);

// "gl:<ringspec>:n=<k>". Throws BadSpec.
GLContext parse_target(const std::string& text);

}  // namespace glocal::io
