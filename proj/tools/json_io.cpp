#include "json_io.hpp"

namespace glocal::io {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(Errc::parse, what); }

Elem elem_from_json(const Ring& R, const json& j) {
  if (j.is_number_integer()) return R.from_int(j.get<long long>());
  if (j.is_string()) return R.parse(j.get<std::string>());
  bad("matrix entry must be a string or an integer");
}

json mats(const std::vector<Mat>& ms) {
  json a = json::array();
  for (const auto& m : ms) a.push_back(to_json(m));
  return a;
}

json elems(const Ring& R, std::span<const Elem> es) {
  json a = json::array();
  for (auto e : es) a.push_back(R.format(e));
  return a;
}

}  // namespace

json to_json(const Mat& m) {
  json rows = json::array();
  for (int i = 0; i < m.n(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.n(); ++j) row.push_back(m.r().format(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Mat mat_from_json(const RingPtr& ring, const json& j) {
  if (!j.is_array() || j.empty()) bad("matrix must be a non-empty array of rows");
  const int n = static_cast<int>(j.size());
  Mat m(ring, n);
  for (int i = 0; i < n; ++i) {
    if (!j[i].is_array() || static_cast<int>(j[i].size()) != n) bad("matrix must be square");
    for (int k = 0; k < n; ++k) m(i, k) = elem_from_json(*ring, j[i][k]);
  }
  return m;
}

std::vector<Mat> mats_from_json(const RingPtr& ring, const json& j) {
  if (!j.is_array()) bad("expected an array of matrices");
  std::vector<Mat> out;
  for (const auto& m : j) out.push_back(mat_from_json(ring, m));
  return out;
}

json to_json(const LocalityReport& r) {
  json j;
  j["local"] = r.local;
  j["unit_count"] = r.unit_count;
  j["radical_size"] = r.radical_size;
  j["residue_field_size"] = r.residue_field_size;
  j["residue_field"] = r.residue_field;
  j["residue_is_field"] = r.residue_is_field;
  j["two_is_unit"] = r.two_is_unit;
  j["failure"] = r.failure.empty() ? json(nullptr) : json(r.failure);
  return j;
}

json to_json(const InvolutionForm& f) {
  json j;
  j["conjugator"] = to_json(f.conjugator);
  j["diagonal"] = to_json(f.diagonal());
  j["signature"] = {{"plus", f.signature.plus}, {"minus", f.signature.minus}};
  return j;
}

json to_json(const SimultaneousForm& f) {
  json j;
  j["conjugator"] = to_json(f.conjugator);
  j["diagonal"] = mats(f.diagonal);
  return j;
}

json to_json(const MIFrame& f) {
  json j;
  j["basis"] = to_json(f.basis);
  j["members"] = mats(f.members);
  j["masks"] = f.masks;
  j["classes"] = f.classes;
  j["marked_minus_counts"] = f.marked_minus_counts;
  return j;
}

json to_json(const CommutingInvolutions& c) {
  json j;
  j["max"] = c.max;
  j["exact"] = c.exact;
  j["involutions"] = c.involution_count;
  j["witness"] = mats(c.witness);
  return j;
}

json to_json(const RelationReport& r) {
  json j;
  j["identity"] = r.identity;
  j["ring"] = r.ring;
  j["n"] = r.n;
  j["range"] = r.range;
  j["checked"] = r.checked;
  j["pass"] = r.pass;
  if (r.counterexample) {
    const auto& cx = *r.counterexample;
    const Ring& R = cx.lhs.r();
    j["counterexample"] = {{"params", elems(R, cx.params)}, {"lhs", to_json(cx.lhs)}, {"rhs", to_json(cx.rhs)}};
  } else {
    j["counterexample"] = nullptr;
  }
  return j;
}

json to_json(const ConstraintSolutionSet& s) {
  json j;
  j["lemma"] = s.lemma;
  j["ring"] = s.ring;
  j["n"] = s.n;
  j["family_size"] = s.family_size;
  j["equations"] = s.equations;
  j["branches"] = s.branches;
  j["branch_counts"] = s.branch_counts;
  j["candidates"] = s.candidates;
  j["tuples"] = s.tuples;
  j["all_classified"] = s.all_classified;
  json sols = json::array();
  for (const auto& x : s.solutions) {
    json e;
    e["matrix"] = to_json(x.matrix);
    e["diagonal_image"] = x.diagonal_image ? to_json(*x.diagonal_image) : json(nullptr);
    e["diagonal_images"] = x.diagonal_images;
    e["branches"] = x.branches;
    e["flags"] = x.flags;
    sols.push_back(std::move(e));
  }
  j["solutions"] = std::move(sols);
  return j;
}

json to_json(const ReconstructedRing& r) {
  json j;
  j["ring"] = r.ring;
  j["carrier"] = mats(r.carrier);
  j["addition_route"] = r.addition_route;
  j["multiplication_route"] = r.multiplication_route;
  j["closed"] = r.closed;
  j["isomorphic"] = r.isomorphic;
  j["swapped_order_matches"] = r.swapped_order_matches;
  j["add"] = r.add;
  j["mul"] = r.mul;
  return j;
}

json to_json(const InverseTransposeReport& r) {
  json j;
  j["group"] = r.group;
  j["mode"] = r.mode == CheckMode::exhaustive ? "exhaustive" : "sampled";
  j["automorphism"] = r.automorphism();
  j["bijective"] = r.bijective;
  j["multiplicative"] = r.multiplicative;
  j["elements"] = r.elements;
  j["pairs_checked"] = r.pairs_checked;
  j["witness"] = r.witness ? json::array({to_json(r.witness->first), to_json(r.witness->second)}) : json(nullptr);
  j["non_invertible_transpose"] =
      r.non_invertible_transpose ? to_json(*r.non_invertible_transpose) : json(nullptr);
  return j;
}

json to_json(const PartialStructure& p) {
  json j;
  j["elements"] = p.labels();
  j["prod"] = p.prod();
  j["inv"] = p.inv();
  j["id"] = p.id() ? json(*p.id()) : json(nullptr);
  return j;
}

PartialStructure partial_from_json(const json& j) {
  try {
    std::optional<std::uint32_t> id;
    if (!j.at("id").is_null()) id = j.at("id").get<std::uint32_t>();
    return PartialStructure(j.at("elements").get<std::vector<std::string>>(),
                            j.at("prod").get<std::vector<std::array<std::uint32_t, 3>>>(),
                            j.at("inv").get<std::vector<std::array<std::uint32_t, 2>>>(), id);
  } catch (const json::exception& e) {
    bad(std::string("partial structure JSON: ") + e.what());
  }
}

json to_json(const GroupInvariants& g) {
  json j;
  j["group"] = g.group;
  j["group-order"] = g.order;
  j["involution-count"] = g.involutions;
  j["max-commuting-involutions"] = g.max_commuting;
  j["mi-exponent"] = g.mi_exponent;
  return j;
}

json to_json(const DeskCheck& d) {
  json j;
  j["first"] = to_json(d.first);
  j["second"] = to_json(d.second);
  j["distinguished"] = d.distinguished;
  j["separator"] = d.distinguished ? json(d.separator) : json(nullptr);
  j["separating"] = d.separating;
  j["frame_bound_holds"] = d.frame_bound_holds ? json(*d.frame_bound_holds) : json(nullptr);
  j["verdict"] = d.distinguished ? "distinguished" : "not distinguished at this level";
  return j;
}

std::string status_name(EmbedStatus s) {
  switch (s) {
    case EmbedStatus::found: return "found";
    case EmbedStatus::no_embedding: return "no_embedding";
    case EmbedStatus::budget_exceeded: return "budget_exceeded";
  }
  return "?";
}

GLContext parse_target(const std::string& text) {
  auto fail = [&] { throw Error(Errc::bad_spec, "target must look like gl:<ring>:n=<k>, got '" + text + "'"); };
  if (!text.starts_with("gl:")) fail();
  auto cut = text.rfind(":n=");
  if (cut == std::string::npos || cut <= 3) fail();
  int n = 0;
  try {
    std::size_t used = 0;
    n = std::stoi(text.substr(cut + 3), &used);
    if (used != text.size() - cut - 3) fail();
  } catch (const std::logic_error&) {
    fail();
  }
  if (n < 1) fail();
  return GLContext(Ring::make(text.substr(3, cut - 3)), n);
}

}  // namespace glocal::io
