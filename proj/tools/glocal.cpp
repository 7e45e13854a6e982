// glocal: command-line front end. JSON on stdout, progress on stderr.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or input error,
// 3 cap or budget exceeded.

#include "json_io.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace glocal;
using io::json;

namespace {

constexpr const char* kVersion = "glocal 1.0.0";

struct Outcome {
  json out;
  int code = 0;
};

struct Globals {
  bool quiet = false;
  std::uint64_t seed = 0;
  Limits limits;
  std::string manifest;
  std::vector<std::string> rings;
};

int exit_code(Errc c) {
  switch (c) {
    case Errc::cap_exceeded:
    case Errc::budget_exceeded: return 3;
    case Errc::not_a_unit:
    case Errc::not_invertible:
    case Errc::not_involution:
    case Errc::not_commuting: return 1;
    default: return 2;
  }
}

std::string fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::parse, "cannot read " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(Errc::parse, path + ": " + e.what());
  }
}

// An argument holding either a JSON literal or a path to a JSON file.
json json_arg(const std::string& text) {
  auto first = text.find_first_not_of(" \t\n");
  if (first != std::string::npos && (text[first] == '[' || text[first] == '{')) {
    try {
      return json::parse(text);
    } catch (const json::exception& e) {
      throw Error(Errc::parse, e.what());
    }
  }
  return read_json_file(text);
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::parse, "cannot write " + path);
  out << j.dump(2) << "\n";
}

// One invocation: parses `args` (without the program name), runs the chosen
// command and leaves its JSON in `primary`.
int run(const std::vector<std::string>& args, std::string& primary);

int replay(const std::string& path, std::optional<unsigned> workers, bool quiet, std::string& primary) {
  json m = read_json_file(path);
  std::vector<std::string> args;
  try {
    auto stored = m.at("argv").get<std::vector<std::string>>();
    for (std::size_t i = 0; i < stored.size(); ++i) {
      if (stored[i] == "--manifest") {
        ++i;
        continue;
      }
      if (workers && stored[i] == "--workers") {
        ++i;
        continue;
      }
      args.push_back(stored[i]);
    }
  } catch (const json::exception& e) {
    throw Error(Errc::parse, "manifest: " + std::string(e.what()));
  }
  if (workers) {
    args.push_back("--workers");
    args.push_back(std::to_string(*workers));
  }
  int code = run(args, primary);
  bool same = fnv1a(primary) == m.value("output_digest", std::string());
  if (!quiet) std::cerr << "glocal: replay " << (same ? "reproduced" : "DIFFERS FROM") << " the recorded output\n";
  return same ? code : 1;
}

int run(const std::vector<std::string>& args, std::string& primary) {
  Globals g;
  CLI::App app{"Exact algebra over finite local rings: GL_n, involutions, relations, substructures", "glocal"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", kVersion);
  app.add_flag("-q,--quiet", g.quiet, "no progress on stderr");
  app.add_option("--seed", g.seed, "seed for sampled modes")->capture_default_str();
  app.add_option("--cap", g.limits.element_cap, "ring element cap")->capture_default_str();
  app.add_option("--matrix-cap", g.limits.matrix_cap, "matrix enumeration cap")->capture_default_str();
  app.add_option("--budget", g.limits.budget, "search budget")->capture_default_str();
  app.add_option("--workers", g.limits.workers, "worker threads")->capture_default_str()->check(CLI::Range(1u, 256u));
  app.add_option("--manifest", g.manifest, "write a run manifest to this path");

  std::function<Outcome()> action;
  std::string command;
  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help) {
    auto* s = parent->add_subcommand(name, help);
    s->fallthrough();
    return s;
  };
  auto ring_of = [&](const std::string& spec) {
    g.rings.push_back(spec);
    return Ring::make(spec);
  };
  auto ctx_of = [&](const std::string& spec, int n) {
    if (n < 1) throw Error(Errc::bad_index, "n must be positive");
    return GLContext(ring_of(spec), n);
  };

  std::string ring, ring2, matrix, matrix2, suite = "all", lemma, in, out, ps, ps2, target;
  int n = 0, m = 0, k = 1;
  std::size_t samples = 200;
  std::string replay_path;

  // ring ...
  auto* ring_cmd = app.add_subcommand("ring", "ring operations")->require_subcommand(1);
  ring_cmd->fallthrough();
  auto* ring_info = leaf(ring_cmd, "info", "ring parameters");
  ring_info->add_option("--ring", ring)->required();
  ring_info->callback([&] {
    action = [&] {
      auto R = ring_of(ring);
      json j;
      j["ring"] = R->name();
      j["order"] = R->order();
      j["characteristic"] = R->characteristic();
      j["residue_field"] = R->residue_field()->name();
      j["residue_field_size"] = R->residue_field_size();
      j["radical_size"] = R->radical_size();
      j["commutative"] = R->commutative();
      j["has_half"] = R->has_half();
      return Outcome{j, 0};
    };
  });
  auto* sqrt_cmd = leaf(ring_cmd, "sqrt-one", "all x with x^2 = 1");
  sqrt_cmd->add_option("--ring", ring)->required();
  sqrt_cmd->callback([&] {
    action = [&] {
      auto R = ring_of(ring);
      json sols = json::array();
      for (auto x : sqrt_one(*R, g.limits.element_cap)) sols.push_back(R->format(x));
      return Outcome{json{{"solutions", sols}}, 0};
    };
  });
  auto* local_cmd = leaf(ring_cmd, "verify-local", "exhaustive locality check");
  local_cmd->add_option("--ring", ring)->required();
  local_cmd->callback([&] {
    action = [&] {
      auto R = ring_of(ring);
      auto rep = verify_local(*R, g.limits.element_cap);
      json j{{"ring", R->name()}};
      j.update(io::to_json(rep));
      return Outcome{j, rep.local ? 0 : 1};
    };
  });

  // gl ...
  auto* gl_cmd = app.add_subcommand("gl", "matrix group operations")->require_subcommand(1);
  gl_cmd->fallthrough();
  auto* order_cmd = leaf(gl_cmd, "order", "|GL_n(R)|");
  order_cmd->add_option("--ring", ring)->required();
  order_cmd->add_option("--n", n)->required();
  std::string order_mode = "both";
  order_cmd->add_option("--mode", order_mode)->check(CLI::IsMember({"enumerate", "formula", "both"}));
  order_cmd->callback([&] {
    action = [&] {
      auto ctx = ctx_of(ring, n);
      OrderMode om = order_mode == "enumerate" ? OrderMode::enumerate : order_mode == "formula" ? OrderMode::formula
                                                                                     : OrderMode::both;
      auto o = group_order(ctx, om, g.limits);
      json j;
      j["group"] = ctx.name();
      j["order"] = o.value();
      j["enumerated"] = o.enumerated ? json(*o.enumerated) : json(nullptr);
      j["formula"] = o.formula ? json(*o.formula) : json(nullptr);
      bool agree = !(o.enumerated && o.formula) || *o.enumerated == *o.formula;
      j["agree"] = agree;
      return Outcome{j, agree ? 0 : 1};
    };
  });
  auto* invert_cmd = leaf(gl_cmd, "invert", "matrix inverse");
  invert_cmd->add_option("--ring", ring)->required();
  invert_cmd->add_option("--matrix", matrix, "JSON matrix or file")->required();
  invert_cmd->callback([&] {
    action = [&] {
      auto R = ring_of(ring);
      Mat a = io::mat_from_json(R, json_arg(matrix));
      return Outcome{json{{"inverse", io::to_json(inverse(a))}}, 0};
    };
  });
  auto* mul_cmd = leaf(gl_cmd, "mul", "matrix product a*b");
  mul_cmd->add_option("--ring", ring)->required();
  mul_cmd->add_option("--a", matrix)->required();
  mul_cmd->add_option("--b", matrix2)->required();
  mul_cmd->callback([&] {
    action = [&] {
      auto R = ring_of(ring);
      Mat a = io::mat_from_json(R, json_arg(matrix)), b = io::mat_from_json(R, json_arg(matrix2));
      return Outcome{json{{"product", io::to_json(mul(a, b))}}, 0};
    };
  });

  // inv ...
  auto* inv_cmd = app.add_subcommand("inv", "involutions")->require_subcommand(1);
  inv_cmd->fallthrough();
  auto* canon_cmd = leaf(inv_cmd, "canon", "canonical form of an involution");
  canon_cmd->add_option("--ring", ring)->required();
  canon_cmd->add_option("--matrix", matrix)->required();
  canon_cmd->callback([&] {
    action = [&] {
      auto R = ring_of(ring);
      return Outcome{io::to_json(canonical_form(io::mat_from_json(R, json_arg(matrix)))), 0};
    };
  });
  auto* simdiag_cmd = leaf(inv_cmd, "simdiag", "simultaneous diagonalization");
  simdiag_cmd->add_option("--ring", ring)->required();
  simdiag_cmd->add_option("--matrices", matrix, "JSON array of matrices or file")->required();
  simdiag_cmd->callback([&] {
    action = [&] {
      auto R = ring_of(ring);
      auto ms = io::mats_from_json(R, json_arg(matrix));
      return Outcome{io::to_json(simultaneous_diagonalize(ms)), 0};
    };
  });
  auto* frame_cmd = leaf(inv_cmd, "frame", "diagonal frame of commuting involutions");
  frame_cmd->add_option("--ring", ring)->required();
  frame_cmd->add_option("--n", n)->required();
  frame_cmd->callback([&] {
    action = [&] { return Outcome{io::to_json(mi_frame(ctx_of(ring, n))), 0}; };
  });
  auto* maxc_cmd = leaf(inv_cmd, "max-commuting", "largest commuting involution set");
  maxc_cmd->add_option("--ring", ring)->required();
  maxc_cmd->add_option("--n", n)->required();
  std::string clique_mode = "exhaustive";
  maxc_cmd->add_option("--mode", clique_mode)->check(CLI::IsMember({"exhaustive", "greedy"}));
  maxc_cmd->callback([&] {
    action = [&] {
      auto ctx = ctx_of(ring, n);
      auto cm = clique_mode == "greedy" ? CliqueMode::greedy_certified : CliqueMode::exhaustive;
      return Outcome{io::to_json(max_commuting_involutions(ctx, cm, g.limits)), 0};
    };
  });

  // rel ...
  auto* rel_cmd = app.add_subcommand("rel", "relations")->require_subcommand(1);
  rel_cmd->fallthrough();
  auto* verify_cmd = leaf(rel_cmd, "verify", "check the relation suites over all ring elements");
  verify_cmd->add_option("--ring", ring)->required();
  verify_cmd->add_option("--n", n)->required();
  verify_cmd->add_option("--suite", suite)->check(CLI::IsMember({"all", "sigma", "transvection", "closing"}));
  verify_cmd->add_option("--sigma12", matrix, "replacement sigma_12 (JSON or file)");
  verify_cmd->callback([&] {
    action = [&] {
      auto ctx = ctx_of(ring, n);
      std::optional<Mat> s12;
      if (!matrix.empty()) s12 = io::mat_from_json(ctx.ring(), json_arg(matrix));
      auto els = ctx.ring()->elements(g.limits.element_cap);
      std::vector<RelationReport> reps;
      auto add = [&](std::vector<RelationReport> more) { reps.insert(reps.end(), more.begin(), more.end()); };
      if (suite == "all" || suite == "sigma") add(verify_sigma_relations(ctx, s12));
      if (suite == "all" || suite == "transvection") add(verify_transvection_relations(ctx, els));
      if (suite == "all" || suite == "closing") add(verify_closing_identities(ctx, els));
      json j = json::array();
      bool ok = true;
      for (const auto& r : reps) {
        j.push_back(io::to_json(r));
        ok = ok && r.pass;
      }
      return Outcome{j, ok ? 0 : 1};
    };
  });
  auto* solve_cmd = leaf(rel_cmd, "solve", "solve a constraint system at n = 3");
  solve_cmd->add_option("--ring", ring)->required();
  solve_cmd->add_option("--lemma", lemma)->required()->check(CLI::IsMember({"sigma", "transvection", "family"}));
  solve_cmd->add_option("--k", k, "family size")->check(CLI::Range(1, 3));
  solve_cmd->callback([&] {
    action = [&] {
      auto R = ring_of(ring);
      ConstraintSolutionSet s = lemma == "sigma"          ? solve_sigma_image_constraints(R, g.limits)
                                : lemma == "transvection" ? solve_transvection_image_constraints(R, g.limits)
                                                          : solve_commuting_family_constraints(R, k, g.limits);
      bool ok = s.all_classified && recheck(R, s);
      return Outcome{io::to_json(s), ok ? 0 : 1};
    };
  });
  auto* recon_cmd = leaf(rel_cmd, "reconstruct", "ring tables from transvections");
  recon_cmd->add_option("--ring", ring)->required();
  n = 3;
  recon_cmd->add_option("--n", n);
  recon_cmd->callback([&] {
    action = [&] {
      auto r = reconstruct_ring(ctx_of(ring, n), g.limits);
      return Outcome{io::to_json(r), r.isomorphic ? 0 : 1};
    };
  });
  auto* invt_cmd = leaf(rel_cmd, "invtrans", "is x -> (x^T)^-1 an automorphism");
  invt_cmd->add_option("--ring", ring)->required();
  invt_cmd->add_option("--n", n);
  std::string check_mode = "sampled";
  invt_cmd->add_option("--mode", check_mode)->check(CLI::IsMember({"exhaustive", "sampled"}));
  invt_cmd->add_option("--samples", samples);
  invt_cmd->callback([&] {
    action = [&] {
      auto cm = check_mode == "exhaustive" ? CheckMode::exhaustive : CheckMode::sampled;
      auto r = inverse_transpose_check(ctx_of(ring, n), cm, g.seed, samples, g.limits);
      return Outcome{io::to_json(r), r.automorphism() ? 0 : 1};
    };
  });

  // sub ...
  auto* sub_cmd = app.add_subcommand("sub", "partial substructures")->require_subcommand(1);
  sub_cmd->fallthrough();
  auto* extract_cmd = leaf(sub_cmd, "extract", "induced partial structure of a matrix set");
  extract_cmd->add_option("--in", in, "{\"ring\": spec, \"matrices\": [...]}")->required();
  extract_cmd->add_option("--out", out);
  extract_cmd->callback([&] {
    action = [&] {
      json src = json_arg(in);
      if (!src.is_object() || !src.contains("ring") || !src.contains("matrices"))
        throw Error(Errc::parse, "--in needs an object with ring and matrices");
      auto R = ring_of(src["ring"].get<std::string>());
      json j = io::to_json(restrict(io::mats_from_json(R, src["matrices"])));
      if (!out.empty()) write_json_file(out, j);
      return Outcome{j, 0};
    };
  });
  auto* embed_cmd = leaf(sub_cmd, "embed", "embed a partial structure into GL_n(R)");
  embed_cmd->add_option("--ps", ps)->required();
  embed_cmd->add_option("--target", target, "gl:<ring>:n=<k>")->required();
  embed_cmd->callback([&] {
    action = [&] {
      auto p = io::partial_from_json(json_arg(ps));
      auto ctx = io::parse_target(target);
      g.rings.push_back(ctx.ring()->name());
      auto e = find_embedding(p, ctx, g.limits);
      json j;
      j["target"] = ctx.name();
      j["status"] = io::status_name(e.status);
      j["attempts"] = e.attempts;
      if (e.status == EmbedStatus::found) {
        json map = json::array();
        for (std::size_t i = 0; i < e.images.size(); ++i)
          map.push_back({{"source", p.labels()[i]}, {"image", io::to_json(e.images[i])}});
        j["embedding"] = map;
      } else {
        j["embedding"] = nullptr;
      }
      return Outcome{j, e.status == EmbedStatus::budget_exceeded ? 3 : 0};
    };
  });
  auto* iso_cmd = leaf(sub_cmd, "iso", "partial structure isomorphism");
  iso_cmd->add_option("--p", ps)->required();
  iso_cmd->add_option("--q", ps2)->required();
  iso_cmd->callback([&] {
    action = [&] {
      auto p = io::partial_from_json(json_arg(ps)), q = io::partial_from_json(json_arg(ps2));
      return Outcome{json{{"isomorphic", is_isomorphic_partial(p, q, g.limits.budget)}}, 0};
    };
  });

  // thm ...
  auto* thm_cmd = app.add_subcommand("thm", "theorem checks")->require_subcommand(1);
  thm_cmd->fallthrough();
  auto* desk_cmd = leaf(thm_cmd, "desk-check", "separate GL_n(R1) and GL_m(R2) by invariants");
  desk_cmd->add_option("--r1", ring)->required();
  desk_cmd->add_option("--n", n)->required();
  desk_cmd->add_option("--r2", ring2)->required();
  desk_cmd->add_option("--m", m)->required();
  desk_cmd->callback([&] {
    action = [&] {
      auto d = desk_check_theorem(ctx_of(ring, n), ctx_of(ring2, m), g.limits);
      return Outcome{io::to_json(d), d.frame_bound_holds.value_or(true) ? 0 : 1};
    };
  });

  // replay
  auto* replay_cmd = app.add_subcommand("replay", "re-run a manifest and compare its output");
  replay_cmd->fallthrough();
  replay_cmd->add_option("path", replay_path, "manifest file")->required();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    std::cout << kVersion << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "glocal: " << e.what() << "\n\n" << app.help();
    return 2;
  }
  // --workers given on the command line overrides the manifest's value.
  if (replay_cmd->parsed()) {
    std::optional<unsigned> w;
    if (app.get_option("--workers")->count() > 0) w = g.limits.workers;
    try {
      return replay(replay_path, w, g.quiet, primary);
    } catch (const Error& e) {
      std::cerr << "glocal: " << e.what() << "\n";
      return exit_code(e.code());
    }
  }

  for (auto* top : app.get_subcommands())
    for (auto* sub : top->get_subcommands()) command = top->get_name() + " " + sub->get_name();

  auto t0 = std::chrono::steady_clock::now();
  Outcome res;
  try {
    res = action();
  } catch (const Error& e) {
    res.code = exit_code(e.code());
    res.out = json{{"error", std::string(errc_name(e.code()))}, {"message", e.what()}};
    std::cerr << "glocal: " << e.what() << "\n";
  }
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
  primary = res.out.dump(2) + "\n";
  if (!g.quiet) std::cerr << "glocal: " << command << " finished in " << ms << " ms, exit " << res.code << "\n";

  if (!g.manifest.empty()) {
    json man;
    man["command"] = command;
    man["argv"] = args;
    man["ring_specs"] = g.rings;
    man["seed"] = g.seed;
    man["caps"] = {{"element_cap", g.limits.element_cap},
                   {"matrix_cap", g.limits.matrix_cap},
                   {"budget", g.limits.budget},
                   {"workers", g.limits.workers}};
    man["version"] = kVersion;
    man["duration_ms"] = ms;
    man["exit_code"] = res.code;
    man["output_digest"] = fnv1a(primary);
    try {
      write_json_file(g.manifest, man);
    } catch (const Error& e) {
      std::cerr << "glocal: " << e.what() << "\n";
      return 2;
    }
  }
  return res.code;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string primary;
  int code = run(args, primary);
  std::cout << primary;
  return code;
}
