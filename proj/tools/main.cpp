// Command-line front end: file-based checks and reports over datum files.

#include <cstddef>
#include <exception>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "structura/structura.hpp"

namespace {

using structura::BudgetError;
using structura::Datum;
using structura::Error;
using structura::Rational;
using structura::Subset;
using structura::Universe;
using structura::Witness;
using json = structura::io::json;

enum ExitCode : int {
  kOk = 0,        // admissible / requested property holds
  kViolated = 1,  // parsed fine, but the checked property fails
  kParse = 2,     // malformed or structurally invalid input file
  kBudget = 3,    // enumeration or subset sweep exceeds its budget
  kDomain = 4,    // operation undefined for this datum (precondition/domain)
  kUsage = 5,     // bad command line
};

/// Bad command-line values detected after CLI parsing (malformed rational
/// literals, unknown family names, ...).
struct UsageFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty())
    std::cout << text;
  else
    structura::io::write_text_file(out_path, text);
}

void emit_json(const json& j, const std::string& out_path) { emit(j.dump(2) + "\n", out_path); }

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

Rational parse_rational_arg(const std::string& text, const char* what) {
  try {
    return Rational::parse(text);
  } catch (const std::invalid_argument& e) {
    throw UsageFailure(std::string(what) + ": " + e.what());
  }
}

std::vector<Rational> rational_list_arg(const std::string& csv, const char* what) {
  std::vector<Rational> out;
  for (const auto& piece : split_csv(csv)) out.push_back(parse_rational_arg(piece, what));
  return out;
}

std::vector<int> int_list_arg(const std::string& csv, const char* what) {
  std::vector<int> out;
  for (const auto& piece : split_csv(csv)) {
    try {
      std::size_t used = 0;
      int v = std::stoi(piece, &used);
      if (used != piece.size()) throw std::invalid_argument("trailing characters");
      out.push_back(v);
    } catch (const std::exception&) {
      throw UsageFailure(std::string(what) + ": '" + piece + "' is not an integer");
    }
  }
  return out;
}

std::vector<std::size_t> size_list_arg(const std::string& csv, const char* what) {
  std::vector<std::size_t> out;
  for (int v : int_list_arg(csv, what)) {
    if (v < 0) throw UsageFailure(std::string(what) + ": negative count");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Subcommand bodies
// ---------------------------------------------------------------------------

int run_check(const std::string& path, bool exhaustive, const std::string& out) {
  std::string text = structura::io::read_text_file(path);
  Datum d = structura::io::parse_datum(text);
  auto mode = exhaustive ? structura::axioms::Mode::exhaustive
                         : structura::axioms::Mode::singletons;
  auto rep = structura::axioms::check_admissible(d, mode);
  emit_json(structura::io::report_to_json(rep, *d.universe(), text), out);
  return rep.admissible ? kOk : kViolated;
}

int run_fixpoint(const std::string& path, std::size_t steps, const std::string& out) {
  Datum d = structura::io::read_datum(path);
  auto fstar = structura::coupling::fixed_point_closed_form(d);
  bool invariant = structura::coupling::apply_T(d, fstar) == fstar;

  json j = json::object();
  j["eta"] = d.eta().str();
  json atoms = json::object();
  for (std::size_t i = 0; i < d.size(); ++i)
    atoms[d.universe()->label(i)] = fstar.atom(i).str();
  j["fixed_point"] = std::move(atoms);
  j["fixed_point_invariant"] = invariant;

  auto zero = structura::coupling::SetFunction::zero(d.universe());
  auto steps_out = json::array();
  auto trajectory = structura::coupling::iterate_T(d, zero, steps);
  for (std::size_t n = 0; n < trajectory.size(); ++n) {
    json step = json::object();
    step["n"] = n + 1;
    step["bound"] = trajectory[n].bound.str();
    step["distance"] = trajectory[n].distance.str();
    steps_out.push_back(std::move(step));
  }
  j["iteration_from_zero"] = std::move(steps_out);
  emit_json(j, out);
  return kOk;
}

int run_classify(const std::string& path, const std::string& out) {
  Datum d = structura::io::read_datum(path);
  auto rep = structura::classify::check_block_dichotomy(d);

  json j = json::object();
  j["required_mass"] = rep.required_mass.str();
  auto blocks = json::array();
  bool all_positive = true;
  for (const auto& e : rep.per_class) {
    json b = json::object();
    b["points"] = e.block.member_labels();
    b["mass"] = e.mass.str();
    b["zero"] = e.zero;
    b["normalized"] = e.normalized;
    blocks.push_back(std::move(b));
    if (e.zero) all_positive = false;
  }
  j["blocks"] = std::move(blocks);
  j["dichotomy"] = rep.holds;
  if (rep.holds && all_positive) {
    auto totals = structura::classify::total_mass_summary(d);
    json t = json::object();
    t["class_count"] = totals.class_count;
    t["total_mass"] = totals.total_mass.str();
    t["pair_mass"] = totals.pair_mass.str();
    j["totals"] = std::move(t);
  }
  emit_json(j, out);
  return rep.holds ? kOk : kViolated;
}

int run_restrict(const std::string& path, const std::string& out) {
  Datum d = structura::io::read_datum(path);
  Datum core = structura::quotient::restrict_to_core(d);
  emit(structura::io::serialize_datum(core), out);
  return kOk;
}

int run_morphism(const std::string& src_path, const std::string& dst_path,
                 const std::string& map_path, const std::string& transport,
                 const std::string& out) {
  Datum src = structura::io::read_datum(src_path);
  Datum dst = structura::io::read_datum(dst_path);
  auto map = structura::io::parse_point_map(structura::io::read_text_file(map_path),
                                            *src.universe(), *dst.universe());
  structura::morphisms::Morphism phi{src, dst, map};
  auto rep = structura::morphisms::check_morphism(phi);

  const Universe& us = *src.universe();
  const Universe& ut = *dst.universe();
  json j = json::object();
  json clauses = json::object();
  clauses["measurability"] = structura::io::verdict_to_json(rep.m1, us);
  clauses["retraction_commutes"] = structura::io::verdict_to_json(rep.m2, us);
  clauses["relation_preserved"] = structura::io::verdict_to_json(rep.m3, us);
  clauses["charge_pushforward"] = structura::io::verdict_to_json(rep.m4, ut);
  j["clauses"] = std::move(clauses);
  j["holds"] = rep.holds;
  j["maps_R_into_R"] = structura::io::verdict_to_json(rep.maps_R_into_R, ut);
  j["budget_bound"] = structura::io::verdict_to_json(rep.e0_bound, ut);

  bool ok = rep.holds;
  if (!transport.empty()) {
    structura::morphisms::TransportMode mode;
    if (transport == "inclusion")
      mode = structura::morphisms::TransportMode::inclusion;
    else if (transport == "exact")
      mode = structura::morphisms::TransportMode::exact;
    else
      throw UsageFailure("--transport must be 'inclusion' or 'exact'");
    auto tr = structura::morphisms::transport_coupling(phi, mode);
    json t = json::object();
    t["mode"] = transport;
    t["preconditions_hold"] = tr.preconditions_hold;
    if (!tr.preconditions_hold) {
      const Universe& wu = tr.precondition_note == "map is not surjective" ? ut : us;
      if (tr.precondition_witness.kind != Witness::Kind::none)
        t["witness"] = tr.precondition_witness.describe(wu);
      t["note"] = tr.precondition_note;
      ok = false;
    } else {
      t["conclusion"] = structura::io::verdict_to_json(tr.conclusion, ut);
      ok = ok && tr.conclusion.holds;
    }
    j["transport"] = std::move(t);
  }
  emit_json(j, out);
  return ok ? kOk : kViolated;
}

struct ConstructArgs {
  std::string family;
  std::size_t n_retained = 1;
  std::size_t n_annihilated = 0;
  std::string weights;
  std::string eta = "0";
  std::string sizes;
  std::string reps;
  std::string base;
  std::size_t extra = 0;
  std::string kind;
};

int run_construct(const ConstructArgs& a, const std::string& out) {
  namespace models = structura::models;
  Datum d = [&]() -> Datum {
    if (a.family == "diagonal") {
      if (a.weights.empty()) throw UsageFailure("diagonal: --weights is required");
      return models::diagonal_finite_model(a.n_retained, a.n_annihilated,
                                           int_list_arg(a.weights, "--weights"));
    }
    if (a.family == "eta") return models::eta_model(parse_rational_arg(a.eta, "--eta"));
    if (a.family == "total")
      return models::total_relation_model(parse_rational_arg(a.eta, "--eta"));
    if (a.family == "blocks") {
      if (a.sizes.empty() || a.weights.empty())
        throw UsageFailure("blocks: --sizes and --weights are required");
      return models::block_family_model(size_list_arg(a.sizes, "--sizes"),
                                        rational_list_arg(a.weights, "--weights"),
                                        parse_rational_arg(a.eta, "--eta"));
    }
    if (a.family == "classes") {
      if (a.sizes.empty() || a.reps.empty())
        throw UsageFailure("classes: --sizes and --reps are required");
      return models::class_model(size_list_arg(a.sizes, "--sizes"),
                                 int_list_arg(a.reps, "--reps"));
    }
    if (a.family == "truncation") {
      if (a.base.empty()) throw UsageFailure("truncation: --base is required");
      return models::countable_truncation(structura::io::read_datum(a.base), a.extra);
    }
    if (a.family == "separating") {
      if (a.kind == "not_I") return models::separating_model(models::SeparatingKind::not_I).datum;
      if (a.kind == "not_II")
        return models::separating_model(models::SeparatingKind::not_II).datum;
      if (a.kind == "not_III")
        return models::separating_model(models::SeparatingKind::not_III).datum;
      if (a.kind == "not_a") return models::separating_model(models::SeparatingKind::not_a).datum;
      if (a.kind == "not_b") return models::separating_model(models::SeparatingKind::not_b).datum;
      if (a.kind == "not_c") return models::separating_model(models::SeparatingKind::not_c).datum;
      throw UsageFailure("separating: --kind must be one of not_I, not_II, not_III, not_a, "
                         "not_b, not_c");
    }
    throw UsageFailure("unknown family '" + a.family +
                       "' (expected diagonal, eta, total, blocks, classes, truncation, "
                       "separating)");
  }();
  emit(structura::io::serialize_datum(d), out);
  return kOk;
}

int run_independence(const std::string& out) {
  static const char* kLawNames[5] = {"law_I", "law_II", "law_III_a", "law_III_b", "law_III_c"};
  json rows = json::array();
  bool all_match = true;
  for (const auto& m : structura::models::all_separating_models()) {
    auto rep = structura::axioms::check_admissible(m.datum);
    auto got = rep.pattern();
    bool matches = true;
    json verdicts = json::object();
    json expected = json::object();
    for (std::size_t k = 0; k < 5; ++k) {
      verdicts[kLawNames[k]] = got[k];
      expected[kLawNames[k]] = m.expected[k];
      if (got[k] != m.expected[k]) matches = false;
    }
    json row = json::object();
    row["model"] = m.name;
    row["verdicts"] = std::move(verdicts);
    row["expected"] = std::move(expected);
    row["matches"] = matches;
    rows.push_back(std::move(row));
    all_match = all_match && matches;
  }
  json j = json::object();
  j["rows"] = std::move(rows);
  j["all_match"] = all_match;
  emit_json(j, out);
  return all_match ? kOk : kViolated;
}

int run_search(std::size_t n, const std::string& eta, const std::string& grid,
               std::size_t budget, const std::string& out) {
  auto result = structura::search::enumerate_admissible(
      n, parse_rational_arg(eta, "--eta"), rational_list_arg(grid, "--grid"), budget);
  std::string text;
  for (const Datum& d : result.admissible)
    text += structura::io::datum_to_json(d).dump() + "\n";
  json summary = json::object();
  summary["candidates"] = result.candidates;
  summary["skipped_massless"] = result.skipped_massless;
  summary["admissible"] = result.admissible.size();
  json sig = json::object();
  for (const auto& [key, count] : result.by_block_signature) {
    std::string name;
    for (std::size_t i = 0; i < key.size(); ++i) {
      if (i) name += ",";
      name += std::to_string(key[i]);
    }
    sig[name] = count;
  }
  summary["by_block_signature"] = std::move(sig);
  text += summary.dump() + "\n";
  emit(text, out);
  return kOk;
}

int run_sigma(const std::string& path, const std::string& out) {
  Datum d = structura::io::read_datum(path);
  auto rep = structura::coupling::sigma_global_constraint(d);
  json j = json::object();
  j["eta"] = d.eta().str();
  j["pair_mass"] = rep.pair_mass.str();
  j["total_mass"] = rep.total_mass.str();
  j["holds"] = rep.holds;
  if (rep.normalized_expectation) {
    j["normalized_expectation"] = rep.normalized_expectation->str();
    j["normalized_holds"] = rep.normalized_holds;
  }
  if (rep.total_mass.is_positive()) {
    auto window = structura::coupling::eta_feasibility(rep.total_mass);
    json w = json::object();
    w["feasible"] = window.feasible;
    if (window.feasible) {
      w["lo"] = window.lo.str();
      w["hi"] = window.hi.str();
    }
    j["eta_window"] = std::move(w);
  }
  emit_json(j, out);
  return rep.holds ? kOk : kViolated;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact-arithmetic workbench for retraction-coupled charge models"};
  app.require_subcommand(1);
  app.set_version_flag("--version", structura::io::kToolVersion);

  std::string path, out, map_path, dst_path, transport;
  bool exhaustive = false;
  std::size_t steps = 8;

  auto* check = app.add_subcommand("check", "verify all laws on a datum file");
  check->add_option("file", path, "datum file")->required();
  check->add_flag("--exhaustive", exhaustive, "sweep all subsets instead of singletons");
  check->add_option("-o,--out", out, "write the report here instead of stdout");

  auto* fixpoint = app.add_subcommand("fixpoint", "closed-form fixed point and iteration bounds");
  fixpoint->add_option("file", path, "datum file")->required();
  fixpoint->add_option("--steps", steps, "iteration steps from the zero function");
  fixpoint->add_option("-o,--out", out, "output path");

  auto* classify = app.add_subcommand("classify", "block decomposition and mass dichotomy");
  classify->add_option("file", path, "datum file")->required();
  classify->add_option("-o,--out", out, "output path");

  auto* restrict_cmd = app.add_subcommand("restrict", "restrict a datum to its retained core");
  restrict_cmd->add_option("file", path, "datum file")->required();
  restrict_cmd->add_option("-o,--out", out, "output path");

  auto* morphism = app.add_subcommand("morphism", "verify the structure-map clauses");
  morphism->add_option("source", path, "source datum file")->required();
  morphism->add_option("target", dst_path, "target datum file")->required();
  morphism->add_option("map", map_path, "point map file (JSON object source -> target)")
      ->required();
  morphism->add_option("--transport", transport,
                       "also transport the coupling law: 'inclusion' or 'exact'");
  morphism->add_option("-o,--out", out, "output path");

  ConstructArgs cargs;
  auto* construct = app.add_subcommand("construct", "write a canonical model file");
  construct
      ->add_option("family", cargs.family,
                   "diagonal | eta | total | blocks | classes | truncation | separating")
      ->required();
  construct->add_option("--r", cargs.n_retained, "retained point count (diagonal)");
  construct->add_option("--i", cargs.n_annihilated, "annihilated point count (diagonal)");
  construct->add_option("--weights", cargs.weights, "comma-separated weights");
  construct->add_option("--eta", cargs.eta, "contraction parameter");
  construct->add_option("--sizes", cargs.sizes, "comma-separated block/class sizes");
  construct->add_option("--reps", cargs.reps, "comma-separated 0/1 representative weights");
  construct->add_option("--base", cargs.base, "base datum file (truncation)");
  construct->add_option("--extra", cargs.extra, "number of appended null points (truncation)");
  construct->add_option("--kind", cargs.kind, "separating model name (separating)");
  construct->add_option("-o,--out", out, "output path");

  auto* independence = app.add_subcommand("independence", "run all six separating models");
  independence->add_option("-o,--out", out, "output path");

  std::size_t search_n = 2;
  std::string search_eta = "0";
  std::string search_grid = "0,1/2,1,2";
  std::size_t budget = structura::search::kDefaultBudget;
  auto* search = app.add_subcommand("search", "enumerate admissible identity-retraction data");
  search->add_option("--n", search_n, "universe size")->required();
  search->add_option("--eta", search_eta, "contraction parameter");
  search->add_option("--grid", search_grid, "comma-separated candidate weights");
  search->add_option("--budget", budget, "candidate-count budget");
  search->add_option("-o,--out", out, "output path");

  auto* sigma = app.add_subcommand("sigma", "whole-space constraint and eta window");
  sigma->add_option("file", path, "datum file")->required();
  sigma->add_option("-o,--out", out, "output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (check->parsed()) return run_check(path, exhaustive, out);
    if (fixpoint->parsed()) return run_fixpoint(path, steps, out);
    if (classify->parsed()) return run_classify(path, out);
    if (restrict_cmd->parsed()) return run_restrict(path, out);
    if (morphism->parsed()) return run_morphism(path, dst_path, map_path, transport, out);
    if (construct->parsed()) return run_construct(cargs, out);
    if (independence->parsed()) return run_independence(out);
    if (search->parsed()) return run_search(search_n, search_eta, search_grid, budget, out);
    if (sigma->parsed()) return run_sigma(path, out);
  } catch (const UsageFailure& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const structura::io::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParse;
  } catch (const BudgetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBudget;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDomain;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kDomain;
  }
  return kUsage;
}
