#include "abmc/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

namespace abmc::cli {

using io::json;
using io::ordered;
using io::SpecError;
using io::child;

namespace {

const std::vector<std::string> kCommands{"ext",   "hom",        "factorize",       "lift",          "classify",
                                         "weq",   "stable-hom", "check-pair",      "thick",         "hereditary",
                                         "gorenstein", "gillespie-verify", "monoidal-check", "catalog"};

struct Bounds {
  CatalogBounds modules;
  ComplexBounds complexes;
};

struct Context {
  std::string command;
  std::string preset;
  AlgebraPtr algebra;
  std::string structure;
  std::uint64_t seed = 0;
  Bounds bounds;
  json args = json::object();
};

struct Outcome {
  bool pass = true;
  std::string summary;
  ordered result = ordered::object();
};

// ------------------------------------------------------------------- presets

json preset_args(const std::string& name, const std::string& command) {
  if (name == "gorenstein-zc2" && command == "gorenstein") return {{"modules", {"triv", "sign", "triv/2"}}, {"d", 1}};
  if (name == "purity-z" && command == "classify")
    return {{"ses",
             {{"i", {{"src", "Z"}, {"dst", "Z"}, {"matrix", {{2}}}}}, {"p", {{"src", "Z"}, {"dst", "Z/2"}, {"matrix", {{1}}}}}}},
            {"bound", 64}};
  return json::object();
}

// ------------------------------------------------------------------ spec I/O

std::uint64_t read_seed(const json& j, const std::string& ptr) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<long>() >= 0) return static_cast<std::uint64_t>(j.get<long>());
  throw SpecError(ptr, "expected a nonnegative integer");
}

std::size_t read_size(const json& j, const std::string& ptr) {
  long v = io::read_long(j, ptr);
  if (v < 0) throw SpecError(ptr, "must be nonnegative");
  return static_cast<std::size_t>(v);
}

void read_bounds(const json& j, const std::string& ptr, Bounds& b) {
  if (j.is_number_integer()) {
    b.modules.max_dim = read_size(j, ptr);
    b.complexes.max_entry_dim = b.modules.max_dim;
    return;
  }
  io::require_keys(j, ptr, {"max_dim", "max_factor", "max_entries", "max_entry_dim", "max_length", "random_count"});
  if (j.contains("max_dim")) b.modules.max_dim = read_size(j["max_dim"], child(ptr, "max_dim"));
  if (j.contains("max_factor")) b.modules.max_factor = static_cast<long>(read_size(j["max_factor"], child(ptr, "max_factor")));
  if (j.contains("max_entries")) b.modules.max_entries = read_size(j["max_entries"], child(ptr, "max_entries"));
  if (j.contains("max_entry_dim")) b.complexes.max_entry_dim = read_size(j["max_entry_dim"], child(ptr, "max_entry_dim"));
  if (j.contains("max_length")) b.complexes.max_length = read_size(j["max_length"], child(ptr, "max_length"));
  if (j.contains("random_count")) b.complexes.random_count = read_size(j["random_count"], child(ptr, "random_count"));
}

void merge_into(json& base, const json& over) {
  for (const auto& [k, v] : over.items()) {
    if (v.is_object() && base.contains(k) && base[k].is_object())
      merge_into(base[k], v);
    else
      base[k] = v;
  }
}

Context read_spec(const json& spec, const std::string& command, const std::string& preset_flag,
                  std::optional<std::uint64_t> seed_flag, std::optional<std::size_t> bounds_flag) {
  io::require_keys(spec, "", {"format", "command", "preset", "algebra", "structure", "seed", "bounds", "args"});
  const json& fmt = io::require_field(spec, "", "format");
  if (!fmt.is_number_integer() || fmt.get<long>() != io::kFormat)
    throw SpecError("/format", "unsupported format (expected " + std::to_string(io::kFormat) + ")");
  if (spec.contains("command")) {
    if (!spec["command"].is_string()) throw SpecError("/command", "expected a string");
    if (spec["command"].get<std::string>() != command)
      throw SpecError("/command", "spec is for \"" + spec["command"].get<std::string>() + "\", not \"" + command + "\"");
  }
  Context ctx;
  ctx.command = command;
  json merged = json::object();
  std::string preset_name = preset_flag;
  if (preset_name.empty() && spec.contains("preset")) {
    if (!spec["preset"].is_string()) throw SpecError("/preset", "expected a string");
    preset_name = spec["preset"].get<std::string>();
  }
  if (!preset_name.empty()) {
    try {
      merged = preset(preset_name);
    } catch (const SpecError& e) {
      throw SpecError(preset_flag.empty() ? "/preset" : "", e.what());
    }
    merged["args"] = preset_args(preset_name, command);
    ctx.preset = preset_name;
  }
  json own = spec;
  own.erase("format");
  own.erase("command");
  own.erase("preset");
  merge_into(merged, own);

  if (!merged.contains("algebra")) throw SpecError("/algebra", "missing required field (or give a preset)");
  ctx.algebra = io::read_algebra(merged["algebra"], "/algebra");
  if (merged.contains("structure")) {
    if (!merged["structure"].is_string()) throw SpecError("/structure", "expected a string");
    ctx.structure = merged["structure"].get<std::string>();
    if (ctx.structure != "quasi-frobenius" && ctx.structure != "gorenstein-projective" &&
        ctx.structure != "gorenstein-injective")
      throw SpecError("/structure", "expected quasi-frobenius, gorenstein-projective or gorenstein-injective");
  }
  if (merged.contains("seed")) ctx.seed = read_seed(merged["seed"], "/seed");
  if (seed_flag) ctx.seed = *seed_flag;
  if (merged.contains("bounds")) read_bounds(merged["bounds"], "/bounds", ctx.bounds);
  if (bounds_flag) {
    ctx.bounds.modules.max_dim = *bounds_flag;
    ctx.bounds.complexes.max_entry_dim = *bounds_flag;
  }
  if (merged.contains("args")) {
    if (!merged["args"].is_object()) throw SpecError("/args", "expected an object");
    ctx.args = merged["args"];
  }
  return ctx;
}

// ------------------------------------------------------------------ helpers

const json& arg(const Context& c, const char* key) { return io::require_field(c.args, "/args", key); }

Module module_arg(const Context& c, const char* key) {
  return io::read_module(c.algebra, arg(c, key), child("/args", key));
}

Morphism morphism_arg(const Context& c, const char* key) {
  return io::read_morphism(c.algebra, arg(c, key), child("/args", key));
}

std::vector<Module> catalog(const Context& c) { return catalog_modules(c.algebra, c.bounds.modules); }

ModelStructure build_structure(const Context& c) {
  if (c.structure.empty()) throw SpecError("/structure", "missing required field for this command");
  const auto cat = catalog(c);
  if (c.structure == "quasi-frobenius") return quasi_frobenius_structure(c.algebra, cat);
  if (c.structure == "gorenstein-projective") return gorenstein_projective_structure(c.algebra, cat);
  return gorenstein_injective_structure(c.algebra, cat);
}

std::size_t gorenstein_degree(const AlgebraPtr& A) {
  auto d = ring_injective_dimension(A, 4);
  if (!d) throw UnsupportedAlgebra("no finite self-injective dimension <= 4 found for " + A->name());
  return *d;
}

CotorsionPair pair_named(const Context& c, const std::string& name, const std::string& ptr) {
  if (name == "projective") return projective_pair(c.algebra);
  if (name == "injective") return injective_pair(c.algebra);
  if (name == "gorenstein") return gorenstein_pair(c.algebra, gorenstein_degree(c.algebra));
  throw SpecError(ptr, "expected projective, injective or gorenstein");
}

std::string string_arg(const Context& c, const char* key, const std::string& fallback) {
  if (!c.args.contains(key)) return fallback;
  if (!c.args[key].is_string()) throw SpecError(child("/args", key), "expected a string");
  return c.args[key].get<std::string>();
}

std::size_t size_arg(const Context& c, const char* key, std::size_t fallback) {
  if (!c.args.contains(key)) return fallback;
  return read_size(c.args[key], child("/args", key));
}

// ----------------------------------------------------------------- commands

Outcome cmd_ext(const Context& c) {
  io::require_keys(c.args, "/args", {"M", "N", "degree"});
  Module M = module_arg(c, "M"), N = module_arg(c, "N");
  const std::size_t i = size_arg(c, "degree", 1);
  if (i == 0) throw SpecError("/args/degree", "must be at least 1");
  ExtGroup g = ext(M, N, i);
  Outcome o;
  o.result["M"] = display_name(M);
  o.result["N"] = display_name(N);
  o.result["degree"] = i;
  o.result["orders"] = io::to_json(g.orders());
  o.result["structure"] = g.structure_string();
  o.summary = "Ext^" + std::to_string(i) + "(" + display_name(M) + ", " + display_name(N) + ") = " + g.structure_string();
  return o;
}

Outcome cmd_hom(const Context& c) {
  io::require_keys(c.args, "/args", {"M", "N"});
  Module M = module_arg(c, "M"), N = module_arg(c, "N");
  HomGroup H = hom_group(M, N);
  Outcome o;
  o.result["M"] = display_name(M);
  o.result["N"] = display_name(N);
  o.result["orders"] = io::to_json(H.orders());
  o.result["structure"] = H.structure_string();
  ordered basis = ordered::array();
  for (const auto& f : H.basis()) basis.push_back(io::to_json(f.matrix()));
  o.result["basis"] = basis;
  o.summary = "Hom(" + display_name(M) + ", " + display_name(N) + ") = " + H.structure_string();
  return o;
}

Outcome cmd_factorize(const Context& c) {
  io::require_keys(c.args, "/args", {"map", "mode"});
  Morphism f = morphism_arg(c, "map");
  const std::string mode = string_arg(c, "mode", "both");
  std::vector<FactorMode> modes;
  if (mode == "cof-acyclic-fib" || mode == "both") modes.push_back(FactorMode::CofThenAcyFib);
  if (mode == "acyclic-cof-fib" || mode == "both") modes.push_back(FactorMode::AcyCofThenFib);
  if (modes.empty()) throw SpecError("/args/mode", "expected cof-acyclic-fib, acyclic-cof-fib or both");
  ModelStructure ms = build_structure(c);
  Outcome o;
  o.result["structure"] = ms.name;
  ordered fs = ordered::array();
  for (auto m : modes) {
    Factorization fz = factorize(ms, f, m);
    fs.push_back(io::to_json(fz));
  }
  o.result["factorizations"] = fs;
  o.summary = "factored in " + std::to_string(modes.size()) + " mode(s), composites exact";
  return o;
}

Outcome cmd_lift(const Context& c) {
  io::require_keys(c.args, "/args", {"i", "p", "top", "bottom"});
  LiftProblem q{morphism_arg(c, "i"), morphism_arg(c, "p"), morphism_arg(c, "top"), morphism_arg(c, "bottom")};
  ModelStructure ms = build_structure(c);
  Lift l = lift(ms, q);
  Outcome o;
  o.result["structure"] = ms.name;
  o.result["h"] = io::to_json(l.h);
  o.result["hypothesis"] = l.hypothesis;
  o.summary = "lift found (" + l.hypothesis + ")";
  return o;
}

Outcome cmd_classify(const Context& c) {
  Outcome o;
  if (c.args.contains("ses")) {
    io::require_keys(c.args, "/args", {"ses", "bound"});
    const json& s = c.args["ses"];
    io::require_keys(s, "/args/ses", {"i", "p"});
    Morphism i = io::read_morphism(c.algebra, io::require_field(s, "/args/ses", "i"), "/args/ses/i");
    Morphism p = io::read_morphism(c.algebra, io::require_field(s, "/args/ses", "p"), "/args/ses/p");
    if (auto bad = ses_defect(i, p)) throw SpecError("/args/ses", *bad);
    SES ses = make_ses(i, p);
    const std::size_t bound = size_arg(c, "bound", 64);
    ExtensionClass cls = extension_class(ses);
    const bool split = is_split(ses).has_value();
    o.result["sequence"] = ses_string(ses);
    o.result["split"] = split;
    o.result["extension_class_zero"] = cls.is_zero();
    o.result["purity"] = io::to_json(is_pure(ses, bound));
    const bool pure = o.result["purity"]["pure"].get<bool>();
    o.summary = ses_string(ses) + (split ? " splits" : " does not split") + (pure ? ", pure" : ", not pure");
    if (!pure) o.summary += " (witness " + o.result["purity"]["witness"].get<std::string>() + ")";
    return o;
  }
  io::require_keys(c.args, "/args", {"map"});
  Morphism f = morphism_arg(c, "map");
  ModelStructure ms = build_structure(c);
  MapClass mc = classify_map(ms, f, true);
  o.result["structure"] = ms.name;
  o.result["classes"] = io::to_json(mc);
  std::string s;
  for (const auto& [name, v] : std::vector<std::pair<std::string, Verdict>>{{"cofibration", mc.cofibration},
                                                                           {"fibration", mc.fibration},
                                                                           {"weak equivalence", *mc.weak_equivalence}})
    if (v.holds()) s += (s.empty() ? "" : ", ") + name;
  o.summary = s.empty() ? "none of the basic classes" : s;
  return o;
}

Outcome cmd_weq(const Context& c) {
  io::require_keys(c.args, "/args", {"map"});
  Morphism f = morphism_arg(c, "map");
  ModelStructure ms = build_structure(c);
  WeakEquivalence w = is_weak_equivalence(ms, f);
  Outcome o;
  o.result["structure"] = ms.name;
  o.result["weak_equivalence"] = io::to_json(w.verdict);
  o.result["factorization"] = io::to_json(w.factorization);
  o.summary = std::string(w.verdict.holds() ? "weak equivalence" : "not a weak equivalence");
  return o;
}

Outcome cmd_stable_hom(const Context& c) {
  io::require_keys(c.args, "/args", {"M", "N"});
  Module M = module_arg(c, "M"), N = module_arg(c, "N");
  ModelStructure ms = build_structure(c);
  StableHom s = stable_hom(ms, M, N);
  Outcome o;
  o.result["structure"] = ms.name;
  o.result["hom"] = s.hom.structure_string();
  o.result["factoring_generators"] = s.projective_factoring.size();
  o.result["orders"] = io::to_json(s.orders);
  o.result["stable_hom"] = s.structure;
  o.summary = "stable Hom(" + display_name(M) + ", " + display_name(N) + ") = " + s.structure;
  return o;
}

Outcome cmd_check_pair(const Context& c) {
  io::require_keys(c.args, "/args", {});
  ModelStructure ms = build_structure(c);
  Outcome o;
  o.result["structure"] = ms.name;
  o.result["C"] = ms.C.name();
  o.result["F"] = ms.F.name();
  o.result["W"] = ms.W.name();
  o.result["catalog_size"] = ms.catalog.size();
  o.result["thickness"] = io::to_json(ms.thickness);
  ordered pairs = ordered::array();
  std::size_t failures = 0;
  for (const auto* pr : {&ms.pair_cw_f, &ms.pair_c_fw}) {
    ordered e;
    e["pair"] = pr->name();
    e["orthogonality"] = io::to_json(pr == &ms.pair_cw_f ? ms.orth_cw_f : ms.orth_c_fw);
    std::size_t pre = 0, env = 0;
    ordered fails = ordered::array();
    for (const auto& X : ms.catalog) {
      try {
        special_precover(*pr, X);
        ++pre;
      } catch (const AbmcError& ex) {
        fails.push_back("precover of " + display_name(X) + ": " + ex.what());
      }
      try {
        special_preenvelope(*pr, X);
        ++env;
      } catch (const AbmcError& ex) {
        fails.push_back("preenvelope of " + display_name(X) + ": " + ex.what());
      }
    }
    e["precovers"] = pre;
    e["preenvelopes"] = env;
    e["failures"] = fails;
    failures += fails.size();
    pairs.push_back(e);
  }
  o.result["pairs"] = pairs;
  o.pass = failures == 0 && ms.orth_cw_f.all_zero() && ms.orth_c_fw.all_zero() && ms.thickness.pass;
  o.summary = o.pass ? "orthogonality all-zero, approximations on every catalog member" : "pair check failed";
  return o;
}

Outcome cmd_thick(const Context& c) {
  io::require_keys(c.args, "/args", {"class"});
  std::string cls = string_arg(c, "class", "");
  if (cls.empty()) {
    if (c.structure.empty()) throw SpecError("/args/class", "give a class or a structure");
    cls = c.structure == "gorenstein-projective" ? "finite-pd" : "projectives";
  }
  ClassDescriptor W;
  if (cls == "projectives")
    W = ClassDescriptor::projectives(c.algebra);
  else if (cls == "injectives")
    W = ClassDescriptor::injectives(c.algebra);
  else if (cls == "all")
    W = ClassDescriptor::all(c.algebra);
  else if (cls == "finite-pd")
    W = ClassDescriptor::pd_at_most(c.algebra, gorenstein_degree(c.algebra));
  else
    throw SpecError("/args/class", "expected projectives, injectives, all or finite-pd");
  ThickReport r = is_thick(W, thick_sample(catalog(c), c.seed));
  Outcome o;
  o.result["class"] = W.name();
  o.result["report"] = io::to_json(r);
  o.pass = r.pass;
  o.summary = W.name() + (r.pass ? " is thick on the sample" : " is not thick: " + r.certificate);
  return o;
}

Outcome cmd_hereditary(const Context& c) {
  io::require_keys(c.args, "/args", {"pair", "i_max"});
  CotorsionPair p = pair_named(c, string_arg(c, "pair", "projective"), "/args/pair");
  const std::size_t i_max = size_arg(c, "i_max", 2);
  if (i_max == 0) throw SpecError("/args/i_max", "must be at least 1");
  HereditaryReport r = is_hereditary(p, catalog(c), i_max, c.seed);
  Outcome o;
  o.result["pair"] = p.name();
  o.result["report"] = io::to_json(r);
  o.pass = r.pass();
  o.summary = p.name() + (r.pass() ? " is hereditary on the catalog" : " fails the hereditary sweep");
  return o;
}

Outcome cmd_gorenstein(const Context& c) {
  io::require_keys(c.args, "/args", {"modules", "d", "examples"});
  const std::size_t d = c.args.contains("d") ? size_arg(c, "d", 0) : gorenstein_degree(c.algebra);
  Outcome o;
  auto rid = ring_injective_dimension(c.algebra, 4);
  o.result["ring_injective_dimension"] = rid ? ordered(*rid) : ordered("unknown (> 4)");
  o.result["d"] = d;
  o.result["family"] = FamilySpec{}.describe();
  ordered tests = ordered::array();
  if (c.args.contains("modules")) {
    const json& ms = c.args["modules"];
    if (!ms.is_array()) throw SpecError("/args/modules", "expected an array of modules");
    for (std::size_t k = 0; k < ms.size(); ++k) {
      Module M = io::read_module(c.algebra, ms[k], child("/args/modules", k));
      ordered t;
      t["module"] = display_name(M);
      t["gp_test"] = io::to_json(gp_test(M, d));
      t["projective"] = is_projective(M);
      tests.push_back(t);
    }
  }
  o.result["tests"] = tests;
  const std::size_t count = size_arg(c, "examples", 30);
  std::vector<Module> pool;
  for (const auto& M : catalog(c))
    if (!M.is_zero()) pool.push_back(M);
  Rng rng(c.seed);
  std::size_t passed = 0;
  ordered failures = ordered::array();
  for (std::size_t t = 0; t < count && !pool.empty(); ++t) {
    const Module& N = pool[rng.index(pool.size())];
    Verdict v = gp_test(gp_example(N, d), d);
    if (v.holds())
      ++passed;
    else
      failures.push_back("syzygy " + std::to_string(d) + " of " + display_name(N) + ": " + v.certificate);
  }
  ordered ex;
  ex["checked"] = pool.empty() ? 0 : count;
  ex["passed"] = passed;
  ex["failures"] = failures;
  o.result["examples"] = ex;
  o.pass = failures.empty();
  o.summary = std::to_string(passed) + " syzygy examples pass gp_test";
  return o;
}

Outcome cmd_gillespie(const Context& c) {
  io::require_keys(c.args, "/args", {"pair", "complexes"});
  CotorsionPair p = pair_named(c, string_arg(c, "pair", "projective"), "/args/pair");
  auto cat = complex_catalog(c.algebra, c.bounds.complexes, c.seed);
  CatalogBounds mb = c.bounds.modules;
  mb.max_dim = c.bounds.complexes.max_entry_dim;
  InducedPairReport r = verify_induced_pair(p, cat, catalog_modules(c.algebra, mb));
  Outcome o;
  o.result["pair"] = p.name();
  o.result["report"] = io::to_json(r);
  if (c.args.contains("complexes")) {
    const json& xs = c.args["complexes"];
    if (!xs.is_array()) throw SpecError("/args/complexes", "expected an array of complexes");
    std::vector<ChainComplex> tD, tE;
    for (const auto& e : cat) {
      if (tilde_member({p, ChainVariant::TildeD, {}, ""}, e.complex).holds()) tD.push_back(e.complex);
      if (tilde_member({p, ChainVariant::TildeE, {}, ""}, e.complex).holds()) tE.push_back(e.complex);
    }
    ordered cls = ordered::array();
    for (std::size_t k = 0; k < xs.size(); ++k) {
      ChainComplex X = io::read_complex(c.algebra, xs[k], child("/args/complexes", k));
      ordered e;
      e["complex"] = io::to_json(X);
      e["exact"] = is_exact(X);
      e["tilde_D"] = io::to_json(tilde_member({p, ChainVariant::TildeD, {}, ""}, X));
      e["tilde_E"] = io::to_json(tilde_member({p, ChainVariant::TildeE, {}, ""}, X));
      e["dg_tilde_D"] = io::to_json(dg_member({p, ChainVariant::DgTildeD, tE, r.family}, X));
      e["dg_tilde_E"] = io::to_json(dg_member({p, ChainVariant::DgTildeE, tD, r.family}, X));
      cls.push_back(e);
    }
    o.result["complexes"] = cls;
  }
  o.pass = r.pass();
  o.summary = r.pass() ? "induced pairs verified on " + std::to_string(r.catalog_size) + " complexes"
                       : "induced pair check failed";
  return o;
}

Outcome cmd_monoidal(const Context& c) {
  io::require_keys(c.args, "/args", {"pushout_products"});
  ModelStructure ms = build_structure(c);
  const auto cat = catalog(c);
  MonoidalReport r = monoidal_check(ms, cat, c.seed);
  const std::size_t want = size_arg(c, "pushout_products", 50);
  std::vector<Module> pool;
  for (const auto& M : cat)
    if (M.gens() <= 2) pool.push_back(M);
  Rng rng(c.seed ^ 0x5050);
  std::vector<Morphism> cofs;
  for (std::size_t attempt = 0; cofs.size() < 2 * want && attempt < 40 * want + 40 && !pool.empty(); ++attempt) {
    Morphism f = random_morphism(rng, pool[rng.index(pool.size())], pool[rng.index(pool.size())]);
    if (is_mono(f) && classify_map(ms, f).cofibration.holds()) cofs.push_back(f);
  }
  std::size_t checked = 0, good = 0;
  std::string certificate;
  for (std::size_t k = 0; k + 1 < cofs.size() && checked < want; k += 2) {
    ++checked;
    Verdict v = classify_map(ms, pushout_product(cofs[k], cofs[k + 1])).cofibration;
    if (v.holds())
      ++good;
    else if (certificate.empty())
      certificate = v.certificate;
  }
  Outcome o;
  o.result["structure"] = ms.name;
  o.result["conditions"] = io::to_json(r);
  ordered pp;
  pp["checked"] = checked;
  pp["cofibrations"] = good;
  if (!certificate.empty()) pp["certificate"] = certificate;
  o.result["pushout_products"] = pp;
  o.pass = r.pass() && good == checked;
  o.summary = o.pass ? "all four monoidal conditions hold; pushout-products of cofibrations are cofibrations"
                     : "monoidal check failed";
  return o;
}

Outcome cmd_catalog(const Context& c) {
  io::require_keys(c.args, "/args", {"complexes"});
  bool complexes = false;
  if (c.args.contains("complexes")) {
    if (!c.args["complexes"].is_boolean()) throw SpecError("/args/complexes", "expected a boolean");
    complexes = c.args["complexes"].get<bool>();
  }
  Outcome o;
  ordered entries = ordered::array();
  for (const auto& e : module_catalog(c.algebra, c.bounds.modules)) {
    ordered m = io::to_json(e.module);
    m["provenance"] = e.provenance;
    entries.push_back(m);
  }
  o.result["count"] = entries.size();
  o.result["modules"] = entries;
  if (complexes) {
    ordered cx = ordered::array();
    for (const auto& e : complex_catalog(c.algebra, c.bounds.complexes, c.seed)) {
      ordered x = io::to_json(e.complex);
      x["provenance"] = e.provenance;
      cx.push_back(x);
    }
    o.result["complex_count"] = cx.size();
    o.result["complexes"] = cx;
  }
  o.summary = std::to_string(entries.size()) + " modules";
  return o;
}

Outcome dispatch(const Context& c) {
  const std::string& k = c.command;
  if (k == "ext") return cmd_ext(c);
  if (k == "hom") return cmd_hom(c);
  if (k == "factorize") return cmd_factorize(c);
  if (k == "lift") return cmd_lift(c);
  if (k == "classify") return cmd_classify(c);
  if (k == "weq") return cmd_weq(c);
  if (k == "stable-hom") return cmd_stable_hom(c);
  if (k == "check-pair") return cmd_check_pair(c);
  if (k == "thick") return cmd_thick(c);
  if (k == "hereditary") return cmd_hereditary(c);
  if (k == "gorenstein") return cmd_gorenstein(c);
  if (k == "gillespie-verify") return cmd_gillespie(c);
  if (k == "monoidal-check") return cmd_monoidal(c);
  return cmd_catalog(c);
}

ordered header(const Context& c) {
  ordered h;
  h["format"] = io::kFormat;
  h["tool"] = std::string("abmc ") + kVersion;
  h["command"] = c.command;
  h["preset"] = c.preset.empty() ? ordered(nullptr) : ordered(c.preset);
  h["algebra"] = c.algebra->name();
  if (!c.structure.empty()) h["structure"] = c.structure;
  h["seed"] = c.seed;
  ordered b;
  b["max_dim"] = c.bounds.modules.max_dim;
  b["max_factor"] = c.bounds.modules.max_factor;
  b["max_entries"] = c.bounds.modules.max_entries;
  b["max_entry_dim"] = c.bounds.complexes.max_entry_dim;
  b["max_length"] = c.bounds.complexes.max_length;
  b["random_count"] = c.bounds.complexes.random_count;
  b["max_dim_cap"] = max_dim_cap();
  h["bounds"] = b;
  return h;
}

void emit(const ordered& report, bool as_json, std::ostream& out) {
  if (as_json)
    out << report.dump(2) << "\n";
  else
    out << io::render_text(report);
}

}  // namespace

json preset(const std::string& name) {
  if (name == "qf-f2c2")
    return {{"algebra", "F2[C2]"}, {"structure", "quasi-frobenius"}, {"bounds", {{"max_dim", 4}, {"max_factor", 4}}}};
  if (name == "gorenstein-zc2")
    return {{"algebra", "Z[C2]"}, {"structure", "gorenstein-projective"}, {"bounds", {{"max_dim", 2}, {"max_factor", 2}}}};
  if (name == "gillespie-proj-f2c2")
    return {{"algebra", "F2[C2]"},
            {"structure", "quasi-frobenius"},
            {"bounds", {{"max_dim", 3}, {"max_entry_dim", 3}, {"max_length", 4}, {"random_count", 16}}}};
  if (name == "purity-z") return {{"algebra", "Z"}, {"bounds", {{"max_dim", 2}, {"max_factor", 4}}}};
  throw SpecError("", "unknown preset \"" + name + "\" (expected qf-f2c2, gorenstein-zc2, gillespie-proj-f2c2 or purity-z)");
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Abelian model structures from cotorsion pairs", "abmc"};
  std::string command, spec_path, preset_name;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> bounds;
  bool as_json = false, as_text = false;
  app.add_option("command", command, "Command to run")->required()->check(CLI::IsMember(kCommands));
  app.add_option("spec", spec_path, "Problem spec (JSON, format 1)")->required();
  app.add_option("--preset", preset_name, "qf-f2c2, gorenstein-zc2, gillespie-proj-f2c2 or purity-z");
  app.add_option("--seed", seed, "Seed for sampled sweeps (default 0)");
  app.add_option("--bounds", bounds, "Catalog dimension bound");
  auto* j = app.add_flag("--json", as_json, "JSON report");
  auto* t = app.add_flag("--text", as_text, "Aligned text report (default)");
  j->excludes(t);
  app.set_version_flag("--version", kVersion);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << (dynamic_cast<const CLI::CallForVersion*>(&e) ? std::string(kVersion) + "\n" : app.help());
      return 0;
    }
    err << "abmc: " << e.what() << "\n" << app.help();
    return 2;
  }

  auto usage_error = [&](const std::string& pointer, const std::string& message) {
    err << "abmc: " << message << "\n";
    if (as_json) {
      ordered r;
      r["format"] = io::kFormat;
      r["tool"] = std::string("abmc ") + kVersion;
      r["command"] = command;
      r["error"] = {{"pointer", pointer}, {"message", message}};
      emit(r, true, out);
    }
    return 2;
  };

  json spec;
  {
    std::ifstream in(spec_path);
    if (!in) return usage_error("", "cannot read spec file " + spec_path);
    try {
      spec = json::parse(in);
    } catch (const json::parse_error& e) {
      return usage_error("", std::string("spec is not valid JSON: ") + e.what());
    }
  }

  Context ctx;
  try {
    ctx = read_spec(spec, command, preset_name, seed, bounds);
  } catch (const SpecError& e) {
    return usage_error(e.pointer(), e.what());
  } catch (const AbmcError& e) {
    return usage_error("", e.what());
  }

  ordered report = header(ctx);
  try {
    Outcome o = dispatch(ctx);
    report["pass"] = o.pass;
    report["summary"] = o.summary;
    report["result"] = o.result;
    emit(report, as_json, out);
    return o.pass ? 0 : 1;
  } catch (const SpecError& e) {
    return usage_error(e.pointer(), e.what());
  } catch (const CatalogTooLarge& e) {
    return usage_error("/bounds", e.what());
  } catch (const ThicknessFailed& e) {
    report["failure"] = {{"kind", "ThicknessFailed"}, {"certificate", e.certificate()}};
  } catch (const OrthogonalityFailed& e) {
    report["failure"] = {{"kind", "OrthogonalityFailed"}, {"certificate", e.what()}};
  } catch (const ProviderFailed& e) {
    report["failure"] = {{"kind", "ProviderFailed"}, {"stage", e.stage()}, {"certificate", e.certificate()}};
  } catch (const NotLiftable& e) {
    report["failure"] = {{"kind", "NotLiftable"}, {"certificate", e.what()}};
  } catch (const LiftPrecondition& e) {
    report["failure"] = {{"kind", "LiftPrecondition"}, {"certificate", e.what()}};
  } catch (const AbmcError& e) {
    return usage_error("", e.what());
  }
  report["pass"] = false;
  report["summary"] = report["failure"]["kind"].get<std::string>() + ": " +
                      report["failure"]["certificate"].get<std::string>();
  emit(report, as_json, out);
  return 1;
}

}  // namespace abmc::cli
