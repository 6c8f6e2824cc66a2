#include "abmc/serialize.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace abmc::io {

// ------------------------------------------------------------------ readers

std::string child(const std::string& pointer, const std::string& key) {
  std::string k;
  for (char c : key) {
    if (c == '~')
      k += "~0";
    else if (c == '/')
      k += "~1";
    else
      k += c;
  }
  return pointer + "/" + k;
}

std::string child(const std::string& pointer, std::size_t index) { return pointer + "/" + std::to_string(index); }

void require_keys(const json& j, const std::string& pointer, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw SpecError(pointer, "expected an object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw SpecError(child(pointer, key), "unknown field");
  }
}

const json& require_field(const json& j, const std::string& pointer, const char* key) {
  if (!j.is_object()) throw SpecError(pointer, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw SpecError(child(pointer, key), "missing required field");
  return *it;
}

Int read_int(const json& j, const std::string& pointer) {
  if (j.is_number_integer()) return Int(j.get<long>());
  if (j.is_string()) {
    Int v;
    if (v.set_str(j.get<std::string>(), 10) == 0) return v;
  }
  throw SpecError(pointer, "expected an integer");
}

long read_long(const json& j, const std::string& pointer) {
  if (!j.is_number_integer()) throw SpecError(pointer, "expected an integer");
  return j.get<long>();
}

Mat read_matrix(const json& j, const std::string& pointer, std::size_t rows, std::size_t cols) {
  if (!j.is_array() || j.size() != rows)
    throw SpecError(pointer, "expected a matrix with " + std::to_string(rows) + " rows");
  Mat m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const std::string pr = child(pointer, r);
    if (!j[r].is_array() || j[r].size() != cols)
      throw SpecError(pr, "expected a row of length " + std::to_string(cols));
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = read_int(j[r][c], child(pr, c));
  }
  return m;
}

namespace {

std::optional<BaseRing> parse_base(const std::string& s) {
  if (s == "Z") return BaseRing::integers();
  if (s.size() >= 2 && s[0] == 'F' && std::all_of(s.begin() + 1, s.end(), ::isdigit)) {
    try {
      return BaseRing::prime_field(static_cast<std::uint32_t>(std::stoul(s.substr(1))));
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }
  return std::nullopt;
}

BaseRing read_base(const json& j, const std::string& pointer) {
  if (j.is_string())
    if (auto b = parse_base(j.get<std::string>())) return *b;
  throw SpecError(pointer, "expected a base ring \"Z\" or \"F<p>\" with p prime");
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(' '), b = s.find_last_not_of(' ');
  return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

bool parse_count(const std::string& s, long& out) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), ::isdigit) || s.size() > 9) return false;
  out = std::stol(s);
  return true;
}

Module read_atom(const AlgebraPtr& A, const std::string& token, const std::string& pointer) {
  const std::string t = trim(token);
  long n = 0;
  auto suffix = [&](const std::string& head, char sep) {
    return t.size() > head.size() + 1 && t.compare(0, head.size(), head) == 0 && t[head.size()] == sep &&
           parse_count(t.substr(head.size() + 1), n);
  };
  try {
    if (t == "0") return zero_module(A);
    if (t == "A" || t == "free") return free_module(A, 1);
    if (suffix("A", '^') || suffix("free", '^') || (A->rank() == 1 && suffix(A->base().name(), '^')))
      return free_module(A, static_cast<std::size_t>(n));
    if (t == "triv" || t == "k" || t == A->base().name()) return trivial_module(A);
    if (suffix("triv", '/') || suffix(A->base().name(), '/')) return trivial_module(A, n);
    if (t == "sign") return sign_module(A);
    if (suffix("sign", '/')) return sign_module(A, n);
  } catch (const AbmcError& e) {
    throw SpecError(pointer, e.what());
  }
  throw SpecError(pointer, "unknown module shorthand \"" + t + "\"");
}

}  // namespace

AlgebraPtr read_algebra(const json& j, const std::string& pointer) {
  try {
    if (j.is_string()) {
      const std::string s = j.get<std::string>();
      if (auto b = parse_base(s)) return base_algebra(*b);
      const auto br = s.find("[C");
      if (br != std::string::npos && s.back() == ']') {
        auto b = parse_base(s.substr(0, br));
        long n = 0;
        if (b && parse_count(s.substr(br + 2, s.size() - br - 3), n) && n >= 1)
          return cyclic_group_algebra(*b, static_cast<std::size_t>(n));
      }
      if (s.size() > 4 && s.compare(0, 3, "T2(") == 0 && s.back() == ')')
        if (auto b = parse_base(s.substr(3, s.size() - 4))) return upper_triangular_algebra(*b);
      throw SpecError(pointer, "unknown algebra \"" + s + "\"");
    }
    if (j.is_object() && j.contains("group_table")) {
      require_keys(j, pointer, {"base", "group_table", "name"});
      const BaseRing R = read_base(require_field(j, pointer, "base"), child(pointer, "base"));
      const json& t = j["group_table"];
      const std::string pt = child(pointer, "group_table");
      if (!t.is_array() || t.empty()) throw SpecError(pt, "expected a square table");
      std::vector<std::vector<std::size_t>> table;
      for (std::size_t r = 0; r < t.size(); ++r) {
        if (!t[r].is_array() || t[r].size() != t.size()) throw SpecError(child(pt, r), "expected a row of the table");
        std::vector<std::size_t> row;
        for (std::size_t c = 0; c < t.size(); ++c) {
          long v = read_long(t[r][c], child(child(pt, r), c));
          if (v < 0 || static_cast<std::size_t>(v) >= t.size()) throw SpecError(child(child(pt, r), c), "out of range");
          row.push_back(static_cast<std::size_t>(v));
        }
        table.push_back(std::move(row));
      }
      std::string name = j.contains("name") ? j["name"].get<std::string>() : R.name() + "[G]";
      return make_group_algebra(R, table, {}, name);
    }
    if (j.is_object()) {
      require_keys(j, pointer, {"base", "structure_constants", "unit", "name"});
      const BaseRing R = read_base(require_field(j, pointer, "base"), child(pointer, "base"));
      const json& sc = require_field(j, pointer, "structure_constants");
      const std::string ps = child(pointer, "structure_constants");
      const std::size_t n = sc.is_array() ? sc.size() : 0;
      if (n == 0) throw SpecError(ps, "expected an n x n x n array");
      std::vector<std::vector<Vec>> mult(n, std::vector<Vec>(n));
      for (std::size_t a = 0; a < n; ++a) {
        if (!sc[a].is_array() || sc[a].size() != n) throw SpecError(child(ps, a), "expected n products");
        for (std::size_t b = 0; b < n; ++b) {
          const std::string pab = child(child(ps, a), b);
          if (!sc[a][b].is_array() || sc[a][b].size() != n) throw SpecError(pab, "expected n coordinates");
          for (std::size_t c = 0; c < n; ++c) mult[a][b].push_back(read_int(sc[a][b][c], child(pab, c)));
        }
      }
      const json& u = require_field(j, pointer, "unit");
      if (!u.is_array() || u.size() != n) throw SpecError(child(pointer, "unit"), "expected n coordinates");
      Vec unit;
      for (std::size_t c = 0; c < n; ++c) unit.push_back(read_int(u[c], child(child(pointer, "unit"), c)));
      std::string name = j.contains("name") ? j["name"].get<std::string>() : "";
      return make_algebra(R, mult, unit, {}, name);
    }
  } catch (const SpecError&) {
    throw;
  } catch (const AbmcError& e) {
    throw SpecError(pointer, e.what());
  }
  throw SpecError(pointer, "expected an algebra name or object");
}

Module read_module(const AlgebraPtr& A, const json& j, const std::string& pointer) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    std::vector<Module> parts;
    std::size_t start = 0;
    while (true) {
      std::size_t plus = s.find('+', start);
      parts.push_back(read_atom(A, s.substr(start, plus == std::string::npos ? std::string::npos : plus - start), pointer));
      if (plus == std::string::npos) break;
      start = plus + 1;
    }
    if (parts.size() == 1) return parts[0];
    return direct_sum_all(parts, A);
  }
  if (!j.is_object()) throw SpecError(pointer, "expected a module string or object");
  const std::string label = j.contains("label") && j["label"].is_string() ? j["label"].get<std::string>() : "";
  if (j.contains("label") && !j["label"].is_string()) throw SpecError(child(pointer, "label"), "expected a string");
  try {
    auto finish = [&](Module M) { return label.empty() ? M : M.with_label(label); };
    if (j.contains("free")) {
      require_keys(j, pointer, {"free", "label"});
      long r = read_long(j["free"], child(pointer, "free"));
      if (r < 0) throw SpecError(child(pointer, "free"), "rank must be nonnegative");
      return finish(free_module(A, static_cast<std::size_t>(r)));
    }
    if (j.contains("trivial")) {
      require_keys(j, pointer, {"trivial", "label"});
      return finish(trivial_module(A, read_long(j["trivial"], child(pointer, "trivial"))));
    }
    if (j.contains("sign")) {
      require_keys(j, pointer, {"sign", "label"});
      return finish(sign_module(A, read_long(j["sign"], child(pointer, "sign"))));
    }
    if (j.contains("sum")) {
      require_keys(j, pointer, {"sum", "label"});
      const json& s = j["sum"];
      if (!s.is_array()) throw SpecError(child(pointer, "sum"), "expected an array of modules");
      std::vector<Module> parts;
      for (std::size_t k = 0; k < s.size(); ++k) parts.push_back(read_module(A, s[k], child(child(pointer, "sum"), k)));
      return finish(direct_sum_all(parts, A));
    }
    if (j.contains("orders")) {
      require_keys(j, pointer, {"orders", "actions", "label", "structure"});
      const json& o = j["orders"];
      if (!o.is_array()) throw SpecError(child(pointer, "orders"), "expected an array");
      Vec orders;
      for (std::size_t k = 0; k < o.size(); ++k) orders.push_back(read_int(o[k], child(child(pointer, "orders"), k)));
      const json& a = require_field(j, pointer, "actions");
      if (!a.is_array() || a.size() != A->rank())
        throw SpecError(child(pointer, "actions"), "expected one matrix per algebra basis element");
      std::vector<Mat> acts;
      for (std::size_t k = 0; k < a.size(); ++k)
        acts.push_back(read_matrix(a[k], child(child(pointer, "actions"), k), orders.size(), orders.size()));
      return Module::from_canonical(A, orders, acts, label);
    }
    if (j.contains("gens")) {
      require_keys(j, pointer, {"gens", "relations", "actions", "label"});
      long g = read_long(j["gens"], child(pointer, "gens"));
      if (g < 0) throw SpecError(child(pointer, "gens"), "must be nonnegative");
      const auto gens = static_cast<std::size_t>(g);
      Mat rel(0, gens);
      if (j.contains("relations")) {
        const json& r = j["relations"];
        if (!r.is_array()) throw SpecError(child(pointer, "relations"), "expected an array of rows");
        rel = read_matrix(r, child(pointer, "relations"), r.size(), gens);
      }
      const json& a = require_field(j, pointer, "actions");
      if (!a.is_array() || a.size() != A->rank())
        throw SpecError(child(pointer, "actions"), "expected one matrix per algebra basis element");
      std::vector<Mat> acts;
      for (std::size_t k = 0; k < a.size(); ++k)
        acts.push_back(read_matrix(a[k], child(child(pointer, "actions"), k), gens, gens));
      return make_module(A, gens, rel, acts, label);
    }
  } catch (const SpecError&) {
    throw;
  } catch (const AbmcError& e) {
    throw SpecError(pointer, e.what());
  }
  throw SpecError(pointer, "expected one of free, trivial, sign, sum, orders or gens");
}

Morphism read_morphism(const AlgebraPtr& A, const json& j, const std::string& pointer) {
  require_keys(j, pointer, {"src", "dst", "matrix"});
  Module S = read_module(A, require_field(j, pointer, "src"), child(pointer, "src"));
  Module T = read_module(A, require_field(j, pointer, "dst"), child(pointer, "dst"));
  Mat m = read_matrix(require_field(j, pointer, "matrix"), child(pointer, "matrix"), T.gens(), S.gens());
  if (auto bad = morphism_defect(S, T, m)) throw SpecError(child(pointer, "matrix"), *bad);
  return Morphism(S, T, m);
}

ChainComplex read_complex(const AlgebraPtr& A, const json& j, const std::string& pointer) {
  if (!j.is_object()) throw SpecError(pointer, "expected a complex object");
  const std::string label = j.contains("label") && j["label"].is_string() ? j["label"].get<std::string>() : "";
  if (j.contains("disk") || j.contains("sphere")) {
    const bool is_disk = j.contains("disk");
    require_keys(j, pointer, {is_disk ? "disk" : "sphere", "module", "label"});
    const int n = static_cast<int>(read_long(j[is_disk ? "disk" : "sphere"], child(pointer, is_disk ? "disk" : "sphere")));
    Module M = read_module(A, require_field(j, pointer, "module"), child(pointer, "module"));
    ChainComplex X = is_disk ? disk(n, M) : sphere(n, M);
    return label.empty() ? X : X.with_label(label);
  }
  require_keys(j, pointer, {"lo", "entries", "diffs", "label"});
  const int lo = static_cast<int>(read_long(require_field(j, pointer, "lo"), child(pointer, "lo")));
  const json& e = require_field(j, pointer, "entries");
  if (!e.is_array()) throw SpecError(child(pointer, "entries"), "expected an array of modules");
  std::vector<Module> entries;
  for (std::size_t k = 0; k < e.size(); ++k) entries.push_back(read_module(A, e[k], child(child(pointer, "entries"), k)));
  std::vector<Morphism> diffs;
  const json empty = json::array();
  const json& d = j.contains("diffs") ? j["diffs"] : empty;
  const std::string pd = child(pointer, "diffs");
  if (!d.is_array() || d.size() + 1 != std::max<std::size_t>(entries.size(), 1))
    throw SpecError(pd, "expected one matrix between consecutive entries");
  for (std::size_t k = 0; k < d.size(); ++k) {
    const Module& S = entries[k + 1];
    const Module& T = entries[k];
    Mat m = read_matrix(d[k], child(pd, k), T.gens(), S.gens());
    if (auto bad = morphism_defect(S, T, m)) throw SpecError(child(pd, k), *bad);
    diffs.emplace_back(S, T, m);
  }
  try {
    return ChainComplex(A, lo, entries, diffs, label);
  } catch (const InvalidComplex& ex) {
    throw SpecError(pd, ex.what());
  }
}

// ------------------------------------------------------------------ writers

ordered to_json(const Int& a) {
  if (a.fits_slong_p()) return a.get_si();
  return a.get_str();
}

ordered to_json(const Vec& v) {
  ordered out = ordered::array();
  for (const auto& a : v) out.push_back(to_json(a));
  return out;
}

ordered to_json(const Mat& m) {
  ordered out = ordered::array();
  for (std::size_t r = 0; r < m.rows(); ++r) out.push_back(to_json(m.row(r)));
  return out;
}

ordered to_json(const Module& M) {
  ordered out;
  out["label"] = display_name(M);
  out["structure"] = M.structure_string();
  out["orders"] = to_json(M.orders());
  ordered acts = ordered::array();
  for (const auto& a : M.actions()) acts.push_back(to_json(a));
  out["actions"] = acts;
  return out;
}

ordered to_json(const Morphism& f) {
  ordered out;
  out["src"] = display_name(f.src());
  out["dst"] = display_name(f.dst());
  out["matrix"] = to_json(f.matrix());
  return out;
}

ordered to_json(const ChainComplex& X) {
  ordered out;
  out["name"] = X.label().empty() ? X.describe() : X.label();
  out["lo"] = X.empty_window() ? 0 : X.lo();
  ordered entries = ordered::array(), diffs = ordered::array();
  if (!X.empty_window())
    for (int n = X.lo(); n <= X.hi(); ++n) {
      entries.push_back(display_name(X.entry(n)));
      if (n > X.lo()) diffs.push_back(to_json(X.d(n).matrix()));
    }
  out["entries"] = entries;
  out["diffs"] = diffs;
  return out;
}

ordered to_json(const ChainMap& f) {
  ordered out = ordered::object();
  for (const auto& [n, m] : f.comp)
    if (!m.src().is_zero() && !m.dst().is_zero()) out[std::to_string(n)] = to_json(m.matrix());
  return out;
}

ordered to_json(const Verdict& v) {
  ordered out;
  out["verdict"] = verdict_string(v.kind);
  if (v.kind == VerdictKind::No) out["certificate"] = v.certificate;
  if (v.kind == VerdictKind::YesRelativeToFamily) out["family"] = v.certificate;
  return out;
}

ordered to_json(const SES& s) {
  ordered out;
  out["sequence"] = ses_string(s);
  out["i"] = to_json(s.i);
  out["p"] = to_json(s.p);
  return out;
}

ordered to_json(const OrthogonalityReport& r) {
  ordered out;
  out["i_max"] = r.i_max;
  out["cells"] = r.cells.size();
  out["all_zero"] = r.all_zero();
  ordered nonzero = ordered::array();
  for (const auto& c : r.cells)
    if (!c.pass())
      nonzero.push_back("Ext^" + std::to_string(c.degree) + "(" + c.d_name + ", " + c.e_name + ") = " + c.structure);
  out["nonzero"] = nonzero;
  return out;
}

ordered to_json(const ThickReport& r) {
  ordered out;
  out["pass"] = r.pass;
  out["sequences_checked"] = r.sequences_checked;
  out["retracts_checked"] = r.retracts_checked;
  if (!r.pass) out["certificate"] = r.certificate;
  return out;
}

ordered to_json(const HereditaryReport& r) {
  ordered out;
  out["pass"] = r.pass();
  out["ext_vanishing"] = to_json(r.ext_vanishing);
  out["kernels_closed"] = r.kernels_closed;
  out["epis_checked"] = r.epis_checked;
  if (!r.kernels_closed) out["kernel_certificate"] = r.kernel_certificate;
  out["cokernels_closed"] = r.cokernels_closed;
  out["monos_checked"] = r.monos_checked;
  if (!r.cokernels_closed) out["cokernel_certificate"] = r.cokernel_certificate;
  return out;
}

ordered to_json(const Factorization& f) {
  ordered out;
  out["mode"] = mode_string(f.mode);
  out["route"] = f.route;
  out["middle"] = display_name(f.first.dst());
  out["first"] = to_json(f.first);
  out["second"] = to_json(f.second);
  ordered v = ordered::array();
  for (const auto& m : f.verification) {
    ordered e = to_json(m.verdict);
    e["what"] = m.what;
    v.push_back(e);
  }
  out["verification"] = v;
  return out;
}

ordered to_json(const MapClass& c) {
  ordered out;
  out["cofibration"] = to_json(c.cofibration);
  out["fibration"] = to_json(c.fibration);
  out["acyclic_cofibration"] = to_json(c.acyclic_cofibration);
  out["acyclic_fibration"] = to_json(c.acyclic_fibration);
  if (c.weak_equivalence) out["weak_equivalence"] = to_json(*c.weak_equivalence);
  return out;
}

ordered to_json(const MonoidalReport& r) {
  ordered out;
  out["pass"] = r.pass();
  ordered conds = ordered::array();
  for (const auto& c : r.conditions) {
    ordered e;
    e["name"] = c.name;
    e["pass"] = c.pass;
    e["checked"] = c.checked;
    if (!c.certificate.empty()) e["certificate"] = c.certificate;
    if (!c.note.empty()) e["note"] = c.note;
    conds.push_back(e);
  }
  out["conditions"] = conds;
  return out;
}

ordered to_json(const InducedPairReport& r) {
  ordered out;
  out["pass"] = r.pass();
  out["family"] = r.family;
  out["catalog_size"] = r.catalog_size;
  ordered counts;
  counts["tilde_D"] = r.tilde_d;
  counts["tilde_E"] = r.tilde_e;
  counts["dg_tilde_D"] = r.dg_d;
  counts["dg_tilde_E"] = r.dg_e;
  counts["exact"] = r.exact;
  out["classes"] = counts;
  ordered a;
  a["pass"] = r.orthogonality;
  a["ext_cells"] = r.ext_cells;
  if (!r.orthogonality) a["certificate"] = r.orthogonality_certificate;
  out["orthogonality"] = a;
  ordered b;
  b["pass"] = r.compatibility;
  b["asserted"] = r.compatibility_asserted;
  if (!r.compatibility) b["certificate"] = r.compatibility_certificate;
  if (!r.compatibility_asserted) b["note"] = "claimed only for hereditary base pairs; the base pair failed (c)";
  out["compatibility"] = b;
  out["hereditary"] = to_json(r.hereditary);
  return out;
}

ordered to_json(const PurityReport& r) {
  ordered out;
  out["pure"] = r.pure;
  if (!r.pure) out["witness"] = r.witness;
  out["bound"] = r.bound;
  out["completeness"] = r.completeness_note;
  return out;
}

// ---------------------------------------------------------------- text form

namespace {

bool is_flat(const ordered& j) {
  if (!j.is_array()) return !j.is_object();
  for (const auto& e : j)
    if (e.is_object() || (e.is_array() && !is_flat(e))) return false;
  return true;
}

std::string scalar(const ordered& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_array()) {
    std::string s = "[";
    for (std::size_t k = 0; k < j.size(); ++k) s += (k ? ", " : "") + scalar(j[k]);
    return s + "]";
  }
  if (j.is_boolean()) return j.get<bool>() ? "yes" : "no";
  return j.dump();
}

void render(const ordered& j, int indent, std::ostringstream& out) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  if (j.is_object()) {
    std::size_t width = 0;
    for (const auto& [k, v] : j.items()) width = std::max(width, k.size());
    for (const auto& [k, v] : j.items()) {
      if (is_flat(v)) {
        out << pad << k << std::string(width - k.size() + 2, ' ') << scalar(v) << "\n";
      } else {
        out << pad << k << "\n";
        render(v, indent + 2, out);
      }
    }
    return;
  }
  if (j.is_array()) {
    for (const auto& e : j) {
      if (is_flat(e)) {
        out << pad << "- " << scalar(e) << "\n";
      } else {
        out << pad << "-\n";
        render(e, indent + 2, out);
      }
    }
    return;
  }
  out << pad << scalar(j) << "\n";
}

}  // namespace

std::string render_text(const ordered& report) {
  std::ostringstream out;
  render(report, 0, out);
  return out.str();
}

}  // namespace abmc::io
