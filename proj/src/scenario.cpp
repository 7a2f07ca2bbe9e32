#include "weil/scenario.hpp"

#include <algorithm>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>

#include "weil/error.hpp"
#include "weil/weil_engine.hpp"

namespace weil {

namespace {

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorKind::Validation, msg); }

void allow_keys(const json& j, std::initializer_list<const char*> keys, const std::string& where) {
  if (!j.is_object()) invalid(where + ": expected an object");
  for (const auto& [k, v] : j.items()) {
    if (std::none_of(keys.begin(), keys.end(), [&](const char* a) { return k == a; })) {
      invalid(where + ": unknown field \"" + k + "\"");
    }
  }
}

const json& need(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) invalid(where + ": missing field \"" + key + "\"");
  return j.at(key);
}

std::int64_t get_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) invalid(where + ": expected an integer");
  return j.get<std::int64_t>();
}

mpq_class get_rational(const json& j, const std::string& where) {
  if (j.is_number_integer()) return mpq_class(mpz_class(std::to_string(j.get<std::int64_t>())));
  if (!j.is_string()) invalid(where + ": expected an integer or a \"num/den\" string");
  const auto s = j.get<std::string>();
  mpq_class q;
  if (s.empty() || q.set_str(s, 10) != 0 || q.get_den() == 0) invalid(where + ": bad rational \"" + s + "\"");
  q.canonicalize();
  return q;
}

json rational_json(const mpq_class& q) { return q.get_str(); }

std::vector<mpq_class> get_rationals(const json& j, const std::string& where) {
  if (!j.is_array()) invalid(where + ": expected an array");
  std::vector<mpq_class> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_rational(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

json rationals_json(const std::vector<mpq_class>& v) {
  json out = json::array();
  for (const auto& q : v) out.push_back(rational_json(q));
  return out;
}

std::vector<std::int64_t> get_ints(const json& j, const std::string& where) {
  if (!j.is_array()) invalid(where + ": expected an array");
  std::vector<std::int64_t> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_int(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

RationalMatrix get_matrix(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) invalid(where + ": expected a nonempty array of rows");
  RationalMatrix m;
  for (std::size_t i = 0; i < j.size(); ++i) m.push_back(get_rationals(j[i], where + "[" + std::to_string(i) + "]"));
  for (const auto& row : m) {
    if (row.size() != m.size()) invalid(where + ": matrix is not square");
  }
  return m;
}

json matrix_json(const RationalMatrix& m) {
  json out = json::array();
  for (const auto& row : m) out.push_back(rationals_json(row));
  return out;
}

const std::pair<FieldKind, const char*> kFieldNames[] = {
    {FieldKind::PAdic, "padic"},   {FieldKind::Unramified, "unramified"}, {FieldKind::Eisenstein, "eisenstein"},
    {FieldKind::EqChar, "eqchar"}, {FieldKind::Real, "real"},             {FieldKind::Complex, "complex"}};

FieldDescriptor parse_field(const json& j) {
  allow_keys(j, {"kind", "p", "poly"}, "field");
  FieldDescriptor f;
  const auto& k = need(j, "kind", "field");
  if (!k.is_string()) invalid("field.kind: expected a string");
  bool found = false;
  for (const auto& [kind, name] : kFieldNames) {
    if (k.get<std::string>() == name) f.kind = kind, found = true;
  }
  if (!found) invalid("field.kind: unknown kind \"" + k.get<std::string>() + "\"");
  if (f.kind != FieldKind::Real && f.kind != FieldKind::Complex) f.p = get_int(need(j, "p", "field"), "field.p");
  if (j.contains("poly")) f.poly = get_rationals(j["poly"], "field.poly");
  if ((f.kind == FieldKind::Unramified || f.kind == FieldKind::Eisenstein) && f.poly.empty()) {
    invalid("field.poly: required for " + std::string(to_string(f.kind)) + " fields");
  }
  return f;
}

json field_json(const FieldDescriptor& f) {
  json j;
  for (const auto& [kind, name] : kFieldNames) {
    if (kind == f.kind) j["kind"] = name;
  }
  if (f.kind != FieldKind::Real && f.kind != FieldKind::Complex) j["p"] = f.p;
  if (!f.poly.empty()) j["poly"] = rationals_json(f.poly);
  return j;
}

ElementSpec parse_element(const json& j, const std::string& where) {
  ElementSpec e;
  if (j.is_object()) {
    allow_keys(j, {"val", "digits"}, where);
    e.val = get_int(need(j, "val", where), where + ".val");
    e.digits = get_ints(need(j, "digits", where), where + ".digits");
    if (e.digits.empty()) invalid(where + ".digits: empty");
  } else {
    e.rational = get_rational(j, where);
  }
  return e;
}

json element_json(const ElementSpec& e) {
  if (e.rational) return rational_json(*e.rational);
  return json{{"val", e.val}, {"digits", e.digits}};
}

CharacterSpec parse_character(const json& j) {
  allow_keys(j, {"conductor", "sign"}, "character");
  CharacterSpec c;
  if (j.contains("conductor")) c.conductor = get_int(j["conductor"], "character.conductor");
  if (j.contains("sign")) {
    c.sign = static_cast<int>(get_int(j["sign"], "character.sign"));
    if (c.sign != 1 && c.sign != -1) invalid("character.sign: must be 1 or -1");
  }
  return c;
}

json character_json(const CharacterSpec& c) {
  json j{{"conductor", c.conductor}};
  if (c.sign != 0) j["sign"] = c.sign;
  return j;
}

LaurentSpec parse_laurent(const json& j, const std::string& where) {
  allow_keys(j, {"min_order", "coeffs"}, where);
  LaurentSpec l;
  l.min_order = static_cast<int>(get_int(need(j, "min_order", where), where + ".min_order"));
  l.coeffs = get_rationals(need(j, "coeffs", where), where + ".coeffs");
  return l;
}

json laurent_json(const LaurentSpec& l) { return json{{"min_order", l.min_order}, {"coeffs", rationals_json(l.coeffs)}}; }

std::vector<Factor> parse_factors(const json& j, const std::string& where) {
  if (!j.is_array()) invalid(where + ": expected an array");
  std::vector<Factor> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto w = where + "[" + std::to_string(i) + "]";
    allow_keys(j[i], {"poly", "exp"}, w);
    Factor f{QPoly(get_rationals(need(j[i], "poly", w), w + ".poly")),
             static_cast<int>(get_int(need(j[i], "exp", w), w + ".exp"))};
    out.push_back(std::move(f));
  }
  return out;
}

json factors_json(const std::vector<Factor>& fs) {
  json out = json::array();
  for (const auto& f : fs) out.push_back(json{{"poly", rationals_json(f.poly.coeffs())}, {"exp", f.exp}});
  return out;
}

FiniteCharSpec parse_finite(const json& j) {
  allow_keys(j, {"orders", "gram"}, "form");
  FiniteCharSpec f;
  f.orders = get_ints(need(j, "orders", "form"), "form.orders");
  f.gram = get_matrix(need(j, "gram", "form"), "form.gram");
  if (f.gram.size() != f.orders.size()) invalid("form: gram size does not match the number of cyclic factors");
  return f;
}

std::string mu8_text(Mu8 m) { return m.str(); }

}  // namespace

const char* to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::WeilLocal: return "weil-local";
    case ScenarioKind::WeilLoop: return "weil-loop";
    case ScenarioKind::GaussSum: return "gauss-sum";
    case ScenarioKind::VerifyGlobal: return "verify-global";
    case ScenarioKind::VerifyCurve: return "verify-curve";
    case ScenarioKind::VerifySurface: return "verify-surface";
    case ScenarioKind::CheckFinite: return "check-finite";
  }
  return "?";
}

ScenarioKind scenario_kind_from_string(const std::string& s) {
  for (auto k : {ScenarioKind::WeilLocal, ScenarioKind::WeilLoop, ScenarioKind::GaussSum, ScenarioKind::VerifyGlobal,
                 ScenarioKind::VerifyCurve, ScenarioKind::VerifySurface, ScenarioKind::CheckFinite}) {
    if (s == to_string(k)) return k;
  }
  invalid("unknown scenario kind \"" + s + "\"");
}

LocalField FieldDescriptor::build(int precision) const {
  switch (kind) {
    case FieldKind::PAdic: return LocalField::padic(p, precision);
    case FieldKind::Unramified: return LocalField::unramified(p, poly, precision);
    case FieldKind::Eisenstein: return LocalField::eisenstein(p, poly, precision);
    case FieldKind::EqChar: {
      FpPoly g;
      for (const auto& c : poly) {
        if (c.get_den() != 1) invalid("field.poly: residue modulus coefficients must be integers");
        g.push_back(fp::mod(c.get_num().get_si(), p));
      }
      return LocalField::eqchar(p, g, precision);
    }
    case FieldKind::Real: return LocalField::real();
    case FieldKind::Complex: return LocalField::complex();
  }
  invalid("bad field descriptor");
}

LocalFieldElement ElementSpec::build(const LocalField& f) const {
  if (rational) {
    if (f.kind() == FieldKind::Complex) return LocalFieldElement::from_complex(f, *rational, 0);
    return LocalFieldElement::from_rational(f, *rational);
  }
  if (f.is_archimedean()) invalid("archimedean coefficients must be rational");
  if (f.kind() == FieldKind::EqChar) {
    const auto& F = f.residue_field();
    std::vector<FqElem> s;
    for (auto d : digits) {
      if (d < 0 || static_cast<std::uint64_t>(d) >= F.size()) invalid("a.digits: residue index out of range");
      s.push_back(F.element(static_cast<std::uint64_t>(d)));
    }
    return LocalFieldElement::from_series(f, val, std::move(s), LocalFieldElement::kExact);
  }
  if (digits.size() > static_cast<std::size_t>(f.degree())) invalid("a.digits: more coordinates than the degree");
  std::vector<mpz_class> w(static_cast<std::size_t>(f.degree()), 0);
  for (std::size_t i = 0; i < digits.size(); ++i) w[i] = static_cast<long>(digits[i]);
  return LocalFieldElement::from_coords(f, val, std::move(w), LocalFieldElement::kExact);
}

AdditiveCharacter CharacterSpec::build(const LocalField& f) const {
  AdditiveCharacter psi = AdditiveCharacter::standard(f);
  psi.base_conductor = conductor;
  if (sign != 0) psi.sign = sign;
  return psi;
}

bool operator==(const Scenario& a, const Scenario& b) { return to_json(a) == to_json(b); }

Scenario parse_scenario(const json& j) {
  if (!j.is_object()) invalid("scenario: expected an object");
  Scenario s;
  const auto& kind = need(j, "kind", "scenario");
  if (!kind.is_string()) invalid("scenario.kind: expected a string");
  s.kind = scenario_kind_from_string(kind.get<std::string>());
  switch (s.kind) {
    case ScenarioKind::WeilLocal:
      allow_keys(j, {"id", "kind", "precision", "seed", "field", "a", "character"}, "weil-local");
      break;
    case ScenarioKind::WeilLoop:
      allow_keys(j, {"id", "kind", "precision", "seed", "field", "character", "matrix", "omega", "extra_places"},
                 "weil-loop");
      break;
    case ScenarioKind::GaussSum:
    case ScenarioKind::CheckFinite:
      allow_keys(j, {"id", "kind", "precision", "seed", "form"}, to_string(s.kind));
      break;
    case ScenarioKind::VerifyGlobal:
      allow_keys(j, {"id", "kind", "precision", "seed", "matrix", "extra_places"}, "verify-global");
      break;
    case ScenarioKind::VerifyCurve:
      allow_keys(j, {"id", "kind", "precision", "seed", "p", "omega"}, "verify-curve");
      break;
    case ScenarioKind::VerifySurface:
      allow_keys(j, {"id", "kind", "precision", "seed", "p", "c_psi", "omega"}, "verify-surface");
      break;
  }
  if (j.contains("id")) {
    if (!j["id"].is_string()) invalid("scenario.id: expected a string");
    s.id = j["id"].get<std::string>();
  }
  if (j.contains("precision")) {
    s.precision = static_cast<int>(get_int(j["precision"], "precision"));
    if (s.precision < 1 || s.precision > 4096) invalid("precision: out of range [1, 4096]");
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer()) invalid("seed: expected an integer");
    s.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("extra_places")) s.extra_places = get_ints(j["extra_places"], "extra_places");

  switch (s.kind) {
    case ScenarioKind::WeilLocal:
      s.field = parse_field(need(j, "field", "weil-local"));
      s.a = parse_element(need(j, "a", "weil-local"), "a");
      if (j.contains("character")) s.character = parse_character(j["character"]);
      break;
    case ScenarioKind::WeilLoop: {
      if (j.contains("field")) s.field = parse_field(j["field"]);
      else s.field.kind = FieldKind::Real, s.field.p = -1;  // marker: every place of Q
      if (j.contains("character")) s.character = parse_character(j["character"]);
      const auto& m = need(j, "matrix", "weil-loop");
      if (!m.is_array() || m.empty()) invalid("matrix: expected a nonempty array of rows");
      for (std::size_t r = 0; r < m.size(); ++r) {
        if (!m[r].is_array() || m[r].size() != m.size()) invalid("matrix: not square");
        std::vector<LaurentSpec> row;
        for (std::size_t c = 0; c < m[r].size(); ++c) {
          row.push_back(parse_laurent(m[r][c], "matrix[" + std::to_string(r) + "][" + std::to_string(c) + "]"));
        }
        s.loop_matrix.push_back(std::move(row));
      }
      s.omega_loop = parse_laurent(need(j, "omega", "weil-loop"), "omega");
      break;
    }
    case ScenarioKind::GaussSum:
    case ScenarioKind::CheckFinite: s.finite = parse_finite(need(j, "form", to_string(s.kind))); break;
    case ScenarioKind::VerifyGlobal: s.matrix = get_matrix(need(j, "matrix", "verify-global"), "matrix"); break;
    case ScenarioKind::VerifyCurve: {
      s.p = get_int(need(j, "p", "verify-curve"), "p");
      const auto& o = need(j, "omega", "verify-curve");
      allow_keys(o, {"constant", "factors"}, "omega");
      s.omega_curve.num.constant = o.contains("constant") ? get_rational(o["constant"], "omega.constant") : 1;
      if (o.contains("factors")) s.omega_curve.num.factors = parse_factors(o["factors"], "omega.factors");
      break;
    }
    case ScenarioKind::VerifySurface: {
      s.p = get_int(need(j, "p", "verify-surface"), "p");
      s.c_psi = j.contains("c_psi") ? get_int(j["c_psi"], "c_psi") : 0;
      const auto& o = need(j, "omega", "verify-surface");
      allow_keys(o, {"p_power", "unit_series", "factors"}, "omega");
      s.omega_surface.p = s.p;
      s.omega_surface.p_power = o.contains("p_power") ? get_int(o["p_power"], "omega.p_power") : 0;
      if (o.contains("unit_series")) s.omega_surface.unit_series = get_rationals(o["unit_series"], "omega.unit_series");
      if (o.contains("factors")) s.omega_surface.factors = parse_factors(o["factors"], "omega.factors");
      break;
    }
  }
  return s;
}

json to_json(const Scenario& s) {
  json j;
  if (!s.id.empty()) j["id"] = s.id;
  j["kind"] = to_string(s.kind);
  j["precision"] = s.precision;
  j["seed"] = s.seed;
  switch (s.kind) {
    case ScenarioKind::WeilLocal:
      j["field"] = field_json(s.field);
      j["a"] = element_json(s.a);
      j["character"] = character_json(s.character);
      break;
    case ScenarioKind::WeilLoop: {
      if (s.field.p != -1) j["field"] = field_json(s.field);
      j["character"] = character_json(s.character);
      json m = json::array();
      for (const auto& row : s.loop_matrix) {
        json r = json::array();
        for (const auto& e : row) r.push_back(laurent_json(e));
        m.push_back(r);
      }
      j["matrix"] = m;
      j["omega"] = laurent_json(s.omega_loop);
      if (!s.extra_places.empty()) j["extra_places"] = s.extra_places;
      break;
    }
    case ScenarioKind::GaussSum:
    case ScenarioKind::CheckFinite:
      j["form"] = json{{"orders", s.finite.orders}, {"gram", matrix_json(s.finite.gram)}};
      break;
    case ScenarioKind::VerifyGlobal:
      j["matrix"] = matrix_json(s.matrix);
      if (!s.extra_places.empty()) j["extra_places"] = s.extra_places;
      break;
    case ScenarioKind::VerifyCurve:
      j["p"] = s.p;
      j["omega"] = json{{"constant", rational_json(s.omega_curve.num.constant)},
                        {"factors", factors_json(s.omega_curve.num.factors)}};
      break;
    case ScenarioKind::VerifySurface:
      j["p"] = s.p;
      j["c_psi"] = s.c_psi;
      j["omega"] = json{{"p_power", s.omega_surface.p_power},
                        {"unit_series", rationals_json(s.omega_surface.unit_series)},
                        {"factors", factors_json(s.omega_surface.factors)}};
      break;
  }
  return j;
}

json to_json(Mu8 m) { return m.exponent(); }

json to_json(const CycInt& c) {
  json coeffs = json::array();
  for (const auto& x : c.canonical()) {
    if (x.fits_slong_p()) coeffs.push_back(x.get_si());
    else coeffs.push_back(x.get_str());
  }
  return json{{"order", c.order()}, {"coeffs", coeffs}};
}

json to_json(const WeilIndexReport& r, bool include_timing) {
  auto entry = [&](const PlaceEntry& e) {
    json j{{"place", e.place}, {"index", to_json(e.index)}, {"ord", e.ord}, {"detail", e.detail}};
    if (include_timing) j["seconds"] = e.seconds;
    return j;
  };
  json j;
  j["scenario_id"] = r.scenario_id;
  j["entries"] = json::array();
  for (const auto& e : r.entries) j["entries"].push_back(entry(e));
  j["skipped"] = json::array();
  for (const auto& s : r.skipped) j["skipped"].push_back(json{{"place", s.place}, {"justification", s.justification}});
  j["spot_checks"] = json::array();
  for (const auto& e : r.spot_checks) j["spot_checks"].push_back(entry(e));
  j["product"] = to_json(r.product);
  j["pass"] = r.pass;
  j["experimental"] = r.experimental;
  return j;
}

namespace {

std::string report_table(const WeilIndexReport& r) {
  std::ostringstream out;
  out << std::left << std::setw(34) << "place" << std::setw(8) << "index" << std::setw(6) << "ord" << "detail\n";
  for (const auto& e : r.entries) {
    out << std::setw(34) << e.place << std::setw(8) << mu8_text(e.index) << std::setw(6) << e.ord << e.detail << "\n";
  }
  for (const auto& s : r.skipped) out << "skipped  " << s.place << "  [" << s.justification << "]\n";
  for (const auto& e : r.spot_checks) out << "audit    " << e.place << "  " << mu8_text(e.index) << "\n";
  out << "product: " << mu8_text(r.product) << "  " << (r.pass ? "PASS" : "FAIL");
  if (r.experimental) out << "  (experimental)";
  out << "\n";
  return out.str();
}

}  // namespace

RunResult run_scenario(const Scenario& s, const RunOptions& opts) {
  const int precision = opts.precision.value_or(s.precision);
  std::vector<std::int64_t> extra = s.extra_places;
  extra.insert(extra.end(), opts.extra_places.begin(), opts.extra_places.end());
  std::sort(extra.begin(), extra.end());
  extra.erase(std::unique(extra.begin(), extra.end()), extra.end());
  VerifyOptions vo;
  vo.precision = precision;
  vo.extra_places = extra;

  RunResult out;
  auto verified = [&](WeilIndexReport r) {
    r.scenario_id = s.id;
    out.report = to_json(r, opts.include_timing);
    out.report["kind"] = to_string(s.kind);
    out.exit_code = r.pass ? 0 : 1;
    out.text = report_table(r);
  };
  std::ostringstream text;
  switch (s.kind) {
    case ScenarioKind::WeilLocal: {
      const auto f = s.field.build(precision);
      const auto psi = s.character.build(f);
      out.report = json{{"scenario_id", s.id}, {"kind", to_string(s.kind)}, {"field", f.str()}};
      Mu8 index;
      if (f.is_archimedean()) {
        if (!s.a.rational) invalid("archimedean coefficients must be rational");
        index = weil_index_arch(f, *s.a.rational, psi.sign);
      } else {
        const weil::QuadraticCharDescriptor h{s.a.build(f), psi};
        const auto w = lattice_window(h);
        index = weil_index_local(h);
        out.report["conductor"] = psi.conductor();
        out.report["valuation"] = h.a.valuation();
        out.report["window"] = json{{"d_low", w.d_low}, {"d_high", w.d_high}, {"self_dual", w.self_dual}};
      }
      out.report["index"] = to_json(index);
      text << f.str() << "  index " << mu8_text(index) << "\n";
      out.text = text.str();
      break;
    }
    case ScenarioKind::WeilLoop: {
      Matrix<RationalFunction> q;
      for (const auto& row : s.loop_matrix) {
        std::vector<RationalFunction> r;
        for (const auto& e : row) r.push_back(e.build());
        q.push_back(std::move(r));
      }
      const auto w = s.omega_loop.build();
      if (s.field.p == -1) {
        verified(verify_loop(q, w, vo));
        break;
      }
      const auto f = s.field.build(precision);
      const auto index = weil_index_loop_form(s.character.build(f), q, w);
      out.report = json{{"scenario_id", s.id}, {"kind", to_string(s.kind)}, {"field", f.str()}, {"index", to_json(index)}};
      text << f.str() << "((t))  index " << mu8_text(index) << "\n";
      out.text = text.str();
      break;
    }
    case ScenarioKind::GaussSum: {
      const auto h = s.finite.build();
      const auto g = gauss_sum(h);
      const auto index = weil_index_finite(h);
      out.report = json{{"scenario_id", s.id}, {"kind", to_string(s.kind)}, {"order", h.group().size()},
                        {"gauss_sum", to_json(g)}, {"index", to_json(index)}};
      text << "|A| = " << h.group().size() << "  gauss sum " << g.str() << "  index " << mu8_text(index) << "\n";
      out.text = text.str();
      break;
    }
    case ScenarioKind::CheckFinite: {
      const auto h = s.finite.build();
      const bool nondeg = check_nondegenerate(h);
      out.report = json{{"scenario_id", s.id}, {"kind", to_string(s.kind)}, {"order", h.group().size()},
                        {"nondegenerate", nondeg}};
      bool pass = nondeg;
      if (nondeg) {
        const auto g = gauss_sum(h);
        const bool fourier = fourier_identity_check(h);
        const auto sl2 = sl2_relation_check(h);
        const bool lambda_ok = equal(sl2.scalar, g, std::lcm(sl2.scalar.order(), g.order()));
        out.report["gauss_sum"] = to_json(g);
        out.report["index"] = to_json(weil_index_finite(h));
        out.report["fourier"] = fourier;
        out.report["sl2"] = json{{"lambda", to_json(sl2.scalar)}, {"pass4", sl2.pass4}, {"pass3", sl2.pass3},
                                 {"lambda_is_gauss_sum", lambda_ok}, {"full_matrices", sl2.full_matrices}};
        pass = fourier && sl2.pass4 && sl2.pass3 && lambda_ok;
        text << "|A| = " << h.group().size() << "  fourier " << (fourier ? "ok" : "FAIL") << "  S^4 "
             << (sl2.pass4 ? "ok" : "FAIL") << "  (TS)^3 " << (sl2.pass3 ? "ok" : "FAIL") << "  lambda "
             << (lambda_ok ? "= gauss sum" : "MISMATCH") << "\n";
      } else {
        text << "|A| = " << h.group().size() << "  degenerate\n";
      }
      out.report["pass"] = pass;
      out.exit_code = pass ? 0 : 1;
      out.text = text.str();
      break;
    }
    case ScenarioKind::VerifyGlobal: verified(verify_global(s.matrix, vo)); break;
    case ScenarioKind::VerifyCurve: verified(verify_curve(s.p, s.omega_curve, vo)); break;
    case ScenarioKind::VerifySurface: verified(verify_surface(s.omega_surface, s.c_psi, vo)); break;
  }
  return out;
}

std::int64_t uniform_int(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw Error(ErrorKind::Domain, "uniform_int: empty range");
  const std::uint64_t range = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo);
  if (range == std::numeric_limits<std::uint64_t>::max()) return static_cast<std::int64_t>(rng());
  const std::uint64_t n = range + 1;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do x = rng();
  while (x >= limit);
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(lo) + x % n);
}

namespace {

template <class T>
const T& pick(std::mt19937_64& rng, const std::vector<T>& v) {
  return v[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<std::int64_t>(v.size()) - 1))];
}

mpq_class random_rational(std::mt19937_64& rng, std::int64_t height, bool nonzero) {
  for (;;) {
    mpq_class q(uniform_int(rng, -height, height), uniform_int(rng, 1, height));
    q.canonicalize();
    if (!nonzero || q != 0) return q;
  }
}

std::int64_t draw_prime(std::mt19937_64& rng, std::int64_t p) { return p != 0 ? p : pick(rng, std::vector<std::int64_t>{3, 5, 7}); }

std::int64_t ipow(std::int64_t b, int e) {
  std::int64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

FiniteCharSpec random_finite(std::mt19937_64& rng) {
  for (;;) {
    const std::int64_t p = pick(rng, std::vector<std::int64_t>{2, 3, 5, 7});
    FiniteCharSpec f;
    std::int64_t size = 1;
    const int rank = static_cast<int>(uniform_int(rng, 1, 3));
    for (int i = 0; i < rank; ++i) {
      std::vector<std::int64_t> fits;
      for (int k = 1; size * ipow(p, k) <= 343; ++k) fits.push_back(ipow(p, k));
      if (fits.empty()) break;
      f.orders.push_back(pick(rng, fits));
      size *= f.orders.back();
    }
    const std::size_t n = f.orders.size();
    f.gram.assign(n, std::vector<mpq_class>(n, 0));
    // h(x) = exp(2 pi i x^T G x) is well defined iff 2 d_i G_ij and d_i^2 G_ii are
    // integers; the draws below stay inside that lattice.
    for (std::size_t i = 0; i < n; ++i) {
      const std::int64_t d = f.orders[i];
      f.gram[i][i] = p == 2 ? mpq_class(uniform_int(rng, 0, 2 * d - 1), 2 * d) : mpq_class(uniform_int(rng, 0, d - 1), d);
      f.gram[i][i].canonicalize();
      for (std::size_t j = 0; j < i; ++j) {
        const std::int64_t m = std::min(d, f.orders[j]);
        mpq_class g(uniform_int(rng, 0, 2 * m - 1), 2 * m);
        g.canonicalize();
        f.gram[i][j] = f.gram[j][i] = g;
      }
    }
    if (check_nondegenerate(f.build())) return f;
  }
}

std::vector<std::pair<FieldDescriptor, int>> local_field_menu() {
  auto q = [](std::vector<long> v) {
    std::vector<mpq_class> out;
    for (auto c : v) out.emplace_back(c);
    return out;
  };
  return {
      {{FieldKind::PAdic, 2, {}}, 0},
      {{FieldKind::PAdic, 3, {}}, 0},
      {{FieldKind::PAdic, 5, {}}, 0},
      {{FieldKind::PAdic, 7, {}}, 0},
      {{FieldKind::Unramified, 2, q({1, 1, 1})}, 0},
      {{FieldKind::Unramified, 3, q({1, 0, 1})}, 0},
      {{FieldKind::Unramified, 5, q({-2, 0, 1})}, 0},
      {{FieldKind::Eisenstein, 2, q({-2, 0, 1})}, 0},
      {{FieldKind::Eisenstein, 3, q({-3, 0, 1})}, 0},
      {{FieldKind::Eisenstein, 3, q({3, 0, 0, 1})}, 0},
      {{FieldKind::Eisenstein, 5, q({-5, 0, 1})}, 0},
      {{FieldKind::EqChar, 3, {}}, 0},
      {{FieldKind::EqChar, 5, {}}, 0},
      {{FieldKind::EqChar, 3, q({1, 0, 1})}, 0},
  };
}

Scenario random_local(std::mt19937_64& rng) {
  Scenario s;
  s.kind = ScenarioKind::WeilLocal;
  s.field = pick(rng, local_field_menu()).first;
  const auto f = s.field.build(s.precision);
  s.a.val = uniform_int(rng, -3, 3);
  const int width = s.field.kind == FieldKind::EqChar ? 3 : f.degree();
  const std::int64_t digit_max = s.field.kind == FieldKind::EqChar ? static_cast<std::int64_t>(f.residue_field().size()) - 1
                                                                   : s.field.p - 1;
  for (;;) {
    s.a.digits.clear();
    for (int i = 0; i < width; ++i) s.a.digits.push_back(uniform_int(rng, 0, digit_max));
    if (s.a.digits[0] != 0 || (s.field.kind == FieldKind::Unramified && s.a.digits[1] != 0)) break;
  }
  s.character.conductor = uniform_int(rng, -2, 2);
  s.character.sign = uniform_int(rng, 0, 1) ? 1 : -1;
  return s;
}

LaurentSpec random_laurent(std::mt19937_64& rng, int lo, int hi, bool nonzero) {
  LaurentSpec l;
  l.min_order = static_cast<int>(uniform_int(rng, lo, hi));
  const int terms = static_cast<int>(uniform_int(rng, 1, 2));
  for (int i = 0; i < terms; ++i) l.coeffs.push_back(random_rational(rng, 6, nonzero && i == 0));
  if (!nonzero && uniform_int(rng, 0, 2) == 0) l.coeffs = {0};
  return l;
}

Scenario random_loop(std::mt19937_64& rng) {
  Scenario s;
  s.kind = ScenarioKind::WeilLoop;
  s.field.p = -1;
  for (;;) {
    const std::size_t n = static_cast<std::size_t>(uniform_int(rng, 1, 2));
    s.loop_matrix.assign(n, std::vector<LaurentSpec>(n));
    Matrix<RationalFunction> q(n, std::vector<RationalFunction>(n));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j <= i; ++j) {
        s.loop_matrix[i][j] = s.loop_matrix[j][i] = random_laurent(rng, -3, 3, n == 1);
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) q[i][j] = s.loop_matrix[i][j].build();
    }
    try {
      diagonalize_symmetric(q);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::Degenerate) continue;
      throw;
    }
    break;
  }
  s.omega_loop = LaurentSpec{static_cast<int>(uniform_int(rng, -2, 2)), {mpq_class(1)}};
  return s;
}

Scenario random_global(std::mt19937_64& rng) {
  static const std::vector<std::int64_t> small_primes = [] {
    std::vector<std::int64_t> out;
    for (std::int64_t p = 3; p < 200; p += 2) {
      if (fp::is_prime(p)) out.push_back(p);
    }
    return out;
  }();
  Scenario s;
  s.kind = ScenarioKind::VerifyGlobal;
  for (;;) {
    const std::size_t n = static_cast<std::size_t>(uniform_int(rng, 1, 3));
    s.matrix.assign(n, std::vector<mpq_class>(n));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j <= i; ++j) s.matrix[i][j] = s.matrix[j][i] = random_rational(rng, 50, false);
    }
    try {
      diagonalize_symmetric(s.matrix);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::Degenerate) continue;
      throw;
    }
    break;
  }
  std::set<std::int64_t> extra;
  while (extra.size() < 10) extra.insert(pick(rng, small_primes));
  s.extra_places.assign(extra.begin(), extra.end());
  return s;
}

QPoly qpoly(std::vector<mpq_class> c) { return QPoly(std::move(c)); }

/// An Eisenstein polynomial of degree 2 or 3 at p.
QPoly random_eisenstein(std::mt19937_64& rng, std::int64_t p) {
  const int deg = static_cast<int>(uniform_int(rng, 2, 3));
  std::vector<mpq_class> c(static_cast<std::size_t>(deg) + 1, 0);
  c[static_cast<std::size_t>(deg)] = 1;
  std::int64_t u;
  do u = uniform_int(rng, 1 - p, p - 1);
  while (u == 0);
  c[0] = p * u;
  for (int i = 1; i < deg; ++i) c[static_cast<std::size_t>(i)] = p * uniform_int(rng, -1, 1);
  return qpoly(c);
}

int random_exp(std::mt19937_64& rng) {
  const int e = static_cast<int>(uniform_int(rng, 1, 2));
  return uniform_int(rng, 0, 1) ? e : -e;
}

Scenario random_curve(std::mt19937_64& rng, std::int64_t p0) {
  Scenario s;
  s.kind = ScenarioKind::VerifyCurve;
  s.p = draw_prime(rng, p0);
  auto& num = s.omega_curve.num;
  num.constant = random_rational(rng, 12, true);
  std::set<mpq_class> roots;
  const int linear = static_cast<int>(uniform_int(rng, 1, 2));
  while (static_cast<int>(roots.size()) < linear) roots.insert(random_rational(rng, 10, false));
  for (const auto& r : roots) num.factors.push_back({qpoly({-r, 1}), random_exp(rng)});
  // x^2 + b x + c irreducible mod p, lifted by a multiple of p.
  for (;;) {
    const std::int64_t b = uniform_int(rng, 0, s.p - 1), c = uniform_int(rng, 0, s.p - 1);
    if (!fp::is_irreducible({c, b, 1}, s.p)) continue;
    num.factors.push_back({qpoly({mpq_class(c + s.p * uniform_int(rng, -1, 1)), mpq_class(b), 1}), random_exp(rng)});
    break;
  }
  num.factors.push_back({random_eisenstein(rng, s.p), random_exp(rng)});
  return s;
}

Scenario random_surface(std::mt19937_64& rng, std::int64_t p0, int index) {
  Scenario s;
  s.kind = ScenarioKind::VerifySurface;
  s.p = draw_prime(rng, p0);
  // Cycled rather than drawn so every batch of three covers -1, 0 and 1.
  s.c_psi = index % 3 - 1;
  auto& w = s.omega_surface;
  w.p = s.p;
  w.p_power = uniform_int(rng, -2, 2);
  std::int64_t u0;
  do u0 = uniform_int(rng, 1 - s.p, s.p - 1);
  while (u0 == 0);
  w.unit_series = {mpq_class(u0)};
  const int extra = static_cast<int>(uniform_int(rng, 0, 2));
  for (int i = 0; i < extra; ++i) w.unit_series.emplace_back(uniform_int(rng, -5, 5));
  std::set<std::int64_t> roots;
  const int linear = static_cast<int>(uniform_int(rng, 0, 2));
  while (static_cast<int>(roots.size()) < linear) roots.insert(uniform_int(rng, -3, 3));
  for (auto r : roots) w.factors.push_back({qpoly({mpq_class(-s.p * r), 1}), random_exp(rng)});
  if (uniform_int(rng, 0, 1)) w.factors.push_back({random_eisenstein(rng, s.p), random_exp(rng)});
  return s;
}

}  // namespace

std::vector<Scenario> generate_scenarios(ScenarioKind kind, std::uint64_t seed, int count, std::int64_t p) {
  if (count < 0) throw Error(ErrorKind::Domain, "negative scenario count");
  if (p != 0 && !fp::is_prime(p)) throw Error(ErrorKind::Validation, std::to_string(p) + " is not prime");
  std::mt19937_64 rng(seed);
  std::vector<Scenario> out;
  for (int i = 0; i < count; ++i) {
    Scenario s;
    switch (kind) {
      case ScenarioKind::GaussSum:
      case ScenarioKind::CheckFinite: s.kind = kind, s.finite = random_finite(rng); break;
      case ScenarioKind::WeilLocal: s = random_local(rng); break;
      case ScenarioKind::WeilLoop: s = random_loop(rng); break;
      case ScenarioKind::VerifyGlobal: s = random_global(rng); break;
      case ScenarioKind::VerifyCurve: s = random_curve(rng, p); break;
      case ScenarioKind::VerifySurface: s = random_surface(rng, p, i); break;
    }
    s.seed = seed;
    s.id = std::string(to_string(kind)) + "-" + std::to_string(seed) + "-" + std::to_string(i);
    if (p != 0) s.id += "-p" + std::to_string(p);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace weil
