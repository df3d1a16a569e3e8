#include "gpt_spectra/cli.h"

#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "gpt_spectra/catalog.h"
#include "gpt_spectra/errors.h"
#include "gpt_spectra/majorization.h"
#include "gpt_spectra/observables.h"
#include "gpt_spectra/perfection.h"
#include "gpt_spectra/polytope.h"
#include "gpt_spectra/projective.h"
#include "gpt_spectra/report.h"
#include "gpt_spectra/spectral.h"
#include "gpt_spectra/thermo.h"

namespace gpt_spectra {
namespace {

using nlohmann::json;

constexpr int kFaceCap = 60;
constexpr int kBases = 5;

// Flag values; unset flags fall back to the config file, then to defaults.
struct Flags {
  std::optional<std::string> config;
  std::optional<std::string> model;
  std::optional<int> n, d, k, chord_grid;
  std::optional<double> a, b, eps3, eps2;
  std::optional<std::string> points;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::optional<int> samples, trials, budget;
  std::optional<std::string> output, format;
  std::optional<std::string> state, target, element, base;
  std::optional<double> temp, boltzmann, volume;
  std::vector<std::string> checks;
  std::vector<double> meshes;
  std::string polytope_file;
};

std::string ReadFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kConfig, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json ParseJson(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kConfig, what + " is not valid JSON: " + e.what());
  }
}

// A JSON value given inline ("[0.5, 0.5]") or as a file path.
json InlineOrFile(const std::string& s, const std::string& what) {
  const auto first = s.find_first_not_of(" \t");
  if (first != std::string::npos && (s[first] == '[' || s[first] == '{')) return ParseJson(s, what);
  return ParseJson(ReadFile(s), what);
}

template <typename T>
void Put(json& cfg, const char* key, const std::optional<T>& v) {
  if (v) cfg[key] = *v;
}

json MergeConfig(const Flags& f) {
  json cfg = json::object();
  if (f.config) {
    cfg = ParseJson(ReadFile(*f.config), "config file");
    if (!cfg.is_object()) throw Error(ErrorCode::kConfig, "config file must hold an object");
  }
  Put(cfg, "model", f.model);
  Put(cfg, "n", f.n);
  Put(cfg, "d", f.d);
  Put(cfg, "k", f.k);
  Put(cfg, "a", f.a);
  Put(cfg, "b", f.b);
  Put(cfg, "eps3", f.eps3);
  Put(cfg, "eps2", f.eps2);
  Put(cfg, "chord_grid", f.chord_grid);
  Put(cfg, "seed", f.seed);
  Put(cfg, "tol", f.tol);
  Put(cfg, "samples", f.samples);
  Put(cfg, "trials", f.trials);
  Put(cfg, "budget", f.budget);
  Put(cfg, "output", f.output);
  Put(cfg, "format", f.format);
  Put(cfg, "state", f.state);
  Put(cfg, "target", f.target);
  Put(cfg, "element", f.element);
  Put(cfg, "base", f.base);
  Put(cfg, "temp", f.temp);
  Put(cfg, "k_boltzmann", f.boltzmann);
  Put(cfg, "volume", f.volume);
  if (!f.checks.empty()) cfg["checks"] = f.checks;
  if (!f.meshes.empty()) cfg["meshes"] = f.meshes;
  if (f.points) {
    const json p = InlineOrFile(*f.points, "polytope file");
    for (const char* key : {"vertices", "points"}) {
      if (p.contains(key)) cfg[key] = p[key];
    }
    if (!cfg.contains("model")) cfg["model"] = "polyhedral";
  }
  return cfg;
}

template <typename T>
T Get(const json& cfg, const char* key, T fallback) {
  if (!cfg.contains(key)) return fallback;
  try {
    return cfg[key].get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::kConfig, std::string("bad value for \"") + key + "\"");
  }
}

int GetPositive(const json& cfg, const char* key, int fallback) {
  const int v = Get<int>(cfg, key, fallback);
  if (v <= 0) throw Error(ErrorCode::kConfig, std::string("\"") + key + "\" must be positive");
  return v;
}

std::uint64_t Seed(const json& cfg) { return Get<std::uint64_t>(cfg, "seed", 0); }

double Tol(const json& cfg) {
  const double tol = Get<double>(cfg, "tol", 1e-9);
  if (!(tol > 0.0)) throw Error(ErrorCode::kConfig, "\"tol\" must be positive");
  return tol;
}

ModelPtr BuildModel(const json& cfg) {
  if (!cfg.contains("model")) throw Error(ErrorCode::kConfig, "no model given (use --model)");
  return MakeModel(cfg);
}

json VectorInput(const json& cfg, const char* key) {
  const json& v = cfg[key];
  return v.is_string() ? InlineOrFile(v.get<std::string>(), key) : v;
}

Vector ReadElement(const json& cfg, const char* key, const SystemModel& sys) {
  const Vector v = VectorFromJson(VectorInput(cfg, key));
  if (v.size() != sys.dim()) {
    throw Error(ErrorCode::kConfig, std::string(key) + " has " + std::to_string(v.size()) +
                                        " coordinates, the model has dimension " +
                                        std::to_string(sys.dim()));
  }
  return v;
}

// The state named by `key`, or a state sampled from the seed.
Vector StateOrSample(const json& cfg, const char* key, const SystemModel& sys, std::uint64_t stream,
                     bool pure) {
  if (cfg.contains(key)) {
    const Vector s = ReadElement(cfg, key, sys);
    if (!sys.InCone(s) || std::abs(sys.unit().dot(s) - 1.0) > 1e-9) {
      throw Error(ErrorCode::kNotAState, std::string(key) + " is not a normalized state");
    }
    return s;
  }
  Rng rng(DeriveSeed(Seed(cfg), stream));
  return pure ? sys.SamplePure(rng) : sys.SampleState(rng);
}

json Header(const std::string& command, const json& cfg, const SystemModel& sys) {
  json r;
  r["schema_version"] = kSchemaVersion;
  r["command"] = command;
  r["seed"] = Seed(cfg);
  r["model"] = {{"kind", ModelKindName(sys.kind())}, {"dim", sys.dim()}, {"params", sys.params()}};
  return r;
}

json WeightedJson(const std::vector<WeightedState>& parts) {
  json a = json::array();
  for (const auto& p : parts) a.push_back({{"probability", p.probability}, {"state", ToJson(p.state)}});
  return a;
}

double OrderUnitNorm(const Vector& a, const SystemModel& sys) {
  const EffectRange r = sys.RangeOverStates(a);
  return std::max(std::abs(r.min), std::abs(r.max));
}

// --- model -------------------------------------------------------------------

json CmdModel(const json& cfg) {
  const ModelPtr sys = BuildModel(cfg);
  json r = Header("model", cfg, *sys);
  r["max_distinguishable"] = sys->max_distinguishable();
  r["unit"] = ToJson(sys->unit());
  r["center_state"] = ToJson(sys->CenterState());
  if (const auto cone = sys->ExactCone()) {
    json rays = json::array(), facets = json::array();
    for (const Vector& v : cone->rays) rays.push_back(ToJson(v));
    for (const Vector& v : cone->facet_normals) facets.push_back(ToJson(v));
    r["extreme_rays"] = rays;
    r["facet_normals"] = facets;
  }
  return r;
}

// --- axioms ------------------------------------------------------------------

struct Expectation {
  bool ws, spectrality, projectivity, stp, lemma1, perfection;
};

std::optional<Expectation> ExpectedOutcomes(ModelKind kind) {
  switch (kind) {
    case ModelKind::kClassical:
    case ModelKind::kQuantum:
    case ModelKind::kBall:
    case ModelKind::kEllipse:
      return Expectation{true, true, true, true, true, true};
    case ModelKind::kSquareBit:
      return Expectation{false, true, false, false, false, false};
    case ModelKind::kBipyramid:
      return Expectation{false, false, false, false, false, false};
    case ModelKind::kPuffedTriangle:
      return Expectation{true, false, true, false, true, false};
    case ModelKind::kPolyhedral:
      return std::nullopt;
  }
  return std::nullopt;
}

std::optional<bool> Expected(ModelKind kind, const std::string& check) {
  const auto e = ExpectedOutcomes(kind);
  if (!e) return std::nullopt;
  if (check == "ws") return e->ws;
  if (check == "spectrality") return e->spectrality;
  if (check == "projectivity") return e->projectivity;
  if (check == "stp") return e->stp;
  if (check == "lemma1") return e->lemma1;
  return e->perfection;
}

std::string CanonicalCheck(const std::string& name) {
  static const std::map<std::string, std::string> kAliases = {
      {"ws", "ws"},           {"weak_spectrality", "ws"},   {"s", "spectrality"},
      {"spectrality", "spectrality"}, {"p", "projectivity"}, {"projectivity", "projectivity"},
      {"stp", "stp"},         {"lemma1", "lemma1"},         {"perfection", "perfection"},
  };
  const auto it = kAliases.find(name);
  if (it == kAliases.end()) throw Error(ErrorCode::kConfig, "unknown check \"" + name + "\"");
  return it->second;
}

json PairJson(const std::optional<std::pair<Vector, Vector>>& w) {
  if (!w) return nullptr;
  return {ToJson(w->first), ToJson(w->second)};
}

// Observed outcome and details of one check.
std::pair<bool, json> RunCheck(const std::string& check, const SystemModel& sys, const json& cfg) {
  const std::uint64_t seed = Seed(cfg);
  const int samples = GetPositive(cfg, "samples", 50);
  const double tol = Tol(cfg);
  json d;
  if (check == "ws") {
    const AxiomWSReport r = CheckAxiomWS(sys, samples, seed);
    d = {{"states_checked", r.states_checked}, {"failures", r.failures},
         {"witness", r.witness ? ToJson(*r.witness) : json(nullptr)}};
    return {r.holds, d};
  }
  if (check == "spectrality") {
    const AxiomSReport r = CheckAxiomS(sys, samples, seed, tol);
    d = {{"states_checked", r.states_checked}, {"undecomposable", r.undecomposable}, {"max_gap", r.max_gap}};
    d["witness"] = r.witness ? json{{"state", ToJson(r.witness->state)},
                                    {"first", ToJson(r.witness->first)},
                                    {"second", ToJson(r.witness->second)}}
                             : json(nullptr);
    return {r.holds, d};
  }
  if (check == "projectivity") {
    const ProjectivityReport r = CheckProjectivity(sys, kFaceCap, seed);
    d = {{"exhaustive", r.exhaustive}, {"faces_checked", r.faces_checked},
         {"failures", r.failures}, {"diagnostic", r.diagnostic}};
    d["witness_face"] = r.witness ? ToJson(r.witness->basis) : json(nullptr);
    return {r.holds, d};
  }
  if (check == "stp") {
    const StpReport r = CheckSTP(sys, 2 * samples, seed, tol);
    d = {{"exact", r.exact}, {"pairs_checked", r.pairs_checked},
         {"max_asymmetry", r.max_asymmetry}, {"diagnostic", r.diagnostic},
         {"witness", PairJson(r.witness)}};
    return {r.holds, d};
  }
  if (check == "lemma1") {
    const LemmaReport r = CheckLemmaDistinguishability(sys, samples, seed);
    d = {{"pairs_checked", r.pairs_checked}, {"distinguishable_pairs", r.distinguishable_pairs},
         {"disagreements", r.disagreements}, {"witness", PairJson(r.witness)}};
    return {r.holds, d};
  }
  const BasisIndependenceReport bi = CheckBasisIndependence(sys, kBases, seed, tol);
  d["basis_independence"] = {{"holds", bi.holds}, {"bases", bi.bases},
                             {"max_deviation", bi.max_deviation}, {"diagnostic", bi.diagnostic}};
  if (!bi.holds) return {false, d};
  try {
    const PhiMap phi = BuildPhi(sys, SampleAtomicBasis(sys, seed));
    const SelfDualityReport p = CheckPerfection(sys, phi, kFaceCap, seed, tol);
    d["perfect"] = p.perfect;
    d["cone_margin"] = p.cone_margin;
    d["gram_min_eigenvalue"] = p.gram_min_eigenvalue;
    d["note"] = p.note;
    return {p.perfect, d};
  } catch (const Error& e) {
    d["error"] = e.what();
    return {false, d};
  }
}

json CmdAxioms(const json& cfg, bool* mismatch) {
  const ModelPtr sys = BuildModel(cfg);
  json r = Header("axioms", cfg, *sys);
  std::vector<std::string> checks = {"ws", "spectrality", "projectivity", "stp", "lemma1", "perfection"};
  if (cfg.contains("checks")) {
    checks.clear();
    for (const auto& c : cfg["checks"]) {
      std::stringstream ss(c.get<std::string>());
      for (std::string part; std::getline(ss, part, ',');) {
        if (!part.empty()) checks.push_back(CanonicalCheck(part));
      }
    }
  }
  json results = json::array();
  *mismatch = false;
  for (const std::string& check : checks) {
    auto [observed, details] = RunCheck(check, *sys, cfg);
    const std::optional<bool> expected = Expected(sys->kind(), check);
    const bool match = !expected || *expected == observed;
    *mismatch = *mismatch || !match;
    results.push_back({{"check", check},
                       {"observed", observed},
                       {"expected", expected ? json(*expected) : json(nullptr)},
                       {"match", match},
                       {"details", details}});
  }
  r["checks"] = results;
  r["all_match"] = !*mismatch;
  return r;
}

// --- entropy / majorize ----------------------------------------------------------

json CmdEntropy(const json& cfg) {
  const ModelPtr sys = BuildModel(cfg);
  json r = Header("entropy", cfg, *sys);
  const std::string base_name = Get<std::string>(cfg, "base", "e");
  if (base_name != "e" && base_name != "2") throw Error(ErrorCode::kConfig, "--base must be e or 2");
  const LogBase base = base_name == "2" ? LogBase::kTwo : LogBase::kE;
  const Vector state = StateOrSample(cfg, "state", *sys, 0, false);
  const Decomposition dec = Decompose(StateVec{state}, *sys);
  r["state"] = ToJson(state);
  r["decomposition"] = WeightedJson(dec.parts);
  r["certified_distinguishable"] = dec.certified_distinguishable;
  r["spectrum"] = ToJson(SpectrumOf(dec, sys->max_distinguishable()).probs);
  r["base"] = base_name;
  r["entropy"] = SpectralEntropy(StateVec{state}, *sys, base);
  r["entropy_nats"] = SpectralEntropy(StateVec{state}, *sys, LogBase::kE);
  const int budget = Get<int>(cfg, "budget", 0);
  if (budget < 0) throw Error(ErrorCode::kConfig, "--budget must be nonnegative");
  if (budget > 0) {
    const MeasurementEntropyResult m = MeasurementEntropy(StateVec{state}, *sys, budget, Seed(cfg), base);
    r["measurement_entropy"] = {
        {"value", m.value},
        {"best_sampled", m.best_sampled},
        {"searched", m.searched},
        {"spectral_measurement_entropy",
         m.spectral_measurement_entropy ? json(*m.spectral_measurement_entropy) : json(nullptr)}};
  }
  return r;
}

json CmdMajorize(const json& cfg) {
  const ModelPtr sys = BuildModel(cfg);
  json r = Header("majorize", cfg, *sys);
  const Vector state = StateOrSample(cfg, "state", *sys, 0, false);
  const MajorizationReport m =
      VerifyTheoremMajorization(*sys, StateVec{state}, GetPositive(cfg, "trials", 200), Seed(cfg));
  r["state"] = ToJson(state);
  r["spectrum"] = ToJson(m.spectrum);
  r["trials"] = m.trials;
  r["violations"] = m.violations;
  r["worst_margin"] = m.worst_margin;
  r["max_total_deviation"] = m.max_total_deviation;
  r["max_transition_residual"] = m.max_transition_residual;
  r["max_stochastic_error"] = m.max_stochastic_error;
  r["max_row_excess"] = m.max_row_excess;
  return r;
}

// --- expand ---------------------------------------------------------------------

json TermsJson(const std::vector<ExpansionTerm>& terms) {
  json a = json::array();
  for (const auto& t : terms) a.push_back({{"coefficient", t.coefficient}, {"unit", ToJson(t.unit)}});
  return a;
}

json CmdExpand(const json& cfg) {
  const ModelPtr sys = BuildModel(cfg);
  json r = Header("expand", cfg, *sys);
  Vector a;
  if (cfg.contains("element")) {
    a = ReadElement(cfg, "element", *sys);
  } else {
    Rng rng(DeriveSeed(Seed(cfg), 0));
    a = Vector(sys->dim());
    for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = rng.Normal();
  }
  r["element"] = ToJson(a);
  const SpectralExpansion e = SpectralExpand(a, *sys);
  r["terms"] = TermsJson(e.terms);
  r["zero_term"] = e.zero_term ? TermsJson({*e.zero_term})[0] : json(nullptr);
  r["nondegenerate"] = e.nondegenerate;
  r["reconstruction_error"] = e.reconstruction_error;
  r["orthogonality_violation"] = e.orthogonality_violation;

  const SpectralFamily f = MakeSpectralFamily(a, *sys);
  json units = json::array();
  for (const Vector& u : f.units) units.push_back(ToJson(u));
  r["family"] = {{"thresholds", f.thresholds}, {"units", units},
                 {"theta", std::isfinite(f.theta) ? json(f.theta) : json(nullptr)}};

  std::vector<double> meshes = Get<std::vector<double>>(cfg, "meshes", {});
  if (meshes.empty()) {
    meshes = std::isfinite(f.theta) ? std::vector<double>{2.0 * f.theta, f.theta / 2.0, f.theta / 3.0}
                                    : std::vector<double>{0.5, 0.25};
  }
  const double norm = OrderUnitNorm(a, *sys);
  std::vector<std::vector<double>> grids;
  for (double mesh : meshes) {
    if (!(mesh > 0.0)) throw Error(ErrorCode::kConfig, "meshes must be positive");
    grids.push_back(UniformGrid(-norm - mesh, norm + mesh, mesh));
  }
  const RiemannReport rr = RiemannStabilizationDemo(a, *sys, grids);
  json gj = json::array();
  for (const GridResult& g : rr.grids) {
    gj.push_back({{"mesh", g.mesh},
                  {"error", g.error},
                  {"difference_units", static_cast<int>(g.difference_units.size())},
                  {"finer_than_theta", g.finer_than_theta},
                  {"matches_expansion", g.matches_expansion}});
  }
  r["riemann"] = {{"norm", rr.norm}, {"grids", gj}, {"stabilized", rr.stabilized}};

  if (cfg.contains("state")) {
    const Vector x = ReadElement(cfg, "state", *sys);
    const PhiMap phi = BuildPhi(*sys, SampleAtomicBasis(*sys, Seed(cfg)));
    const StateExpansion se = FinegrainedStateExpansion(x, *sys, phi);
    json terms = json::array();
    for (const auto& t : se.terms) terms.push_back({{"coefficient", t.coefficient}, {"state", ToJson(t.state)}});
    r["state_expansion"] = {{"terms", terms},
                            {"orthogonal", se.orthogonal},
                            {"reconstruction_error", se.reconstruction_error}};
  }
  return r;
}

// --- perfection -------------------------------------------------------------------

json CmdPerfection(const json& cfg) {
  const ModelPtr sys = BuildModel(cfg);
  json r = Header("perfection", cfg, *sys);
  const std::uint64_t seed = Seed(cfg);
  const double tol = Tol(cfg);
  bool pipeline = false;
  try {
    const PhiMap phi = BuildPhi(*sys, SampleAtomicBasis(*sys, seed));
    pipeline = true;
    const InnerProductReport ip = CheckInnerProduct(phi);
    r["phi"] = ToJson(phi.matrix);
    r["inner_product"] = {{"symmetry_error", ip.symmetry_error}, {"min_eigenvalue", ip.min_eigenvalue},
                          {"max_eigenvalue", ip.max_eigenvalue}, {"symmetric", ip.symmetric},
                          {"positive_definite", ip.positive_definite}};
    const BasisIndependenceReport bi = CheckBasisIndependence(*sys, kBases, seed, tol);
    r["basis_independence"] = {{"holds", bi.holds},
                               {"bases", bi.bases},
                               {"max_deviation", bi.max_deviation},
                               {"max_fresh_error", bi.max_fresh_error},
                               {"min_image_margin", bi.min_image_margin},
                               {"diagnostic", bi.diagnostic}};
    try {
      const auto filters = FiltersUnderPhi(phi, *sys, kFaceCap, seed);
      const CompressionSymmetryReport cs = CheckCompressionSymmetry(
          phi, *sys, filters, GetPositive(cfg, "samples", 1000), seed, tol);
      r["compression_symmetry"] = {{"holds", cs.holds},
                                   {"filters", cs.filters},
                                   {"triples", cs.triples},
                                   {"max_asymmetry", cs.max_asymmetry},
                                   {"face_atoms_checked", cs.face_atoms_checked},
                                   {"max_face_atom_error", cs.max_face_atom_error}};
    } catch (const Error& e) {
      r["compression_symmetry"] = {{"error", e.what()}};
    }
    const SelfDualityReport p = CheckPerfection(*sys, phi, kFaceCap, seed, tol);
    json faces = json::array();
    for (const auto& f : p.face_reports) {
      faces.push_back({{"rank", f.rank}, {"self_dual", f.self_dual}, {"margin", f.margin}});
    }
    r["perfection"] = {{"exact", p.exact},
                       {"positive_definite", p.positive_definite},
                       {"cone_self_dual", p.cone_self_dual},
                       {"cone_margin", p.cone_margin},
                       {"faces", faces},
                       {"faces_exhaustive", p.faces_exhaustive},
                       {"perfect", p.perfect},
                       {"note", p.note}};
    try {
      const OrthotracialReport o = OrthotracialSubspace(*sys, phi, kFaceCap, seed);
      r["orthotracial"] = {{"dimension", o.dimension}, {"contains_unit", o.contains_unit},
                           {"faces_used", o.faces_used}, {"exhaustive", o.exhaustive},
                           {"basis", ToJson(o.basis)}};
    } catch (const Error& e) {
      r["orthotracial"] = {{"error", e.what()}};
    }
  } catch (const Error& e) {
    r["phi"] = nullptr;
    r["phi_error"] = e.what();
  }
  r["pipeline_entered"] = pipeline;

  const auto cone = sys->ExactCone();
  if (cone && cone->rays.size() <= 8) {
    json isos = json::array();
    bool symmetric_pd = false;
    for (const OrderIsomorphism& iso : ForcedOrderIsomorphisms(*sys)) {
      isos.push_back({{"matrix", ToJson(iso.matrix)},
                      {"symmetric", iso.symmetric},
                      {"min_eigenvalue", iso.min_eigenvalue}});
      symmetric_pd = symmetric_pd || (iso.symmetric && iso.min_eigenvalue > 0.0);
    }
    r["forced_order_isomorphisms"] = isos;
    r["symmetric_positive_definite_isomorphism"] = symmetric_pd;
    if (!pipeline && !symmetric_pd) {
      r["note"] =
          "no symmetric forced order isomorphism is positive definite, so no form makes the cone "
          "self-dual through one of them";
    }
  }
  return r;
}

// --- vonneumann ----------------------------------------------------------------------

json CmdVonNeumann(const json& cfg) {
  const ModelPtr sys = BuildModel(cfg);
  json r = Header("vonneumann", cfg, *sys);
  const double temp = Get<double>(cfg, "temp", 300.0);
  const double k = Get<double>(cfg, "k_boltzmann", kBoltzmann);
  const double volume = Get<double>(cfg, "volume", 1.0);
  if (!(temp > 0.0) || !(k > 0.0) || !(volume > 0.0)) {
    throw Error(ErrorCode::kConfig, "temperature, Boltzmann constant and volume must be positive");
  }
  const Vector omega = StateOrSample(cfg, "state", *sys, 0, false);
  const Vector sigma = StateOrSample(cfg, "target", *sys, 1, true);
  const WorkLedger ledger = RunVonNeumann(omega, sigma, *sys, temp, k, volume);
  json steps = json::array();
  for (const LedgerStep& s : ledger.steps) {
    steps.push_back({{"name", s.name},
                     {"work", s.work},
                     {"probability", s.probability},
                     {"heat", s.heat},
                     {"assumption", AssumptionName(s.assumption)},
                     {"expected_work", s.ExpectedWork()}});
  }
  const double s_omega = SpectralEntropy(StateVec{omega}, *sys);
  const double s_sigma = SpectralEntropy(StateVec{sigma}, *sys);
  const double kt = k * temp;
  r["state"] = ToJson(omega);
  r["target"] = ToJson(sigma);
  r["constants"] = {{"k", k}, {"temperature", temp}, {"volume", volume}};
  r["steps"] = steps;
  r["notes"] = ledger.notes;
  r["expected_work"] = ledger.ExpectedWork();
  r["expected_work_over_kT"] = ledger.ExpectedWork() / kt;
  r["entropy_state"] = s_omega;
  r["entropy_target"] = s_sigma;
  r["identity_error_over_kT"] = std::abs(ledger.ExpectedWork() / kt - (s_omega - s_sigma));
  return r;
}

// --- polytope analyze -------------------------------------------------------------------

json CmdPolytopeAnalyze(json cfg, const std::string& file) {
  const json p = InlineOrFile(file, "polytope file");
  if (!p.is_object()) throw Error(ErrorCode::kConfig, "polytope file must hold an object");
  for (const char* key : {"vertices", "points"}) {
    if (p.contains(key)) cfg[key] = p[key];
  }
  cfg["model"] = "polyhedral";
  const ModelPtr sys = BuildModel(cfg);
  json r = Header("polytope analyze", cfg, *sys);
  const Polytope poly(sys->ExactCone()->rays);
  json vertices = json::array(), facets = json::array();
  for (const Vector& v : poly.vertices()) vertices.push_back(ToJson(v));
  for (int i = 0; i < static_cast<int>(poly.facets().size()); ++i) {
    facets.push_back(ToJson(poly.NormalizedFacet(i)));
  }
  std::map<int, int> by_rank;
  for (VertexMask mask : poly.face_lattice()) {
    const auto verts = poly.FaceVertices(mask);
    int rank = 0;
    if (!verts.empty()) {
      Matrix m(poly.dim(), static_cast<Eigen::Index>(verts.size()));
      for (size_t j = 0; j < verts.size(); ++j) m.col(static_cast<Eigen::Index>(j)) = verts[j];
      rank = static_cast<int>(Eigen::FullPivLU<Matrix>(m).rank());
    }
    ++by_rank[rank];
  }
  json counts = json::object();
  for (const auto& [rank, count] : by_rank) counts[std::to_string(rank)] = count;
  r["vertices"] = vertices;
  r["facets"] = facets;
  r["face_counts_by_rank"] = counts;
  r["lattice_size"] = static_cast<int>(poly.face_lattice().size());
  r["max_distinguishable"] = sys->max_distinguishable();

  const std::uint64_t seed = Seed(cfg);
  const ProjectivityReport proj = CheckProjectivity(*sys, kFaceCap, seed);
  const StpReport stp = CheckSTP(*sys, 100, seed, Tol(cfg));
  const AxiomSReport s = CheckAxiomS(*sys, GetPositive(cfg, "samples", 50), seed, Tol(cfg));
  r["projective"] = {{"holds", proj.holds}, {"faces_checked", proj.faces_checked},
                     {"diagnostic", proj.diagnostic}};
  r["stp"] = {{"holds", stp.holds}, {"max_asymmetry", stp.max_asymmetry}, {"diagnostic", stp.diagnostic}};
  r["spectrality"] = {{"holds", s.holds}, {"max_gap", s.max_gap}};
  try {
    const EffectIntervalReport ei = CheckAtomsAgainstEffectInterval(*sys);
    r["effect_interval"] = {{"interval_vertices", ei.interval_vertices},
                            {"extremal_atoms", ei.extremal_atoms},
                            {"model_atoms", ei.model_atoms},
                            {"match", ei.match}};
  } catch (const Error& e) {
    r["effect_interval"] = {{"error", e.what()}};
  }
  return r;
}

void Emit(const json& report, const json& cfg, std::ostream& out) {
  const std::string format = Get<std::string>(cfg, "format", "json");
  if (format != "json" && format != "csv") throw Error(ErrorCode::kConfig, "--format must be json or csv");
  const std::string text = format == "csv" ? DumpCsv(report) : DumpJson(report);
  const std::string path = Get<std::string>(cfg, "output", "");
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw Error(ErrorCode::kConfig, "cannot write " + path);
  f << text;
}

void AddModelOptions(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "JSON config file; flags override its keys");
  cmd->add_option("--model", f.model,
                  "classical | quantum | ball | square_bit | bipyramid | ellipse | "
                  "puffed_triangle | polyhedral");
  cmd->add_option("--n", f.n, "classical: number of outcomes");
  cmd->add_option("--d", f.d, "quantum: Hilbert dimension");
  cmd->add_option("--k", f.k, "ball: dimension of the ball");
  cmd->add_option("--a", f.a, "ellipse: semi-axis along x");
  cmd->add_option("--b", f.b, "ellipse: semi-axis along y");
  cmd->add_option("--eps3", f.eps3, "puffed_triangle: cos 3θ amplitude");
  cmd->add_option("--eps2", f.eps2, "puffed_triangle: cos 2θ amplitude");
  cmd->add_option("--chord-grid", f.chord_grid, "planar models: boundary resolution");
  cmd->add_option("--points", f.points, "polyhedral: JSON file with \"vertices\" or \"points\"");
  cmd->add_option("--seed", f.seed, "master seed");
  cmd->add_option("--tol", f.tol, "comparison tolerance");
  cmd->add_option("--output,--report", f.output, "write the report here instead of stdout");
  cmd->add_option("--format", f.format, "json | csv");
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectral and thermodynamic analysis of generalized probabilistic theories",
               "gpt_spectra"};
  app.require_subcommand(1);
  Flags f;

  CLI::App* model = app.add_subcommand("model", "Describe a model");
  AddModelOptions(model, f);

  CLI::App* axioms = app.add_subcommand("axioms", "Run axiom checks against the expectation table");
  AddModelOptions(axioms, f);
  axioms->add_option("--check", f.checks,
                     "ws, spectrality, projectivity, stp, lemma1, perfection (comma separated)");
  axioms->add_option("--samples", f.samples, "sampled states per check");

  CLI::App* entropy = app.add_subcommand("entropy", "Spectrum and spectral entropy of a state");
  AddModelOptions(entropy, f);
  entropy->add_option("--state", f.state, "state coordinates: JSON file or inline array");
  entropy->add_option("--base", f.base, "e | 2");
  entropy->add_option("--budget", f.budget, "fine-grained measurements searched for the measurement entropy");

  CLI::App* majorize = app.add_subcommand("majorize", "Majorization of outcome distributions by the spectrum");
  AddModelOptions(majorize, f);
  majorize->add_option("--state", f.state, "state coordinates: JSON file or inline array");
  majorize->add_option("--trials", f.trials, "random fine-grained measurements");

  CLI::App* expand = app.add_subcommand("expand", "Spectral expansion of an element of A*");
  AddModelOptions(expand, f);
  expand->add_option("--element", f.element, "coordinates of a ∈ A*: JSON file or inline array");
  expand->add_option("--state", f.state, "optional x ∈ A to expand into orthogonal pure states");
  expand->add_option("--mesh", f.meshes, "Riemann grid meshes");

  CLI::App* perfection = app.add_subcommand("perfection", "The map φ, its form and self-duality");
  AddModelOptions(perfection, f);
  perfection->add_option("--samples", f.samples, "compression-symmetry triples");

  CLI::App* vonneumann = app.add_subcommand("vonneumann", "Work ledger of the von Neumann protocol");
  AddModelOptions(vonneumann, f);
  vonneumann->add_option("--state", f.state, "initial state: JSON file or inline array");
  vonneumann->add_option("--target", f.target, "final state: JSON file or inline array");
  vonneumann->add_option("--temp", f.temp, "temperature in kelvin");
  vonneumann->add_option("--k-boltzmann", f.boltzmann, "Boltzmann constant in J/K");
  vonneumann->add_option("--volume", f.volume, "initial volume");

  CLI::App* polytope = app.add_subcommand("polytope", "Polytope tools");
  polytope->require_subcommand(1);
  CLI::App* analyze = polytope->add_subcommand("analyze", "Facets, face lattice and axioms of a polytope");
  AddModelOptions(analyze, f);
  analyze->add_option("file", f.polytope_file, "JSON file with \"vertices\" or \"points\"")->required();
  analyze->add_option("--samples", f.samples, "sampled states for the spectrality check");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    const json cfg = MergeConfig(f);
    json report;
    int code = kExitOk;
    if (model->parsed()) {
      report = CmdModel(cfg);
    } else if (axioms->parsed()) {
      bool mismatch = false;
      report = CmdAxioms(cfg, &mismatch);
      if (mismatch) code = kExitMismatch;
    } else if (entropy->parsed()) {
      report = CmdEntropy(cfg);
    } else if (majorize->parsed()) {
      report = CmdMajorize(cfg);
    } else if (expand->parsed()) {
      report = CmdExpand(cfg);
    } else if (perfection->parsed()) {
      report = CmdPerfection(cfg);
    } else if (vonneumann->parsed()) {
      report = CmdVonNeumann(cfg);
    } else {
      report = CmdPolytopeAnalyze(cfg, f.polytope_file);
    }
    Emit(report, cfg, out);
    return code;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}

}  // namespace gpt_spectra
