// SPDX-License-Identifier: Apache-2.0
//
// Run configuration, persisted run records and the command dispatcher behind
// the `satk` CLI.
#ifndef SATK_HARNESS_HPP
#define SATK_HARNESS_HPP

#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "io.hpp"
#include "random.hpp"
#include "semigroup.hpp"
#include "shifts.hpp"

namespace satk {

inline constexpr const char* kVersion = "1.0.0";

using json = nlohmann::json;

/// Doubles are stored as JSON numbers (shortest round-trip form); the
/// non-finite ones as the strings "nan", "inf", "-inf".
inline json num(double x)
{
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

inline double num_from(const json& j)
{
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw ParseError("not a number: " + s, 0);
  }
  return j.get<double>();
}

inline json num_list(const std::vector<double>& v)
{
  json a = json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

inline json cplx_json(cplx z) { return json::array({num(z.real()), num(z.imag())}); }

struct Check
{
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  std::string relation = "<=";  // pass iff value <= tolerance, or >= for ">="
  bool pass = false;

  static Check at_most(std::string name, double value, double tol)
  {
    return {std::move(name), value, tol, "<=", value <= tol};
  }
  static Check at_least(std::string name, double value, double tol)
  {
    return {std::move(name), value, tol, ">=", value >= tol};
  }
};

struct RunConfig
{
  std::string command;
  std::string input;  // matrix file; empty when the matrix is generated from the seed
  std::uint64_t seed = 0;
  bool seeded = false;
  json params = json::object();
  unsigned threads = 1;  // not echoed: records must not depend on it

  template <class T>
  T get(const char* key, T fallback) const
  {
    return params.contains(key) ? params.at(key).get<T>() : fallback;
  }

  std::vector<long> schedule() const
  {
    return params.contains("schedule") ? params.at("schedule").get<std::vector<long>>()
                                       : std::vector<long>{16, 64, 256, 1024, 4096};
  }

  void validate() const
  {
    for (const auto& [key, value] : params.items()) {
      const bool isTol = key.size() >= 3 && (key.compare(key.size() - 3, 3, "Tol") == 0 || key == "tol" ||
                                             key == "target");
      if (isTol && !(value.is_number() && value.get<double>() > 0.0))
        throw InvalidInput("config: '" + key + "' must be a positive number");
    }
    const auto s = schedule();
    if (s.empty()) throw InvalidInput("config: schedule must be non-empty");
    for (std::size_t i = 0; i < s.size(); ++i)
      if (s[i] < 1 || (i > 0 && s[i] <= s[i - 1])) throw InvalidInput("config: schedule must be positive and increasing");
  }

  json echo() const
  {
    json j = {{"command", command}, {"params", params}};
    j["input"] = input.empty() ? json(nullptr) : json(input);
    j["seed"] = seeded ? json(seed) : json(nullptr);
    return j;
  }
};

struct RunRecord
{
  json config;
  std::string version = kVersion;
  std::string rng = Rng::kName;
  std::vector<Check> checks;
  json results = json::object();
  std::string status = "pass";  // pass | fail | error
  json error = nullptr;         // {kind, message} when status == "error"
  std::optional<double> wallTime;
  std::vector<std::array<double, 3>> csvRows;  // n, error, log_error

  bool passed() const { return status == "pass"; }

  void finalize()
  {
    if (status == "error") return;
    status = "pass";
    for (const auto& c : checks)
      if (!c.pass) status = "fail";
  }

  json to_json() const
  {
    json cs = json::array();
    for (const auto& c : checks)
      cs.push_back({{"name", c.name}, {"value", num(c.value)}, {"tolerance", num(c.tolerance)},
                    {"relation", c.relation}, {"pass", c.pass}});
    json j = {{"tool", "satk"}, {"version", version}, {"rng", rng}, {"config", config},
              {"checks", cs},   {"results", results}, {"status", status}, {"error", error}};
    if (wallTime) j["wallTime"] = *wallTime;
    return j;
  }

  static RunRecord from_json(const json& j)
  {
    RunRecord r;
    r.version = j.at("version").get<std::string>();
    r.rng = j.at("rng").get<std::string>();
    r.config = j.at("config");
    for (const auto& c : j.at("checks"))
      r.checks.push_back({c.at("name").get<std::string>(), num_from(c.at("value")), num_from(c.at("tolerance")),
                          c.at("relation").get<std::string>(), c.at("pass").get<bool>()});
    r.results = j.at("results");
    r.status = j.at("status").get<std::string>();
    r.error = j.at("error");
    if (j.contains("wallTime")) r.wallTime = j.at("wallTime").get<double>();
    return r;
  }

  std::string dump() const { return to_json().dump(2) + "\n"; }

  std::string csv() const
  {
    std::string out = "n,error,log_error\n";
    char buf[128];
    for (const auto& row : csvRows) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", row[0], row[1], row[2]);
      out += buf;
    }
    return out;
  }
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x)
{
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline InstanceSpec instance_spec(const RunConfig& cfg)
{
  InstanceSpec s;
  if (!cfg.params.contains("instance")) return s;
  const json& p = cfg.params.at("instance");
  s.dim = p.value("dim", static_cast<long>(s.dim));
  s.base = p.value("base", s.base);
  s.ratio = p.value("ratio", s.ratio);
  s.gridSize = p.value("gridSize", s.gridSize);
  s.repeatProb = p.value("repeatProb", s.repeatProb);
  s.nilpotentDensity = p.value("nilpotentDensity", s.nilpotentDensity);
  s.nilpotentScale = p.value("nilpotentScale", s.nilpotentScale);
  s.condCap = p.value("condCap", s.condCap);
  s.flagExact = p.value("flagExact", s.flagExact);
  s.semigroup = p.value("semigroup", s.semigroup);
  return s;
}

inline CMatrix load_matrix(const RunConfig& cfg)
{
  if (!cfg.input.empty()) return parse_matrix_file(cfg.input);
  if (cfg.seeded) return generate_instance(cfg.seed, instance_spec(cfg)).A;
  throw UsageError("command '" + cfg.command + "' needs --input or --seed");
}

inline std::vector<CVector> config_vectors(const RunConfig& cfg, Index m)
{
  std::vector<CVector> out;
  if (cfg.params.contains("vectors")) {
    for (const auto& v : cfg.params.at("vectors")) {
      if (static_cast<Index>(v.size()) != m) throw InvalidInput("config: vector has the wrong dimension");
      CVector x(m);
      for (Index i = 0; i < m; ++i) x(i) = cplx(v[i].at(0).get<double>(), v[i].at(1).get<double>());
      out.push_back(x);
    }
    return out;
  }
  for (Index i = 0; i < m; ++i) out.push_back(CVector::Unit(m, i));
  out.push_back(CVector::Ones(m));
  return out;
}

inline json vector_json(const CVector& x)
{
  json a = json::array();
  for (Index i = 0; i < x.size(); ++i) a.push_back(cplx_json(x(i)));
  return a;
}

/// Sorted ascending absolute deviation between two multisets of reals.
inline double multiset_distance(std::vector<double> a, std::vector<double> b)
{
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

inline std::vector<double> herm_eigenvalues(const CMatrix& H)
{
  const Eigen::VectorXd ev = HermMatrix::trusted(H).eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

inline json projections_json(const LevelResolution& res)
{
  json a = json::array();
  for (std::size_t j = 0; j < res.size(); ++j)
    a.push_back({{"level", num(res.levels[j])}, {"rank", res.projections[j].rank},
                 {"projection", matrix_to_json(res.projections[j].matrix())}});
  return a;
}

inline void run_decompose(const RunConfig& cfg, RunRecord& rec)
{
  const CMatrix A = load_matrix(cfg);
  const DunfordDecomposition dec = dunford(A, cfg.get("clusterTol", -1.0));
  const Index m = A.rows();
  const double nA = std::max(1.0, op_norm(A));
  const double idemTol = cfg.get("idemTol", 1e-8);

  CMatrix Nm = dec.N;
  for (Index k = 1; k < m; ++k) Nm = Nm * dec.N;
  CMatrix sum = CMatrix::Zero(m, m);
  double idem = 0.0, comm = 0.0;
  json clusters = json::array();
  for (const auto& p : dec.idempotents) {
    sum += p.matrix;
    const double scale = std::max(1.0, op_norm(p.matrix));
    idem = std::max(idem, op_norm(p.matrix * p.matrix - p.matrix) / (scale * scale));
    comm = std::max(comm, op_norm(A * p.matrix - p.matrix * A) / (nA * scale));
    json members = json::array();
    for (cplx z : p.cluster.members) members.push_back(cplx_json(z));
    clusters.push_back({{"representative", cplx_json(p.cluster.representative)},
                        {"multiplicity", p.cluster.algebraicMultiplicity},
                        {"members", members}});
  }
  rec.checks.push_back(Check::at_most("commutator_DN", op_norm(dec.D * dec.N - dec.N * dec.D) / (nA * nA), idemTol));
  rec.checks.push_back(Check::at_most("nilpotency_N^m", op_norm(Nm) / std::pow(nA, static_cast<double>(m)), idemTol));
  rec.checks.push_back(Check::at_most("partition_of_unity", op_norm(sum - identity(m)), idemTol * dec.conditionBound));
  rec.checks.push_back(Check::at_most("idempotency", idem, idemTol));
  rec.checks.push_back(Check::at_most("commutes_with_A", comm, idemTol));
  rec.results = {{"dim", m},
                 {"clusterTol", num(dec.clusterTol)},
                 {"conditionBound", num(dec.conditionBound)},
                 {"clusters", clusters},
                 {"D", matrix_to_json(dec.D)},
                 {"N", matrix_to_json(dec.N)}};
}

inline void run_limit(const RunConfig& cfg, RunRecord& rec)
{
  const CMatrix A = load_matrix(cfg);
  const DunfordDecomposition dec = dunford(A, cfg.get("clusterTol", -1.0));
  const ModulusResolution res = modulus_resolution(dec, cfg.get("modulusTol", -1.0));
  const LimitOperator K = limit_operator(res);
  std::vector<double> moduli;
  const Eigen::VectorXcd ev = eigenvalues(A);
  for (Index i = 0; i < ev.size(); ++i) moduli.push_back(std::abs(ev(i)));
  rec.checks.push_back(Check::at_most("resolution", check_resolution(res).worst(), cfg.get("resolutionTol", 1e-9)));
  rec.checks.push_back(Check::at_most("spectrum_of_K", multiset_distance(herm_eigenvalues(K.K.matrix()), moduli),
                                      std::max(dec.clusterTol, 1e-9)));
  json mult = json::array();
  for (Index k : K.multiplicities) mult.push_back(k);
  rec.results = {{"K", matrix_to_json(K.K.matrix())},
                 {"moduli", num_list(K.spectrumModuli)},
                 {"multiplicities", mult},
                 {"resolution", projections_json(res)}};
}

inline LimitOperator closed_form_limit(const CMatrix& A, const RunConfig& cfg)
{
  const DunfordDecomposition dec = dunford(A, cfg.get("clusterTol", -1.0));
  return limit_operator(modulus_resolution(dec, cfg.get("modulusTol", -1.0)));
}

inline void run_iterate(const RunConfig& cfg, RunRecord& rec)
{
  const CMatrix A = load_matrix(cfg);
  const LimitOperator K = closed_form_limit(A, cfg);
  const double target = cfg.get("target", 1e-3);
  const ConvergenceReport rep = convergence_study(A, cfg.schedule(), K, target, std::max(1u, cfg.threads));
  for (std::size_t i = 0; i < rep.schedule.size(); ++i)
    rec.csvRows.push_back({static_cast<double>(rep.schedule[i]), rep.errors[i], std::log(rep.errors[i])});
  rec.checks.push_back(Check::at_most("final_error", rep.errors.back(), target));
  rec.results = {{"schedule", rep.schedule},
                 {"errors", num_list(rep.errors)},
                 {"estimatedRate", num(rep.estimatedRate)},
                 {"converged", rep.converged},
                 {"K", matrix_to_json(K.K.matrix())}};
}

inline void run_yamamoto(const RunConfig& cfg, RunRecord& rec)
{
  const CMatrix A = load_matrix(cfg);
  const long n = cfg.get("n", 4096L);
  const std::vector<double> lim = yamamoto_limits(A, n);
  std::vector<double> moduli;
  const Eigen::VectorXcd ev = eigenvalues(A);
  for (Index i = 0; i < ev.size(); ++i) moduli.push_back(std::abs(ev(i)));
  std::sort(moduli.rbegin(), moduli.rend());
  double dev = 0.0;
  for (std::size_t i = 0; i < lim.size(); ++i) dev = std::max(dev, std::abs(lim[i] - moduli[i]));
  rec.checks.push_back(Check::at_most("yamamoto", dev, cfg.get("tol", 1e-3)));
  rec.results = {{"n", n}, {"limits", num_list(lim)}, {"moduli", num_list(moduli)}};
}

inline void run_vector_exponent(const RunConfig& cfg, RunRecord& rec)
{
  const CMatrix A = load_matrix(cfg);
  const long n = cfg.get("n", 4096L);
  const double tol = cfg.get("tol", 1e-3);
  const DunfordDecomposition dec = dunford(A, cfg.get("clusterTol", -1.0));
  json rows = json::array();
  const auto vecs = config_vectors(cfg, A.rows());
  for (std::size_t i = 0; i < vecs.size(); ++i) {
    const double exact = vector_exponent_exact(dec, vecs[i], cfg.get("modulusTol", -1.0));
    const double est = vector_exponent_estimate(A, vecs[i], n);
    rec.checks.push_back(Check::at_most("vector[" + std::to_string(i) + "]", std::abs(est - exact), tol));
    rows.push_back({{"x", vector_json(vecs[i])}, {"exact", num(exact)}, {"estimate", num(est)}});
  }
  rec.results = {{"n", n}, {"vectors", rows}};
}

inline WeightSequence weights_from(const RunConfig& cfg)
{
  if (!cfg.params.contains("weights")) return WeightSequence::blocks(2.0);
  const json& w = cfg.params.at("weights");
  const std::string kind = w.at("kind").get<std::string>();
  if (kind == "explicit") return WeightSequence::explicit_list(w.at("values").get<std::vector<double>>());
  if (kind == "harmonic") return WeightSequence::harmonic();
  if (kind == "geometric") return WeightSequence::geometric(w.value("param", 0.5));
  if (kind == "constant") return WeightSequence::constant(w.value("param", 1.0));
  if (kind == "blocks") return WeightSequence::blocks(w.value("param", 2.0));
  throw InvalidInput("config: unknown weight kind '" + kind + "'");
}

inline void run_shift(const RunConfig& cfg, RunRecord& rec)
{
  const WeightSequence w = weights_from(cfg);
  const long N = cfg.get("N", 512L);
  const long K = cfg.get("K", 4 * N);
  const long tail = cfg.get("tailWindow", std::max(1L, N / 4));
  const MeanTable table = geometric_mean_table(w, K, N);
  const DetectorResult det = uniform_limit_detector(table, cfg.get("detectorTol", 1e-2), tail);
  const bool backward = backward_classifier(w, cfg.get("horizon", N), cfg.get("classifierTol", 1e-2));
  const Index m = cfg.get("m", 256L);
  const long n = cfg.get("n", 32L);
  const ShiftCrosscheck cc = shift_power_crosscheck(w, m, n);

  rec.checks.push_back(Check::at_most("crosscheck", cc.maxDeviation, cfg.get("crosscheckTol", 1e-10)));
  rec.checks.push_back(Check::at_most("table_bound", std::max(0.0, table.values.maxCoeff() - w.bound()),
                                      cfg.get("boundTol", 1e-12)));
  rec.results = {{"weights", w.name()},
                 {"param", num(w.param())},
                 {"bound", num(w.bound())},
                 {"K", K},
                 {"N", N},
                 {"detector",
                  {{"converged", det.converged},
                   {"alpha", num(det.alpha)},
                   {"spread", num(det.spread)},
                   {"witness", det.witness}}},
                 {"backwardConverges", backward},
                 {"crosscheck", {{"m", m}, {"n", n}, {"maxDeviation", num(cc.maxDeviation)},
                                 {"offDiagonal", num(cc.offDiagonal)}}}};
}

inline void run_semigroup(const RunConfig& cfg, RunRecord& rec)
{
  const CMatrix A = load_matrix(cfg);
  const DunfordDecomposition dec = dunford(A, cfg.get("clusterTol", -1.0));
  const HalfplaneResolution res = halfplane_resolution(dec, cfg.get("realPartTol", -1.0));
  const LimitOperator K = semigroup_limit(res);
  std::vector<double> expected;
  const Eigen::VectorXcd ev = eigenvalues(A);
  for (Index i = 0; i < ev.size(); ++i) expected.push_back(std::exp(ev(i).real()));
  rec.checks.push_back(Check::at_most("resolution", check_resolution(res).worst(), cfg.get("resolutionTol", 1e-9)));
  rec.checks.push_back(Check::at_most("spectrum", multiset_distance(herm_eigenvalues(K.K.matrix()), expected),
                                      cfg.get("spectrumTol", 1e-6)));

  const std::vector<double> ts = cfg.params.contains("tSamples") ? cfg.params.at("tSamples").get<std::vector<double>>()
                                                                  : std::vector<double>{25, 50, 100, 200};
  if (ts.empty()) throw InvalidInput("config: tSamples must be non-empty");
  const double growthTol = cfg.get("growthTol", 1e-2);
  json rows = json::array();
  const auto vecs = config_vectors(cfg, A.rows());
  for (std::size_t i = 0; i < vecs.size(); ++i) {
    const double exact = exp_growth_exponent_exact(dec, vecs[i]);
    std::vector<double> est;
    for (double t : ts) est.push_back(exp_growth_estimate(A, vecs[i], t));
    json row = {{"x", vector_json(vecs[i])}, {"exact", num(exact)}, {"estimates", num_list(est)}};
    if (ts.size() >= 3) row["extrapolated"] = num(exp_growth_extrapolated(A, vecs[i], ts));
    rows.push_back(row);
    rec.checks.push_back(Check::at_most("growth[" + std::to_string(i) + "]", std::abs(est.back() - exact), growthTol));
  }

  const long n = cfg.get("n", 4096L);
  const CMatrix E = matrix_exp_scaled(A, 1.0).value();
  rec.checks.push_back(Check::at_most("discrete_continuous", op_norm(normalized_power(E, n).matrix() - K.K.matrix()),
                                      cfg.get("tol", 1e-3)));
  rec.results = {{"Kexp", matrix_to_json(K.K.matrix())},
                 {"realParts", num_list(res.levels)},
                 {"tSamples", num_list(ts)},
                 {"vectors", rows}};
}

struct SweepOutcome
{
  std::uint64_t seed = 0;
  Index dim = 0;
  double mainError = 0.0;
  double yamamotoError = 0.0;
  double vectorError = 0.0;
  std::string error;  // module error text, empty on success
};

inline SweepOutcome sweep_instance(const RunConfig& cfg, std::size_t index)
{
  SweepOutcome o;
  o.seed = splitmix64(cfg.seed + index);
  const long dimMin = cfg.get("dimMin", 2L), dimMax = cfg.get("dimMax", 8L);
  InstanceSpec spec = instance_spec(cfg);
  spec.dim = dimMin + static_cast<long>(o.seed % static_cast<std::uint64_t>(dimMax - dimMin + 1));
  o.dim = spec.dim;
  const long n = cfg.get("n", 4096L);
  try {
    const Instance inst = generate_instance(o.seed, spec);
    const DunfordDecomposition dec = dunford(inst.A, cfg.get("clusterTol", -1.0));
    const LimitOperator K = limit_operator(modulus_resolution(dec));
    o.mainError = op_norm(normalized_power(inst.A, n).matrix() - K.K.matrix());
    const auto lim = yamamoto_limits(inst.A, n);
    const auto mod = sorted_moduli(inst.lambda);
    for (std::size_t i = 0; i < lim.size(); ++i) o.yamamotoError = std::max(o.yamamotoError, std::abs(lim[i] - mod[i]));
    if (spec.flagExact)
      for (Index j = 0; j < spec.dim; ++j) {
        const CVector x = inst.generalized_vector(j);
        o.vectorError = std::max(o.vectorError,
                                 std::abs(vector_exponent_estimate(inst.A, x, n) - vector_exponent_exact(dec, x)));
      }
  } catch (const Error& e) {
    o.error = std::string(e.kind()) + ": " + e.what();
  }
  return o;
}

inline void run_sweep(const RunConfig& cfg, RunRecord& rec)
{
  if (!cfg.seeded) throw UsageError("sweep needs --seed");
  const long count = cfg.get("instances", 50L);
  if (count < 1) throw InvalidInput("config: instances must be positive");
  if (cfg.get("dimMin", 2L) < 1 || cfg.get("dimMax", 8L) < cfg.get("dimMin", 2L))
    throw InvalidInput("config: need 1 <= dimMin <= dimMax");
  const double tol = cfg.get("tol", 1e-3);

  std::vector<SweepOutcome> out(static_cast<std::size_t>(count));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < out.size(); i = next++) out[i] = sweep_instance(cfg, i);
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(cfg.threads, static_cast<unsigned>(count)));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  long mainPass = 0, yamPass = 0, vecPass = 0, errors = 0;
  json rows = json::array();
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto& o = out[i];
    const bool ok = o.error.empty();
    errors += ok ? 0 : 1;
    mainPass += ok && o.mainError <= tol;
    yamPass += ok && o.yamamotoError <= tol;
    vecPass += ok && o.vectorError <= tol;
    json row = {{"index", i}, {"seed", o.seed}, {"dim", o.dim}, {"mainError", num(o.mainError)},
                {"yamamotoError", num(o.yamamotoError)}, {"vectorError", num(o.vectorError)}};
    if (!ok) row["error"] = o.error;
    rows.push_back(row);
  }
  const double c = static_cast<double>(count);
  const double required = cfg.get("requiredPassRate", 1.0);
  rec.checks.push_back(Check::at_least("main_theorem_pass_rate", mainPass / c, required));
  rec.checks.push_back(Check::at_least("yamamoto_pass_rate", yamPass / c, required));
  rec.checks.push_back(Check::at_least("vector_exponent_pass_rate", vecPass / c, required));
  rec.results = {{"instances", count}, {"errors", errors}, {"outcomes", rows}};
}

}  // namespace detail

inline const std::vector<std::string>& command_names()
{
  static const std::vector<std::string> names = {"decompose", "limit", "iterate", "yamamoto",
                                                 "vector-exponent", "shift", "semigroup", "sweep"};
  return names;
}

/// Runs one command.  Unknown commands and missing inputs raise UsageError;
/// every other module error is recorded with status "error".
inline RunRecord run_command(const RunConfig& cfg)
{
  using Fn = void (*)(const RunConfig&, RunRecord&);
  static const std::vector<std::pair<std::string, Fn>> table = {
      {"decompose", detail::run_decompose}, {"limit", detail::run_limit},
      {"iterate", detail::run_iterate},     {"yamamoto", detail::run_yamamoto},
      {"vector-exponent", detail::run_vector_exponent}, {"shift", detail::run_shift},
      {"semigroup", detail::run_semigroup}, {"sweep", detail::run_sweep}};
  Fn fn = nullptr;
  for (const auto& [name, f] : table)
    if (name == cfg.command) fn = f;
  if (!fn) throw UsageError("unknown command '" + cfg.command + "'");

  const auto t0 = std::chrono::steady_clock::now();
  RunRecord rec;
  rec.config = cfg.echo();
  try {
    cfg.validate();
    fn(cfg, rec);
    rec.finalize();
  } catch (const UsageError&) {
    throw;
  } catch (const Error& e) {
    rec.status = "error";
    rec.error = {{"kind", e.kind()}, {"message", e.what()}};
  } catch (const json::exception& e) {
    rec.status = "error";
    rec.error = {{"kind", "InvalidInput"}, {"message", std::string("config: ") + e.what()}};
  }
  if (cfg.params.value("recordWallTime", false))
    rec.wallTime = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

}  // namespace satk

#endif
