// ldwalk: command-line front end. Every subcommand reads an optional JSON
// config (--config), lets flags override file fields, and echoes the resolved
// config into whatever it emits. Exit codes: 0 ok, 2 config error,
// 3 tolerance failure (compare), 4 resource cap.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ldw/ldw.hpp"

using json = nlohmann::json;
using namespace ldw;

namespace {

constexpr const char* kArtifactVersion = "ldwalk-1";

struct ToleranceFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt17(double v) {
  if (v == kPosInf) return "inf";
  if (v == kNegInf) return "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config file not readable: " + path);
  json cfg;
  in >> cfg;
  if (!cfg.is_object()) throw std::invalid_argument("config must be a JSON object");
  return cfg;
}

// File field applies only when the flag was not passed on the command line.
template <class T>
void merge(CLI::App* cmd, const std::string& flag, const json& cfg, const char* key, T& var) {
  if (cfg.contains(key) && cmd->count(flag) == 0) var = cfg.at(key).get<T>();
}

std::vector<Word> parse_word_list(const std::string& s) {
  std::vector<Word> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_word(item));
  if (out.empty()) throw std::invalid_argument("empty word list");
  return out;
}

std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  if (out.empty()) throw std::invalid_argument("empty number list");
  return out;
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
  if (out.empty()) throw std::invalid_argument("empty integer list");
  return out;
}

// Output sink: JSON document or CSV table, config always embedded.
struct Sink {
  std::string path;    // empty = stdout
  std::string format;  // "json" or "csv"
  json config;

  std::ostream& stream(std::ofstream& file) const {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file) throw std::invalid_argument("cannot open output path: " + path);
    return file;
  }

  void write_json(json results) const {
    json doc{{"artifact_version", kArtifactVersion}, {"config", config}, {"results", std::move(results)}};
    std::ofstream file;
    stream(file) << doc.dump(2) << "\n";
  }

  void write_csv(const std::vector<std::string>& header,
                 const std::vector<std::vector<std::string>>& rows,
                 json summary = json::object()) const {
    std::ofstream file;
    auto& os = stream(file);
    json meta{{"artifact_version", kArtifactVersion}, {"config", config}};
    if (!summary.empty()) meta["summary"] = std::move(summary);
    os << "# " << meta.dump() << "\n";
    for (std::size_t i = 0; i < header.size(); ++i)
      os << header[i] << (i + 1 < header.size() ? "," : "\n");
    for (const auto& row : rows)
      for (std::size_t i = 0; i < row.size(); ++i)
        os << row[i] << (i + 1 < row.size() ? "," : "\n");
  }

  // One row per record, or the whole table inside the JSON document.
  void write_table(const std::vector<std::string>& header,
                   const std::vector<std::vector<std::string>>& rows, json summary) const {
    if (format == "csv") {
      write_csv(header, rows, summary);
    } else {
      json rs = json::array();
      for (const auto& row : rows) {
        json r = json::object();
        for (std::size_t i = 0; i < header.size(); ++i) r[header[i]] = row[i];
        rs.push_back(std::move(r));
      }
      write_json(json{{"rows", std::move(rs)}, {"summary", std::move(summary)}});
    }
  }
};

// Common options shared by most subcommands.
struct Common {
  std::string config_path;
  std::string out;
  std::string format = "json";
  int q = 2;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int workers = 1;

  json cfg;  // parsed config file

  void add_to(CLI::App* cmd, bool with_q = true) {
    cmd->add_option("--config", config_path, "JSON config file; flags override its fields");
    cmd->add_option("--out", out, "output path (default stdout)");
    cmd->add_option("--format", format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
    if (with_q) cmd->add_option("--q", q, "free group rank");
    cmd->add_option("--seed", seed, "master seed (decimal u64)");
    cmd->add_option("--workers", workers, "worker count; results are worker-independent");
  }

  void resolve(CLI::App* cmd) {
    cfg = load_config(config_path);
    merge(cmd, "--out", cfg, "out", out);
    merge(cmd, "--format", cfg, "format", format);
    merge(cmd, "--q", cfg, "q", q);
    if (cmd->count("--seed") || cfg.contains("seed")) {
      merge(cmd, "--seed", cfg, "seed", seed);
      seed_set = true;
    }
    merge(cmd, "--workers", cfg, "workers", workers);
  }

  void require_seed() const {
    if (!seed_set)
      throw std::invalid_argument("--seed is mandatory for Monte Carlo subcommands");
  }

  json resolved(json extra) const {
    extra["q"] = q;
    extra["format"] = format;
    extra["workers"] = workers;
    if (seed_set) extra["seed"] = seed;
    if (!out.empty()) extra["out"] = out;
    return extra;
  }

  Sink sink(json extra) const { return Sink{out, format, resolved(std::move(extra))}; }
};

FiniteMeasure<Word> make_free_measure(int q, const std::string& spec, const json& cfg) {
  if (spec == "uniform-gens") return uniform_generator_measure(q);
  if (spec.rfind("point:", 0) == 0) return point_mass(parse_word(spec.substr(6)));
  if (spec == "atoms") {
    if (!cfg.contains("atoms")) throw std::invalid_argument("measure=atoms needs config atoms[]");
    FiniteMeasure<Word> mu;
    for (const auto& a : cfg.at("atoms"))
      mu.atoms.emplace_back(parse_word(a.at("word").get<std::string>()), a.at("p").get<double>());
    mu.canonicalize();
    return mu;
  }
  throw std::invalid_argument("unknown measure spec: " + spec);
}

FiniteMeasure<MobiusElement> make_sl2_measure(const json& cfg) {
  if (!cfg.contains("atoms"))
    throw std::invalid_argument("sl2 backend needs config atoms[] with entries");
  FiniteMeasure<MobiusElement> mu;
  for (const auto& a : cfg.at("atoms")) {
    auto e = a.at("entries");
    if (!e.is_array() || e.size() != 4)
      throw std::invalid_argument("sl2 atom entries must be 4 numbers row-major");
    mu.atoms.emplace_back(
        MobiusElement::from_entries(e[0].get<double>(), e[1].get<double>(), e[2].get<double>(),
                                    e[3].get<double>()),
        a.value("p", 1.0 / cfg.at("atoms").size()));
  }
  mu.canonicalize();
  return mu;
}

json cert_json(const SchottkyCertificate& c) {
  return json{{"constant", c.C},
              {"valid", c.valid},
              {"mode", c.mode},
              {"worst_fraction", fmt17(c.worst_fraction)},
              {"witness", json{{"y", c.witness_y}, {"z", c.witness_z}}},
              {"set_size", c.set_size},
              {"classes_or_trials", c.classes_or_trials}};
}

json fit_json(const std::optional<LineFit>& f) {
  if (!f) return nullptr;
  return json{{"slope", fmt17(f->slope)},
              {"intercept", fmt17(f->intercept)},
              {"r2", fmt17(f->r2)},
              {"points", f->points}};
}

std::vector<std::vector<std::string>> cell_rows(const std::vector<TailEstimate>& cells) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& c : cells)
    rows.push_back({fmt17(c.x), std::to_string(c.hits), std::to_string(c.samples),
                    fmt17(c.log_p), fmt17(c.interval.lo), fmt17(c.interval.hi),
                    c.censored ? "1" : "0"});
  return rows;
}

const std::vector<std::string> kCellHeader = {"x",     "hits",  "samples", "log_p",
                                              "ci_lo", "ci_hi", "censored"};

int run(int argc, char** argv) {
  CLI::App app{"random-walk large-deviation toolkit"};
  app.require_subcommand(1);

  // ---- simulate ----
  auto* sim = app.add_subcommand("simulate", "run walks, stream per-sample records");
  Common sim_c;
  std::string sim_backend = "free", sim_measure = "uniform-gens";
  int sim_horizon = 100, sim_chunk = 1024, sim_ell_n = 16;
  std::uint64_t sim_samples = 1000;
  bool sim_ell = false;
  sim_c.add_to(sim);
  sim->add_option("--backend", sim_backend, "free|sl2");
  sim->add_option("--measure", sim_measure, "uniform-gens|point:<word>|atoms");
  sim->add_option("--horizon", sim_horizon);
  sim->add_option("--samples", sim_samples);
  sim->add_option("--chunk-size", sim_chunk);
  sim->add_flag("--ell", sim_ell, "bracket the stable length per sample");
  sim->add_option("--ell-n-max", sim_ell_n);
  sim->callback([&] {
    sim_c.resolve(sim);
    merge(sim, "--backend", sim_c.cfg, "backend", sim_backend);
    merge(sim, "--measure", sim_c.cfg, "measure", sim_measure);
    merge(sim, "--horizon", sim_c.cfg, "horizon", sim_horizon);
    merge(sim, "--samples", sim_c.cfg, "samples", sim_samples);
    merge(sim, "--chunk-size", sim_c.cfg, "chunk_size", sim_chunk);
    merge(sim, "--ell", sim_c.cfg, "ell", sim_ell);
    merge(sim, "--ell-n-max", sim_c.cfg, "ell_n_max", sim_ell_n);
    sim_c.require_seed();
    WalkRun run;
    run.horizon = sim_horizon;
    run.samples = sim_samples;
    run.seed = sim_c.seed;
    run.chunk_size = sim_chunk;
    run.want_ell = sim_ell;
    run.ell_n_max = sim_ell_n;
    run.workers = sim_c.workers;
    auto sink = sim_c.sink(json{{"subcommand", "simulate"},
                                {"backend", sim_backend},
                                {"measure", sim_measure},
                                {"horizon", sim_horizon},
                                {"samples", sim_samples},
                                {"chunk_size", sim_chunk},
                                {"ell", sim_ell},
                                {"ell_n_max", sim_ell_n}});
    std::vector<std::vector<std::string>> rows;
    double sum_d = 0;
    auto record = [&](const SampleRecord& r) {
      sum_d += r.d;
      rows.push_back({std::to_string(r.id), std::to_string(run.horizon), fmt17(r.d),
                      fmt17(r.tau), fmt17(r.ell_lo), fmt17(r.ell_hi)});
    };
    if (sim_backend == "free") {
      simulate(TreeSpace{sim_c.q}, make_free_measure(sim_c.q, sim_measure, sim_c.cfg), run,
               record);
    } else if (sim_backend == "sl2") {
      simulate(DiscSpace{}, make_sl2_measure(sim_c.cfg), run, record);
    } else {
      throw std::invalid_argument("unknown backend: " + sim_backend);
    }
    json summary{{"mean_d_over_n", fmt17(sum_d / (run.samples * run.horizon))}};
    sink.write_table({"sample_id", "n", "d", "tau", "ell_lo", "ell_hi"}, rows, summary);
  });

  // ---- exact-dist / tau-dist ----
  for (bool tau_mode : {false, true}) {
    auto* cmd = app.add_subcommand(tau_mode ? "tau-dist" : "exact-dist",
                                   tau_mode ? "exact law of the translation length"
                                            : "exact law of the displacement");
    auto c = std::make_shared<Common>();
    auto n = std::make_shared<int>(10);
    auto rational = std::make_shared<bool>(false);
    c->add_to(cmd);
    cmd->add_option("--n", *n, "horizon");
    cmd->add_flag("--rational", *rational, "exact num/den output");
    cmd->callback([&app, cmd, c, n, rational, tau_mode] {
      c->resolve(cmd);
      merge(cmd, "--n", c->cfg, "n", *n);
      merge(cmd, "--rational", c->cfg, "rational", *rational);
      auto sink = c->sink(json{{"subcommand", tau_mode ? "tau-dist" : "exact-dist"},
                               {"n", *n},
                               {"rational", *rational}});
      std::vector<std::vector<std::string>> rows;
      if (*rational) {
        if (*n > 4096) throw std::overflow_error("rational mode capped at n = 4096");
        auto law = tau_mode ? tau_law_rational(c->q, *n) : dist_law_rational(c->q, *n);
        for (int k = 0; k <= *n; ++k) {
          std::ostringstream os;
          os << numerator(law[k]) << "/" << denominator(law[k]);
          rows.push_back({std::to_string(k), os.str()});
        }
        sink.write_table({"k", "prob"}, rows, json::object());
      } else {
        std::vector<double> logp;
        if (tau_mode)
          logp = tau_law(c->q, *n).logp;
        else
          logp = dist_law(c->q, *n).logp;
        for (int k = 0; k <= *n; ++k)
          rows.push_back({std::to_string(k), fmt17(logp[k])});
        sink.write_table({"k", "log_prob"}, rows, json::object());
      }
    });
  }

  // ---- return-rate ----
  auto* rr = app.add_subcommand("return-rate", "-(1/2n) ln P(d_2n = 0) and its limit");
  Common rr_c;
  int rr_n = 256;
  rr_c.add_to(rr);
  rr->add_option("--n-max", rr_n);
  rr->callback([&] {
    rr_c.resolve(rr);
    merge(rr, "--n-max", rr_c.cfg, "n_max", rr_n);
    auto r = return_rate(rr_c.q, rr_n);
    auto sink = rr_c.sink(json{{"subcommand", "return-rate"}, {"n_max", rr_n}});
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < r.rate.size(); ++i)
      rows.push_back({std::to_string(2 * (i + 1)), fmt17(r.rate[i]), fmt17(r.fekete_inf[i])});
    sink.write_table({"n", "rate", "fekete_inf"}, rows, json{{"limit", fmt17(r.limit)}});
  });

  // ---- mgf ----
  auto* mg = app.add_subcommand("mgf", "(1/n) ln E e^{lambda d_n} on a lambda grid");
  Common mg_c;
  int mg_n = 512;
  std::string mg_lambdas = "-1,-0.5,0,0.5,1";
  mg_c.add_to(mg);
  mg->add_option("--n", mg_n);
  mg->add_option("--lambdas", mg_lambdas, "comma-separated grid");
  mg->callback([&] {
    mg_c.resolve(mg);
    merge(mg, "--n", mg_c.cfg, "n", mg_n);
    merge(mg, "--lambdas", mg_c.cfg, "lambdas", mg_lambdas);
    auto lams = parse_double_list(mg_lambdas);
    auto vals = log_mgf(dist_law(mg_c.q, mg_n), lams);
    auto sink = mg_c.sink(json{{"subcommand", "mgf"}, {"n", mg_n}, {"lambdas", mg_lambdas}});
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < lams.size(); ++i)
      rows.push_back({fmt17(lams[i]), fmt17(vals[i])});
    sink.write_table({"lambda", "mgf"}, rows, json::object());
  });

  // ---- rate ----
  auto* rt = app.add_subcommand("rate", "finite-n deviation rate curves from exact DP");
  Common rt_c;
  std::string rt_side = "above", rt_alphas = "0.55,0.65,0.75,0.85,0.95", rt_ns = "256,512,1024";
  rt_c.add_to(rt);
  rt->add_option("--side", rt_side)->check(CLI::IsMember({"above", "below"}));
  rt->add_option("--alphas", rt_alphas);
  rt->add_option("--ns", rt_ns);
  rt->callback([&] {
    rt_c.resolve(rt);
    merge(rt, "--side", rt_c.cfg, "side", rt_side);
    merge(rt, "--alphas", rt_c.cfg, "alphas", rt_alphas);
    merge(rt, "--ns", rt_c.cfg, "ns", rt_ns);
    auto curve = rate_curve_exact(rt_c.q, rt_side == "above" ? Side::Above : Side::Below,
                                  parse_double_list(rt_alphas), parse_int_list(rt_ns));
    auto sink = rt_c.sink(json{{"subcommand", "rate"},
                               {"side", rt_side},
                               {"alphas", rt_alphas},
                               {"ns", rt_ns}});
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < curve.ns.size(); ++i)
      for (std::size_t j = 0; j < curve.alpha.size(); ++j)
        rows.push_back({fmt17(curve.alpha[j]), fmt17(curve.psi[i][j]),
                        std::to_string(curve.ns[i]), "exact-dp"});
    sink.write_table({"alpha", "rate", "n", "provenance"}, rows, json::object());
  });

  // ---- assemble ----
  auto* as = app.add_subcommand("assemble", "stitch below/above curves into a rate function");
  Common as_c;
  int as_n = 1024, as_cells = 40;
  as_c.add_to(as);
  as->add_option("--n", as_n);
  as->add_option("--cells", as_cells, "alpha grid cells on [0, 1]");
  as->callback([&] {
    as_c.resolve(as);
    merge(as, "--n", as_c.cfg, "n", as_n);
    merge(as, "--cells", as_c.cfg, "cells", as_cells);
    std::vector<double> alphas;
    for (int i = 0; i <= as_cells; ++i) alphas.push_back(static_cast<double>(i) / as_cells);
    auto above = rate_curve_exact(as_c.q, Side::Above, alphas, {as_n});
    auto below = rate_curve_exact(as_c.q, Side::Below, alphas, {as_n});
    auto f = assemble_rate(above, below, free_group_drift(as_c.q));
    auto sink = as_c.sink(json{{"subcommand", "assemble"}, {"n", as_n}, {"cells", as_cells}});
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < f.alpha.size(); ++i)
      rows.push_back({fmt17(f.alpha[i]), fmt17(f.value[i]), f.provenance});
    sink.write_table({"alpha", "rate", "provenance"}, rows,
                     json{{"convex_ok", f.convex_ok},
                          {"worst_midpoint_violation", fmt17(f.worst_midpoint_violation)}});
  });

  // ---- legendre ----
  auto* lg = app.add_subcommand("legendre", "Legendre transform of the analytic rate");
  Common lg_c;
  std::string lg_lambdas = "-1,-0.5,0,0.5,1";
  int lg_cells = 2000;
  lg_c.add_to(lg);
  lg->add_option("--lambdas", lg_lambdas);
  lg->add_option("--cells", lg_cells, "alpha grid resolution");
  lg->callback([&] {
    lg_c.resolve(lg);
    merge(lg, "--lambdas", lg_c.cfg, "lambdas", lg_lambdas);
    merge(lg, "--cells", lg_c.cfg, "cells", lg_cells);
    std::vector<double> xs, fs;
    for (int i = 0; i <= lg_cells; ++i) {
      double a = static_cast<double>(i) / lg_cells;
      xs.push_back(a);
      fs.push_back(analytic_rate_free(lg_c.q, a));
    }
    auto lams = parse_double_list(lg_lambdas);
    auto dual = legendre(xs, fs, lams);
    auto sink = lg_c.sink(json{{"subcommand", "legendre"},
                               {"lambdas", lg_lambdas},
                               {"cells", lg_cells}});
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < lams.size(); ++i)
      rows.push_back({fmt17(lams[i]), fmt17(dual[i])});
    sink.write_table({"lambda", "dual"}, rows, json::object());
  });

  // ---- chernoff ----
  auto* ch = app.add_subcommand("chernoff", "Chernoff bound vs the exact finite-n rate");
  Common ch_c;
  int ch_n = 512;
  std::string ch_as = "0.6,0.7,0.8,0.9", ch_lambdas;
  ch_c.add_to(ch);
  ch->add_option("--n", ch_n);
  ch->add_option("--alphas", ch_as);
  ch->add_option("--lambdas", ch_lambdas, "default: 0..3 step 0.05");
  ch->callback([&] {
    ch_c.resolve(ch);
    merge(ch, "--n", ch_c.cfg, "n", ch_n);
    merge(ch, "--alphas", ch_c.cfg, "alphas", ch_as);
    merge(ch, "--lambdas", ch_c.cfg, "lambdas", ch_lambdas);
    std::vector<double> lams;
    if (ch_lambdas.empty())
      for (int i = 0; i <= 60; ++i) lams.push_back(i * 0.05);
    else
      lams = parse_double_list(ch_lambdas);
    auto d = dist_law(ch_c.q, ch_n);
    auto mgf = log_mgf(d, lams);
    auto sink = ch_c.sink(json{{"subcommand", "chernoff"}, {"n", ch_n}, {"alphas", ch_as}});
    std::vector<std::vector<std::string>> rows;
    for (double a : parse_double_list(ch_as)) {
      double bound = chernoff_upper(a, lams, mgf);
      double lp = deviation_prob(d, a, Side::Above);
      double exact = lp == kNegInf ? kPosInf : -lp / ch_n;
      rows.push_back({fmt17(a), fmt17(bound), fmt17(exact)});
    }
    sink.write_table({"alpha", "chernoff", "exact"}, rows, json::object());
  });

  // ---- analytic ----
  auto* an = app.add_subcommand("analytic", "closed-form rate function values");
  Common an_c;
  std::string an_as = "0.5";
  an_c.add_to(an);
  an->add_option("--alpha", an_as, "comma-separated values");
  an->callback([&] {
    an_c.resolve(an);
    merge(an, "--alpha", an_c.cfg, "alpha", an_as);
    auto sink = an_c.sink(json{{"subcommand", "analytic"}, {"alpha", an_as}});
    std::vector<std::vector<std::string>> rows;
    for (double a : parse_double_list(an_as))
      rows.push_back({fmt17(a), fmt17(analytic_rate_free(an_c.q, a))});
    sink.write_table({"alpha", "rate"}, rows,
                     json{{"drift", fmt17(free_group_drift(an_c.q))}});
  });

  // ---- schottky ----
  auto* sk = app.add_subcommand("schottky", "Schottky set verification and construction");
  sk->require_subcommand(1);

  auto* skv = sk->add_subcommand("verify", "certify the 2/3 shadow condition");
  Common skv_c;
  std::string skv_set = "a,b";
  int skv_C = 2, skv_trials = 10000;
  std::string skv_mode = "tree";
  std::uint64_t skv_budget = 50000000;
  skv_c.add_to(skv);
  skv->add_option("--set", skv_set, "comma-separated words");
  skv->add_option("--constant", skv_C);
  skv->add_option("--mode", skv_mode)->check(CLI::IsMember({"tree", "sampled"}));
  skv->add_option("--trials", skv_trials, "sampled mode only");
  skv->add_option("--budget", skv_budget, "tree mode enumeration cap");
  skv->callback([&] {
    skv_c.resolve(skv);
    merge(skv, "--set", skv_c.cfg, "set", skv_set);
    merge(skv, "--constant", skv_c.cfg, "constant", skv_C);
    merge(skv, "--mode", skv_c.cfg, "mode", skv_mode);
    merge(skv, "--trials", skv_c.cfg, "trials", skv_trials);
    merge(skv, "--budget", skv_c.cfg, "budget", skv_budget);
    auto S = parse_word_list(skv_set);
    SchottkyCertificate cert;
    if (skv_mode == "tree") {
      cert = verify_tree(skv_c.q, S, skv_C, skv_budget);
    } else {
      skv_c.require_seed();
      TreeSpace sp{skv_c.q};
      Rng rng(skv_c.seed);
      int q = skv_c.q;
      cert = verify_sampled(sp, S, skv_C, skv_trials,
                            [q](Rng& r) {
                              return uniform_sphere_sample(q, 1 + r.uniform_below(24), r);
                            },
                            rng);
    }
    auto sink = skv_c.sink(json{{"subcommand", "schottky verify"},
                                {"set", skv_set},
                                {"constant", skv_C},
                                {"mode", skv_mode}});
    sink.write_json(cert_json(cert));
  });

  auto* skc = sk->add_subcommand("construct", "ping-pong Schottky set from two loxodromics");
  Common skc_c;
  std::string skc_g1 = "a", skc_g2 = "b";
  int skc_ncap = 8, skc_cmax = 12;
  skc_c.add_to(skc);
  skc->add_option("--g1", skc_g1);
  skc->add_option("--g2", skc_g2);
  skc->add_option("--n-cap", skc_ncap);
  skc->add_option("--c-max", skc_cmax);
  skc->callback([&] {
    skc_c.resolve(skc);
    merge(skc, "--g1", skc_c.cfg, "g1", skc_g1);
    merge(skc, "--g2", skc_c.cfg, "g2", skc_g2);
    merge(skc, "--n-cap", skc_c.cfg, "n_cap", skc_ncap);
    merge(skc, "--c-max", skc_c.cfg, "c_max", skc_cmax);
    auto res = construct_pingpong_tree(skc_c.q, parse_word(skc_g1), parse_word(skc_g2),
                                       skc_ncap, skc_cmax);
    json elems = json::array();
    for (const auto& w : res.S) elems.push_back(format_word(w));
    auto sink = skc_c.sink(json{{"subcommand", "schottky construct"},
                                {"g1", skc_g1},
                                {"g2", skc_g2},
                                {"n_cap", skc_ncap},
                                {"c_max", skc_cmax}});
    sink.write_json(json{{"elements", std::move(elems)},
                         {"n_used", res.n_used},
                         {"certificate", cert_json(res.certificate)},
                         {"diagnostics", res.diagnostics}});
  });

  auto* skb = sk->add_subcommand("boost", "pick s maximizing tau(s g)");
  Common skb_c;
  std::string skb_set = "a,b", skb_g = "a";
  skb_c.add_to(skb);
  skb->add_option("--set", skb_set);
  skb->add_option("--g", skb_g);
  skb->callback([&] {
    skb_c.resolve(skb);
    merge(skb, "--set", skb_c.cfg, "set", skb_set);
    merge(skb, "--g", skb_c.cfg, "g", skb_g);
    auto S = parse_word_list(skb_set);
    auto r = boost_translation_tree(S, parse_word(skb_g));
    auto sink = skb_c.sink(json{{"subcommand", "schottky boost"},
                                {"set", skb_set},
                                {"g", skb_g}});
    sink.write_json(json{{"best_index", r.best_index},
                         {"best_element", format_word(S[r.best_index])},
                         {"tau_best", fmt17(r.tau_best)},
                         {"deficit", fmt17(r.deficit)}});
  });

  auto* skm = sk->add_subcommand("moving-tau", "cyclic split closest to a target length");
  Common skm_c;
  std::string skm_w = "ab";
  double skm_r = 2.0;
  skm_c.add_to(skm);
  skm->add_option("--word", skm_w);
  skm->add_option("--target", skm_r);
  skm->callback([&] {
    skm_c.resolve(skm);
    merge(skm, "--word", skm_c.cfg, "word", skm_w);
    merge(skm, "--target", skm_c.cfg, "target", skm_r);
    auto res = moving_tau_search(parse_word(skm_w), skm_r);
    auto sink = skm_c.sink(json{{"subcommand", "schottky moving-tau"},
                                {"word", skm_w},
                                {"target", fmt17(skm_r)}});
    sink.write_json(json{{"best_index", res.best_index},
                         {"achieved", fmt17(res.achieved)},
                         {"gap", fmt17(res.gap)}});
  });

  // ---- spectrum / arithmetic / berger-wang ----
  auto* spx = app.add_subcommand("spectrum", "joint displacement spectrum of a finite set");
  Common spx_c;
  std::string spx_set = "a,ab";
  int spx_n = 10;
  std::uint64_t spx_budget = 2000000;
  spx_c.add_to(spx);
  spx->add_option("--set", spx_set);
  spx->add_option("--n-max", spx_n);
  spx->add_option("--budget", spx_budget);
  spx->callback([&] {
    spx_c.resolve(spx);
    merge(spx, "--set", spx_c.cfg, "set", spx_set);
    merge(spx, "--n-max", spx_c.cfg, "n_max", spx_n);
    merge(spx, "--budget", spx_c.cfg, "budget", spx_budget);
    auto js = joint_spectrum(TreeSpace{spx_c.q}, parse_word_list(spx_set), spx_n, spx_budget);
    if (js.truncated) throw std::overflow_error("spectrum: element budget exceeded");
    auto sink = spx_c.sink(json{{"subcommand", "spectrum"},
                                {"set", spx_set},
                                {"n_max", spx_n}});
    std::vector<std::vector<std::string>> rows;
    for (int n = 1; n <= js.n_max; ++n)
      rows.push_back({std::to_string(n), fmt17(js.disp_min[n - 1]), fmt17(js.disp_max[n - 1]),
                      fmt17(js.tau_min[n - 1]), fmt17(js.tau_max[n - 1]),
                      fmt17(hausdorff_to_interval(js.displacement_sets[n - 1], js.l_sub_inf,
                                                  js.l_fekete_inf))});
    sink.write_table({"n", "disp_min", "disp_max", "tau_min", "tau_max", "hausdorff"}, rows,
                     json{{"l_sub_inf", fmt17(js.l_sub_inf)},
                          {"l_sub_last", fmt17(js.l_sub_last)},
                          {"l_fekete_inf", fmt17(js.l_fekete_inf)},
                          {"l_last", fmt17(js.l_last)}});
  });

  auto* ar = app.add_subcommand("arithmetic", "search for a non-arithmeticity witness");
  Common ar_c;
  std::string ar_set = "a,b";
  int ar_n = 8;
  ar_c.add_to(ar);
  ar->add_option("--set", ar_set);
  ar->add_option("--n-max", ar_n);
  ar->callback([&] {
    ar_c.resolve(ar);
    merge(ar, "--set", ar_c.cfg, "set", ar_set);
    merge(ar, "--n-max", ar_c.cfg, "n_max", ar_n);
    auto w = non_arithmetic(TreeSpace{ar_c.q}, parse_word_list(ar_set), ar_n);
    auto sink = ar_c.sink(json{{"subcommand", "arithmetic"},
                               {"set", ar_set},
                               {"n_max", ar_n}});
    json res{{"arithmetic", w.arithmetic}};
    if (!w.arithmetic)
      res["witness"] = json{{"n", w.n},
                            {"g1", format_word(w.g1)},
                            {"g2", format_word(w.g2)},
                            {"l1", fmt17(w.l1)},
                            {"l2", fmt17(w.l2)}};
    sink.write_json(res);
  });

  auto* bw = app.add_subcommand("berger-wang", "geometric Berger-Wang gap report");
  Common bw_c;
  std::string bw_set = "a,b";
  int bw_n = 10;
  bw_c.add_to(bw);
  bw->add_option("--set", bw_set);
  bw->add_option("--n-max", bw_n);
  bw->callback([&] {
    bw_c.resolve(bw);
    merge(bw, "--set", bw_c.cfg, "set", bw_set);
    merge(bw, "--n-max", bw_c.cfg, "n_max", bw_n);
    auto r = berger_wang(TreeSpace{bw_c.q}, parse_word_list(bw_set), bw_n);
    auto sink = bw_c.sink(json{{"subcommand", "berger-wang"},
                               {"set", bw_set},
                               {"n_max", bw_n}});
    sink.write_json(json{{"l_inf", fmt17(r.l_inf)},
                         {"l_fekete", fmt17(r.l_fekete)},
                         {"l_last", fmt17(r.l_last)},
                         {"gap", fmt17(r.gap)}});
  });

  // ---- tails ----
  auto* tl = app.add_subcommand("tails", "Monte Carlo tail probes");
  tl->require_subcommand(1);

  auto* tw = tl->add_subcommand("walk-away", "P(d(z_n, x) - d(z_0, x) <= eps n)");
  Common tw_c;
  std::string tw_x = "aaaa", tw_grid = "10,20,30,40";
  double tw_eps = 0.1;
  std::uint64_t tw_samples = 20000;
  tw_c.add_to(tw);
  tw->add_option("--x", tw_x, "reference point (word)");
  tw->add_option("--eps", tw_eps);
  tw->add_option("--n-grid", tw_grid);
  tw->add_option("--samples", tw_samples);
  tw->callback([&] {
    tw_c.resolve(tw);
    merge(tw, "--x", tw_c.cfg, "x", tw_x);
    merge(tw, "--eps", tw_c.cfg, "eps", tw_eps);
    merge(tw, "--n-grid", tw_c.cfg, "n_grid", tw_grid);
    merge(tw, "--samples", tw_c.cfg, "samples", tw_samples);
    tw_c.require_seed();
    WalkRun run;
    run.samples = tw_samples;
    run.seed = tw_c.seed;
    auto res = walking_away_probe(TreeSpace{tw_c.q}, uniform_generator_measure(tw_c.q),
                                  parse_word(tw_x), tw_eps, parse_int_list(tw_grid), run);
    auto sink = tw_c.sink(json{{"subcommand", "tails walk-away"},
                               {"x", tw_x},
                               {"eps", fmt17(tw_eps)},
                               {"n_grid", tw_grid},
                               {"samples", tw_samples}});
    sink.write_table(kCellHeader, cell_rows(res.cells), json{{"fit", fit_json(res.fit)}});
  });

  for (bool punctual : {false, true}) {
    auto* tg = tl->add_subcommand(punctual ? "punctual" : "gromov",
                                  punctual ? "P((z_p, x)_{z0} >= R)"
                                           : "P((z_n, z0)_{z_i} >= R)");
    auto c = std::make_shared<Common>();
    auto n = std::make_shared<int>(punctual ? 400 : 40);
    auto ip = std::make_shared<int>(punctual ? 400 : 20);
    auto x = std::make_shared<std::string>("aaaaaaaa");
    auto grid = std::make_shared<std::string>("0,2,4,6,8");
    auto samples = std::make_shared<std::uint64_t>(20000);
    c->add_to(tg);
    if (!punctual) {
      tg->add_option("--n", *n, "horizon");
      tg->add_option("--i", *ip, "intermediate index");
    } else {
      tg->add_option("--p", *ip, "horizon");
      tg->add_option("--x", *x, "far reference point (word)");
    }
    tg->add_option("--r-grid", *grid);
    tg->add_option("--samples", *samples);
    tg->callback([tg, c, n, ip, x, grid, samples, punctual] {
      c->resolve(tg);
      if (!punctual) {
        merge(tg, "--n", c->cfg, "n", *n);
        merge(tg, "--i", c->cfg, "i", *ip);
      } else {
        merge(tg, "--p", c->cfg, "p", *ip);
        merge(tg, "--x", c->cfg, "x", *x);
      }
      merge(tg, "--r-grid", c->cfg, "r_grid", *grid);
      merge(tg, "--samples", c->cfg, "samples", *samples);
      c->require_seed();
      WalkRun run;
      run.samples = *samples;
      run.seed = c->seed;
      TreeSpace sp{c->q};
      auto res = gromov_deviation_probe(
          sp, uniform_generator_measure(c->q),
          punctual ? GromovProbeMode::Punctual : GromovProbeMode::Intermediate,
          punctual ? 0 : *n, *ip, punctual ? parse_word(*x) : sp.basepoint(),
          parse_double_list(*grid), run);
      json cfg{{"subcommand", punctual ? "tails punctual" : "tails gromov"},
               {"r_grid", *grid},
               {"samples", *samples}};
      if (punctual) {
        cfg["p"] = *ip;
        cfg["x"] = *x;
      } else {
        cfg["n"] = *n;
        cfg["i"] = *ip;
      }
      auto sink = c->sink(cfg);
      sink.write_table(kCellHeader, cell_rows(res.cells),
                       json{{"fit", fit_json(res.fit)},
                            {"mean_product", fmt17(res.extra)}});
    });
  }

  // ---- harmonic ----
  auto* hm = app.add_subcommand("harmonic", "hitting measure of boundary cylinders");
  Common hm_c;
  int hm_depth = 3, hm_fit_max = 0;
  std::uint64_t hm_samples = 100000;
  double hm_drift = 0.5;
  hm_c.add_to(hm);
  hm->add_option("--depth", hm_depth);
  hm->add_option("--samples", hm_samples);
  hm->add_option("--drift-hint", hm_drift);
  hm->add_option("--fit-depths", hm_fit_max, "also fit decay over depths 1..K");
  hm->callback([&] {
    hm_c.resolve(hm);
    merge(hm, "--depth", hm_c.cfg, "depth", hm_depth);
    merge(hm, "--samples", hm_c.cfg, "samples", hm_samples);
    merge(hm, "--drift-hint", hm_c.cfg, "drift_hint", hm_drift);
    merge(hm, "--fit-depths", hm_c.cfg, "fit_depths", hm_fit_max);
    hm_c.require_seed();
    TreeSpace sp{hm_c.q};
    auto mu = uniform_generator_measure(hm_c.q);
    auto res = harmonic_cylinder(sp, mu, hm_depth, hm_samples, hm_c.seed, hm_drift);
    auto sink = hm_c.sink(json{{"subcommand", "harmonic"},
                               {"depth", hm_depth},
                               {"samples", hm_samples},
                               {"drift_hint", fmt17(hm_drift)},
                               {"fit_depths", hm_fit_max}});
    std::vector<std::vector<std::string>> rows;
    for (const auto& cell : res.cells)
      rows.push_back({format_word(cell.prefix), std::to_string(cell.depth),
                      fmt17(cell.estimate), fmt17(cell.interval.lo), fmt17(cell.interval.hi)});
    json summary{{"resimulated", res.resimulated}};
    if (hm_fit_max >= 3) {
      std::vector<std::pair<int, double>> pts;
      for (int k = 1; k <= hm_fit_max; ++k) {
        auto rk = harmonic_cylinder(sp, mu, k, hm_samples, hm_c.seed, hm_drift);
        double mx = 0;
        for (const auto& cell : rk.cells) mx = std::max(mx, cell.estimate);
        pts.emplace_back(k, mx);
      }
      auto fit = power_law_fit(pts);
      summary["fit"] = json{{"D", fmt17(fit.D)},
                            {"C", fmt17(std::exp(fit.logC))},
                            {"residual", fmt17(fit.residual)},
                            {"ok", fit.ok}};
    }
    sink.write_table({"prefix", "depth", "estimate", "ci_lo", "ci_hi"}, rows, summary);
  });

  // ---- compare ----
  auto* cp = app.add_subcommand("compare", "acceptance-style comparisons");
  cp->require_subcommand(1);
  auto* cpt = cp->add_subcommand("tau-vs-dist", "tau-rate curve vs d-rate curve");
  Common cpt_c;
  int cpt_n = 1024;
  double cpt_lo = 0.55, cpt_hi = 0.9, cpt_tol = 2e-2;
  int cpt_cells = 8;
  cpt_c.add_to(cpt);
  cpt->add_option("--n", cpt_n);
  cpt->add_option("--alpha-lo", cpt_lo);
  cpt->add_option("--alpha-hi", cpt_hi);
  cpt->add_option("--cells", cpt_cells);
  cpt->add_option("--tolerance", cpt_tol);
  cpt->callback([&] {
    cpt_c.resolve(cpt);
    merge(cpt, "--n", cpt_c.cfg, "n", cpt_n);
    merge(cpt, "--alpha-lo", cpt_c.cfg, "alpha_lo", cpt_lo);
    merge(cpt, "--alpha-hi", cpt_c.cfg, "alpha_hi", cpt_hi);
    merge(cpt, "--cells", cpt_c.cfg, "cells", cpt_cells);
    merge(cpt, "--tolerance", cpt_c.cfg, "tolerance", cpt_tol);
    auto d = dist_law(cpt_c.q, cpt_n);
    auto t = tau_law_from(d, log_cyclically_reduced_counts(cpt_c.q, cpt_n));
    auto sink = cpt_c.sink(json{{"subcommand", "compare tau-vs-dist"},
                                {"n", cpt_n},
                                {"alpha_lo", fmt17(cpt_lo)},
                                {"alpha_hi", fmt17(cpt_hi)},
                                {"cells", cpt_cells},
                                {"tolerance", fmt17(cpt_tol)}});
    std::vector<std::vector<std::string>> rows;
    double worst = 0;
    for (int i = 0; i <= cpt_cells; ++i) {
      double a = cpt_lo + (cpt_hi - cpt_lo) * i / cpt_cells;
      double rd = -d.log_tail_upper(a * cpt_n) / cpt_n;
      double rt = -t.log_tail_upper(a * cpt_n) / cpt_n;
      double diff = std::fabs(rd - rt);
      worst = std::max(worst, diff);
      rows.push_back({fmt17(a), fmt17(rd), fmt17(rt), fmt17(diff),
                      diff <= cpt_tol ? "pass" : "fail"});
    }
    sink.write_table({"alpha", "d_rate", "tau_rate", "abs_diff", "status"}, rows,
                     json{{"worst_diff", fmt17(worst)},
                          {"tolerance", fmt17(cpt_tol)},
                          {"pass", worst <= cpt_tol}});
    if (worst > cpt_tol) throw ToleranceFailure("tau-vs-dist: sup deviation exceeds tolerance");
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;  // bad flags are config errors
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ToleranceFailure& e) {
    std::cerr << "tolerance failure: " << e.what() << "\n";
    return 3;
  } catch (const std::overflow_error& e) {
    std::cerr << "resource cap: " << e.what() << "\n";
    return 4;
  } catch (const std::runtime_error& e) {
    std::string what = e.what();
    if (what.find("budget") != std::string::npos) {
      std::cerr << "resource cap: " << what << "\n";
      return 4;
    }
    std::cerr << "error: " << what << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
}
