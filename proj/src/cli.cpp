#include "sdsieve/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <thread>

#include "sdsieve/entry_points.hpp"
#include "sdsieve/eds.hpp"
#include "sdsieve/multiples.hpp"
#include "sdsieve/sequences.hpp"
#include "sdsieve/sieve_sums.hpp"
#include "sdsieve/table.hpp"
#include "sdsieve/version.hpp"

namespace sdsieve {

namespace {

using nlohmann::json;

struct RunContext {
  std::string out_path;
  std::string format = "csv";
  unsigned threads = 0;
  std::uint64_t rng_seed = 0;
  std::ostream* out = nullptr;
  std::ostream* err = nullptr;
  std::vector<std::string> warnings;
  std::uint64_t rows_ok = 0;
  std::uint64_t rows_failed = 0;
  std::string argv_echo;

  unsigned effective_threads() const {
    if (const char* env = std::getenv("SDS_SIEVE_THREADS")) {
      unsigned v = static_cast<unsigned>(std::strtoul(env, nullptr, 10));
      if (v > 0) return v;
    }
    if (threads > 0) return threads;
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
  }

  void warn(std::string msg) { warnings.push_back(std::move(msg)); }

  void emit_table(const Table& table) {
    std::ofstream file;
    std::ostream* sink = out;
    if (!out_path.empty()) {
      file.open(out_path);
      if (!file) raise(Errc::spec_invalid, "cannot open output file " + out_path);
      sink = &file;
    }
    if (format == "json") {
      json arr = json::array();
      for (const auto& row : table.rows) {
        json obj;
        for (std::size_t i = 0; i < table.header.size() && i < row.size(); ++i)
          obj[table.header[i]] = row[i];
        arr.push_back(obj);
      }
      *sink << arr.dump(2) << '\n';
    } else {
      table.emit_csv(*sink);
    }
  }

  void emit_json(const json& value) {
    std::ofstream file;
    std::ostream* sink = out;
    if (!out_path.empty()) {
      file.open(out_path);
      if (!file) raise(Errc::spec_invalid, "cannot open output file " + out_path);
      sink = &file;
    }
    *sink << value.dump(2) << '\n';
  }

  void report(std::chrono::steady_clock::time_point start) {
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - start)
                  .count();
    *err << "# sdsieve " << kVersion << '\n';
    *err << "# argv:" << argv_echo << '\n';
    *err << "# rng-seed: " << rng_seed << '\n';
    if (rows_ok + rows_failed > 0)
      *err << "# rows-ok: " << rows_ok << " rows-failed: " << rows_failed << '\n';
    if (warnings.empty()) {
      *err << "# warnings: none" << '\n';
    } else {
      for (const auto& w : warnings) *err << "# warning: " << w << '\n';
    }
    *err << "# wall-ms: " << ms << '\n';
  }
};

std::string strategy_name(MoebiusStrategy s) {
  switch (s) {
    case MoebiusStrategy::direct: return "direct";
    case MoebiusStrategy::structured: return "structured";
    case MoebiusStrategy::both: return "both";
    case MoebiusStrategy::auto_select: return "auto";
  }
  return "?";
}

MoebiusStrategy parse_strategy(const std::string& s) {
  if (s == "direct") return MoebiusStrategy::direct;
  if (s == "structured") return MoebiusStrategy::structured;
  if (s == "both") return MoebiusStrategy::both;
  if (s == "auto") return MoebiusStrategy::auto_select;
  raise(Errc::spec_invalid, "unknown strategy '" + s + "'");
}

std::uint64_t parse_amount(const std::string& s) {
  // accepts 1000 or 1e3
  double v = std::stod(s);
  if (v < 0 || v > 9e18) raise(Errc::spec_invalid, "bad amount '" + s + "'");
  return static_cast<std::uint64_t>(v + 0.5);
}

std::shared_ptr<const EdsContext> require_eds(const SequenceSpec& seq) {
  if (seq.kind() != SequenceKind::eds)
    raise(Errc::spec_invalid, "this operation needs an eds:... sequence");
  return seq.eds_shared();
}

void cmd_entry(RunContext& ctx, const std::string& seq_spec, const std::string& d_str,
               std::uint64_t primes_up_to_z) {
  SequenceSpec seq = SequenceSpec::parse(seq_spec);
  Table table;
  table.header = {"p", "outcome", "m_p", "method"};
  if (!d_str.empty()) {
    EntryPoint e = entry_point(seq, Natural(d_str));
    table.add_row({e.d.get_str(), e.outcome_string(), e.m_string(), e.method});
    if (e.unresolved()) ctx.warn("entry point for d = " + d_str + " unresolved");
    ctx.rows_ok = 1;
  } else {
    EntryPointTable epmemo(seq);
    double alpha_hat = 0.0;
    bool any = false;
    for (std::uint64_t p : primes_up_to(primes_up_to_z)) {
      EntryPoint e = epmemo.prime(p);
      table.add_row({std::to_string(p), e.outcome_string(), e.m_string(), e.method});
      ++ctx.rows_ok;
      if (e.unresolved()) ctx.warn("m_" + std::to_string(p) + " unresolved");
      if (e.finite() && p >= 3) {
        double ratio = std::log(e.m.get_d()) / std::log(static_cast<double>(p));
        if (ratio > alpha_hat) {
          alpha_hat = ratio;
          any = true;
        }
      }
    }
    if (any) ctx.warn("alpha-hat (max log m_p / log p): " + fmt_double(alpha_hat));
  }
  ctx.emit_table(table);
}

void cmd_m_sum(RunContext& ctx, const std::string& seq_spec, std::uint64_t z,
               const std::string& strategy) {
  SequenceSpec seq = SequenceSpec::parse(seq_spec);
  EntryPointTable table(seq);
  SquarefreeModulus pi = SquarefreeModulus::primes_below(static_cast<double>(z));
  MoebiusSum ms = moebius_sum(table, pi, parse_strategy(strategy));
  for (std::uint64_t p : ms.dropped_primes)
    ctx.warn("m_" + std::to_string(p) + " infinite: prime dropped from Pi");
  Table t;
  t.header = {"z", "omega", "M", "M_float", "strategy"};
  t.add_row({std::to_string(z), std::to_string(ms.omega), rational_string(ms.value),
             fmt_double(ms.value.get_d()), strategy_name(ms.used)});
  ctx.rows_ok = 1;
  ctx.emit_table(t);
}

void cmd_sieve_count(RunContext& ctx, const std::string& seq_spec, std::uint64_t N, std::uint64_t z,
                     bool koblitz) {
  SequenceSpec seq = SequenceSpec::parse(seq_spec);
  Table t;
  t.header = {"N", "z", "omega", "count", "predicted", "bound", "within_bound"};
  if (koblitz) {
    auto ctx_eds = require_eds(seq);
    KoblitzSieveReport rep = koblitz_sieve_check(*ctx_eds, N, z);
    t.add_row({std::to_string(N), std::to_string(z), std::to_string(rep.profile.dedup.size()),
               std::to_string(rep.count), rational_string(rep.predicted), rep.bound.get_str(),
               rep.within_bound ? "true" : "false"});
    ctx.warn("koblitz delta-hat at z: " + fmt_double(rep.observed_delta));
  } else {
    EntryPointTable table(seq);
    SieveCount sc = count_A(table, N, SquarefreeModulus::primes_below(static_cast<double>(z)));
    t.add_row({std::to_string(N), std::to_string(z), std::to_string(sc.modulus.omega()),
               std::to_string(sc.count), rational_string(sc.predicted), sc.bound.get_str(),
               sc.within_bound ? "true" : "false"});
  }
  ctx.rows_ok = 1;
  ctx.emit_table(t);
}

void cmd_figure1(RunContext& ctx, const std::string& seq_spec, std::uint64_t zmax,
                 const std::string& strategy, bool order_by_md) {
  SequenceSpec seq = SequenceSpec::parse(seq_spec);
  EntryPointTable table(seq);
  std::vector<Figure1Row> rows =
      figure1_sweep(table, zmax, parse_strategy(strategy), order_by_md, ctx.effective_threads());
  Table t;
  t.header = {"z", "M", "M_float", "inv_log_z", "inv_loglog_z", "M_log_z", "strategy", "status"};
  if (order_by_md) t.header.push_back("ordered_sum");
  for (const auto& row : rows) {
    std::vector<std::string> fields;
    fields.push_back(std::to_string(row.z));
    if (row.value) {
      fields.push_back(rational_string(*row.value));
      fields.push_back(fmt_double(row.value->get_d()));
    } else {
      fields.push_back("");
      fields.push_back("");
    }
    fields.push_back(fmt_double(row.inv_log_z));
    fields.push_back(std::isnan(row.inv_loglog_z) ? "" : fmt_double(row.inv_loglog_z));
    fields.push_back(row.value ? fmt_double(row.m_times_log_z) : "");
    fields.push_back(row.strategy);
    fields.push_back(row.error.empty() ? "ok" : row.error);
    if (order_by_md) fields.push_back(row.ordered_sum ? rational_string(*row.ordered_sum) : "");
    t.add_row(std::move(fields));
    if (row.error.empty()) ++ctx.rows_ok;
    else {
      ++ctx.rows_failed;
      ctx.warn("z = " + std::to_string(row.z) + ": " + row.error);
    }
  }
  ctx.emit_table(t);
  if (ctx.rows_ok == 0 && ctx.rows_failed > 0)
    raise(Errc::omega_too_large, "every sweep row failed its resource guard");
}

void cmd_rough(RunContext& ctx, const std::string& seq_spec, std::uint64_t N) {
  SequenceSpec seq = SequenceSpec::parse(seq_spec);
  EntryPointTable table(seq);
  RoughReport r = rough_experiment(table, N);
  Table t;
  t.header = {"N", "z", "count", "n_over_loglog", "n_over_logloglog", "fitted_c"};
  t.add_row({std::to_string(r.N), fmt_double(r.z), std::to_string(r.count),
             fmt_double(r.n_over_loglog), fmt_double(r.n_over_logloglog), fmt_double(r.fitted_c)});
  ctx.rows_ok = 1;
  ctx.emit_table(t);
}

void cmd_prime_density(RunContext& ctx, const std::string& seq_spec, std::uint64_t N) {
  SequenceSpec seq = SequenceSpec::parse(seq_spec);
  PrimeDensityReport rep = prime_term_density(seq, N);
  if (rep.probable_used) ctx.warn("some verdicts are Baillie-PSW probable primes");
  Table t;
  t.header = {"horizon", "prime_terms", "fraction", "truncated"};
  for (const auto& row : rep.rows) {
    t.add_row({std::to_string(row.horizon), std::to_string(row.prime_terms),
               fmt_double(row.fraction), row.truncated ? "true" : "false"});
    ++ctx.rows_ok;
    if (row.truncated) ctx.warn("checkpoint " + std::to_string(row.horizon) + " truncated by bit budget");
  }
  ctx.emit_table(t);
}

void cmd_envelope(RunContext& ctx, const std::string& seq_spec, std::vector<double> zs) {
  SequenceSpec seq = SequenceSpec::parse(seq_spec);
  GrowthEnvelope env = growth_envelope(seq);
  if (env.heuristic) ctx.warn("envelope is heuristic (height-estimate based)");
  if (zs.empty()) zs = {10, 100, 1000, 1e6, 1e9};
  Table t;
  t.header = {"z", "f", "g_of_f", "n", "x_n", "x_n_le_z"};
  for (double z : zs) {
    double f = env.f(z);
    double gf = env.g(f);
    std::vector<std::string> fields{fmt_double(z), fmt_double(f), fmt_double(gf)};
    auto n = static_cast<std::int64_t>(std::floor(f));
    if (n >= 1) {
      try {
        Natural xn = term(seq, static_cast<std::uint64_t>(n));
        bool ok = Rational(xn) <= Rational(z);
        fields.push_back(std::to_string(n));
        fields.push_back(xn.get_str());
        fields.push_back(ok ? "true" : "false");
      } catch (const Error& e) {
        if (!e.resource_guard()) throw;
        fields.push_back(std::to_string(n));
        fields.push_back("");
        fields.push_back("");
      }
    } else {
      fields.push_back("0");
      fields.push_back("");
      fields.push_back("");
    }
    t.add_row(std::move(fields));
    ++ctx.rows_ok;
  }
  ctx.emit_table(t);
}

void cmd_eds_terms(RunContext& ctx, const std::string& curve_spec, std::uint64_t nmax) {
  SequenceSpec seq = SequenceSpec::parse(curve_spec);
  auto eds = require_eds(seq);
  Table t;
  t.header = {"n", "a", "b"};
  for (std::uint64_t n = 1; n <= nmax; ++n) {
    EdsTerm term = eds->term(n);
    t.add_row({std::to_string(n), term.a.get_str(), term.b.get_str()});
    ++ctx.rows_ok;
  }
  ctx.emit_table(t);
}

void cmd_eds_orders(RunContext& ctx, const std::string& curve_spec, std::uint64_t pmax) {
  SequenceSpec seq = SequenceSpec::parse(curve_spec);
  auto eds = require_eds(seq);
  Table t;
  t.header = {"p", "good", "curve_order", "m_p"};
  for (std::uint64_t p : primes_up_to(pmax)) {
    bool good = eds->curve().good_reduction(p);
    std::string order_str, mp_str;
    if (good) {
      order_str = std::to_string(curve_order(eds->curve(), p));
      mp_str = std::to_string(point_order(*eds, p));
    } else {
      EntryPoint e = entry_point_prime(seq, p);
      mp_str = e.m_string();
      ctx.warn("p = " + std::to_string(p) + " has bad reduction; scan bound 24p");
    }
    t.add_row({std::to_string(p), good ? "true" : "false", order_str, mp_str});
    ++ctx.rows_ok;
  }
  ctx.emit_table(t);
}

void cmd_eds_koblitz(RunContext& ctx, const std::string& curve_spec, std::uint64_t z,
                     std::uint64_t N) {
  SequenceSpec seq = SequenceSpec::parse(curve_spec);
  auto eds = require_eds(seq);
  KoblitzProfile profile = koblitz_profile(*eds, z);
  Table t;
  t.header = {"p", "m_p", "kept"};
  for (std::uint64_t p : profile.primes) {
    std::uint64_t m = curve_order(eds->curve(), p);
    bool kept = std::any_of(profile.dedup.begin(), profile.dedup.end(),
                            [&](const auto& pm) { return pm.first == p; });
    t.add_row({std::to_string(p), std::to_string(m), kept ? "true" : "false"});
    ++ctx.rows_ok;
  }
  ctx.warn("h(z) = " + rational_string(profile.h) + " ~ " + fmt_double(profile.delta_hat));
  ctx.warn("non-CM hypothesis is declared by the caller, not machine-checked");
  if (N > 0) {
    KoblitzSieveReport rep = koblitz_sieve_check(*eds, N, z);
    ctx.warn("sieve check: count " + std::to_string(rep.count) + " predicted " +
             rational_string(rep.predicted) + " bound " + rep.bound.get_str() +
             (rep.within_bound ? " (within)" : " (OUTSIDE)"));
  }
  ctx.emit_table(t);
}

void cmd_multiples_verify_mpl(RunContext& ctx, std::vector<std::uint64_t> seed, std::uint64_t N) {
  MplVerdict v = verify_prop_mpl(FiniteSeedSet::of(std::move(seed)), N);
  json out;
  out["verdict"] = v.equal ? "pass" : "fail";
  out["horizons"] = json::array();
  out["horizons"].push_back({{"N", v.N}, {"density", v.lhs_density}});
  out["witnesses"] = json::array();
  if (v.first_mismatch) out["witnesses"].push_back(*v.first_mismatch);
  ctx.rows_ok = 1;
  ctx.emit_json(out);
}

void cmd_multiples_theorem_a1(RunContext& ctx, const std::string& b_spec, unsigned m,
                              const std::vector<std::string>& horizon_strs) {
  WindowFamily family;
  std::optional<SequenceSpec> overlay_seq;
  if (b_spec == "pow2") family = family_pow2();
  else if (b_spec == "odds") family = family_odds();
  else if (b_spec == "one") family = family_unit();
  else if (b_spec.rfind("unit:", 0) == 0) {
    SequenceSpec seq = SequenceSpec::parse(b_spec.substr(5));
    overlay_seq = seq;
    family = WindowFamily{"unit:" + seq.name(), [seq](std::uint64_t N) {
                            UnitIndexSet s = unit_index_set(seq, N);
                            MultiplesWindow w(N, "unit:" + seq.name());
                            for (std::uint64_t v : s.members) w.insert(v);
                            return w;
                          }};
  } else {
    raise(Errc::spec_invalid, "unknown B spec '" + b_spec + "' (pow2|odds|one|unit:<seq>)");
  }
  std::vector<std::uint64_t> horizons;
  for (const auto& s : horizon_strs) horizons.push_back(parse_amount(s));
  TheoremA1Report rep = theorem_mth_experiment(family, m, horizons);
  json out;
  out["verdict"] = rep.monotone_nonincreasing ? "nonincreasing" : "not-monotone";
  out["strictly_decreasing"] = rep.strictly_decreasing;
  out["horizons"] = json::array();
  for (const auto& row : rep.rows) {
    out["horizons"].push_back({{"N", row.N}, {"count", row.count}, {"density", row.density}});
    ++ctx.rows_ok;
  }
  out["witnesses"] = json::array();
  if (overlay_seq) {
    // prime-term density of the sequence itself, for comparison against the
    // B * P_1 envelope; primality testing caps the overlay horizon
    out["prime_density_overlay"] = json::array();
    for (std::uint64_t N : horizons) {
      std::uint64_t capped = std::min<std::uint64_t>(N, 1000);
      PrimeDensityReport pd = prime_term_density(*overlay_seq, capped);
      double fraction = pd.rows.empty() ? 0.0 : pd.rows.back().fraction;
      out["prime_density_overlay"].push_back(
          {{"N", N}, {"overlay_N", capped}, {"fraction", fraction}});
    }
    ctx.warn("prime-density overlay horizon capped at 1000 by primality-testing cost");
  }
  ctx.emit_json(out);
}

}  // namespace

namespace {

// Line-oriented key=value config file. Flags given on the command line win;
// everything else is appended as --key value.
std::vector<std::string> apply_config_file(std::vector<std::string> args, std::ostream& err) {
  std::string path;
  for (std::size_t i = 0; i + 1 < args.size(); ++i) {
    if (args[i] == "--config") {
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
                 args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
      break;
    }
  }
  if (path.empty()) return args;
  std::ifstream in(path);
  if (!in) {
    err << "error: cannot read config file " << path << '\n';
    raise(Errc::spec_invalid, "config file unreadable");
  }
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    std::string flag = "--" + key;
    if (std::find(args.begin(), args.end(), flag) != args.end()) continue;
    args.push_back(flag);
    args.push_back(value);
  }
  return args;
}

}  // namespace

int run_cli(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  auto start = std::chrono::steady_clock::now();
  RunContext ctx;
  ctx.out = &out;
  ctx.err = &err;
  for (const auto& a : raw_args) ctx.argv_echo += " " + a;

  std::vector<std::string> args;
  try {
    args = apply_config_file(raw_args, err);
  } catch (const Error&) {
    return 2;
  }

  CLI::App app{"sieve-theory experiments on strong divisibility sequences"};
  app.fallthrough(true);
  app.require_subcommand(1);
  app.add_option("--out", ctx.out_path, "write data rows to this file instead of stdout");
  app.add_option("--format", ctx.format, "data output format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--threads", ctx.threads,
                 "worker threads for sweeps (SDS_SIEVE_THREADS overrides)");
  app.add_option("--rng-seed", ctx.rng_seed, "deterministic seed echoed into the run report");

  std::string seq_spec, d_str, strategy = "auto", curve_spec, b_spec = "pow2";
  std::uint64_t z = 0, zmax = 0, N = 0, nmax = 10, pmax = 100, primes_z = 0;
  bool koblitz = false, order_by_md = false;
  unsigned m_param = 1;
  std::vector<double> env_zs;
  std::vector<std::uint64_t> seed_values;
  std::vector<std::string> horizon_strs;

  auto* entry_cmd = app.add_subcommand("entry", "entry points m_d / m_p");
  entry_cmd->add_option("--seq", seq_spec, "sequence spec")->required();
  auto* dopt = entry_cmd->add_option("--d", d_str, "single squarefree target d");
  entry_cmd->add_option("--primes-up-to", primes_z, "emit m_p for all primes p <= z")
      ->excludes(dopt);

  auto* msum_cmd = app.add_subcommand("m-sum", "Moebius-weighted sum M(Pi_z)");
  msum_cmd->add_option("--seq", seq_spec, "sequence spec")->required();
  msum_cmd->add_option("--z", z, "Pi = product of primes <= z")->required();
  msum_cmd->add_option("--strategy", strategy, "direct|structured|both|auto");

  auto* sieve_cmd = app.add_subcommand("sieve-count", "exact #A(N,z) vs N*M(Pi)");
  sieve_cmd->add_option("--seq", seq_spec, "sequence spec")->required();
  sieve_cmd->add_option("--N", N, "index horizon")->required();
  sieve_cmd->add_option("--z", z, "prime bound")->required();
  sieve_cmd->add_flag("--koblitz", koblitz, "restrict to primes with #E(F_p) prime (eds only)");

  auto* fig_cmd = app.add_subcommand("figure1", "M(Pi_z) sweep over primes z <= zmax");
  fig_cmd->add_option("--seq", seq_spec, "sequence spec")->required();
  fig_cmd->add_option("--zmax", zmax, "largest prime z")->required();
  fig_cmd->add_option("--strategy", strategy, "direct|structured|both|auto");
  fig_cmd->add_flag("--order-by-md", order_by_md,
                    "also sum mu(d)/m_d over all d with m_d <= z (experimental)");

  auto* rough_cmd = app.add_subcommand("rough", "z-rough count at z = (log N)(log log N)/2");
  rough_cmd->add_option("--seq", seq_spec, "sequence spec")->required();
  rough_cmd->add_option("--N", N, "index horizon")->required();

  auto* pd_cmd = app.add_subcommand("prime-density", "fraction of prime terms at checkpoints");
  pd_cmd->add_option("--seq", seq_spec, "sequence spec")->required();
  pd_cmd->add_option("--N", N, "index horizon")->required();

  auto* env_cmd = app.add_subcommand("envelope", "growth envelope f and its inverse");
  env_cmd->add_option("--seq", seq_spec, "sequence spec")->required();
  env_cmd->add_option("--z", env_zs, "evaluation points");

  auto* eds_cmd = app.add_subcommand("eds", "elliptic divisibility sequence tools");
  eds_cmd->require_subcommand(1);
  auto* eds_terms_cmd = eds_cmd->add_subcommand("terms", "exact a_n, b_n");
  eds_terms_cmd->add_option("--curve", curve_spec, "eds:a1,a2,a3,a4,a6:px,py")->required();
  eds_terms_cmd->add_option("--nmax", nmax, "largest index");
  auto* eds_orders_cmd = eds_cmd->add_subcommand("orders", "#E(F_p) and point orders");
  eds_orders_cmd->add_option("--curve", curve_spec, "eds:a1,a2,a3,a4,a6:px,py")->required();
  eds_orders_cmd->add_option("--pmax", pmax, "largest prime");
  auto* eds_kob_cmd = eds_cmd->add_subcommand("koblitz", "Koblitz prime profile h(z)");
  eds_kob_cmd->add_option("--curve", curve_spec, "eds:a1,a2,a3,a4,a6:px,py")->required();
  eds_kob_cmd->add_option("--z", z, "prime bound")->required();
  eds_kob_cmd->add_option("--N", N, "also run the residue sieve check to N");

  auto* mult_cmd = app.add_subcommand("multiples", "divisor-closed set experiments");
  mult_cmd->require_subcommand(1);
  auto* mpl_cmd = mult_cmd->add_subcommand("verify-mpl", "complement(M(A*)) == complement(M(A))*P_1");
  mpl_cmd->add_option("--seed", seed_values, "seed set, e.g. 2,3,5")->required()->delimiter(',');
  mpl_cmd->add_option("--N", N, "window horizon")->required();
  auto* a1_cmd = mult_cmd->add_subcommand("theorem-a1", "density of B*P_m across horizons");
  a1_cmd->add_option("--B", b_spec, "pow2|odds|one|unit:<seq>");
  a1_cmd->add_option("--m", m_param, "prime-factor budget m");
  a1_cmd->add_option("--horizons", horizon_strs, "e.g. 1e3,1e4,1e5")->required()->delimiter(',');

  std::vector<const char*> argv;
  argv.push_back("sdsieve");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    err << app.help();
    return 2;
  }

  try {
    if (entry_cmd->parsed()) {
      if (d_str.empty() && primes_z == 0)
        raise(Errc::spec_invalid, "entry needs --d or --primes-up-to");
      cmd_entry(ctx, seq_spec, d_str, primes_z);
    } else if (msum_cmd->parsed()) {
      cmd_m_sum(ctx, seq_spec, z, strategy);
    } else if (sieve_cmd->parsed()) {
      cmd_sieve_count(ctx, seq_spec, N, z, koblitz);
    } else if (fig_cmd->parsed()) {
      cmd_figure1(ctx, seq_spec, zmax, strategy, order_by_md);
    } else if (rough_cmd->parsed()) {
      cmd_rough(ctx, seq_spec, N);
    } else if (pd_cmd->parsed()) {
      cmd_prime_density(ctx, seq_spec, N);
    } else if (env_cmd->parsed()) {
      cmd_envelope(ctx, seq_spec, env_zs);
    } else if (eds_cmd->parsed()) {
      if (eds_terms_cmd->parsed()) cmd_eds_terms(ctx, curve_spec, nmax);
      else if (eds_orders_cmd->parsed()) cmd_eds_orders(ctx, curve_spec, pmax);
      else cmd_eds_koblitz(ctx, curve_spec, z, N);
    } else if (mult_cmd->parsed()) {
      if (mpl_cmd->parsed()) cmd_multiples_verify_mpl(ctx, seed_values, N);
      else cmd_multiples_theorem_a1(ctx, b_spec, m_param, horizon_strs);
    }
  } catch (const Error& e) {
    ctx.warn(std::string("failed: ") + e.what());
    ctx.report(start);
    return e.resource_guard() ? 3 : 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 1;
  }

  ctx.report(start);
  return 0;
}

}  // namespace sdsieve
