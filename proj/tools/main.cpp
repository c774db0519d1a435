#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>

#include "tqe/calibration.hpp"
#include "tqe/config.hpp"
#include "tqe/eigenbasis.hpp"
#include "tqe/error.hpp"
#include "tqe/io.hpp"
#include "tqe/kernels/api.hpp"
#include "tqe/lattice.hpp"
#include "tqe/parallel.hpp"
#include "tqe/rng.hpp"
#include "tqe/symbols.hpp"
#include "tqe/trigpoly.hpp"
#include "tqe/variance.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

struct RunContext {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed_flag;
  std::optional<int> threads_flag;

  tqe::Config cfg;
  std::uint64_t seed = 0;
  int threads = 1;
  std::string threads_source = "default";
  tqe::RunManifest manifest;

  std::string out_path(const std::string& name) const {
    return (std::filesystem::path(out_dir) / name).string();
  }
};

std::vector<tqe::ParamSpec> with_common(std::vector<tqe::ParamSpec> schema) {
  schema.push_back({"seed", tqe::ParamType::Int, false, "0"});
  schema.push_back({"threads", tqe::ParamType::Int, false, "0"});
  return schema;
}

RunContext make_context(const std::string& command, const std::string& config_path,
                        const std::string& out_dir, std::optional<std::uint64_t> seed_flag,
                        std::optional<int> threads_flag,
                        const std::vector<tqe::ParamSpec>& schema) {
  RunContext ctx;
  ctx.config_path = config_path;
  ctx.out_dir = out_dir;
  ctx.cfg = config_path.empty() ? tqe::Config::parse_text("", with_common(schema))
                                : tqe::Config::parse_file(config_path, with_common(schema));

  ctx.seed = seed_flag ? *seed_flag : static_cast<std::uint64_t>(ctx.cfg.get_int("seed"));

  ctx.threads_source = "default";
  int threads = static_cast<int>(ctx.cfg.get_int("threads"));
  if (threads_flag) {
    threads = *threads_flag;
    ctx.threads_source = "flag";
  }
  if (const char* env = std::getenv("TORUSQE_THREADS")) {
    try {
      threads = std::stoi(env);
    } catch (...) {
      throw tqe::ValidationError("TORUSQE_THREADS is not an integer");
    }
    ctx.threads_source = "env";
  }
  ctx.threads = tqe::resolve_threads(threads);

  std::filesystem::create_directories(out_dir);

  ctx.manifest.version = kVersion;
  ctx.manifest.command = command;
  ctx.manifest.kernel = tqe::kernels::active_ops().name;
  ctx.manifest.seed = ctx.seed;
  ctx.manifest.threads = ctx.threads;
  ctx.manifest.threads_source = ctx.threads_source;
  ctx.manifest.parameters = ctx.cfg.resolved();
  ctx.manifest.parameters["out"] = out_dir;
  if (!config_path.empty()) ctx.manifest.parameters["config"] = config_path;
  ctx.manifest.started = tqe::iso8601_utc_now();
  return ctx;
}

void finish(RunContext& ctx) {
  ctx.manifest.finished = tqe::iso8601_utc_now();
  ctx.manifest.write(ctx.out_path(ctx.manifest.command + "_manifest.json"));
}

tqe::TrigPoly load_symbol(const tqe::Config& cfg, int dim, std::string& id_out) {
  bool has_file = cfg.has("symbol_file");
  bool has_inline = cfg.has("symbol_modes");
  if (has_file == has_inline)
    throw tqe::ValidationError("exactly one of symbol_file / symbol_modes is required");

  tqe::TrigPoly poly;
  if (has_file) {
    std::string path = cfg.get_string("symbol_file");
    poly = tqe::read_symbol_file(path);
    id_out = std::filesystem::path(path).stem().string();
  } else {
    // "p1,...,pd,re,im; p1,...,pd,re,im; ..."
    std::string text = cfg.get_string("symbol_modes");
    std::vector<std::pair<tqe::Freq, tqe::Cplx>> entries;
    std::size_t start = 0;
    while (start < text.size()) {
      std::size_t end = text.find(';', start);
      std::string group = text.substr(start, end == std::string::npos ? end : end - start);
      start = end == std::string::npos ? text.size() : end + 1;
      std::vector<double> nums;
      std::size_t gpos = 0;
      while (gpos < group.size()) {
        std::size_t comma = group.find(',', gpos);
        std::string tok = group.substr(gpos, comma == std::string::npos ? comma : comma - gpos);
        gpos = comma == std::string::npos ? group.size() : comma + 1;
        std::size_t ws = tok.find_first_not_of(" \t");
        if (ws == std::string::npos) continue;
        try {
          nums.push_back(std::stod(tok));
        } catch (...) {
          throw tqe::ValidationError("symbol_modes: cannot parse '" + tok + "'");
        }
      }
      if (nums.empty()) continue;
      if (nums.size() != static_cast<std::size_t>(dim) + 2)
        throw tqe::ValidationError("symbol_modes: each group needs dim+2 numbers");
      tqe::Freq p(static_cast<std::size_t>(dim));
      for (int d = 0; d < dim; ++d) p[static_cast<std::size_t>(d)] = static_cast<std::int32_t>(nums[static_cast<std::size_t>(d)]);
      entries.emplace_back(p, tqe::Cplx(nums[static_cast<std::size_t>(dim)], nums[static_cast<std::size_t>(dim) + 1]));
    }
    poly = tqe::TrigPoly(dim, std::move(entries));
    id_out = "inline";
  }
  if (cfg.has("symbol_id")) id_out = cfg.get_string("symbol_id");
  if (poly.dim() != dim)
    throw tqe::ValidationError("symbol dimension does not match configured dim");
  return poly;
}

// ---------------------------------------------------------------------------
// shells
// ---------------------------------------------------------------------------

void cmd_shells(RunContext& ctx) {
  const tqe::Config& cfg = ctx.cfg;
  int dim = static_cast<int>(cfg.get_int("dim"));
  auto budget = cfg.get_int("enum_budget");

  std::vector<std::int64_t> ns;
  if (cfg.has("n")) ns.push_back(cfg.get_int("n"));
  if (cfg.has("n_list"))
    for (auto n : cfg.get_int_list("n_list")) ns.push_back(n);
  if (cfg.has("n_min") || cfg.has("n_max")) {
    if (!(cfg.has("n_min") && cfg.has("n_max")))
      throw tqe::ValidationError("n_min and n_max must be given together");
    for (std::int64_t n = cfg.get_int("n_min"); n <= cfg.get_int("n_max"); ++n) ns.push_back(n);
  }

  bool window_requested = cfg.has("lambda") || cfg.has("hbar");
  if (ns.empty() && !window_requested)
    throw tqe::ValidationError("shells: give n / n_list / n_min+n_max or a window (lambda or hbar)");

  if (!ns.empty()) {
    tqe::CsvWriter csv(ctx.out_path("shells.csv"), {"d", "n", "multiplicity"});
    for (std::int64_t n : ns) {
      tqe::Shell s = tqe::enumerate_shell(dim, n, budget);
      csv.add_row({static_cast<std::int64_t>(dim), n, static_cast<std::int64_t>(s.size())});
    }
    ctx.manifest.output_digests["shells.csv"] = csv.commit();
  }

  if (window_requested) {
    tqe::SpectralWindow w;
    if (cfg.has("lambda")) {
      w = tqe::window_from_lambda(dim, cfg.get_real("lambda"), budget);
    } else {
      double alpha = cfg.has("alpha") ? cfg.get_real("alpha") : 1.0;
      w = tqe::shells_in_window(dim, cfg.get_real("hbar"), alpha, budget);
    }
    tqe::CsvWriter csv(ctx.out_path("windows.csv"),
                       {"d", "hbar", "alpha", "n_min", "n_max", "shell_count", "n_states"});
    csv.add_row({static_cast<std::int64_t>(dim), w.hbar, w.alpha, w.n_min, w.n_max,
                 static_cast<std::int64_t>(w.shells.size()), w.n_states});
    ctx.manifest.output_digests["windows.csv"] = csv.commit();
  }
}

// ---------------------------------------------------------------------------
// qvariance
// ---------------------------------------------------------------------------

void cmd_qvariance(RunContext& ctx) {
  const tqe::Config& cfg = ctx.cfg;
  int dim = static_cast<int>(cfg.get_int("dim"));
  auto budget = cfg.get_int("enum_budget");
  tqe::BasisKind kind = tqe::basis_kind_from_name(cfg.get_string("basis"));
  auto seeds_per = static_cast<std::size_t>(cfg.get_int("seeds_per_window"));
  if (seeds_per < 1) throw tqe::ValidationError("seeds_per_window must be >= 1");

  std::string symbol_id;
  tqe::TrigPoly a = load_symbol(cfg, dim, symbol_id);

  std::vector<double> lambdas;
  if (cfg.has("lambda_grid")) {
    lambdas = cfg.get_real_list("lambda_grid");
  } else if (cfg.has("hbar_grid")) {
    for (double h : cfg.get_real_list("hbar_grid")) lambdas.push_back(1.0 / (h * h));
  } else {
    throw tqe::ValidationError("qvariance: lambda_grid or hbar_grid is required");
  }
  if (lambdas.empty()) throw tqe::ValidationError("qvariance: empty grid");
  double alpha = cfg.get_real("alpha");

  tqe::CsvWriter csv(ctx.out_path("qvariance.csv"),
                     {"d", "lambda", "hbar", "alpha", "n_states", "shell_count", "basis_kind",
                      "seed", "symbol_id", "V"});
  std::vector<std::pair<double, double>> fit_points;
  auto min_shells = static_cast<std::size_t>(cfg.get_int("fit_min_shells"));

  for (std::size_t li = 0; li < lambdas.size(); ++li) {
    double lambda = lambdas[li];
    tqe::SpectralWindow w =
        alpha == 1.0 ? tqe::window_from_lambda(dim, lambda, budget)
                     : tqe::shells_in_window(dim, 1.0 / std::sqrt(lambda), alpha, budget);
    for (std::size_t si = 0; si < seeds_per; ++si) {
      std::uint64_t row_seed = tqe::derive_seed(ctx.seed, li, si);
      if (w.empty()) {
        // skipped row: no states in the window
        csv.add_row({static_cast<std::int64_t>(dim), lambda, w.hbar, w.alpha,
                     static_cast<std::int64_t>(0), static_cast<std::int64_t>(0),
                     std::string(tqe::basis_kind_name(kind)), row_seed, symbol_id,
                     std::numeric_limits<double>::quiet_NaN()});
        continue;
      }
      tqe::QuantumVarianceResult qv = tqe::quantum_variance(a, w, kind, row_seed, ctx.threads);
      csv.add_row({static_cast<std::int64_t>(dim), lambda, w.hbar, w.alpha, qv.n_states,
                   static_cast<std::int64_t>(qv.shell_count),
                   std::string(tqe::basis_kind_name(kind)), row_seed, symbol_id, qv.v});
      if (qv.shell_count >= min_shells) fit_points.emplace_back(lambda, qv.v);
    }
  }
  ctx.manifest.output_digests["qvariance.csv"] = csv.commit();

  tqe::CsvWriter fit_csv(ctx.out_path("fit.csv"),
                         {"experiment_id", "slope", "intercept", "max_residual"});
  std::string experiment_id =
      std::string("qvariance:") + symbol_id + ":" + tqe::basis_kind_name(kind);
  try {
    tqe::DecayFit fit = tqe::fit_decay(fit_points, cfg.get_bool("fit_drop_zeros"));
    fit_csv.add_row({experiment_id, fit.slope, fit.intercept, fit.max_residual});
  } catch (const tqe::ValidationError&) {
    // degenerate fit (e.g. all-zero variances on a standard basis)
    double nan = std::numeric_limits<double>::quiet_NaN();
    fit_csv.add_row({experiment_id, nan, nan, nan});
  }
  ctx.manifest.output_digests["fit.csv"] = fit_csv.commit();
}

// ---------------------------------------------------------------------------
// birkhoff
// ---------------------------------------------------------------------------

void cmd_birkhoff(RunContext& ctx) {
  const tqe::Config& cfg = ctx.cfg;
  int dim = static_cast<int>(cfg.get_int("dim"));
  std::string symbol_id;
  tqe::TrigPoly a = load_symbol(cfg, dim, symbol_id);
  std::vector<double> horizons = cfg.get_real_list("T_list");
  if (horizons.empty()) throw tqe::ValidationError("birkhoff: empty T_list");
  bool with_mc = cfg.get_bool("mc");
  auto n_samples = static_cast<std::size_t>(cfg.get_int("mc_samples"));
  auto quad_budget = cfg.get_int("quad_budget");

  tqe::CsvWriter csv(ctx.out_path("birkhoff.csv"),
                     {"d", "symbol_id", "T", "V_modes", "V_mc", "mc_stderr", "bound_ratio"});
  for (std::size_t ti = 0; ti < horizons.size(); ++ti) {
    double horizon = horizons[ti];
    tqe::BirkhoffVarianceResult res = tqe::birkhoff_variance_modes(a, horizon, quad_budget);
    double v_mc = std::numeric_limits<double>::quiet_NaN();
    double mc_stderr = std::numeric_limits<double>::quiet_NaN();
    if (with_mc) {
      tqe::McEstimate mc =
          tqe::birkhoff_variance_mc(a, horizon, n_samples, tqe::derive_seed(ctx.seed, ti));
      v_mc = mc.value;
      mc_stderr = mc.std_error;
    }
    csv.add_row({static_cast<std::int64_t>(dim), symbol_id, horizon, res.v_modes, v_mc, mc_stderr,
                 res.bound_ratio});
  }
  ctx.manifest.output_digests["birkhoff.csv"] = csv.commit();
}

// ---------------------------------------------------------------------------
// smallball
// ---------------------------------------------------------------------------

void cmd_smallball(RunContext& ctx) {
  const tqe::Config& cfg = ctx.cfg;
  int dim = static_cast<int>(cfg.get_int("dim"));
  auto budget = cfg.get_int("enum_budget");
  tqe::BasisKind kind = tqe::basis_kind_from_name(cfg.get_string("basis"));
  double nu1 = cfg.get_real("nu1");
  double alpha = cfg.get_real("alpha");

  tqe::SmallBallOptions options;
  options.band_lo = cfg.get_real("band_lo");
  options.band_hi = cfg.get_real("band_hi");
  options.clamp_radius = cfg.get_bool("clamp_radius");
  options.radius_max = cfg.get_real("radius_max");
  options.cutoff = static_cast<std::int32_t>(cfg.get_int("cutoff"));
  options.threads = ctx.threads;

  auto centers = tqe::default_center_grid(dim, static_cast<int>(cfg.get_int("centers_per_axis")));

  std::vector<double> lambdas = cfg.get_real_list("lambda_grid");
  if (lambdas.empty()) throw tqe::ValidationError("smallball: empty lambda_grid");

  tqe::CsvWriter csv(ctx.out_path("smallball.csv"),
                     {"d", "lambda", "nu1", "basis_kind", "seed", "j", "ratio_min", "ratio_max"});
  std::string skipped;
  for (double lambda : lambdas) {
    tqe::SpectralWindow w =
        alpha == 1.0 ? tqe::window_from_lambda(dim, lambda, budget)
                     : tqe::shells_in_window(dim, 1.0 / std::sqrt(lambda), alpha, budget);
    if (w.empty()) {
      if (!skipped.empty()) skipped += ",";
      skipped += tqe::format_real17(lambda);
      continue;
    }
    tqe::SmallBallReport report = tqe::small_ball_report(w, kind, ctx.seed, nu1, centers, options);
    for (const auto& row : report.rows) {
      csv.add_row({static_cast<std::int64_t>(dim), lambda, nu1,
                   std::string(tqe::basis_kind_name(kind)), ctx.seed,
                   static_cast<std::int64_t>(row.j), row.ratio_min, row.ratio_max});
    }
    ctx.manifest.notes["fraction_in_band@" + tqe::format_real17(lambda)] =
        tqe::format_real17(report.fraction_in_band);
    ctx.manifest.notes["radius@" + tqe::format_real17(lambda)] =
        tqe::format_real17(report.radius) + (report.clamped ? " (clamped)" : "");
  }
  if (!skipped.empty()) ctx.manifest.notes["skipped_lambdas"] = skipped;
  ctx.manifest.output_digests["smallball.csv"] = csv.commit();
}

// ---------------------------------------------------------------------------
// l4
// ---------------------------------------------------------------------------

void cmd_l4(RunContext& ctx) {
  const tqe::Config& cfg = ctx.cfg;
  int dim = static_cast<int>(cfg.get_int("dim"));
  auto budget = cfg.get_int("enum_budget");
  tqe::BasisKind kind = tqe::basis_kind_from_name(cfg.get_string("basis"));
  auto seeds = static_cast<std::size_t>(cfg.get_int("seeds"));
  if (seeds < 1) throw tqe::ValidationError("l4: seeds must be >= 1");

  std::vector<std::int64_t> ns;
  if (cfg.has("n_list")) {
    ns = cfg.get_int_list("n_list");
  } else {
    auto top = static_cast<std::size_t>(cfg.get_int("top_count"));
    std::int64_t n_max = cfg.get_int("n_max");
    std::vector<std::pair<std::int64_t, std::int64_t>> mult;  // (-multiplicity, n)
    for (std::int64_t n = 1; n <= n_max; ++n) {
      tqe::Shell s = tqe::enumerate_shell(dim, n, budget);
      if (s.size() > 0) mult.emplace_back(-static_cast<std::int64_t>(s.size()), n);
    }
    std::sort(mult.begin(), mult.end());
    for (std::size_t i = 0; i < std::min(top, mult.size()); ++i) ns.push_back(mult[i].second);
  }
  if (ns.empty()) throw tqe::ValidationError("l4: no shells selected");

  tqe::CsvWriter csv(ctx.out_path("l4.csv"),
                     {"d", "n", "multiplicity", "basis_kind", "seed", "j", "l4"});
  double global_max = 0.0;
  for (std::int64_t n : ns) {
    tqe::Shell shell = tqe::enumerate_shell(dim, n, budget);
    if (shell.size() == 0) continue;
    for (std::size_t si = 0; si < seeds; ++si) {
      std::uint64_t basis_seed = tqe::derive_seed(ctx.seed, static_cast<std::uint64_t>(n), si);
      tqe::ShellBasis basis = tqe::ShellBasis::make(kind, shell, basis_seed);
      for (std::size_t j = 0; j < basis.size(); ++j) {
        double l4 = tqe::l4_norm_4(basis.eigenfunction(j));
        global_max = std::max(global_max, l4);
        csv.add_row({static_cast<std::int64_t>(dim), n, static_cast<std::int64_t>(shell.size()),
                     std::string(tqe::basis_kind_name(kind)), basis_seed,
                     static_cast<std::int64_t>(j), l4});
      }
      if (kind != tqe::BasisKind::HaarRandom) break;  // deterministic bases: one pass
    }
  }
  ctx.manifest.notes["max_l4"] = tqe::format_real17(global_max);
  ctx.manifest.output_digests["l4.csv"] = csv.commit();
}

// ---------------------------------------------------------------------------
// weyl
// ---------------------------------------------------------------------------

void cmd_weyl(RunContext& ctx) {
  const tqe::Config& cfg = ctx.cfg;
  int dim = static_cast<int>(cfg.get_int("dim"));
  std::vector<double> lambdas = cfg.get_real_list("lambda_list");
  if (lambdas.empty()) throw tqe::ValidationError("weyl: empty lambda_list");

  tqe::CsvWriter csv(ctx.out_path("weyl.csv"), {"d", "lambda", "count", "predicted", "ratio"});
  for (double lambda : lambdas) {
    tqe::WeylCount wc = tqe::weyl_count(dim, lambda);
    csv.add_row({static_cast<std::int64_t>(dim), lambda, wc.count, wc.predicted, wc.ratio});
  }
  ctx.manifest.output_digests["weyl.csv"] = csv.commit();
}

// ---------------------------------------------------------------------------
// theorem2
// ---------------------------------------------------------------------------

void cmd_theorem2(RunContext& ctx) {
  const tqe::Config& cfg = ctx.cfg;
  int dim = static_cast<int>(cfg.get_int("dim"));
  auto budget = cfg.get_int("enum_budget");
  tqe::BasisKind kind = tqe::basis_kind_from_name(cfg.get_string("basis"));

  std::vector<double> centers = cfg.get_real_list("center");
  if (centers.size() == 1) centers.assign(static_cast<std::size_t>(dim), centers[0]);
  if (centers.size() != static_cast<std::size_t>(dim))
    throw tqe::ValidationError("theorem2: center needs dim entries");

  tqe::SymbolFamily family = tqe::bump_family(
      centers, cfg.get_real("nu1"), tqe::bump_profile_from_name(cfg.get_string("profile")),
      static_cast<std::int32_t>(cfg.get_int("cutoff")), cfg.get_real("tail_tol"),
      cfg.get_bool("l1_normalize"));

  std::vector<tqe::SpectralWindow> windows;
  for (double lambda : cfg.get_real_list("lambda_grid"))
    windows.push_back(tqe::window_from_lambda(dim, lambda, budget));
  if (windows.empty()) throw tqe::ValidationError("theorem2: empty lambda_grid");

  tqe::Theorem2Report report =
      tqe::theorem2_bound_report(family, windows, cfg.get_real("nu0"), cfg.get_real("s"), kind,
                                 ctx.seed, cfg.get_real("slack"), ctx.threads);

  tqe::CsvWriter csv(ctx.out_path("theorem2.csv"),
                     {"d", "hbar", "lambda", "n_states", "V", "term_l2", "term_sobolev",
                      "term_symbol", "ratio"});
  for (const auto& row : report.rows) {
    csv.add_row({static_cast<std::int64_t>(dim), row.hbar, row.lambda, row.n_states, row.v,
                 row.term_l2, row.term_sobolev, row.term_symbol, row.ratio});
  }
  ctx.manifest.output_digests["theorem2.csv"] = csv.commit();
  ctx.manifest.notes["ratio_bounded"] = report.ratio_bounded ? "true" : "false";
  if (!report.skipped_lambdas.empty()) {
    std::string s;
    for (double l : report.skipped_lambdas) {
      if (!s.empty()) s += ",";
      s += tqe::format_real17(l);
    }
    ctx.manifest.notes["skipped_lambdas"] = s;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"torusqe: quantitative equidistribution experiments for toral eigenfunctions"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed_flag;
  std::optional<int> threads_flag;

  struct Command {
    const char* name;
    const char* help;
    std::vector<tqe::ParamSpec> schema;
    void (*runner)(RunContext&);
  };

  using PT = tqe::ParamType;
  const std::string default_budget = std::to_string(tqe::kDefaultEnumBudget);
  const std::string default_quad = std::to_string(tqe::kDefaultQuadBudget);

  std::vector<Command> commands = {
      {"shells",
       "enumerate lattice shells and window memberships",
       {{"dim", PT::Int, false, "2"},
        {"n", PT::Int, false, ""},
        {"n_list", PT::IntList, false, ""},
        {"n_min", PT::Int, false, ""},
        {"n_max", PT::Int, false, ""},
        {"lambda", PT::Real, false, ""},
        {"hbar", PT::Real, false, ""},
        {"alpha", PT::Real, false, ""},
        {"enum_budget", PT::Int, false, default_budget}},
       cmd_shells},
      {"qvariance",
       "quantum variance over spectral windows with a decay fit",
       {{"dim", PT::Int, false, "2"},
        {"lambda_grid", PT::RealList, false, ""},
        {"hbar_grid", PT::RealList, false, ""},
        {"alpha", PT::Real, false, "1.0"},
        {"basis", PT::String, false, "haar"},
        {"seeds_per_window", PT::Int, false, "1"},
        {"symbol_file", PT::String, false, ""},
        {"symbol_modes", PT::String, false, ""},
        {"symbol_id", PT::String, false, ""},
        {"fit_min_shells", PT::Int, false, "5"},
        {"fit_drop_zeros", PT::Bool, false, "true"},
        {"enum_budget", PT::Int, false, default_budget}},
       cmd_qvariance},
      {"birkhoff",
       "time-averaged variance: exact mode sum and Monte Carlo",
       {{"dim", PT::Int, false, "2"},
        {"T_list", PT::RealList, true, ""},
        {"symbol_file", PT::String, false, ""},
        {"symbol_modes", PT::String, false, ""},
        {"symbol_id", PT::String, false, ""},
        {"mc", PT::Bool, false, "true"},
        {"mc_samples", PT::Int, false, "20000"},
        {"quad_budget", PT::Int, false, default_quad}},
       cmd_birkhoff},
      {"smallball",
       "shrinking-ball mass ratios per eigenfunction",
       {{"dim", PT::Int, false, "2"},
        {"lambda_grid", PT::RealList, true, ""},
        {"alpha", PT::Real, false, "1.0"},
        {"nu1", PT::Real, true, ""},
        {"basis", PT::String, false, "haar"},
        {"band_lo", PT::Real, false, "0.5"},
        {"band_hi", PT::Real, false, "1.5"},
        {"centers_per_axis", PT::Int, false, "10"},
        {"cutoff", PT::Int, false, "1048576"},
        {"clamp_radius", PT::Bool, false, "true"},
        {"radius_max", PT::Real, false, "0.45"},
        {"enum_budget", PT::Int, false, default_budget}},
       cmd_smallball},
      {"l4",
       "L^4 norms of eigenfunctions across shells",
       {{"dim", PT::Int, false, "2"},
        {"n_list", PT::IntList, false, ""},
        {"top_count", PT::Int, false, "30"},
        {"n_max", PT::Int, false, "10000"},
        {"basis", PT::String, false, "haar"},
        {"seeds", PT::Int, false, "1"},
        {"enum_budget", PT::Int, false, default_budget}},
       cmd_l4},
      {"weyl",
       "eigenvalue counts against the Weyl prediction",
       {{"dim", PT::Int, false, "2"}, {"lambda_list", PT::RealList, true, ""}},
       cmd_weyl},
      {"theorem2",
       "three-term variance bound bookkeeping for bump families",
       {{"dim", PT::Int, false, "2"},
        {"lambda_grid", PT::RealList, true, ""},
        {"nu0", PT::Real, true, ""},
        {"nu1", PT::Real, true, ""},
        {"s", PT::Real, true, ""},
        {"basis", PT::String, false, "haar"},
        {"profile", PT::String, false, "smooth"},
        {"center", PT::RealList, false, "0.5"},
        {"cutoff", PT::Int, false, "400"},
        {"tail_tol", PT::Real, false, "1e-6"},
        {"l1_normalize", PT::Bool, false, "false"},
        {"slack", PT::Real, false, "2.0"},
        {"enum_budget", PT::Int, false, default_budget}},
       cmd_theorem2},
  };

  std::map<std::string, const Command*> dispatch;
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("--config", config_path, "experiment config file (key = value lines)");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed_flag, "base random seed (overrides config)");
    sub->add_option("--threads", threads_flag, "worker threads (0 = hardware)");
    dispatch[c.name] = &c;
  }

  CLI11_PARSE(app, argc, argv);

  const Command* cmd = nullptr;
  for (const auto* sub : app.get_subcommands()) {
    auto it = dispatch.find(sub->get_name());
    if (it != dispatch.end()) cmd = it->second;
  }
  if (!cmd) {
    std::cerr << "error: no subcommand selected\n";
    return 2;
  }

  try {
    RunContext ctx =
        make_context(cmd->name, config_path, out_dir, seed_flag, threads_flag, cmd->schema);
    cmd->runner(ctx);
    finish(ctx);
    return 0;
  } catch (const tqe::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const tqe::BudgetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
