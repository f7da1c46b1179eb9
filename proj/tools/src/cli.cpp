#include "cli.hpp"

#include <CLI11.hpp>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

#include "tdpair/appendix.hpp"
#include "tdpair/params.hpp"
#include "tdpair/report.hpp"
#include "tdpair/tdsystem.hpp"
#include "tdpair/zigzag.hpp"

namespace tdpair::cli {
namespace {

struct Options {
  std::size_t d = 0;
  std::size_t trials = 0;
  std::string field = "fp";
  std::uint64_t prime = kDefaultPrime;
  std::uint64_t seed = 0;
  std::string input;
  std::string assets;
  std::string output;
  std::size_t exclude_r = 0;
  std::size_t exclude_s = 0;
  std::size_t max_len = 0;
  bool feasible = false;
  std::size_t jobs = 1;

  // Set after parsing from the option counts.
  bool has_d = false;
  bool has_trials = false;
  bool has_exclude_r = false;
  bool has_exclude_s = false;
  bool has_max_len = false;
};

struct UsageError : Error {
  using Error::Error;
};

std::string pad2(std::size_t n) { return (n < 10 ? "0" : "") + std::to_string(n); }

FieldSpec field_spec(const Options& o) {
  FieldSpec spec = o.field == "qq" ? FieldSpec::rationals(o.seed)
                                   : FieldSpec::prime_field(o.seed, o.prime);
  spec.validate();
  return spec;
}

std::filesystem::path asset_dir(const Options& o) {
  return o.assets.empty() ? default_asset_dir() : std::filesystem::path(o.assets);
}

std::vector<std::size_t> degrees(const Options& o, std::size_t from = 0) {
  if (o.has_d) {
    if (o.d > kMaxAppendixD) {
      throw UsageError("--d must be at most " + std::to_string(kMaxAppendixD));
    }
    return {o.d};
  }
  std::vector<std::size_t> all;
  for (std::size_t d = from; d <= kMaxAppendixD; ++d) all.push_back(d);
  return all;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Runs fn(trial) for every trial on up to `jobs` threads.  Results are
// stored by trial index so the output does not depend on `jobs`.
std::vector<Check> run_trials(std::size_t trials, std::size_t jobs,
                              const std::function<std::vector<Check>(std::size_t)>& fn) {
  std::vector<std::vector<Check>> results(trials);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t t = next.fetch_add(1);
      if (t >= trials) return;
      try {
        results[t] = fn(t);
      } catch (const std::exception& e) {
        results[t] = {{"trial" + pad2(t) + "/error", false, e.what()}};
      }
    }
  };
  const std::size_t n = std::max<std::size_t>(1, std::min(jobs, trials));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  std::vector<Check> out;
  for (auto& r : results) out.insert(out.end(), r.begin(), r.end());
  return out;
}

std::vector<Check> prefixed(const std::string& prefix, std::vector<Check> checks) {
  for (auto& c : checks) c.id = prefix + c.id;
  return checks;
}

template <class F>
std::string join(const F& field, const std::vector<typename F::Scalar>& xs) {
  std::string out = "(";
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + field.to_string(xs[i]);
  return out + ")";
}

template <class F>
std::vector<std::string> describe_context(const SpecializationContext<F>& ctx) {
  return {"theta=" + join(ctx.field, ctx.theta), "theta_star=" + join(ctx.field, ctx.theta_star),
          "y=" + join(ctx.field, ctx.y)};
}

// One sampled trial on the module for table.d; the context is drawn exactly
// as in appendix_trial, so trial numbers replay across commands.
template <class F, class Body>
std::vector<Check> sampled_trial(const ModuleTable& table, const F& field, std::uint64_t seed,
                                 std::size_t trial, Body body) {
  CheckList out("trial" + pad2(trial) + "/");
  Sampler<F> sampler(field, derive_seed(seed, trial));
  const auto ctx = random_admissible_context(table.d, sampler);
  try {
    const auto real = realize(table, ctx);
    body(real, out);
  } catch (const RealizationFailure& e) {
    out.add(e.invariant(), false, e.what());
  } catch (const Error& e) {
    out.add("realize", false, e.what());
  }
  return out.take();
}

// Shared driver for the per-module trial commands.
template <class Body>
VerificationReport module_command(const std::string& name, const Options& o,
                                  std::size_t default_trials, std::size_t min_d, Body body) {
  const FieldSpec spec = field_spec(o);
  const std::size_t trials = o.has_trials ? o.trials : default_trials;
  const auto dir = asset_dir(o);
  std::vector<Check> checks;
  std::map<std::string, std::vector<std::string>> data;
  for (std::size_t d : degrees(o, min_d)) {
    const ModuleTable table = load_table(dir, d);
    with_field(spec, [&](auto field) {
      std::vector<std::map<std::string, std::vector<std::string>>> extra(trials);
      auto more = run_trials(trials, o.jobs, [&](std::size_t t) {
        return body(table, field, spec.seed, t, extra[t]);
      });
      auto p = prefixed("d" + std::to_string(d) + "/", std::move(more));
      checks.insert(checks.end(), p.begin(), p.end());
      for (std::size_t t = 0; t < trials; ++t)
        for (auto& [k, v] : extra[t]) data["d" + std::to_string(d) + "/trial" + pad2(t) + "/" + k] = v;
    });
  }
  auto rep = make_report(name, spec, asset_version_string(), trials, std::move(checks));
  rep.data = std::move(data);
  return rep;
}

using Extra = std::map<std::string, std::vector<std::string>>;

VerificationReport cmd_verify_appendix(const Options& o) {
  return module_command("verify-appendix", o, 20, 0,
                        [](const ModuleTable& table, const auto& field, std::uint64_t seed,
                           std::size_t t, Extra&) {
                          return appendix_trial(table, field, seed, t, false);
                        });
}

VerificationReport cmd_mu_certificate(const Options& o) {
  return module_command("mu-certificate", o, 20, 0,
                        [](const ModuleTable& table, const auto& field, std::uint64_t seed,
                           std::size_t t, Extra&) {
                          return sampled_trial(table, field, seed, t, [](const auto& real, CheckList& out) {
                            out.append(mu_certificate(real));
                          });
                        });
}

VerificationReport cmd_shape(const Options& o) {
  return module_command("shape", o, 20, 0,
                        [](const ModuleTable& table, const auto& field, std::uint64_t seed,
                           std::size_t t, Extra&) {
                          return sampled_trial(table, field, seed, t, [](const auto& real, CheckList& out) {
                            out.append(shape_check(real).checks);
                            out.append(triple_product_check(real));
                          });
                        });
}

VerificationReport cmd_zz_rank(const Options& o) {
  return module_command(
      "zz rank", o, 20, 0,
      [](const ModuleTable& table, const auto& field, std::uint64_t seed, std::size_t t,
         Extra& extra) {
        return sampled_trial(table, field, seed, t, [&](const auto& real, CheckList& out) {
          const RankResult r = feasible_rank_test(real);
          out.append(r.checks);
          if (r.rank != r.words || r.words != real.basis.size()) {
            extra["replay"] = describe_context(real.context);
            extra["replay"].push_back("trial_seed=" + std::to_string(derive_seed(seed, t)));
          }
        });
      });
}

VerificationReport cmd_check_params(const Options& o) {
  if (o.input.empty()) throw UsageError("check-params requires --input");
  const FieldSpec spec = field_spec(o);
  const auto qq = parse_parameter_array_json(read_file(o.input));
  CheckList checks;
  Extra data;
  with_field(spec, [&](auto field) {
    const auto pa = map_parameter_array(field, qq);
    const ValidationResult v = validate_parameter_array(field, pa);
    for (std::string_view c :
         {condition::kThetaDistinct, condition::kThetaStarDistinct, condition::kZetaZeroIsOne,
          condition::kZetaTopNonzero, condition::kSumNonzero, condition::kBetaRecurrent}) {
      std::string detail;
      for (const auto& f : v.failures) {
        if (f.condition == c) detail += (detail.empty() ? "" : "; ") + f.detail;
      }
      checks.add(std::string(c), !v.has_failure(c), detail);
    }
    data["sum"] = {v.sum};
    if (v.beta) data["beta"] = {*v.beta};
    if (!v.notes.empty()) data["notes"] = v.notes;
  });
  auto rep = make_report("check-params", spec, asset_version_string(), 1, checks.take());
  rep.data = std::move(data);
  return rep;
}

VerificationReport cmd_zz_enumerate(const Options& o) {
  if (!o.has_d) throw UsageError("zz enumerate requires --d");
  CheckList checks;
  Extra data;
  std::vector<std::string> words;
  if (o.feasible) {
    if (o.has_exclude_r || o.has_exclude_s || o.has_max_len) {
      throw UsageError("--feasible cannot be combined with --exclude-r, --exclude-s or --max-len");
    }
    const auto feasible = enumerate_feasible(o.d);
    bool closed = true;
    for (const auto& w : feasible) {
      words.push_back(w.to_string());
      closed = closed && is_zz(w) && w.has_distinct_indices() &&
               w.letters.back() == Letter{true, 0};
    }
    const std::size_t expected = std::size_t{1} << o.d;
    checks.add("feasible/count", feasible.size() == expected,
               std::to_string(feasible.size()) + " words, expected " + std::to_string(expected));
    checks.add("feasible/predicates", closed, "every word is zigzag with distinct indices, ending in e*0");
  } else {
    ZzOptions opts;
    if (o.has_exclude_r) opts.exclude_r = o.exclude_r;
    if (o.has_exclude_s) opts.exclude_s = o.exclude_s;
    if (o.has_max_len) opts.max_len = o.max_len;
    const ZzEnumeration z = enumerate_zz(o.d, opts);
    bool valid = true;
    for (const auto& w : z.words) {
      words.push_back(w.to_string());
      for (const Letter& l : w.letters) {
        valid = valid && l.index <= o.d && !(l.starred ? opts.exclude_s == l.index
                                                       : opts.exclude_r == l.index);
      }
      valid = valid && w.is_alternating() && is_zz(w);
    }
    checks.add("zz/predicates", valid, "every word is zigzag over the allowed letters");
    for (std::size_t n : z.count_by_length) data["count_by_length"].push_back(std::to_string(n));
    data["max_len"] = {std::to_string(z.max_len)};
  }
  data["words"] = std::move(words);
  auto rep = make_report("zz enumerate", FieldSpec::prime_field(o.seed), asset_version_string(),
                         1, checks.take());
  rep.data = std::move(data);
  return rep;
}

VerificationReport cmd_convex(const Options& o) {
  if (!o.has_d) throw UsageError("convex requires --d");
  CheckList checks;
  Extra data;
  for (std::size_t r = 1; r <= o.d; ++r) {
    bool ok = true;
    auto& list = data["r=" + std::to_string(r)];
    for (const auto& ks : enumerate_convex_spanning(r)) {
      std::vector<long> full{static_cast<long>(r)};
      std::string text = "(";
      for (std::size_t i = 0; i < ks.size(); ++i) {
        text += (i ? "," : "") + std::to_string(ks[i]);
        full.push_back(static_cast<long>(ks[i]));
      }
      full.push_back(0);
      list.push_back(text + ")");
      for (std::size_t i = 1; i < full.size(); ++i) ok = ok && full[i] < full[i - 1];
      ok = ok && is_convex(full);
    }
    checks.add("convex/r=" + std::to_string(r), ok,
               std::to_string(list.size()) + " sequences, all strictly decreasing and convex");
  }
  auto rep = make_report("convex", FieldSpec::prime_field(o.seed), asset_version_string(), 1,
                         checks.take());
  rep.data = std::move(data);
  return rep;
}

VerificationReport cmd_tds_roundtrip(const Options& o) {
  const FieldSpec spec = field_spec(o);
  const auto dir = asset_dir(o);
  std::vector<Check> checks;
  std::size_t trials = 1;
  if (!o.input.empty()) {
    if (o.has_d || o.has_trials) throw UsageError("--input cannot be combined with --d or --trials");
    const auto qq = parse_parameter_array_json(read_file(o.input));
    if (qq.d > kMaxAppendixD) throw UsageError("parameter arrays are limited to d <= 5");
    const ModuleTable table = load_table(dir, qq.d);
    with_field(spec, [&](auto field) {
      const auto pa = map_parameter_array(field, qq);
      try {
        checks = roundtrip(field, pa, table);
      } catch (const InadmissibleContext& e) {
        checks = {{"construct", false, e.what()}};
      }
    });
  } else {
    trials = o.has_trials ? o.trials : 10;
    for (std::size_t d : degrees(o)) {
      const ModuleTable table = load_table(dir, d);
      with_field(spec, [&](auto field) {
        using F = std::decay_t<decltype(field)>;
        auto more = run_trials(trials, o.jobs, [&](std::size_t t) {
          Sampler<F> sampler(field, derive_seed(spec.seed, t));
          const auto pa = random_valid_parameter_array(d, sampler);
          return prefixed("trial" + pad2(t) + "/", roundtrip(field, pa, table));
        });
        auto p = prefixed("d" + std::to_string(d) + "/", std::move(more));
        checks.insert(checks.end(), p.begin(), p.end());
      });
    }
  }
  return make_report("tds roundtrip", spec, asset_version_string(), trials, std::move(checks));
}

void add_field_options(CLI::App* app, Options& o) {
  app->add_option("--field", o.field, "Field: qq (rationals) or fp (prime field)")
      ->check(CLI::IsMember({"qq", "fp"}))
      ->capture_default_str();
  app->add_option("--prime", o.prime, "Prime for --field fp")->capture_default_str();
  app->add_option("--seed", o.seed, "Base seed")->capture_default_str();
}

void add_trial_options(CLI::App* app, Options& o, const std::string& trials_default) {
  app->add_option("--d", o.d, "Module parameter d (0..5); all when omitted");
  app->add_option("--trials", o.trials, "Random trials per d (default " + trials_default + ")");
  app->add_option("--jobs", o.jobs, "Worker threads")->capture_default_str()
      ->check(CLI::PositiveNumber);
  app->add_option("--assets", o.assets, "Directory of module tables");
  add_field_options(app, o);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Exact verification of tridiagonal-pair algebra computations", "tdpair"};
  app.require_subcommand(1);
  app.add_option("--output", o.output, "Write the JSON report here instead of stdout");

  auto* check_params = app.add_subcommand("check-params", "Validate a parameter array");
  check_params->add_option("--input", o.input, "Parameter array JSON")->required();
  add_field_options(check_params, o);

  auto* verify = app.add_subcommand("verify-appendix", "Check the algebra relations on the module tables");
  add_trial_options(verify, o, "20");
  auto* mu = app.add_subcommand("mu-certificate", "Check the certificate chains on the module tables");
  add_trial_options(mu, o, "20");
  auto* shape = app.add_subcommand("shape", "Check shapes and triple products on the module tables");
  add_trial_options(shape, o, "20");

  auto* zz = app.add_subcommand("zz", "Zigzag words");
  zz->require_subcommand(1);
  auto* zz_enum = zz->add_subcommand("enumerate", "List zigzag words");
  zz_enum->add_option("--d", o.d, "Largest index")->required();
  zz_enum->add_option("--exclude-r", o.exclude_r, "Omit e_r");
  zz_enum->add_option("--exclude-s", o.exclude_s, "Omit e*_s");
  zz_enum->add_option("--max-len", o.max_len, "Length cap (default 2d+2)");
  zz_enum->add_flag("--feasible", o.feasible, "List the feasible words instead");
  auto* zz_rank = zz->add_subcommand("rank", "Rank of feasible-word images of phi");
  add_trial_options(zz_rank, o, "20");

  auto* convex = app.add_subcommand("convex", "Convex spanning sequences for r = 1..d");
  convex->add_option("--d", o.d, "Largest r")->required();

  auto* tds = app.add_subcommand("tds", "Tridiagonal systems");
  tds->require_subcommand(1);
  auto* tds_rt = tds->add_subcommand("roundtrip", "Construct, extract and compare parameter arrays");
  tds_rt->add_option("--input", o.input, "Parameter array JSON; random arrays when omitted");
  add_trial_options(tds_rt, o, "10");

  for (auto* sub : {check_params, verify, mu, shape, zz_enum, zz_rank, convex, tds_rt}) {
    sub->add_option("--output", o.output, "Write the JSON report here instead of stdout");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitUsage;
  }
  auto count = [](CLI::App* a, const char* name) {
    auto* opt = a->get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
  };
  CLI::App* leaf = app.get_subcommands().front();
  while (!leaf->get_subcommands().empty()) leaf = leaf->get_subcommands().front();
  o.has_d = count(leaf, "--d");
  o.has_trials = count(leaf, "--trials");
  o.has_exclude_r = count(leaf, "--exclude-r");
  o.has_exclude_s = count(leaf, "--exclude-s");
  o.has_max_len = count(leaf, "--max-len");

  VerificationReport rep;
  try {
    if (leaf == check_params) rep = cmd_check_params(o);
    else if (leaf == verify) rep = cmd_verify_appendix(o);
    else if (leaf == mu) rep = cmd_mu_certificate(o);
    else if (leaf == shape) rep = cmd_shape(o);
    else if (leaf == zz_enum) rep = cmd_zz_enumerate(o);
    else if (leaf == zz_rank) rep = cmd_zz_rank(o);
    else if (leaf == convex) rep = cmd_convex(o);
    else rep = cmd_tds_roundtrip(o);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  const std::string json = to_json(rep);
  if (o.output.empty()) {
    out << json;
  } else {
    std::ofstream file(o.output, std::ios::binary);
    if (!file) {
      err << "error: cannot write '" << o.output << "'\n";
      return kExitUsage;
    }
    file << json;
  }
  err << human_summary(rep);
  return rep.overall ? kExitPass : kExitFail;
}

}  // namespace tdpair::cli
