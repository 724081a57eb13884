#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <thread>

#include <CLI11.hpp>

#include "posauction/errors.hpp"
#include "posauction/instances.hpp"
#include "posauction/mechanisms.hpp"
#include "posauction/verify.hpp"

namespace posauction::cli {

namespace {

class UsageError : public Error
{
public:
  using Error::Error;
};

Rational parse_rational_flag(std::string const &flag, std::string const &text)
{
  try
  {
    return Rational::parse(text);
  }
  catch (ParseError const &e)
  {
    throw UsageError(flag + ": " + e.what());
  }
}

struct SeedRange
{
  std::uint64_t first = 0;
  std::uint64_t last  = 0;  // inclusive

  std::uint64_t count() const
  {
    return last - first + 1;
  }
};

std::uint64_t parse_u64(std::string_view text, std::string const &what)
{
  std::uint64_t value = 0;
  auto [ptr, ec]      = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
  {
    throw UsageError(what + ": expected a non-negative integer, got \"" + std::string(text) + "\"");
  }
  return value;
}

/// "a..b" (inclusive) or a single seed.
SeedRange parse_seed_range(std::string const &text)
{
  auto dots = text.find("..");
  if (dots == std::string::npos)
  {
    auto s = parse_u64(text, "--seed-range");
    return {s, s};
  }
  SeedRange range{parse_u64(std::string_view(text).substr(0, dots), "--seed-range"),
                  parse_u64(std::string_view(text).substr(dots + 2), "--seed-range")};
  if (range.last < range.first)
  {
    throw UsageError("--seed-range: empty range " + text);
  }
  return range;
}

unsigned default_jobs()
{
  return std::max(1U, std::thread::hardware_concurrency());
}

/// Evaluates fn(seed) for every seed in the range on `jobs` threads; the
/// result vector is ordered by seed regardless of scheduling.
template <typename Fn>
auto parallel_over_seeds(SeedRange const &range, unsigned jobs, Fn fn)
{
  using Result = decltype(fn(std::uint64_t{}));
  std::vector<std::optional<Result>> slots(range.count());
  std::atomic<std::uint64_t>         next{0};
  std::exception_ptr                 failure;
  std::mutex                         failure_mutex;

  auto worker = [&] {
    for (;;)
    {
      std::uint64_t const i = next.fetch_add(1);
      if (i >= slots.size())
      {
        return;
      }
      try
      {
        slots[i].emplace(fn(range.first + i));
      }
      catch (...)
      {
        std::lock_guard lock(failure_mutex);
        if (!failure)
        {
          failure = std::current_exception();
        }
        next = slots.size();
      }
    }
  };

  std::vector<std::thread> threads;
  unsigned const n = std::max(1U, std::min<unsigned>(jobs, static_cast<unsigned>(slots.size())));
  for (unsigned t = 0; t + 1 < n; ++t)
  {
    threads.emplace_back(worker);
  }
  worker();
  for (auto &t : threads)
  {
    t.join();
  }
  if (failure)
  {
    std::rethrow_exception(failure);
  }
  std::vector<Result> out;
  out.reserve(slots.size());
  for (auto &s : slots)
  {
    out.push_back(std::move(*s));
  }
  return out;
}

// ---- verify ----------------------------------------------------------------

struct VerifyOptions
{
  std::string                      instance_path;
  std::string                      seed_range;
  std::string                      mechanism = "mpr";
  std::vector<std::string>         checks{"ir", "ic", "lemmas", "ratio"};
  std::string                      delta;
  int                              grid = 64;
  bool                             classes_private = false;
  bool                             classes_public  = false;
  bool                             expect_mpu_class_violations = false;
  std::size_t                      n_min = 2;
  std::size_t                      n_max = 8;
  std::size_t                      k_min = 1;
  std::size_t                      k_max = 4;
  std::string                      vm_prob = "1/2";
  std::string                      value_low  = "1";
  std::string                      value_high = "10";
  std::string                      ctr_mode   = "uniform";
  std::string                      csv_path;
  unsigned                         jobs = default_jobs();
};

struct Checks
{
  bool ir         = false;
  bool ic         = false;
  bool lemmas     = false;
  bool ratio      = false;
  bool robustness = false;
};

Checks parse_checks(std::vector<std::string> const &names)
{
  Checks checks;
  for (auto const &raw : names)
  {
    std::string name = raw;
    std::transform(name.begin(), name.end(), name.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (name == "ir")
      checks.ir = true;
    else if (name == "ic")
      checks.ic = true;
    else if (name == "lemmas")
      checks.lemmas = true;
    else if (name == "ratio")
      checks.ratio = true;
    else if (name == "robustness")
      checks.robustness = true;
    else
      throw UsageError("unknown check \"" + raw + "\" (expected ir, ic, lemmas, ratio, robustness)");
  }
  return checks;
}

struct Verdict
{
  std::uint64_t                        seed = 0;
  std::size_t                          bidders = 0;
  std::size_t                          slots   = 0;
  std::vector<IrViolation>             ir;
  std::vector<DeviationReport>         ic;
  std::size_t                          ic_tied = 0;
  std::optional<LemmaReport>           lemmas;
  std::optional<RatioReport>           ratio;
  std::optional<std::pair<bool, bool>> robustness;
};

Verdict verify_one(AuctionInstance const &instance, MechanismId mechanism, Checks const &checks,
                   std::optional<Rational> const &delta, int grid, bool class_deviations)
{
  if (!instance.strict())
  {
    throw UsageError("verification needs pairwise distinct bidder values");
  }
  Verdict v;
  v.seed    = instance.seed().value_or(0);
  v.bidders = instance.bidder_count();
  v.slots   = instance.slots();
  if (checks.ir)
  {
    v.ir = check_ir(mechanism, instance);
  }
  if (checks.ic)
  {
    IcConfig config;
    config.delta            = delta ? *delta : default_delta(instance, run_mechanism(mechanism, instance));
    config.grid_points      = grid;
    config.class_deviations = class_deviations;
    v.ic                    = check_ic(mechanism, instance, config);
    for (auto const &rep : v.ic)
    {
      for (BidderId j = 0; j < instance.bidder_count(); ++j)
      {
        if (j != rep.bidder && instance.bidder(j).value == rep.misreport.value)
        {
          ++v.ic_tied;
          break;
        }
      }
    }
  }
  if (checks.lemmas)
  {
    v.lemmas = check_lemmas(run_mpr(instance), instance);
  }
  if (checks.ratio)
  {
    v.ratio = approximation_ratio(instance, mechanism);
  }
  if (checks.robustness)
  {
    if (!instance.all_of_class(BidderClass::UM) && !instance.all_of_class(BidderClass::VM))
    {
      throw UsageError("robustness check needs an all-UM or all-VM instance");
    }
    v.robustness = check_robustness(instance);
  }
  return v;
}

int cmd_verify(VerifyOptions const &opt, std::ostream &out, std::ostream &err)
{
  Checks const      checks    = parse_checks(opt.checks);
  MechanismId const mechanism = parse_mechanism(opt.mechanism);
  if (checks.lemmas && mechanism != MechanismId::MPR)
  {
    throw UsageError("the lemma check applies to MPR outcomes only");
  }
  if (opt.classes_private && opt.classes_public)
  {
    throw UsageError("--classes-private and --classes-public are exclusive");
  }
  if (opt.instance_path.empty() == opt.seed_range.empty())
  {
    throw UsageError("give exactly one of an instance file or --seed-range");
  }
  if (opt.grid < 0)
  {
    throw UsageError("--grid must be non-negative");
  }
  // MPR is meant to withstand class misreports; the other mechanisms are
  // checked against value misreports unless asked otherwise.
  bool const class_deviations =
    opt.classes_private || (!opt.classes_public && mechanism == MechanismId::MPR);
  bool const expect_ic_violations =
    opt.expect_mpu_class_violations && mechanism == MechanismId::MPU && class_deviations;

  std::optional<Rational> delta;
  if (!opt.delta.empty())
  {
    delta = parse_rational_flag("--delta", opt.delta);
    if (delta->sign() <= 0)
    {
      throw UsageError("--delta must be positive");
    }
  }

  std::vector<Verdict> verdicts;
  if (!opt.instance_path.empty())
  {
    AuctionInstance const instance = load_instance(opt.instance_path);
    verdicts.push_back(verify_one(instance, mechanism, checks, delta, opt.grid, class_deviations));
    auto const &v = verdicts.front();
    if (checks.ir)
      out << "ir_violations: " << serialize_ir(v.ir);
    if (checks.ic)
      out << "ic_deviations: " << serialize_deviations(v.ic);
    if (checks.lemmas)
      out << "lemmas: " << serialize_lemmas(*v.lemmas);
    if (checks.ratio)
      out << "ratio: " << serialize_ratio(*v.ratio);
    if (checks.robustness)
      out << "robustness: mpr=" << (v.robustness->first ? "ok" : "MISMATCH")
          << " mpu=" << (v.robustness->second ? "ok" : "MISMATCH") << "\n";
  }
  else
  {
    SeedRange const range = parse_seed_range(opt.seed_range);
    SweepShape      shape;
    shape.min_bidders    = opt.n_min;
    shape.max_bidders    = opt.n_max;
    shape.min_slots      = opt.k_min;
    shape.max_slots      = opt.k_max;
    shape.vm_probability = parse_rational_flag("--vm-prob", opt.vm_prob);
    shape.value_low      = parse_rational_flag("--value-low", opt.value_low);
    shape.value_high     = parse_rational_flag("--value-high", opt.value_high);
    shape.ctr_mode       = parse_ctr_mode(opt.ctr_mode);
    if (checks.robustness && shape.vm_probability != Rational{0} &&
        shape.vm_probability != Rational{1})
    {
      throw UsageError("robustness sweeps need --vm-prob 0 or 1 (homogeneous instances)");
    }
    // Surface configuration mistakes before spawning workers.
    validate(sweep_config(range.first, shape));
    verdicts = parallel_over_seeds(range, opt.jobs, [&](std::uint64_t seed) {
      return verify_one(generate(sweep_config(seed, shape)), mechanism, checks, delta, opt.grid,
                        class_deviations);
    });
  }

  std::size_t ir_total = 0, ic_total = 0, ic_tied = 0, lemma_total = 0, robust_total = 0;
  std::optional<Rational> max_ratio;
  std::vector<SweepRow>   rows;
  for (auto const &v : verdicts)
  {
    ir_total += v.ir.size();
    ic_total += v.ic.size();
    ic_tied += v.ic_tied;
    if (v.lemmas)
    {
      lemma_total += v.lemmas->failures.size();
      for (auto const &f : v.lemmas->failures)
      {
        err << "seed " << v.seed << ": " << f << "\n";
      }
    }
    if (v.robustness)
    {
      robust_total += (v.robustness->first ? 0 : 1) + (v.robustness->second ? 0 : 1);
    }
    if (v.ratio && (!max_ratio || v.ratio->ratio > *max_ratio))
    {
      max_ratio = v.ratio->ratio;
    }
    SweepRow row;
    row.seed          = v.seed;
    row.bidders       = v.bidders;
    row.slots         = v.slots;
    row.mechanism     = mechanism;
    row.ir_ok         = v.ir.empty();
    row.ic_violations = v.ic.size();
    if (v.ratio)
    {
      row.lsw_mechanism = v.ratio->lsw_mechanism;
      row.lsw_optimal   = v.ratio->lsw_optimal;
      row.ratio         = v.ratio->ratio;
    }
    rows.push_back(std::move(row));
  }

  bool const ratio_ok = !max_ratio || *max_ratio <= Rational{2};
  std::size_t failures = ir_total + lemma_total + robust_total + (ratio_ok ? 0 : 1);
  bool ic_ok           = true;
  if (expect_ic_violations)
  {
    ic_ok = ic_total > 0;
  }
  else
  {
    failures += ic_total;
  }

  out << "checked " << verdicts.size() << " instance(s) with " << to_string(mechanism) << "\n";
  if (checks.ir)
    out << "ir: " << ir_total << " violations\n";
  if (checks.ic)
  {
    out << "ic: " << ic_total << " violations (class misreports "
        << (class_deviations ? "on" : "off") << "; " << ic_tied
        << " at a value equal to another bidder's)";
    if (expect_ic_violations)
    {
      out << (ic_total > 0 ? " [expected]" : " [expected at least one, found none]");
    }
    out << "\n";
  }
  if (checks.lemmas)
    out << "lemmas: " << lemma_total << " failures\n";
  if (checks.robustness)
    out << "robustness: " << robust_total << " mismatches\n";
  if (max_ratio)
  {
    out << "ratio: max " << max_ratio->str() << " (" << max_ratio->decimal(6) << ")"
        << (ratio_ok ? " <= 2" : " > 2") << "\n";
  }
  out << failures << " violations";
  if (max_ratio)
  {
    out << ", max ratio " << (ratio_ok ? "<= 2" : "> 2");
  }
  out << "\n";

  if (!opt.csv_path.empty())
  {
    std::ofstream csv(opt.csv_path);
    if (!csv)
    {
      err << "cannot write " << opt.csv_path << "\n";
      return kUsage;
    }
    csv << serialize_sweep(rows);
  }
  return failures == 0 && ic_ok ? kOk : kViolations;
}

// ---- run / lowerbound / generate -------------------------------------------

int cmd_run(std::string const &path, std::string const &mechanism_name, std::ostream &out)
{
  MechanismId const     mechanism = parse_mechanism(mechanism_name);
  AuctionInstance const instance  = load_instance(path);
  out << serialize_outcome(run_mechanism(mechanism, instance), instance, mechanism);
  return kOk;
}

int cmd_lowerbound(std::string const &epsilon_text, std::ostream &out)
{
  Rational const epsilon = parse_rational_flag("--epsilon", epsilon_text);
  LowerBoundReport report;
  try
  {
    report = lower_bound_scenario(epsilon);
  }
  catch (InvalidConfig const &e)
  {
    throw UsageError(e.what());
  }
  out << serialize_lower_bound(report);
  return kOk;
}

struct GenerateOptions
{
  std::uint64_t seed = 0;
  std::size_t   n    = 6;
  std::size_t   k    = 4;
  std::string   vm_prob    = "1/2";
  std::string   value_low  = "1";
  std::string   value_high = "10";
  std::string   ctr_mode   = "uniform";
  std::uint64_t value_denominator = 1000;
  std::string   out_path;
  std::string   out_dir;
  std::uint64_t count = 1;
};

int cmd_generate(GenerateOptions const &opt, std::ostream &out, std::ostream &err)
{
  GeneratorConfig config;
  config.seed              = opt.seed;
  config.bidders           = opt.n;
  config.slots             = opt.k;
  config.vm_probability    = parse_rational_flag("--vm-prob", opt.vm_prob);
  config.value_low         = parse_rational_flag("--value-low", opt.value_low);
  config.value_high        = parse_rational_flag("--value-high", opt.value_high);
  config.ctr_mode          = parse_ctr_mode(opt.ctr_mode);
  config.value_denominator = opt.value_denominator;
  if (opt.count > 1 && opt.out_dir.empty())
  {
    throw UsageError("--count > 1 needs --out-dir");
  }

  auto write = [&](std::string const &path, std::string const &text) {
    std::ofstream file(path);
    if (!file || !(file << text))
    {
      err << "cannot write " << path << "\n";
      return false;
    }
    return true;
  };

  if (!opt.out_dir.empty())
  {
    std::error_code ec;
    std::filesystem::create_directories(opt.out_dir, ec);
    for (std::uint64_t i = 0; i < opt.count; ++i)
    {
      GeneratorConfig c = config;
      c.seed            = opt.seed + i;
      auto const path =
        (std::filesystem::path(opt.out_dir) / ("instance_" + std::to_string(c.seed) + ".json"))
          .string();
      if (!write(path, serialize_instance(generate(c))))
      {
        return kUsage;
      }
    }
    return kOk;
  }

  std::string const text = serialize_instance(generate(config));
  if (opt.out_path.empty() || opt.out_path == "-")
  {
    out << text;
    return kOk;
  }
  return write(opt.out_path, text) ? kOk : kUsage;
}

// ---- reproduce-paper -------------------------------------------------------

int cmd_reproduce(std::uint64_t count, std::uint64_t ic_count, unsigned jobs, std::ostream &out)
{
  bool all_ok = true;
  auto line   = [&](bool ok, std::string const &what) {
    all_ok = all_ok && ok;
    out << (ok ? "[PASS] " : "[FAIL] ") << what << "\n";
  };

  // Worked example.
  AuctionInstance const example = worked_example_instance();
  Outcome const         mpr     = run_mpr(example);
  out << serialize_outcome(mpr, example, MechanismId::MPR);
  bool const example_ok =
    mpr.allocation.occupant(1) == 1 && mpr.allocation.occupant(2) == 3 &&
    mpr.allocation.occupant(3) == 2 && mpr.allocation.occupant(4) == 4 &&
    mpr.slot_prices == std::vector<Rational>{0, 6, 7, Rational{23, 3}, 8};
  line(example_ok, "worked example: B@1 D@2 C@3 E@4, prices 6, 7, 23/3, 8");

  IcConfig witness_config;
  witness_config.delta = default_delta(example, run_mpu(example));
  auto const witness   = check_ic(MechanismId::MPU, example, witness_config);
  line(!witness.empty(), "MPU with private classes: " + std::to_string(witness.size()) +
                           " profitable misreports on the worked example");

  SeedRange const range{0, count - 1};
  for (auto const &[prob, label] :
       std::vector<std::pair<Rational, std::string>>{{Rational{0}, "all-UM"}, {Rational{1}, "all-VM"}})
  {
    SweepShape shape;
    shape.vm_probability = prob;
    shape.max_bidders    = 12;
    shape.max_slots      = 6;
    auto const results   = parallel_over_seeds(range, jobs, [&](std::uint64_t seed) {
      return check_robustness(generate(sweep_config(seed, shape)));
    });
    bool ok = std::all_of(results.begin(), results.end(),
                          [](auto const &r) { return r.first && r.second; });
    line(ok, "robustness on " + std::to_string(count) + " " + label + " instances");
  }

  SweepShape mixed;
  mixed.max_bidders = 12;
  mixed.max_slots   = 6;
  struct Sweep
  {
    bool     ir_ok;
    bool     lemmas_ok;
    Rational ratio;
  };
  auto const sweep = parallel_over_seeds(range, jobs, [&](std::uint64_t seed) {
    auto const instance = generate(sweep_config(seed, mixed));
    return Sweep{check_ir(MechanismId::MPR, instance).empty() &&
                   check_ir(MechanismId::MPU, instance).empty(),
                 check_lemmas(run_mpr(instance), instance).all_passed(),
                 approximation_ratio(instance, MechanismId::MPR).ratio};
  });
  Rational worst{1};
  bool     ir_ok = true, lemmas_ok = true;
  for (auto const &s : sweep)
  {
    ir_ok     = ir_ok && s.ir_ok;
    lemmas_ok = lemmas_ok && s.lemmas_ok;
    worst     = max(worst, s.ratio);
  }
  line(ir_ok, "individual rationality of MPR and MPU on " + std::to_string(count) + " instances");
  line(lemmas_ok, "MPR structural lemmas on " + std::to_string(count) + " instances");
  line(worst <= Rational{2}, "MPR welfare ratio over " + std::to_string(count) +
                               " instances: max " + worst.str() + " (" + worst.decimal(6) + ")");

  SweepShape small;
  auto const ic = parallel_over_seeds(SeedRange{0, ic_count - 1}, jobs, [&](std::uint64_t seed) {
    auto const instance = generate(sweep_config(seed, small));
    IcConfig   config;
    config.delta = default_delta(instance, run_mpr(instance));
    return check_ic(MechanismId::MPR, instance, config).size();
  });
  std::size_t ic_total = 0;
  for (auto c : ic)
  {
    ic_total += c;
  }
  line(ic_total == 0, "MPR incentive compatibility on " + std::to_string(ic_count) +
                        " instances: " + std::to_string(ic_total) + " profitable misreports");

  auto const lb = lower_bound_scenario(Rational{1, 100});
  out << serialize_lower_bound(lb);
  line(lb.constraint_lhs == Rational{401, 100} && lb.robust_all_vm,
       "lower-bound scenario: 2*p_h - p_l = " + lb.constraint_lhs.str() + " > 4");
  line(lb.ratio_case1 == Rational{1001, 802},
       "lower-bound scenario: MPR case-1 ratio " + lb.ratio_case1.str());

  return all_ok ? kOk : kViolations;
}

}  // namespace

int run(std::vector<std::string> const &args, std::ostream &out, std::ostream &err)
{
  CLI::App app{"Position auctions for mixed utility- and value-maximising bidders"};
  app.name("posauction");
  app.require_subcommand(1);

  std::string run_path;
  std::string run_mechanism = "mpr";
  auto *run_cmd = app.add_subcommand("run", "Run a mechanism on an instance file");
  run_cmd->add_option("instance", run_path, "Instance file")->required();
  run_cmd->add_option("-m,--mechanism", run_mechanism, "vcg, gsp, mpu or mpr");

  VerifyOptions vopt;
  auto *verify_cmd = app.add_subcommand("verify", "Check IR, IC, lemmas, ratio or robustness");
  verify_cmd->add_option("instance", vopt.instance_path, "Instance file");
  verify_cmd->add_option("--seed-range", vopt.seed_range, "Seeded sweep, e.g. 0..1000 (inclusive)");
  verify_cmd->add_option("-m,--mechanism", vopt.mechanism, "vcg, gsp, mpu or mpr");
  verify_cmd->add_option("--checks", vopt.checks, "ir,ic,lemmas,ratio,robustness")->delimiter(',');
  verify_cmd->add_option("--delta", vopt.delta, "IC probe offset (fraction); default gap/1000");
  verify_cmd->add_option("--grid", vopt.grid, "Uniform IC grid points");
  verify_cmd->add_flag("--classes-private", vopt.classes_private, "Allow class misreports");
  verify_cmd->add_flag("--classes-public", vopt.classes_public, "Only value misreports");
  verify_cmd->add_flag("--expect-mpu-class-violations", vopt.expect_mpu_class_violations,
                       "Treat MPU class-misreport violations as expected");
  verify_cmd->add_option("--n-min", vopt.n_min);
  verify_cmd->add_option("--n-max", vopt.n_max);
  verify_cmd->add_option("--k-min", vopt.k_min);
  verify_cmd->add_option("--k-max", vopt.k_max);
  verify_cmd->add_option("--vm-prob", vopt.vm_prob);
  verify_cmd->add_option("--value-low", vopt.value_low);
  verify_cmd->add_option("--value-high", vopt.value_high);
  verify_cmd->add_option("--ctr-mode", vopt.ctr_mode, "uniform or geometric");
  verify_cmd->add_option("--csv", vopt.csv_path, "Write per-instance sweep rows as CSV");
  verify_cmd->add_option("-j,--jobs", vopt.jobs, "Worker threads");

  std::string epsilon;
  auto *lb_cmd = app.add_subcommand("lowerbound", "Two-slot lower-bound scenario");
  lb_cmd->add_option("--epsilon", epsilon, "Fraction in (0, 1/10)")->required();

  GenerateOptions gopt;
  auto *gen_cmd = app.add_subcommand("generate", "Write seeded random instance file(s)");
  gen_cmd->add_option("--seed", gopt.seed);
  gen_cmd->add_option("--n", gopt.n, "Bidders");
  gen_cmd->add_option("--k", gopt.k, "Slots");
  gen_cmd->add_option("--vm-prob", gopt.vm_prob);
  gen_cmd->add_option("--value-low", gopt.value_low);
  gen_cmd->add_option("--value-high", gopt.value_high);
  gen_cmd->add_option("--ctr-mode", gopt.ctr_mode, "uniform or geometric");
  gen_cmd->add_option("--value-denominator", gopt.value_denominator);
  gen_cmd->add_option("-o,--out", gopt.out_path, "Output file ('-' for stdout)");
  gen_cmd->add_option("--out-dir", gopt.out_dir, "Directory for --count files");
  gen_cmd->add_option("--count", gopt.count, "Consecutive seeds to write");

  std::uint64_t repro_count    = 1000;
  std::uint64_t repro_ic_count = 200;
  unsigned      repro_jobs     = default_jobs();
  auto *repro_cmd = app.add_subcommand("reproduce-paper", "Run the full reproduction chain");
  repro_cmd->add_option("--count", repro_count, "Instances per sweep");
  repro_cmd->add_option("--ic-count", repro_ic_count, "Instances for the IC sweep");
  repro_cmd->add_option("-j,--jobs", repro_jobs, "Worker threads");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try
  {
    app.parse(reversed);
  }
  catch (CLI::ParseError const &e)
  {
    int const code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try
  {
    if (*run_cmd)
      return cmd_run(run_path, run_mechanism, out);
    if (*verify_cmd)
      return cmd_verify(vopt, out, err);
    if (*lb_cmd)
      return cmd_lowerbound(epsilon, out);
    if (*gen_cmd)
      return cmd_generate(gopt, out, err);
    if (*repro_cmd)
    {
      if (repro_count == 0 || repro_ic_count == 0)
      {
        throw UsageError("--count and --ic-count must be positive");
      }
      return cmd_reproduce(repro_count, repro_ic_count, repro_jobs, out);
    }
  }
  catch (Error const &e)
  {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace posauction::cli
