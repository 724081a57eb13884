#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "posauction/core.hpp"
#include "posauction/mechanisms.hpp"
#include "posauction/verify.hpp"

namespace posauction {

enum class CtrMode
{
  StrictlyIncreasingUniform,
  Geometric
};

std::string_view to_string(CtrMode mode);
CtrMode          parse_ctr_mode(std::string_view text);

struct GeneratorConfig
{
  std::uint64_t seed = 0;
  std::size_t   bidders = 6;
  std::size_t   slots   = 4;
  Rational      value_low{1};
  Rational      value_high{10};
  Rational      vm_probability{1, 2};
  CtrMode       ctr_mode = CtrMode::StrictlyIncreasingUniform;
  /// Values are multiples of 1/value_denominator inside [low, high].
  std::uint64_t value_denominator = 1000;
};

/// Throws InvalidConfig on inconsistent settings.
void validate(GeneratorConfig const &config);

/// Deterministic in config. Stream layout (each a std::mt19937_64 seeded by
/// mixing `seed` with a stream index through the SplitMix64 finaliser):
///   stream 0     slot CTRs
///   stream 1 + i bidder i: class first, then value draws until distinct
/// Throws GenerationError when [low, high] holds fewer than n lattice values.
AuctionInstance generate(GeneratorConfig const &config);

/// Shape of a seeded sweep: n and K are drawn per seed from these ranges.
struct SweepShape
{
  std::size_t min_bidders = 2;
  std::size_t max_bidders = 8;
  std::size_t min_slots   = 1;
  std::size_t max_slots   = 4;
  Rational    value_low{1};
  Rational    value_high{10};
  Rational    vm_probability{1, 2};
  CtrMode     ctr_mode = CtrMode::StrictlyIncreasingUniform;
};

/// Generator configuration for one sweep member; n and K come from a stream
/// of their own so the instance streams are unaffected.
GeneratorConfig sweep_config(std::uint64_t seed, SweepShape const &shape);

/// SplitMix64 finaliser applied to seed + (stream + 1)·golden-gamma.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream);

/// The worked four-slot, five-bidder example: CTRs 1/10..4/10,
/// A=(6,VM) B=(7,VM) C=(8,VM) D=(9,UM) E=(10,UM) as bidder ids 0..4.
AuctionInstance worked_example_instance();

// ---- instance files -------------------------------------------------------

inline constexpr int kSchemaVersion = 1;

/// JSON object: {"schema_version":1,"ctrs":[...],"bidders":[{"value":..,
/// "class":"UM"|"VM"}],"seed":...}. Numbers are exact strings.
std::string serialize_instance(AuctionInstance const &instance);

/// Accepts fraction ("23/3") and decimal ("0.1") strings; JSON integers are
/// also accepted for convenience. Throws ParseError with a description of
/// the offending field.
AuctionInstance parse_instance(std::string_view text);

AuctionInstance load_instance(std::string const &path);

// ---- reports --------------------------------------------------------------

std::string serialize_outcome(Outcome const &outcome, AuctionInstance const &instance,
                              MechanismId mechanism);
std::string serialize_ratio(RatioReport const &report);
std::string serialize_deviations(std::vector<DeviationReport> const &reports);
std::string serialize_ir(std::vector<IrViolation> const &violations);
std::string serialize_lemmas(LemmaReport const &report);
std::string serialize_lower_bound(LowerBoundReport const &report);

struct SweepRow
{
  std::uint64_t seed = 0;
  std::size_t   bidders = 0;
  std::size_t   slots   = 0;
  MechanismId   mechanism = MechanismId::MPR;
  Rational      lsw_mechanism;
  Rational      lsw_optimal;
  Rational      ratio;
  bool          ir_ok = true;
  std::size_t   ic_violations = 0;
};

/// CSV with header: seed,n,K,mechanism,lsw_mech,lsw_opt,ratio,ir_ok,ic_violations
std::string serialize_sweep(std::vector<SweepRow> const &rows);

}  // namespace posauction
