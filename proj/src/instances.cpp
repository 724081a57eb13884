#include "posauction/instances.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "posauction/errors.hpp"

namespace posauction {

using nlohmann::json;

std::string_view to_string(CtrMode mode)
{
  return mode == CtrMode::Geometric ? "geometric" : "uniform";
}

CtrMode parse_ctr_mode(std::string_view text)
{
  if (text == "uniform" || text == "strictly-increasing-uniform")
  {
    return CtrMode::StrictlyIncreasingUniform;
  }
  if (text == "geometric")
  {
    return CtrMode::Geometric;
  }
  throw ParseError("unknown CTR mode \"" + std::string(text) + "\" (expected uniform or geometric)");
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream)
{
  std::uint64_t z = seed + (stream + 1) * 0x9E3779B97F4A7C15ULL;
  z               = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z               = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

// Uniform integer in [0, bound). std::uniform_int_distribution is not
// specified bit-for-bit across standard libraries, so draw directly.
std::uint64_t uniform_below(std::mt19937_64 &engine, std::uint64_t bound)
{
  std::uint64_t const threshold = (0 - bound) % bound;
  for (;;)
  {
    std::uint64_t r = engine();
    if (r >= threshold)
    {
      return r % bound;
    }
  }
}

std::uint64_t uniform_between(std::mt19937_64 &engine, std::uint64_t lo, std::uint64_t hi)
{
  return lo + uniform_below(engine, hi - lo + 1);
}

// Parses a decimal/fraction string or a JSON integer.
Rational rational_field(json const &node, std::string const &where)
{
  try
  {
    if (node.is_string())
    {
      return Rational::parse(node.get<std::string>());
    }
    if (node.is_number_integer())
    {
      return Rational{node.get<long>()};
    }
  }
  catch (ParseError const &e)
  {
    throw ParseError(where + ": " + e.what());
  }
  throw ParseError(where + ": expected a fraction or decimal string");
}

}  // namespace

void validate(GeneratorConfig const &config)
{
  if (config.bidders < 1)
  {
    throw InvalidConfig("generator needs n >= 1");
  }
  if (config.slots < 1)
  {
    throw InvalidConfig("generator needs K >= 1");
  }
  if (config.value_low.sign() <= 0 || !(config.value_low < config.value_high))
  {
    throw InvalidConfig("value range must satisfy 0 < low < high");
  }
  if (config.vm_probability.sign() < 0 || config.vm_probability > Rational{1})
  {
    throw InvalidConfig("VM probability must lie in [0, 1]");
  }
  if (config.value_denominator < 1 || config.value_denominator > 1000000)
  {
    throw InvalidConfig("value denominator must lie in [1, 10^6]");
  }
  if (config.ctr_mode == CtrMode::StrictlyIncreasingUniform && config.slots > 1000)
  {
    throw InvalidConfig("uniform CTR mode supports at most 1000 slots");
  }
}

AuctionInstance generate(GeneratorConfig const &config)
{
  validate(config);

  // CTRs.
  std::vector<Rational> ctrs;
  {
    std::mt19937_64 engine(stream_seed(config.seed, 0));
    if (config.ctr_mode == CtrMode::StrictlyIncreasingUniform)
    {
      std::set<std::uint64_t> picks;
      while (picks.size() < config.slots)
      {
        picks.insert(uniform_between(engine, 1, 1000));
      }
      for (auto p : picks)
      {
        ctrs.emplace_back(static_cast<long>(p), 1000L);
      }
    }
    else
    {
      Rational const ratio{static_cast<long>(uniform_between(engine, 50, 95)), 100L};
      for (std::size_t k = 1; k <= config.slots; ++k)
      {
        ctrs.push_back(pow(ratio, static_cast<unsigned>(config.slots - k)));
      }
    }
  }

  // Value lattice: multiples of 1/D inside [low, high].
  mpq_class const D(static_cast<unsigned long>(config.value_denominator));
  mpq_class const lo_scaled = config.value_low.raw() * D;
  mpq_class const hi_scaled = config.value_high.raw() * D;
  mpz_class       first;
  mpz_class       last;
  mpz_cdiv_q(first.get_mpz_t(), lo_scaled.get_num_mpz_t(), lo_scaled.get_den_mpz_t());
  mpz_fdiv_q(last.get_mpz_t(), hi_scaled.get_num_mpz_t(), hi_scaled.get_den_mpz_t());
  mpz_class const count = last - first + 1;
  if (count < static_cast<unsigned long>(config.bidders))
  {
    throw GenerationError("value range [" + config.value_low.str() + ", " +
                          config.value_high.str() + "] holds fewer than " +
                          std::to_string(config.bidders) + " distinct multiples of 1/" +
                          std::to_string(config.value_denominator));
  }
  if (!count.fits_ulong_p() || !first.fits_slong_p())
  {
    throw GenerationError("value range too wide for the generator lattice");
  }
  std::uint64_t const lattice_size = count.get_ui();
  long const          lattice_base = first.get_si();

  Rational const denom_r(static_cast<long>(config.value_denominator));
  mpq_class const vm_p = config.vm_probability.raw();
  std::uint64_t const vm_den = mpz_class(vm_p.get_den()).get_ui();
  std::uint64_t const vm_num = mpz_class(vm_p.get_num()).get_ui();

  std::vector<BidderType> bidders;
  std::set<Rational>      used;
  for (std::size_t i = 0; i < config.bidders; ++i)
  {
    std::mt19937_64 engine(stream_seed(config.seed, 1 + i));
    BidderClass const cls =
      uniform_below(engine, vm_den) < vm_num ? BidderClass::VM : BidderClass::UM;
    Rational value;
    do
    {
      auto const step = static_cast<long>(uniform_below(engine, lattice_size));
      value           = Rational{lattice_base + step} / denom_r;
    } while (used.count(value) != 0);
    used.insert(value);
    bidders.push_back(BidderType{value, cls});
  }

  return AuctionInstance(SlotLadder(std::move(ctrs)), std::move(bidders), config.seed);
}

GeneratorConfig sweep_config(std::uint64_t seed, SweepShape const &shape)
{
  if (shape.min_bidders < 1 || shape.min_bidders > shape.max_bidders || shape.min_slots < 1 ||
      shape.min_slots > shape.max_slots)
  {
    throw InvalidConfig("sweep shape needs 1 <= min <= max for bidders and slots");
  }
  std::mt19937_64 engine(stream_seed(seed, ~std::uint64_t{0}));
  GeneratorConfig config;
  config.seed           = seed;
  config.bidders        = uniform_between(engine, shape.min_bidders, shape.max_bidders);
  config.slots          = uniform_between(engine, shape.min_slots, shape.max_slots);
  config.value_low      = shape.value_low;
  config.value_high     = shape.value_high;
  config.vm_probability = shape.vm_probability;
  config.ctr_mode       = shape.ctr_mode;
  return config;
}

AuctionInstance worked_example_instance()
{
  SlotLadder ladder({Rational{1, 10}, Rational{2, 10}, Rational{3, 10}, Rational{4, 10}});
  return AuctionInstance(std::move(ladder), {{Rational{6}, BidderClass::VM},
                                             {Rational{7}, BidderClass::VM},
                                             {Rational{8}, BidderClass::VM},
                                             {Rational{9}, BidderClass::UM},
                                             {Rational{10}, BidderClass::UM}});
}

std::string serialize_instance(AuctionInstance const &instance)
{
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["ctrs"]           = json::array();
  for (auto const &x : instance.ladder().ctrs())
  {
    doc["ctrs"].push_back(x.str());
  }
  doc["bidders"] = json::array();
  for (auto const &b : instance.bidders())
  {
    doc["bidders"].push_back({{"value", b.value.str()}, {"class", std::string(to_string(b.cls))}});
  }
  if (auto seed = instance.seed())
  {
    doc["seed"] = *seed;
  }
  return doc.dump(2) + "\n";
}

AuctionInstance parse_instance(std::string_view text)
{
  json doc;
  try
  {
    doc = json::parse(text);
  }
  catch (json::parse_error const &e)
  {
    throw ParseError(std::string("instance file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object())
  {
    throw ParseError("instance file must hold a JSON object");
  }
  if (!doc.contains("schema_version") || !doc["schema_version"].is_number_integer())
  {
    throw ParseError("instance file lacks an integer schema_version");
  }
  if (auto version = doc["schema_version"].get<long>(); version != kSchemaVersion)
  {
    throw ParseError("unsupported schema_version " + std::to_string(version) + " (expected " +
                     std::to_string(kSchemaVersion) + ")");
  }

  if (!doc.contains("ctrs") || !doc["ctrs"].is_array())
  {
    throw ParseError("instance file lacks a ctrs array");
  }
  std::vector<Rational> ctrs;
  for (std::size_t k = 0; k < doc["ctrs"].size(); ++k)
  {
    ctrs.push_back(rational_field(doc["ctrs"][k], "ctrs[" + std::to_string(k) + "]"));
  }

  if (!doc.contains("bidders") || !doc["bidders"].is_array())
  {
    throw ParseError("instance file lacks a bidders array");
  }
  std::vector<BidderType> bidders;
  for (std::size_t i = 0; i < doc["bidders"].size(); ++i)
  {
    auto const       &node  = doc["bidders"][i];
    std::string const where = "bidders[" + std::to_string(i) + "]";
    if (!node.is_object() || !node.contains("value") || !node.contains("class") ||
        !node["class"].is_string())
    {
      throw ParseError(where + ": expected {\"value\": ..., \"class\": \"UM\"|\"VM\"}");
    }
    BidderType b;
    b.value = rational_field(node["value"], where + ".value");
    try
    {
      b.cls = parse_bidder_class(node["class"].get<std::string>());
    }
    catch (ParseError const &e)
    {
      throw ParseError(where + ".class: " + e.what());
    }
    bidders.push_back(std::move(b));
  }

  std::optional<std::uint64_t> seed;
  if (doc.contains("seed") && !doc["seed"].is_null())
  {
    if (!doc["seed"].is_number_unsigned())
    {
      throw ParseError("seed must be a non-negative integer");
    }
    seed = doc["seed"].get<std::uint64_t>();
  }

  try
  {
    return AuctionInstance(SlotLadder(std::move(ctrs)), std::move(bidders), seed);
  }
  catch (InvalidInput const &e)
  {
    throw ParseError(e.what());
  }
}

AuctionInstance load_instance(std::string const &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw ParseError("cannot open instance file " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_instance(buffer.str());
}

}  // namespace posauction
