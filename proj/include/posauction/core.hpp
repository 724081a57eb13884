#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "posauction/rational.hpp"

namespace posauction {

using BidderId = std::size_t;

/// Slot index, bottom-up. Slot 0 is the dummy slot with CTR 0.
using Slot = std::size_t;

/// UM maximises x·(v − p); VM maximises obtained value v·x subject to p ≤ v,
/// preferring lower payment among outcomes of equal value.
enum class BidderClass
{
  UM,
  VM
};

std::string_view to_string(BidderClass cls);
/// Accepts "UM"/"VM" (case-insensitive). Throws ParseError otherwise.
BidderClass parse_bidder_class(std::string_view text);

struct BidderType
{
  Rational    value;
  BidderClass cls = BidderClass::UM;

  friend bool operator==(BidderType const &, BidderType const &) = default;
};

/// Click-through rates x_1 ≤ ... ≤ x_K, all positive. x_0 = 0 is synthesised.
class SlotLadder
{
public:
  SlotLadder() = default;
  /// Throws InvalidInput if a CTR is non-positive or the sequence decreases.
  explicit SlotLadder(std::vector<Rational> ctrs);

  /// Number of real slots K.
  std::size_t size() const
  {
    return ctrs_.size();
  }

  /// CTR of slot k for 0 ≤ k ≤ K; slot 0 is the dummy slot.
  Rational const &ctr(Slot k) const;

  std::vector<Rational> const &ctrs() const
  {
    return ctrs_;
  }

  bool strictly_increasing() const;

  friend bool operator==(SlotLadder const &, SlotLadder const &) = default;

private:
  std::vector<Rational> ctrs_;
};

class AuctionInstance
{
public:
  /// Throws InvalidInput when there are no bidders or a value is not positive.
  AuctionInstance(SlotLadder ladder, std::vector<BidderType> bidders,
                  std::optional<std::uint64_t> seed = std::nullopt);

  SlotLadder const &ladder() const
  {
    return ladder_;
  }
  std::size_t slots() const
  {
    return ladder_.size();
  }
  std::vector<BidderType> const &bidders() const
  {
    return bidders_;
  }
  BidderType const &bidder(BidderId id) const;
  std::size_t       bidder_count() const
  {
    return bidders_.size();
  }
  std::optional<std::uint64_t> seed() const
  {
    return seed_;
  }

  /// True when all values are pairwise distinct.
  bool strict() const
  {
    return strict_;
  }

  bool all_of_class(BidderClass cls) const;

  /// Copy with bidder `id`'s reported type replaced.
  AuctionInstance with_bidder(BidderId id, BidderType type) const;

  friend bool operator==(AuctionInstance const &, AuctionInstance const &) = default;

private:
  SlotLadder                   ladder_;
  std::vector<BidderType>      bidders_;
  std::optional<std::uint64_t> seed_;
  bool                         strict_ = true;
};

/// Slot assignment. Slot 0 may hold the dummy occupant (the (K+1)th-ranked
/// bidder); slots 1..K hold distinct bidders or stay empty.
class Allocation
{
public:
  Allocation() = default;
  Allocation(std::size_t slots, std::size_t bidders);

  std::size_t slots() const
  {
    return by_slot_.empty() ? 0 : by_slot_.size() - 1;
  }
  std::size_t bidder_count() const
  {
    return by_bidder_.size();
  }

  std::optional<BidderId> occupant(Slot k) const;
  std::optional<Slot>     slot_of(BidderId id) const;

  /// Places `id` at slot `k`, evicting any previous occupant of `k` and
  /// clearing `id`'s previous slot. Throws InvalidInput on bad indices.
  void assign(Slot k, BidderId id);
  void clear(Slot k);

  friend bool operator==(Allocation const &, Allocation const &) = default;

private:
  std::vector<std::optional<BidderId>> by_slot_;
  std::vector<std::optional<Slot>>     by_bidder_;
};

struct Outcome
{
  Allocation allocation;
  /// Per-click price of each slot, index 0..K; index 0 is always 0.
  std::vector<Rational> slot_prices;
  /// Per-click payment of each bidder; 0 for bidders without a real slot.
  std::vector<Rational> payments;

  Rational const &slot_price(Slot k) const;
  Rational const &payment(BidderId id) const;

  friend bool operator==(Outcome const &, Outcome const &) = default;
};

/// Lexicographic VM objective: feasibility, then obtained value, then lower
/// total payment.
struct VmPreference
{
  bool     feasible = true;
  Rational obtained_value;
  Rational total_payment;

  friend bool operator==(VmPreference const &, VmPreference const &) = default;
};

/// Total order; "greater" means preferred by the value maximiser.
std::strong_ordering operator<=>(VmPreference const &lhs, VmPreference const &rhs);

/// Σ_k v_{π_k}·x_k over real slots. Throws InvalidInput if the allocation
/// names a bidder the instance does not have.
Rational lsw(AuctionInstance const &instance, Allocation const &allocation);

/// Value-ranked assignment: highest value to slot K, ..., the (K+1)th to
/// slot 0. Ties rank the lower bidder id higher.
Allocation optimal_allocation(AuctionInstance const &instance);

/// Bidder ids ordered by descending value, lower id first among equals.
std::vector<BidderId> rank_by_value(AuctionInstance const &instance);

Rational     um_utility(Rational const &value, Rational const &ctr, Rational const &price);
VmPreference vm_preference(Rational const &true_value, Rational const &ctr, Rational const &price);

/// Δ(k, k') = (p_{π_k'}·x_k' − p_{π_k}·x_k) / (x_k' − x_k), using the slot
/// prices of the outcome. Requires 1 ≤ k < k' ≤ K; throws DegeneratePair when
/// the two CTRs coincide and InvalidInput on bad slot indices.
Rational marginal_payment_increase(Outcome const &outcome, AuctionInstance const &instance,
                                   Slot k, Slot k_prime);

}  // namespace posauction
