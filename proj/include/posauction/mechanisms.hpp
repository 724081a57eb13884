#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "posauction/core.hpp"

namespace posauction {

enum class MechanismId
{
  VCG,
  GSP,
  MPU,
  MPR
};

std::string_view to_string(MechanismId id);
/// Case-insensitive "vcg" / "gsp" / "mpu" / "mpr". Throws ParseError.
MechanismId parse_mechanism(std::string_view text);

/// A bidder as seen by the mechanisms. Instances with n ≤ K are padded with
/// virtual zero-value VMs (no id) so that every slot and the dummy slot have
/// a well-defined occupant; virtual participants never reach an Outcome.
struct Participant
{
  std::optional<BidderId> id;
  Rational                value;
  BidderClass             cls = BidderClass::VM;

  bool is_virtual() const
  {
    return !id.has_value();
  }
};

/// Participants in rank order (highest value first, lower id first among
/// equal values), padded with virtual bidders up to K + 1 entries.
std::vector<Participant> ranked_participants(AuctionInstance const &instance);

Outcome run_vcg(AuctionInstance const &instance);
Outcome run_gsp(AuctionInstance const &instance);

/// Value-ranked allocation; UMs pay the VCG price, VMs the next-lower value.
Outcome run_mpu(AuctionInstance const &instance);

/// Incremental allocation with per-slot prices: VMs fill the bottom slots in
/// ascending value order, then UMs (lowest value first) are inserted at their
/// utility-maximising slot and the slots above are re-priced.
Outcome run_mpr(AuctionInstance const &instance);

Outcome run_mechanism(MechanismId mechanism, AuctionInstance const &instance);

/// Allocation under construction inside run_mpr. Occupied slots always form
/// a bottom prefix 0..m and prices are known for slots 1..m+1.
class PartialState
{
public:
  explicit PartialState(SlotLadder ladder);

  SlotLadder const &ladder() const
  {
    return ladder_;
  }
  std::size_t slots() const
  {
    return ladder_.size();
  }

  std::optional<Participant> const &occupant(Slot k) const;
  void                              place(Slot k, Participant participant);

  /// Moves the occupants of slots k..top-1 up by one, leaving slot k empty.
  void shift_up(Slot k, Slot top);

  bool            is_priced(Slot k) const;
  Rational const &price(Slot k) const;
  void            set_price(Slot k, Rational price);

  /// Prices indexed by slot; index 0 and unpriced slots hold 0.
  std::span<Rational const> prices() const
  {
    return prices_;
  }

private:
  SlotLadder                              ladder_;
  std::vector<std::optional<Participant>> occupants_;
  std::vector<Rational>                   prices_;
  std::vector<bool>                       priced_;
};

/// Which term of the slot price won.
enum class PriceSource
{
  None,  ///< no participant below, price 0
  UM,    ///< VCG-style extension from the closest lower UM
  VM     ///< value of the closest lower VM
};

struct SlotPriceBreakdown
{
  Rational    um_term;
  Rational    vm_term;
  PriceSource source = PriceSource::None;

  Rational const &price() const
  {
    return source == PriceSource::UM ? um_term : vm_term;
  }
};

/// Price of slot k given the occupants below it:
///   max{ (p^(k_U)·x_{k_U} + v_U·(x_k − x_{k_U})) / x_k,  v_V }
/// with U the closest lower UM at k_U and V the closest lower VM, each term
/// 0 when absent. Throws ProtocolError if a slot below k is unoccupied or
/// the closest lower UM's slot is not yet priced.
SlotPriceBreakdown slot_price_breakdown(PartialState const &state, Slot k);
Rational           slot_price(PartialState const &state, Slot k);

/// Smallest k in 1..k_bar maximising x_k·(value − p^(k)). `prices` is indexed
/// by slot and must cover 1..k_bar.
Slot best_slot_for_um(Rational const &value, SlotLadder const &ladder,
                      std::span<Rational const> prices, Slot k_bar);

}  // namespace posauction
