// JSON and CSV renderings of mechanism outcomes and verification reports.
// Every rational is written exactly ("23/3"); fields ending in _decimal carry
// a 12-digit truncated rendering for humans.

#include <sstream>

#include <json.hpp>

#include "posauction/instances.hpp"

namespace posauction {

using nlohmann::json;

namespace {

void put(json &doc, std::string const &key, Rational const &value)
{
  doc[key]              = value.str();
  doc[key + "_decimal"] = value.decimal(12);
}

json slot_json(std::optional<Slot> slot)
{
  return slot ? json(*slot) : json(nullptr);
}

json type_json(BidderType const &type)
{
  return {{"value", type.value.str()}, {"class", std::string(to_string(type.cls))}};
}

json utility_json(Utility const &utility)
{
  json doc;
  if (auto const *u = std::get_if<Rational>(&utility))
  {
    doc["kind"] = "UM";
    put(doc, "utility", *u);
  }
  else
  {
    auto const &p = std::get<VmPreference>(utility);
    doc["kind"]     = "VM";
    doc["feasible"] = p.feasible;
    put(doc, "obtained_value", p.obtained_value);
    put(doc, "total_payment", p.total_payment);
  }
  return doc;
}

json placement_json(PlacementSummary const &where)
{
  json doc;
  doc["slot"] = slot_json(where.slot);
  put(doc, "price", where.price);
  return doc;
}

json outcome_json(Outcome const &outcome, AuctionInstance const &instance)
{
  json doc;
  auto const dummy = outcome.allocation.slots() > 0 || outcome.allocation.bidder_count() > 0
                       ? outcome.allocation.occupant(0)
                       : std::nullopt;
  doc["dummy_slot_bidder"] = dummy ? json(*dummy) : json(nullptr);

  doc["slots"]               = json::array();
  doc["slot_prices"]         = json::array();
  doc["slot_prices_decimal"] = json::array();
  for (Slot k = 1; k <= instance.slots(); ++k)
  {
    auto const occupant = outcome.allocation.occupant(k);
    json       s;
    s["slot"]   = k;
    s["ctr"]    = instance.ladder().ctr(k).str();
    s["bidder"] = occupant ? json(*occupant) : json(nullptr);
    if (occupant)
    {
      s["class"] = std::string(to_string(instance.bidder(*occupant).cls));
      s["value"] = instance.bidder(*occupant).value.str();
    }
    put(s, "price", outcome.slot_price(k));
    doc["slots"].push_back(s);
    doc["slot_prices"].push_back(outcome.slot_price(k).str());
    doc["slot_prices_decimal"].push_back(outcome.slot_price(k).decimal(12));
  }

  doc["payments"] = json::array();
  for (BidderId id = 0; id < instance.bidder_count(); ++id)
  {
    json p;
    p["bidder"] = id;
    auto slot   = outcome.allocation.slot_of(id);
    p["slot"]   = slot_json(slot);
    put(p, "payment", outcome.payment(id));
    doc["payments"].push_back(p);
  }
  put(doc, "lsw", lsw(instance, outcome.allocation));
  return doc;
}

json ratio_json(RatioReport const &report)
{
  json doc;
  put(doc, "lsw_mechanism", report.lsw_mechanism);
  put(doc, "lsw_optimal", report.lsw_optimal);
  put(doc, "ratio", report.ratio);
  return doc;
}

}  // namespace

std::string serialize_outcome(Outcome const &outcome, AuctionInstance const &instance,
                              MechanismId mechanism)
{
  json doc         = outcome_json(outcome, instance);
  doc["mechanism"] = std::string(to_string(mechanism));
  return doc.dump(2) + "\n";
}

std::string serialize_ratio(RatioReport const &report)
{
  return ratio_json(report).dump(2) + "\n";
}

std::string serialize_deviations(std::vector<DeviationReport> const &reports)
{
  json doc = json::array();
  for (auto const &r : reports)
  {
    doc.push_back({{"bidder", r.bidder},
                   {"true_type", type_json(r.true_type)},
                   {"misreport", type_json(r.misreport)},
                   {"truthful", placement_json(r.truthful)},
                   {"deviation", placement_json(r.deviation)},
                   {"truthful_utility", utility_json(r.truthful_utility)},
                   {"deviation_utility", utility_json(r.deviation_utility)}});
  }
  return doc.dump(2) + "\n";
}

std::string serialize_ir(std::vector<IrViolation> const &violations)
{
  json doc = json::array();
  for (auto const &v : violations)
  {
    json item;
    item["bidder"] = v.bidder;
    item["slot"]   = v.slot;
    put(item, "price", v.price);
    put(item, "value", v.value);
    doc.push_back(item);
  }
  return doc.dump(2) + "\n";
}

std::string serialize_lemmas(LemmaReport const &report)
{
  json doc;
  doc["marginal_equality"]    = report.marginal_equality;
  doc["same_class_ordering"]  = report.same_class_ordering;
  doc["cross_class_ordering"] = report.cross_class_ordering;
  doc["marginal_dominance"]   = report.marginal_dominance;
  doc["monotone_prices"]      = report.monotone_prices;
  doc["failures"]             = report.failures;
  return doc.dump(2) + "\n";
}

std::string serialize_lower_bound(LowerBoundReport const &report)
{
  static char const *const names[] = {"C=(4,UM)", "C=(4,VM)", "C=(1,UM)", "C=(1,VM)"};

  json doc;
  put(doc, "epsilon", report.epsilon);
  doc["cases"] = json::array();
  for (std::size_t i = 0; i < report.cases.size(); ++i)
  {
    auto const &c = report.cases[i];
    json        item;
    item["case"]   = i + 1;
    item["label"]  = names[i];
    item["c_type"] = type_json(c.c_type);
    json allocation;
    for (Slot k = 0; k <= c.mpr_outcome.allocation.slots(); ++k)
    {
      auto occ = c.mpr_outcome.allocation.occupant(k);
      allocation[std::to_string(k)] =
        occ ? json(std::string(1, static_cast<char>('A' + *occ))) : json(nullptr);
    }
    item["mpr_allocation"] = allocation;
    item["slot_prices"]    = json::array();
    for (Slot k = 1; k < c.mpr_outcome.slot_prices.size(); ++k)
    {
      item["slot_prices"].push_back(c.mpr_outcome.slot_prices[k].str());
    }
    item["c_slot"] = slot_json(c.c_slot);
    put(item, "c_payment", c.c_payment);
    put(item, "gsp_c_payment", c.gsp_c_payment);
    item["ratio"] = ratio_json(c.ratio);
    doc["cases"].push_back(item);
  }
  put(doc, "p_high", report.p_high);
  put(doc, "p_low", report.p_low);
  put(doc, "constraint_lhs", report.constraint_lhs);
  doc["constraint_violated"] = report.constraint_lhs > Rational{4};
  put(doc, "ratio_case1", report.ratio_case1);
  doc["robust_all_vm"] = report.robust_all_vm;
  return doc.dump(2) + "\n";
}

std::string serialize_sweep(std::vector<SweepRow> const &rows)
{
  std::ostringstream out;
  out << "seed,n,K,mechanism,lsw_mech,lsw_opt,ratio,ir_ok,ic_violations\n";
  for (auto const &r : rows)
  {
    out << r.seed << ',' << r.bidders << ',' << r.slots << ',' << to_string(r.mechanism) << ','
        << r.lsw_mechanism.str() << ',' << r.lsw_optimal.str() << ',' << r.ratio.str() << ','
        << (r.ir_ok ? "true" : "false") << ',' << r.ic_violations << '\n';
  }
  return out.str();
}

}  // namespace posauction
