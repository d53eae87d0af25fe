#include "contres/trace.hpp"

#include <stdexcept>

#include "contres/csv.hpp"

namespace contres {

std::optional<Slot> latency_of(const ExecutionTrace& trace, std::uint32_t party) {
  if (party >= trace.parties.size())
    throw std::out_of_range("latency_of: unknown party id " + std::to_string(party));
  const PartyRecord& rec = trace.parties[party];
  if (!rec.success_slot) return std::nullopt;
  return *rec.success_slot - rec.wake_slot;
}

std::string trace_slots_csv(const ExecutionTrace& trace) {
  std::string out = "slot,wakeups,transmitters,success_party\n";
  for (const SlotRecord& r : trace.slots) {
    out += std::to_string(r.slot);
    out += ',';
    out += std::to_string(r.wakeups);
    out += ',';
    out += std::to_string(r.transmitter_count);
    out += ',';
    if (r.success_party) out += std::to_string(*r.success_party);
    out += '\n';
  }
  return out;
}

std::string trace_parties_csv(const ExecutionTrace& trace) {
  std::string out = "id,wake_slot,success_slot\n";
  for (const PartyRecord& r : trace.parties) {
    out += std::to_string(r.id);
    out += ',';
    out += std::to_string(r.wake_slot);
    out += ',';
    if (r.success_slot) out += std::to_string(*r.success_slot);
    out += '\n';
  }
  return out;
}

ExecutionTrace trace_from_csv(std::string_view slots_csv, std::string_view parties_csv,
                              Slot horizon) {
  ExecutionTrace trace;
  const auto slot_lines = csv::split_lines(slots_csv);
  if (slot_lines.empty() || slot_lines[0] != "slot,wakeups,transmitters,success_party")
    throw std::invalid_argument("trace csv: bad slots header");
  for (std::size_t i = 1; i < slot_lines.size(); ++i) {
    const auto f = csv::split_fields(slot_lines[i]);
    if (f.size() != 4) throw std::invalid_argument("trace csv: expected 4 slot fields");
    SlotRecord r;
    r.slot = csv::parse_int(f[0]);
    r.wakeups = std::uint32_t(csv::parse_uint(f[1]));
    r.transmitter_count = std::uint32_t(csv::parse_uint(f[2]));
    if (!f[3].empty()) r.success_party = std::uint32_t(csv::parse_uint(f[3]));
    trace.slots.push_back(r);
  }
  const auto party_lines = csv::split_lines(parties_csv);
  if (party_lines.empty() || party_lines[0] != "id,wake_slot,success_slot")
    throw std::invalid_argument("trace csv: bad parties header");
  for (std::size_t i = 1; i < party_lines.size(); ++i) {
    const auto f = csv::split_fields(party_lines[i]);
    if (f.size() != 3) throw std::invalid_argument("trace csv: expected 3 party fields");
    PartyRecord r;
    r.id = std::uint32_t(csv::parse_uint(f[0]));
    r.wake_slot = csv::parse_int(f[1]);
    if (!f[2].empty()) r.success_slot = csv::parse_int(f[2]);
    trace.parties.push_back(r);
  }
  trace.horizon = horizon > 0 ? horizon : (trace.slots.empty() ? 0 : trace.slots.back().slot);
  return trace;
}

}  // namespace contres
