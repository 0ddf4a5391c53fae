#pragma once

#include "ivmech/model.hpp"
#include "ivmech/payments.hpp"
#include "ivmech/report.hpp"

#include <json.hpp>

#include <string>

namespace ivmech {

using Json = nlohmann::ordered_json;

// Instance files: {"n", "k", "mode": good|chore|ratios, "entries": [[p/q ...] per agent]}.
struct InstanceFile {
  Instance instance;
  // Set when the file holds ratios; the instance is then values_from_ratios(..., good).
  bool from_ratios = false;
};

// Throws Error(ParseError) on malformed JSON, Error(InvalidInstance) on bad tables.
InstanceFile parse_instance(const std::string& text);
Json instance_to_json(const Instance& inst);
Json ratios_to_json(const Ratios& rho);

AllocationRule parse_allocation(const std::string& text);
Json allocation_to_json(const AllocationRule& x, bool decimal = false);
Json payments_to_json(const PaymentRule& p, bool decimal = false);

// wall_ms is emitted only with timing, so default output is reproducible.
Json report_to_json(const SolveReport& report, bool decimal = false, bool timing = false);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace ivmech
