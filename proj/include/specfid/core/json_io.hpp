#pragma once

#include <nlohmann/json.hpp>

#include "specfid/core/types.hpp"

// Canonical JSON for every shared type: snake_case field names, object keys
// emitted in sorted order (nlohmann's default map), 2-space indent via
// canonical_dump. These schemas are the run-directory file format, so
// changes here are format changes.

namespace specfid {

using json = nlohmann::json;

void to_json(json& j, const Probe& p);
void from_json(const json& j, Probe& p);

void to_json(json& j, const JudgeAnswer& a);
void from_json(const json& j, JudgeAnswer& a);

void to_json(json& j, const Action& a);
void from_json(const json& j, Action& a);

void to_json(json& j, const FidelityReport& r);
void from_json(const json& j, FidelityReport& r);

void to_json(json& j, const TransitionContingency& c);
void from_json(const json& j, TransitionContingency& c);

void to_json(json& j, const MixtureWeights& w);
void from_json(const json& j, MixtureWeights& w);

void to_json(json& j, const RateEstimates& r);
void from_json(const json& j, RateEstimates& r);

// Single canonical rendering used for hashing and artifact files.
std::string canonical_dump(const json& j);

json probes_to_json(const std::vector<Probe>& probes);
std::vector<Probe> probes_from_json(const json& j);

}  // namespace specfid
