#pragma once

#include <json.hpp>

#include "toeplitz/factor_map.hpp"
#include "toeplitz/odometer.hpp"
#include "toeplitz/period_analysis.hpp"
#include "toeplitz/sequence.hpp"
#include "toeplitz/toeplitz_builder.hpp"

namespace toeplitz {

// Stable JSON renderings of analysis results. Field names and ordering are
// part of the CLI's structured-output contract: identical inputs and config
// must produce byte-identical reports.
using Json = nlohmann::ordered_json;

Json to_json(const MpValue& m);                 // integer or "inf"
Json to_json(const SkeletonMap& sk, const Alphabet& alphabet);
Json to_json(const StructureResult& result);
Json to_json(const RecurrenceReport& rep);
Json to_json(const EtaConstruction& c, const Alphabet& alphabet);
Json to_json(const EtaReport& rep);
Json to_json(const OdometerElement& e);
Json to_json(const PartitionVerdict& v);
Json to_json(const SkeletonAddress& a);
Json to_json(const SemiconjugacyVerdict& v);
Json to_json(const LevelPartitionVerdict& v);
Json to_json(const FiberReport& rep);

}  // namespace toeplitz
