#pragma once

// JSON encodings of the library's values. Malformed input raises
// Error(ParseError) or the validation error of the decoded value.

#include <string>

#include "json.hpp"

#include "pol/classify.hpp"
#include "pol/generators.hpp"
#include "pol/hilbert.hpp"
#include "pol/partition.hpp"
#include "pol/porosity.hpp"
#include "pol/seqspace.hpp"

namespace pol::json_io {

using Json = nlohmann::ordered_json;

Json parse(const std::string& text);
Json read_file(const std::string& path);

Json to_json(const Sequence& x);
Sequence sequence_from_json(const Json& j);

Json to_json(const Interval& v);
Json to_json(const BoundFunction& p);
BoundFunction bound_from_json(const Json& j);
WeightFamily weights_from_json(const Json& j);

Json to_json(const SetDescriptor& set);
SetDescriptor set_from_json(const Json& j);

Json to_json(const ClassificationReport& report, const SetDescriptor& set);
Json quasi_normal_json(const ClassificationReport& report);
Json to_json(const GreedyPartition& g);

Json to_json(const WitnessCertificate& cert);
WitnessCertificate certificate_from_json(const Json& j);
Json to_json(const VerificationReport& report);

SubspaceSystem system_from_json(const Json& j);
Json to_json(const SubspaceSystem& system);

GeneratorSpec generator_from_json(const Json& j);
Json to_json(const GeneratorSpec& spec);

Json to_json(const RateRow& row);

}  // namespace pol::json_io
