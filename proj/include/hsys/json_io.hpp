#pragma once

#include <json.hpp>

#include "hsys/applications.hpp"
#include "hsys/matrix.hpp"
#include "hsys/perm.hpp"
#include "hsys/pipeline.hpp"
#include "hsys/representation.hpp"

namespace hsys::io {

using json = nlohmann::ordered_json;

// Integers are written as decimal strings; readers accept strings or numbers.
// Variable indices (sigma) and colors are 1-based in JSON.
json to_json(const Int& a);
Int int_from_json(const json& j);
json to_json(const Rational& q);
Rational rational_from_json(const json& j);

json to_json(const FiniteAbelianGroup& g);
FiniteAbelianGroup group_from_json(const json& j);
json to_json(const IntMatrix& a);
IntMatrix matrix_from_json(const json& j);
json to_json(const HomSystem& sys);
HomSystem system_from_json(const json& j);
json to_json(const SmithDecomposition& d);

json to_json(const EquivalenceMap& map);
EquivalenceMap map_from_json(const json& j);
json to_json(const EquivalenceReport& rep);
json to_json(const PipelineTrace& trace);
// Stage systems and maps of a trace document (reports are not read back).
PipelineTrace trace_from_json(const json& j);

json to_json(const ColoredHypergraph& g);
ColoredHypergraph hypergraph_from_json(const json& j);
json to_json(const RepresentationCertificate& cert);
RepresentationCertificate certificate_from_json(const json& j);
json to_json(const RpReport& rep);
json to_json(const RemovalResult& res);
LabelDomains domains_from_json(const json& j, std::size_t m);

json to_json(const Permutation& p);
// Accepts {"values":[...]}, a bare array, or the text form "2 0 1".
Permutation permutation_from_json(const json& j);
json to_json(const OccurrenceReport& rep);

json to_json(const ConfigurationCensus& c);
std::set<Tuple> subset_from_json(const json& j);

json tuple_json(const Tuple& t);
Tuple tuple_from_json(const json& j);

} // namespace hsys::io
