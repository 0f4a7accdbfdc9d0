#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "qcap/random_coding.hpp"
#include "qcap/typicality.hpp"

namespace qcap {

using Json = nlohmann::ordered_json;

// Matrices are arrays of rows, each row an array of [re, im] pairs.
Json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j);

// {name, input_dim, output_dim, kraus}
Json channel_to_json(const KrausChannel& ch);
KrausChannel channel_from_json(const Json& j);

Json code_to_json(const CodeSubspace& code);
CodeSubspace code_from_json(const Json& j);

KrausChannel load_channel_file(const std::string& path);
CodeSubspace load_code_file(const std::string& path);

/// Builtin constructors by name: identity(d), phase_flip(p), depolarizing(p),
/// amplitude_damping(g), haar_random(in, out, N), random_unitary(dim, count).
/// Random constructors draw from the channel stream of `seed`.
KrausChannel make_channel(const std::string& kind, const std::vector<double>& params,
                          std::uint64_t seed);

// "builtin:name:p1,p2,..." or a path to a channel JSON file.
KrausChannel resolve_channel(const std::string& source, std::uint64_t seed);

// Shortest decimal text that round-trips, at most 17 significant digits.
std::string format_double(double x);

Json to_json(const ChannelInfoReport& r);
Json to_json(const BoundReport& r);
Json to_json(const EnsembleEstimate& e);
Json to_json(const EnsembleReport& r);
Json to_json(const HaarMomentReport& r);
Json to_json(const HammingCurve& c);
Json to_json(const TypicalSetReport& r);
Json to_json(const ReducedChannelReport& r);
Json to_json(const DecayFit& f);
Json to_json(const ReducedRelationsReport& r);
Json to_json(const RateDemo& d);

}  // namespace qcap
