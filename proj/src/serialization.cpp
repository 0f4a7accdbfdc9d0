#include "qcap/serialization.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "qcap/errors.hpp"

namespace qcap {

namespace {

Json optional_number(const std::optional<double>& v) {
  return v ? Json(*v) : Json(nullptr);
}

std::vector<double> parse_params(const std::string& text) {
  std::vector<double> out;
  if (text.empty()) return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    double v = 0.0;
    const auto* first = item.data();
    const auto* last = item.data() + item.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last) {
      throw InputError("builtin channel: cannot parse parameter '" + item + "'");
    }
    out.push_back(v);
  }
  return out;
}

Index as_dim(double v, const std::string& what) {
  if (!(v >= 1.0) || v != std::floor(v) || v > static_cast<double>(kDefaultDimensionCap)) {
    throw InputError("builtin channel: " + what + " must be a positive integer");
  }
  return static_cast<Index>(v);
}

void expect_params(const std::string& kind, const std::vector<double>& params, std::size_t n) {
  if (params.size() != n) {
    std::ostringstream msg;
    msg << "builtin channel " << kind << " expects " << n << " parameter(s), got "
        << params.size();
    throw InputError(msg.str());
  }
}

}  // namespace

Json matrix_to_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw InputError("matrix must be a non-empty array of rows");
  const auto rows = static_cast<Index>(j.size());
  if (!j[0].is_array() || j[0].empty()) throw InputError("matrix rows must be non-empty arrays");
  const auto cols = static_cast<Index>(j[0].size());
  check_dimension_cap(rows, cols);
  ComplexMatrix m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    const Json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols) {
      throw InputError("matrix rows have inconsistent lengths");
    }
    for (Index c = 0; c < cols; ++c) {
      const Json& e = row[static_cast<std::size_t>(c)];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
        throw InputError("matrix entries must be [re, im] number pairs");
      }
      m(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  }
  return m;
}

Json channel_to_json(const KrausChannel& ch) {
  Json j;
  j["name"] = ch.name();
  j["input_dim"] = ch.input_dim();
  j["output_dim"] = ch.output_dim();
  Json ops = Json::array();
  for (const auto& a : ch.kraus()) ops.push_back(matrix_to_json(a));
  j["kraus"] = std::move(ops);
  return j;
}

KrausChannel channel_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("channel JSON must be an object");
  for (const char* key : {"input_dim", "output_dim", "kraus"}) {
    if (!j.contains(key)) throw InputError(std::string("channel JSON lacks '") + key + "'");
  }
  if (!j["input_dim"].is_number_integer() || !j["output_dim"].is_number_integer()) {
    throw InputError("channel dimensions must be integers");
  }
  if (!j["kraus"].is_array() || j["kraus"].empty()) {
    throw InputError("channel 'kraus' must be a non-empty array");
  }
  const auto in = j["input_dim"].get<Index>();
  const auto out = j["output_dim"].get<Index>();
  std::vector<ComplexMatrix> ops;
  for (const auto& m : j["kraus"]) {
    ops.push_back(matrix_from_json(m));
    if (ops.back().rows() != out || ops.back().cols() != in) {
      throw InputError("Kraus operator shape does not match declared dimensions");
    }
  }
  std::string name;
  if (j.contains("name")) {
    if (!j["name"].is_string()) throw InputError("channel 'name' must be a string");
    name = j["name"].get<std::string>();
  }
  return KrausChannel(std::move(ops), std::move(name));
}

Json code_to_json(const CodeSubspace& code) {
  Json j;
  j["ambient_dim"] = code.ambient_dim();
  j["code_dim"] = code.code_dim();
  j["basis"] = matrix_to_json(code.basis());
  return j;
}

CodeSubspace code_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("basis")) throw InputError("code JSON lacks 'basis'");
  return CodeSubspace(matrix_from_json(j["basis"]));
}

namespace {

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InputError("malformed JSON in '" + path + "': " + e.what());
  }
}

}  // namespace

KrausChannel load_channel_file(const std::string& path) {
  return channel_from_json(read_json_file(path));
}

CodeSubspace load_code_file(const std::string& path) {
  return code_from_json(read_json_file(path));
}

KrausChannel make_channel(const std::string& kind, const std::vector<double>& params,
                          std::uint64_t seed) {
  RngStream rng(seed, 0, StreamDomain::kChannel);
  if (kind == "identity") {
    expect_params(kind, params, 1);
    return identity_channel(as_dim(params[0], "dimension"));
  }
  if (kind == "phase_flip") {
    expect_params(kind, params, 1);
    return phase_flip(params[0]);
  }
  if (kind == "depolarizing") {
    expect_params(kind, params, 1);
    return depolarizing(params[0]);
  }
  if (kind == "amplitude_damping") {
    expect_params(kind, params, 1);
    return amplitude_damping(params[0]);
  }
  if (kind == "haar_random") {
    expect_params(kind, params, 3);
    return haar_random_channel(as_dim(params[0], "input dimension"),
                               as_dim(params[1], "output dimension"),
                               as_dim(params[2], "Kraus count"), rng);
  }
  if (kind == "random_unitary") {
    expect_params(kind, params, 2);
    return haar_random_unitary_channel(as_dim(params[0], "dimension"),
                                       as_dim(params[1], "unitary count"), rng);
  }
  throw InputError("unknown builtin channel '" + kind + "'");
}

KrausChannel resolve_channel(const std::string& source, std::uint64_t seed) {
  const std::string prefix = "builtin:";
  if (source.rfind(prefix, 0) != 0) return load_channel_file(source);
  const std::string rest = source.substr(prefix.size());
  const auto colon = rest.find(':');
  const std::string kind = rest.substr(0, colon);
  const std::string params = colon == std::string::npos ? "" : rest.substr(colon + 1);
  return make_channel(kind, parse_params(params), seed);
}

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

Json to_json(const ChannelInfoReport& r) {
  Json j;
  j["is_trace_preserving"] = r.is_trace_preserving;
  j["is_unital"] = r.is_unital;
  j["is_uniform"] = r.is_uniform;
  j["length"] = r.length;
  j["output_entropy"] = optional_number(r.output_entropy);
  j["entropy_exchange"] = optional_number(r.entropy_exchange);
  j["coherent_information"] = optional_number(r.coherent_information);
  return j;
}

Json to_json(const BoundReport& r) {
  Json j;
  j["p"] = r.p;
  j["trace_norm_d"] = r.trace_norm_d;
  j["bound_kraus"] = r.bound_kraus;
  j["bound_states"] = optional_number(r.bound_states);
  j["frobenius_d_sq"] = r.frobenius_d_sq;
  return j;
}

Json to_json(const EnsembleEstimate& e) {
  Json j;
  j["mean"] = e.mean;
  j["std_error"] = e.std_error;
  j["sample_count"] = e.sample_count;
  j["master_seed"] = e.master_seed;
  return j;
}

Json to_json(const EnsembleReport& r) {
  Json j;
  j["spec"] = {{"ambient_dim", r.spec.ambient_dim},
               {"code_dim", r.spec.code_dim},
               {"sample_count", r.spec.sample_count},
               {"master_seed", r.spec.master_seed}};
  j["length"] = r.length;
  j["bound"] = to_json(r.bound);
  j["transmission"] = to_json(r.transmission);
  j["trace_norm_d"] = to_json(r.trace_norm_d);
  j["frobenius_d_sq"] = to_json(r.frobenius_d_sq);
  j["closed_form"] = {{"exact_d2", r.exact_d2},
                      {"upper_d2", r.upper_d2},
                      {"averaged_bound", r.averaged_bound},
                      {"jensen_majorant", r.jensen_majorant}};
  j["pass"] = {{"d2_matches_exact", r.d2_matches_exact},
               {"bound_above_average", r.bound_above_average},
               {"exact_below_upper", r.exact_below_upper},
               {"jensen_holds", r.jensen_holds}};
  return j;
}

Json to_json(const HaarMomentReport& r) {
  Json j;
  j["ambient_dim"] = r.ambient_dim;
  j["code_dim"] = r.code_dim;
  Json ms = Json::array();
  for (const auto& m : r.moments) {
    ms.push_back({{"name", m.name},
                  {"estimate", to_json(m.estimate)},
                  {"closed_form", m.closed_form},
                  {"pass", m.pass}});
  }
  j["moments"] = std::move(ms);
  j["all_pass"] = r.all_pass;
  return j;
}

Json to_json(const HammingCurve& c) {
  Json j;
  j["rate"] = c.rate;
  j["length"] = c.length;
  j["output_dim"] = c.output_dim;
  j["capacity_bound"] = c.capacity_bound;
  j["converges"] = c.converges;
  Json rows = Json::array();
  for (const auto& r : c.rows) {
    rows.push_back({{"n", r.n}, {"code_dim", r.code_dim}, {"bound", r.bound},
                    {"bound_floor", r.bound_floor}});
  }
  j["rows"] = std::move(rows);
  return j;
}

Json to_json(const TypicalSetReport& r) {
  Json j;
  j["n"] = r.n;
  j["epsilon"] = r.epsilon;
  j["entropy"] = r.entropy;
  j["typical_count"] = r.typical_count;
  j["count_bound"] = r.count_bound;
  j["mass"] = r.mass;
  j["count_within_bound"] = r.count_within_bound;
  return j;
}

Json to_json(const ReducedChannelReport& r) {
  Json j;
  j["n"] = r.n;
  j["epsilon"] = r.epsilon;
  j["typical_length"] = r.typical_length;
  j["length"] = r.length;
  j["length_bound"] = r.length_bound;
  j["typical_transmission"] = r.typical_transmission;
  j["transmission"] = r.transmission;
  j["subspace_mass"] = r.subspace_mass;
  j["frobenius_sq"] = r.frobenius_sq;
  j["frobenius_bound"] = r.frobenius_bound;
  j["typical_length_ok"] = r.typical_length_ok;
  j["length_ok"] = r.length_ok;
  j["frobenius_ok"] = r.frobenius_ok;
  j["transmission_inequality_ok"] = r.transmission_inequality_ok;
  return j;
}

Json to_json(const DecayFit& f) {
  Json j;
  j["epsilon"] = f.epsilon;
  j["n"] = f.ns;
  j["deviations"] = f.deviations;
  j["sigma2"] = f.sigma2;
  j["predicted_rate"] = f.predicted_rate;
  j["fitted_rate"] = optional_number(f.fitted_rate);
  return j;
}

Json to_json(const ReducedRelationsReport& r) {
  Json j;
  j["epsilon"] = r.epsilon;
  Json rows = Json::array();
  for (const auto& row : r.rows) rows.push_back(to_json(row));
  j["rows"] = std::move(rows);
  j["typical_decay"] = to_json(r.typical_decay);
  j["reduced_decay"] = to_json(r.reduced_decay);
  j["hard_relations_hold"] = r.hard_relations_hold;
  return j;
}

Json to_json(const RateDemo& d) {
  Json j;
  j["rate"] = d.rate;
  j["epsilon"] = d.epsilon;
  j["coherent_information"] = d.coherent_information;
  j["rate_condition"] = d.rate_condition;
  Json rows = Json::array();
  for (const auto& r : d.rows) {
    rows.push_back({{"n", r.n},
                    {"K_n", r.code_dim},
                    {"reduced_length", r.reduced_length},
                    {"transmission", r.transmission},
                    {"penalty", r.penalty},
                    {"bound", r.bound}});
  }
  j["rows"] = std::move(rows);
  Json ratios = Json::array();
  for (const auto& q : d.penalty_ratios) ratios.push_back(optional_number(q));
  j["penalty_ratios"] = std::move(ratios);
  j["penalty_decays"] = d.penalty_decays;
  j["penalty_grows"] = d.penalty_grows;
  return j;
}

}  // namespace qcap
