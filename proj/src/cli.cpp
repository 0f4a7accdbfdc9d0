#include "qcap/cli.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "qcap/errors.hpp"

namespace qcap::cli {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw InputError(msg);
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::vector<double> parse_weights(const std::string& text) {
  std::vector<double> w;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      w.push_back(std::stod(item, &used));
      require(used == item.size(), "cannot parse distribution weight '" + item + "'");
    } catch (const std::logic_error&) {
      throw InputError("cannot parse distribution weight '" + item + "'");
    }
  }
  require(!w.empty(), "distribution must list at least one weight");
  return w;
}

Json formulas(const std::string& command) {
  if (command == "info") {
    return {{"coherent_information", "I(pi, N) = S(N(pi)) - S_e(pi, N)"},
            {"unital", "||N(pi_Q) - pi_Q'||_1 <= 1e-9"}};
  }
  if (command == "bound") {
    return {{"bound_kraus", "p - ||D||_1 with D_ij = P^dag A_i^dag A_j P / K - tr(.) I / K^2"},
            {"bound_states", "p - p ||rho'_RE - rho_R (x) rho'_E||_1"}};
  }
  if (command == "ensemble") {
    return {{"exact_d2", "(1 - K^-2)/(M^2 - 1) sum_ij (tr W_ij^dag W_ij - |tr W_ij|^2 / M)"},
            {"upper_d2", "||N(pi)||_F^2"},
            {"averaged_bound", "tr N(pi) - sqrt(K |N|) ||N(pi)||_F"},
            {"jensen_majorant", "sqrt(K |N| <||D||_F^2>)"}};
  }
  if (command == "moments") {
    return {{"abs_u11_pow4", "2 / (M^2 + M)"},
            {"abs_u11_sq_abs_u12_sq", "1 / (M^2 + M)"},
            {"code_overlap_sq", "(1 + 1/K) / (M^2 + M)"}};
  }
  if (command == "typicality") {
    return {{"count_bound", "2^{n (H + eps)}"},
            {"length_bound", "2^{n (S_e(pi, N) + eps)}"},
            {"frobenius_bound", "2^{-n (S(N(pi)) - 3 eps)}"},
            {"predicted_rate", "eps^2 / (2 sigma^2)"}};
  }
  return {{"bound", "tr N~(pi_n) - sqrt(K_n |N~|) ||N~(pi_n)||_F"},
          {"K_n", "floor(2^{n R})"},
          {"rate_condition", "R + 4 eps < I(pi, N)"},
          {"hamming_bound", "1 - (2^R |U| / |Q'|)^{n/2}"}};
}

Json cmd_info(const RunConfig& c) {
  const KrausChannel ch = resolve_channel(c.channel, c.seed);
  Json j;
  j["channel"] = {{"name", ch.name()},
                  {"input_dim", ch.input_dim()},
                  {"output_dim", ch.output_dim()},
                  {"kraus_count", ch.size()}};
  j["info"] = to_json(classify(ch));
  return j;
}

Json cmd_bound(const RunConfig& c) {
  const KrausChannel ch = resolve_channel(c.channel, c.seed);
  const Index m = ch.input_dim();
  require(*c.code_dim <= m, "code dimension exceeds channel input dimension");
  const KrausChannel minimal = minimize_kraus(ch);
  Json rows = Json::array();
  for (std::uint64_t i = 0; i < *c.samples; ++i) {
    RngStream rng(c.seed, i, StreamDomain::kSamples);
    const CodeSubspace code = sample_code(m, *c.code_dim, rng);
    Json row = to_json(fidelity_bounds(code, minimal));
    row["sample"] = i;
    rows.push_back(std::move(row));
  }
  return {{"length", minimal.size()}, {"rows", std::move(rows)}};
}

Json cmd_ensemble(const RunConfig& c) {
  const KrausChannel ch = resolve_channel(c.channel, c.seed);
  const EnsembleSpec spec{ch.input_dim(), *c.code_dim, *c.samples, c.seed};
  return to_json(run_ensemble(ch, spec, c.threads));
}

Json cmd_moments(const RunConfig& c) {
  return to_json(haar_moment_suite(*c.dim, *c.code_dim, *c.samples, c.seed, c.threads));
}

Json cmd_typicality(const RunConfig& c) {
  if (!c.distribution.empty()) {
    const ProbabilityDistribution p(parse_weights(c.distribution));
    Json rows = Json::array();
    for (int n = *c.n_min; n <= *c.n_max; ++n) {
      rows.push_back(to_json(typical_sequences(TypicalSetSpec{p, n, *c.epsilon})));
    }
    return {{"rows", std::move(rows)},
            {"decay", to_json(typical_sequence_decay(p, *c.epsilon, *c.n_min, *c.n_max))}};
  }
  const KrausChannel ch = resolve_channel(c.channel, c.seed);
  return to_json(verify_reduced_relations(ch, *c.n_min, *c.n_max, *c.epsilon));
}

Json cmd_rate_demo(const RunConfig& c) {
  const KrausChannel ch = resolve_channel(c.channel, c.seed);
  Json j = to_json(achievable_rate_demo(ch, *c.rate, *c.epsilon, *c.n_min, *c.n_max));
  if (classify(ch).is_unital) {
    j["hamming"] = to_json(hamming_rate_curve(ch, *c.rate, *c.n_min, *c.n_max));
  } else {
    j["hamming"] = nullptr;
  }
  return j;
}

std::string csv_cell(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_number()) return v.dump();
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
  }
  return "\"" + v.dump() + "\"";
}

void flatten(const Json& v, const std::string& prefix, std::ostringstream& os) {
  if (v.is_object()) {
    for (const auto& [k, item] : v.items()) {
      flatten(item, prefix.empty() ? k : prefix + "." + k, os);
    }
  } else if (v.is_array() && !v.empty() && (v[0].is_object() || v[0].is_array())) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      flatten(v[i], prefix + "." + std::to_string(i), os);
    }
  } else if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      os << prefix << "." << i << "," << csv_cell(v[i]) << "\n";
    }
  } else {
    os << prefix << "," << csv_cell(v) << "\n";
  }
}

}  // namespace

RunConfig resolve(RunConfig c) {
  static const std::vector<std::string> commands = {"info",     "bound",      "ensemble",
                                                    "moments",  "typicality", "rate-demo"};
  require(std::find(commands.begin(), commands.end(), c.command) != commands.end(),
          "unknown subcommand '" + c.command + "'");
  require(c.format == "json" || c.format == "csv", "format must be json or csv");
  require(c.threads >= 1, "threads must be >= 1");
  const bool typicality_dist = c.command == "typicality" && !c.distribution.empty();
  if (c.command != "moments" && !typicality_dist) {
    require(!c.channel.empty(), c.command + " needs --channel");
  }
  if (c.command == "bound" || c.command == "ensemble") {
    require(c.code_dim.has_value(), c.command + " needs --code-dim");
    require(*c.code_dim >= 1, "code dimension must be >= 1");
    if (!c.samples) c.samples = c.command == "bound" ? 1 : 10000;
  }
  if (c.command == "moments") {
    if (!c.dim) {
      require(!c.channel.empty(), "moments needs --dim or --channel");
      c.dim = resolve_channel(c.channel, c.seed).input_dim();
    }
    if (!c.code_dim) c.code_dim = *c.dim;
    if (!c.samples) c.samples = 100000;
  }
  if (c.command == "typicality") {
    if (!c.epsilon) c.epsilon = 0.1;
    if (!c.n_min) c.n_min = 1;
    if (!c.n_max) c.n_max = 10;
  }
  if (c.command == "rate-demo") {
    require(c.rate.has_value(), "rate-demo needs --rate");
    if (!c.epsilon) c.epsilon = 0.01;
    if (!c.n_min) c.n_min = 2;
    if (!c.n_max) c.n_max = 10;
  }
  if (c.n_min && c.n_max) require(*c.n_min >= 1 && *c.n_max >= *c.n_min, "bad n range");
  if (c.samples) require(*c.samples >= 1, "samples must be >= 1");
  return c;
}

Json config_to_json(const RunConfig& c) {
  auto opt = [](const auto& v) { return v ? Json(*v) : Json(nullptr); };
  Json j;
  j["command"] = c.command;
  j["channel"] = c.channel.empty() ? Json(nullptr) : Json(c.channel);
  j["distribution"] = c.distribution.empty() ? Json(nullptr) : Json(c.distribution);
  j["code_dim"] = opt(c.code_dim);
  j["dim"] = opt(c.dim);
  j["rate"] = opt(c.rate);
  j["n_min"] = opt(c.n_min);
  j["n_max"] = opt(c.n_max);
  j["epsilon"] = opt(c.epsilon);
  j["samples"] = opt(c.samples);
  j["seed"] = c.seed;
  j["format"] = c.format;
  return j;
}

Json execute(const RunConfig& raw) {
  const RunConfig c = resolve(raw);
  Json report;
  report["config"] = config_to_json(c);
  report["formulas"] = formulas(c.command);
  if (c.command == "info") report["result"] = cmd_info(c);
  if (c.command == "bound") report["result"] = cmd_bound(c);
  if (c.command == "ensemble") report["result"] = cmd_ensemble(c);
  if (c.command == "moments") report["result"] = cmd_moments(c);
  if (c.command == "typicality") report["result"] = cmd_typicality(c);
  if (c.command == "rate-demo") report["result"] = cmd_rate_demo(c);
  report["run"] = {{"timestamp", utc_timestamp()}, {"threads", c.threads}};
  return report;
}

Json canonical(Json report) {
  report.erase("run");
  return report;
}

std::string to_csv(const Json& report) {
  std::ostringstream os;
  const Json& result = report.at("result");
  const std::string command = report.at("config").at("command").get<std::string>();
  if (command == "rate-demo") {
    os << "n,K_n,reduced_length,transmission,penalty,bound\n";
    for (const auto& r : result.at("rows")) {
      os << csv_cell(r["n"]) << "," << csv_cell(r["K_n"]) << "," << csv_cell(r["reduced_length"])
         << "," << csv_cell(r["transmission"]) << "," << csv_cell(r["penalty"]) << ","
         << csv_cell(r["bound"]) << "\n";
    }
    return os.str();
  }
  if (result.contains("rows") && result["rows"].is_array() && !result["rows"].empty()) {
    const auto& rows = result["rows"];
    bool first = true;
    for (const auto& [k, v] : rows[0].items()) {
      os << (first ? "" : ",") << k;
      first = false;
    }
    os << "\n";
    for (const auto& r : rows) {
      first = true;
      for (const auto& [k, v] : r.items()) {
        os << (first ? "" : ",") << csv_cell(v);
        first = false;
      }
      os << "\n";
    }
    return os.str();
  }
  os << "key,value\n";
  flatten(result, "", os);
  return os.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"qcap: code-fidelity bounds, Haar ensembles and typical-subspace reductions", "qcap"};
  app.require_subcommand(1);
  RunConfig c;
  Index code_dim = 0;
  Index dim = 0;
  double rate = 0.0;
  double epsilon = 0.0;
  int n_min = 0;
  int n_max = 0;
  std::uint64_t samples = 0;

  const std::vector<std::pair<std::string, std::string>> subs = {
      {"info", "channel classification and entropies"},
      {"bound", "fidelity lower bounds for sampled Haar codes"},
      {"ensemble", "Monte Carlo over Haar codes against closed forms"},
      {"moments", "Haar moment checks"},
      {"typicality", "typical sequences or reduced-channel relations"},
      {"rate-demo", "achievable-rate table"}};
  std::vector<std::pair<CLI::App*, std::vector<CLI::Option*>>> handles;
  for (const auto& [name, help] : subs) {
    CLI::App* s = app.add_subcommand(name, help);
    std::vector<CLI::Option*> opts;
    s->add_option("--channel", c.channel, "channel JSON file or builtin:name:params");
    s->add_option("--distribution", c.distribution, "comma-separated weights");
    opts.push_back(s->add_option("--code-dim", code_dim, "code dimension K"));
    opts.push_back(s->add_option("--dim", dim, "ambient dimension M"));
    opts.push_back(s->add_option("--rate", rate, "rate R in qubits per use"));
    opts.push_back(s->add_option("--n-min", n_min, "smallest block length"));
    opts.push_back(s->add_option("--n-max", n_max, "largest block length"));
    opts.push_back(s->add_option("--epsilon", epsilon, "typicality epsilon"));
    opts.push_back(s->add_option("--samples", samples, "Monte Carlo sample count"));
    s->add_option("--seed", c.seed, "master seed")->required();
    s->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    s->add_option("--out", c.out, "output path (default stdout)");
    s->add_option("--threads", c.threads, "worker threads");
    s->add_flag("--canonical", c.canonical, "omit the run block");
    handles.push_back({s, opts});
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "qcap: " << e.what() << "\n";
    return kInputError;
  }

  for (const auto& [s, opts] : handles) {
    if (!s->parsed()) continue;
    c.command = s->get_name();
    if (opts[0]->count()) c.code_dim = code_dim;
    if (opts[1]->count()) c.dim = dim;
    if (opts[2]->count()) c.rate = rate;
    if (opts[3]->count()) c.n_min = n_min;
    if (opts[4]->count()) c.n_max = n_max;
    if (opts[5]->count()) c.epsilon = epsilon;
    if (opts[6]->count()) c.samples = samples;
  }

  try {
    Json report = execute(c);
    if (c.canonical) report = canonical(std::move(report));
    const std::string text = c.format == "csv" ? to_csv(report) : report.dump(2) + "\n";
    if (c.out.empty()) {
      out << text;
    } else {
      std::ofstream f(c.out);
      if (!f) throw InputError("cannot write '" + c.out + "'");
      f << text;
    }
    return kOk;
  } catch (const InputError& e) {
    err << "qcap: input error: " << e.what() << "\n";
    return kInputError;
  } catch (const DomainError& e) {
    err << "qcap: domain error: " << e.what() << "\n";
    return kDomainError;
  } catch (const ResourceLimitError& e) {
    err << "qcap: resource limit: " << e.what() << "\n";
    return kResourceError;
  } catch (const std::exception& e) {
    err << "qcap: " << e.what() << "\n";
    return kUnexpected;
  }
}

}  // namespace qcap::cli
