#include "whittle_access/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>

#include "whittle/whittle.hpp"

namespace whittle::cli {

namespace {

using nlohmann::json;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string source = "none";
  std::vector<ChannelModel> channels;
  int K = 1;
  Criterion criterion = Discounted{0.9};
  std::vector<BeliefState> initial_beliefs;
  int horizon = 1000;
  int replications = 1000;
  std::uint64_t seed = 1;
  double epsilon = 1e-3;
  std::vector<PolicyKind> policies{PolicyKind::kWhittle, PolicyKind::kMyopic};
  std::string output;
  std::string format = "csv";
  std::optional<RegimeSwitch> regime_switch;
};

struct Options {
  std::string config_path;
  std::string preset;
  std::string out;
  std::optional<int> grid;
  std::optional<double> epsilon;
  std::optional<std::uint64_t> seed;
  std::string policies;
};

// ---------------------------------------------------------------- config

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

double number(const json& obj, const std::string& key, const std::string& where) {
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ConfigError("'" + key + "' in " + where + " must be a number");
  return v.get<double>();
}

long long integer(const json& obj, const std::string& key) {
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError("'" + key + "' must be an integer");
  return v.get<long long>();
}

std::vector<PolicyKind> parse_policy_list(const std::vector<std::string>& names) {
  std::vector<PolicyKind> out;
  for (const auto& n : names) {
    const auto p = parse_policy(n);
    if (!p) throw ConfigError("unknown policy '" + n + "'");
    out.push_back(*p);
  }
  if (out.empty()) throw ConfigError("policy list is empty");
  return out;
}

Criterion parse_criterion(const json& c) {
  if (c.is_string()) {
    if (c == "average") return Average{};
    throw ConfigError("criterion must be {\"kind\": \"discounted\", \"beta\": b} or {\"kind\": \"average\"}");
  }
  if (!c.is_object() || !c.contains("kind") || !c["kind"].is_string()) {
    throw ConfigError("criterion must be an object with a 'kind'");
  }
  const auto kind = c["kind"].get<std::string>();
  if (kind == "average") {
    reject_unknown(c, {"kind"}, "criterion");
    return Average{};
  }
  if (kind == "discounted") {
    reject_unknown(c, {"kind", "beta"}, "criterion");
    if (!c.contains("beta")) throw ConfigError("discounted criterion needs 'beta'");
    const double beta = number(c, "beta", "criterion");
    if (!(beta >= 0.0 && beta < 1.0)) throw ConfigError("beta must lie in [0, 1)");
    return Discounted{beta};
  }
  throw ConfigError("unknown criterion kind '" + kind + "'");
}

RunConfig parse_config(const json& doc, const std::string& source) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown(doc,
                 {"channels", "K", "criterion", "initial_beliefs", "horizon", "replications", "seed", "epsilon",
                  "policies", "output", "format"},
                 "config");
  RunConfig cfg;
  cfg.source = source;
  if (!doc.contains("channels") || !doc["channels"].is_array() || doc["channels"].empty()) {
    throw ConfigError("'channels' must be a non-empty array");
  }
  for (const auto& ch : doc["channels"]) {
    if (!ch.is_object()) throw ConfigError("each channel must be an object");
    reject_unknown(ch, {"p01", "p11", "bandwidth"}, "channel");
    if (!ch.contains("p01") || !ch.contains("p11")) throw ConfigError("each channel needs 'p01' and 'p11'");
    const double bw = ch.contains("bandwidth") ? number(ch, "bandwidth", "channel") : 1.0;
    cfg.channels.push_back(validate_channel(number(ch, "p01", "channel"), number(ch, "p11", "channel"), bw));
  }
  if (doc.contains("K")) cfg.K = static_cast<int>(integer(doc, "K"));
  if (cfg.K < 1 || static_cast<std::size_t>(cfg.K) > cfg.channels.size()) throw ConfigError("K must lie in [1, N]");
  if (doc.contains("criterion")) cfg.criterion = parse_criterion(doc["criterion"]);
  if (doc.contains("initial_beliefs")) {
    const auto& b = doc["initial_beliefs"];
    if (!b.is_array() || b.size() != cfg.channels.size()) {
      throw ConfigError("'initial_beliefs' must list one belief per channel");
    }
    for (const auto& w : b) {
      if (!w.is_number() || w.get<double>() < 0.0 || w.get<double>() > 1.0) {
        throw ConfigError("initial beliefs must be numbers in [0, 1]");
      }
      cfg.initial_beliefs.push_back(w.get<double>());
    }
  }
  if (doc.contains("horizon")) cfg.horizon = static_cast<int>(integer(doc, "horizon"));
  if (cfg.horizon < 1) throw ConfigError("horizon must be positive");
  if (doc.contains("replications")) cfg.replications = static_cast<int>(integer(doc, "replications"));
  if (cfg.replications < 1) throw ConfigError("replications must be positive");
  if (doc.contains("seed")) {
    const auto& s = doc["seed"];
    if (!s.is_number_unsigned()) throw ConfigError("'seed' must be a nonnegative integer");
    cfg.seed = s.get<std::uint64_t>();
  }
  if (doc.contains("epsilon")) cfg.epsilon = number(doc, "epsilon", "config");
  if (!(cfg.epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  if (doc.contains("policies")) {
    const auto& p = doc["policies"];
    if (!p.is_array()) throw ConfigError("'policies' must be an array of names");
    std::vector<std::string> names;
    for (const auto& n : p) {
      if (!n.is_string()) throw ConfigError("policy names must be strings");
      names.push_back(n.get<std::string>());
    }
    cfg.policies = parse_policy_list(names);
  }
  if (doc.contains("output")) {
    if (!doc["output"].is_string()) throw ConfigError("'output' must be a path string");
    cfg.output = doc["output"].get<std::string>();
  }
  if (doc.contains("format")) {
    if (doc["format"] != "csv" && doc["format"] != "json") throw ConfigError("'format' must be \"csv\" or \"json\"");
    cfg.format = doc["format"].get<std::string>();
  }
  return cfg;
}

RunConfig from_preset(const Preset& p) {
  RunConfig cfg;
  cfg.source = p.name;
  cfg.channels = p.channels;
  cfg.K = p.K;
  cfg.criterion = p.criterion;
  cfg.initial_beliefs = p.initial_beliefs;
  cfg.horizon = p.horizon;
  cfg.replications = p.replications;
  cfg.seed = p.seed;
  cfg.epsilon = p.epsilon;
  cfg.policies = p.policies;
  cfg.regime_switch = p.regime_switch;
  return cfg;
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

RunConfig load(const Options& opt) {
  if (!opt.config_path.empty() && !opt.preset.empty()) throw ConfigError("--config and --preset are exclusive");
  RunConfig cfg;
  if (!opt.preset.empty()) {
    try {
      cfg = from_preset(find_preset(opt.preset));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  } else if (!opt.config_path.empty()) {
    std::ifstream in(opt.config_path);
    if (!in) throw ConfigError("cannot open config " + opt.config_path);
    json doc;
    try {
      doc = json::parse(in);
    } catch (const json::exception& e) {
      throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    cfg = parse_config(doc, "config:" + opt.config_path);
  } else {
    throw ConfigError("one of --config or --preset is required");
  }
  if (opt.epsilon) {
    if (!(*opt.epsilon > 0.0)) throw ConfigError("--epsilon must be positive");
    cfg.epsilon = *opt.epsilon;
  }
  if (opt.seed) cfg.seed = *opt.seed;
  if (!opt.policies.empty()) cfg.policies = parse_policy_list(split_commas(opt.policies));
  if (!opt.out.empty()) cfg.output = opt.out;
  if (cfg.output.size() >= 5 && cfg.output.ends_with(".json")) cfg.format = "json";
  if (cfg.output.size() >= 4 && cfg.output.ends_with(".csv")) cfg.format = "csv";
  return cfg;
}

// ---------------------------------------------------------------- output

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;
  std::vector<std::pair<std::string, json>> meta;  ///< extra provenance fields
};

std::string csv_field(const json& v) {
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

json provenance(const RunConfig& cfg, const std::string& command, const Table& t) {
  json p = {{"preset", cfg.source}, {"seed", cfg.seed}, {"command", command}};
  for (const auto& [k, v] : t.meta) p[k] = v;
  return p;
}

void write_table(const RunConfig& cfg, const std::string& command, const Table& t, std::ostream& os) {
  if (cfg.format == "json") {
    json doc;
    doc["provenance"] = provenance(cfg, command, t);
    doc["columns"] = t.columns;
    doc["rows"] = json::array();
    for (const auto& r : t.rows) doc["rows"].push_back(r);
    os << doc.dump(2) << "\n";
    return;
  }
  os << "# preset=" << cfg.source << " seed=" << cfg.seed << " command=" << command;
  for (const auto& [k, v] : t.meta) os << " " << k << "=" << (v.is_string() ? v.get<std::string>() : v.dump());
  os << "\r\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << csv_field(t.columns[i]);
  os << "\r\n";
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << csv_field(r[i]);
    os << "\r\n";
  }
}

void emit(const RunConfig& cfg, const std::string& command, const Table& t, std::ostream& out) {
  if (cfg.output.empty()) {
    write_table(cfg, command, t, out);
    return;
  }
  std::ofstream f(cfg.output, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + cfg.output);
  write_table(cfg, command, t, f);
}

std::string criterion_label(const Criterion& c) { return describe(c); }

// ---------------------------------------------------------------- commands

Table cmd_index(const RunConfig& cfg, int grid) {
  if (grid < 2) throw ConfigError("--grid must be at least 2");
  Table t{{"channel_id", "omega", "W"}, {}, {{"criterion", criterion_label(cfg.criterion)}}};
  for (std::size_t i = 0; i < cfg.channels.size(); ++i) {
    for (int g = 0; g < grid; ++g) {
      const double w = static_cast<double>(g) / (grid - 1);
      t.rows.push_back({i + 1, w, whittle_index(cfg.channels[i], cfg.criterion, w)});
    }
  }
  return t;
}

BoundResult compute_bound(const RunConfig& cfg, int K) {
  BoundRequest req{cfg.channels, K, cfg.criterion, cfg.initial_beliefs, cfg.epsilon};
  return upper_bound(req);
}

Table cmd_bound(const RunConfig& cfg) {
  const BoundResult r = compute_bound(cfg, cfg.K);
  return {{"m_star", "value", "exact", "criterion", "epsilon"},
          {{r.m_star, r.value, r.exact, criterion_label(r.criterion), cfg.epsilon}},
          {}};
}

SimConfig sim_config(const RunConfig& cfg, PolicyKind policy, int K) {
  SimConfig s;
  s.channels = cfg.channels;
  s.K = K;
  s.policy = policy;
  s.criterion = cfg.criterion;
  s.horizon = cfg.horizon;
  s.replications = cfg.replications;
  s.seed = cfg.seed;
  s.initial_beliefs = cfg.initial_beliefs;
  s.regime_switch = cfg.regime_switch;
  return s;
}

Table cmd_simulate(const RunConfig& cfg) {
  Table t{{"policy", "criterion", "K", "horizon", "replications", "mean", "se", "truncation_bound"}, {}, {}};
  for (PolicyKind p : cfg.policies) {
    const SimResult r = simulate(sim_config(cfg, p, cfg.K));
    t.rows.push_back({std::string(policy_name(p)), criterion_label(cfg.criterion), cfg.K, cfg.horizon,
                      cfg.replications, r.mean, r.std_error, r.truncation_bound});
  }
  if (!cfg.regime_switch) {
    const BoundResult b = compute_bound(cfg, cfg.K);
    t.rows.push_back({"bound", criterion_label(cfg.criterion), cfg.K, cfg.horizon, cfg.replications, b.value, 0.0, 0.0});
  }
  return t;
}

struct Check {
  std::size_t channel;
  std::string name;
  double metric;
  double limit;
};

Table cmd_verify(const RunConfig& cfg, std::optional<int> grid, bool& all_passed) {
  const auto* d = std::get_if<Discounted>(&cfg.criterion);
  const double beta = d ? d->beta : 0.9;
  const double step = grid ? 1.0 / std::max(1, *grid) : 1e-2;
  std::vector<Check> checks;
  for (std::size_t i = 0; i < cfg.channels.size(); ++i) {
    const ChannelModel& ch = cfg.channels[i];
    const auto report = verify_indexability(ch, beta, step);
    checks.push_back({i, "indexability", report.max_violation, 1e-9});

    double worst = 0.0;
    for (int wi = 0; wi <= 10; ++wi) {
      const double w = wi / 10.0;
      ValueIterationOracle oracle(ch, beta, w, 1e-10);
      for (int mi = 0; mi <= 10; ++mi) {
        const double m = -0.1 + (ch.bandwidth() + 0.2) * mi / 10.0;
        const double closed = evaluate_arm({ch, m, Discounted{beta}}, w).value;
        worst = std::max(worst, std::fabs(closed - oracle.solve(m)));
      }
    }
    checks.push_back({i, "oracle_value", worst, 1e-6});

    if (!d) {
      double gap = 0.0;
      for (int wi = 0; wi <= 100; ++wi) {
        const double w = wi / 100.0;
        gap = std::max(gap, std::fabs(index_average(ch, w) - index_discounted(ch, 0.9999, w)));
      }
      checks.push_back({i, "average_limit", gap, 1e-2});
    }
  }
  Table t{{"channel_id", "check", "metric", "limit", "passed"}, {}, {{"beta", beta}}};
  all_passed = true;
  for (const auto& c : checks) {
    const bool ok = c.metric <= c.limit;
    all_passed = all_passed && ok;
    t.rows.push_back({c.channel + 1, c.name, c.metric, c.limit, ok});
  }
  return t;
}

Table figure_fig2(const RunConfig& cfg) {
  Table t{{"policy", "horizon", "mean", "se"}, {}, {{"criterion", criterion_label(cfg.criterion)}}};
  const BoundResult b = compute_bound(cfg, cfg.K);
  for (int h : {cfg.horizon / 10, cfg.horizon / 2, cfg.horizon}) {
    RunConfig c = cfg;
    c.horizon = std::max(h, 1);
    for (PolicyKind p : cfg.policies) {
      const SimResult r = simulate(sim_config(c, p, cfg.K));
      t.rows.push_back({std::string(policy_name(p)), c.horizon, r.mean, r.std_error});
    }
    t.rows.push_back({"bound", c.horizon, b.value, 0.0});
  }
  return t;
}

Table figure_fig8(const RunConfig& cfg, int grid) {
  BoundRequest req{cfg.channels, cfg.K, cfg.criterion, cfg.initial_beliefs, cfg.epsilon};
  const BoundResult b = upper_bound(req);
  Table t{{"m", "G", "subgradient"},
          {},
          {{"m_star", b.m_star}, {"value", b.value}, {"exact", b.exact}, {"epsilon", cfg.epsilon}}};
  double top = 0.0;
  for (const auto& ch : cfg.channels) top = std::max(top, ch.bandwidth());
  for (int g = 0; g < grid; ++g) {
    const double m = top * g / (grid - 1);
    t.rows.push_back({m, relaxed_objective(req, m), bound_subgradient(req, m)});
  }
  return t;
}

Table figure_fig9(const RunConfig& cfg) {
  Table t{{"K", "policy", "mean", "se"}, {}, {{"criterion", criterion_label(cfg.criterion)}}};
  for (int K = 1; K <= static_cast<int>(cfg.channels.size()); ++K) {
    for (PolicyKind p : cfg.policies) {
      const SimResult r = simulate(sim_config(cfg, p, K));
      t.rows.push_back({K, std::string(policy_name(p)), r.mean, r.std_error});
    }
    t.rows.push_back({K, "bound", compute_bound(cfg, K).value, 0.0});
  }
  return t;
}

Table figure_fig11(const RunConfig& cfg) {
  Table t{{"correlation", "K", "eta_lower", "lower", "upper", "simulated", "se", "ratio_to_bound"}, {}, {}};
  const ChannelModel& base = cfg.channels.front();
  const int n = static_cast<int>(cfg.channels.size());
  // The preset's channel and its mirror image cover both correlation signs.
  for (const ChannelModel& ch : {base, ChannelModel(base.p11(), base.p01(), base.bandwidth())}) {
    RunConfig c = cfg;
    c.channels.assign(cfg.channels.size(), ch);
    for (int K = 1; K <= n; ++K) {
      const IdenticalBounds ib = identical_channel_bounds(ch, n, K);
      const SimResult r = simulate(sim_config(c, PolicyKind::kQueue, K));
      const double relaxed = upper_bound_average(c.channels, K, cfg.epsilon).value;
      t.rows.push_back({ch.positively_correlated() ? "positive" : "negative", K, ib.eta_lower, ib.lower, ib.upper,
                        r.mean, r.std_error, r.mean / relaxed});
    }
  }
  return t;
}

Table figure_fig12(const RunConfig& cfg) {
  Table t{{"t", "policy", "mean_cumulative_reward", "se"}, {}, {}};
  if (cfg.regime_switch) t.meta.push_back({"switch_slot", cfg.regime_switch->at_slot});
  for (PolicyKind p : cfg.policies) {
    // Cumulative reward up to slot t is a finite-horizon total; run one
    // simulation per prefix length with common random numbers.
    for (int h = 1; h <= cfg.horizon; ++h) {
      RunConfig c = cfg;
      c.horizon = h;
      SimConfig s = sim_config(c, p, cfg.K);
      s.criterion = Average{};
      s.burn_in_fraction = 0.0;
      const SimResult r = simulate(s);
      t.rows.push_back({h, std::string(policy_name(p)), r.mean * h, r.std_error * h});
    }
  }
  return t;
}

Table cmd_figure(const RunConfig& cfg, const std::string& preset, std::optional<int> grid) {
  if (preset == "fig2") return figure_fig2(cfg);
  if (preset == "fig8") return figure_fig8(cfg, grid.value_or(201));
  if (preset == "fig9") return figure_fig9(cfg);
  if (preset == "fig11") return figure_fig11(cfg);
  if (preset == "fig12") return figure_fig12(cfg);
  throw ConfigError("figure needs one of --preset fig2|fig8|fig9|fig11|fig12");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Whittle index policy for multichannel access: indices, bounds and simulations", "whittle-access"};
  app.require_subcommand(1);
  Options opt;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "JSON run configuration");
    sub->add_option("--preset", opt.preset, "built-in parameter set (fig2, fig8, fig9, fig11, fig12)");
    sub->add_option("--out", opt.out, "output file (.csv or .json); stdout when absent");
    sub->add_option("--grid", opt.grid, "grid size (index: omega points; figure fig8: m points; verify: 1/step)");
    sub->add_option("--epsilon", opt.epsilon, "bound accuracy");
    sub->add_option("--seed", opt.seed, "random seed (overrides the config)");
    sub->add_option("--policies", opt.policies, "comma-separated policies: whittle,myopic,queue,optimal-oracle,random");
  };
  auto* index = app.add_subcommand("index", "emit W(omega) over an omega grid per channel");
  auto* bound = app.add_subcommand("bound", "relaxation upper bound");
  auto* sim = app.add_subcommand("simulate", "Monte Carlo policy comparison");
  auto* verify = app.add_subcommand("verify", "indexability and oracle-equivalence report");
  auto* figure = app.add_subcommand("figure", "regenerate a figure's data table from a preset");
  for (auto* s : {index, bound, sim, verify, figure}) add_common(s);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    const RunConfig cfg = load(opt);
    if (index->parsed()) {
      emit(cfg, "index", cmd_index(cfg, opt.grid.value_or(101)), out);
    } else if (bound->parsed()) {
      emit(cfg, "bound", cmd_bound(cfg), out);
    } else if (sim->parsed()) {
      emit(cfg, "simulate", cmd_simulate(cfg), out);
    } else if (verify->parsed()) {
      bool passed = false;
      emit(cfg, "verify", cmd_verify(cfg, opt.grid, passed), out);
      if (!passed) return kCheckFailed;
    } else if (figure->parsed()) {
      emit(cfg, "figure", cmd_figure(cfg, opt.preset, opt.grid), out);
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const InvalidChannel& e) {
    err << "invalid channel: " << e.what() << "\n";
    return kNumericGuard;
  } catch (const TooLarge& e) {
    err << "too large: " << e.what() << "\n";
    return kTooLarge;
  } catch (const NotIdentical& e) {
    err << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kCheckFailed;
  }
  return kOk;
}

}  // namespace whittle::cli
