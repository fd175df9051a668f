#include "afc/run/run_config.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <map>

#include "afc/io_util.hpp"

namespace afc::run {

namespace {

std::string trim(std::string_view s) {
  const std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string_view::npos) return {};
  const std::size_t b = s.find_last_not_of(" \t\r");
  return std::string(s.substr(a, b - a + 1));
}

double to_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: bad number for '" + key + "': " + value);
  }
}

std::int64_t to_int(const std::string& key, const std::string& value) {
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || p != value.data() + value.size())
    throw ConfigError("config: bad integer for '" + key + "': " + value);
  return v;
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("config: bad boolean for '" + key + "': " + value);
}

}  // namespace

void RunConfig::validate() const {
  if (environment != "surrogate" && environment != "lbm")
    throw ConfigError("config: environment must be 'surrogate' or 'lbm'");
  if (n_sims < 1) throw ConfigError("config: n_sims must be >= 1");
  if (n_jets < 1) throw ConfigError("config: n_jets must be >= 1");
  if (n_probes < 1) throw ConfigError("config: n_probes must be >= 1");
  if (n_actions < 1) throw ConfigError("config: n_actions must be >= 1");
  if (episodes < 0) throw ConfigError("config: episodes must be >= 0");
  if (!(stats_window_cu > 0.0)) throw ConfigError("config: stats_window_cu must be > 0");
  weights.validate();
  ppo.validate();
  if (environment == "lbm") {
    if (n_jets != 1)
      throw ConfigError("config: the 2D lbm environment supports exactly one pseudo-env");
    flow.validate();
  } else {
    osc.validate();
  }
  if (worker_timeout_ms < 100) throw ConfigError("config: worker_timeout_ms too small");
  if (!(baseline_window_cu > 0.0) || baseline_transient_cu < 0.0)
    throw ConfigError("config: baseline windows must be positive");
}

RunConfig parse_run_config_text(const std::string& text) {
  RunConfig cfg;
  bool jets_cleared = false;

  std::map<std::string, std::function<void(const std::string&, const std::string&)>> setters;

  auto set_top = [&cfg](const std::string& k, const std::string& v) {
    if (k == "environment") cfg.environment = v;
    else if (k == "seed") cfg.seed = static_cast<std::uint64_t>(to_int(k, v));
    else if (k == "out") cfg.out_dir = v;
    else throw ConfigError("config: unknown key '" + k + "'");
  };
  setters[""] = set_top;

  setters["marl-harness"] = [&cfg](const std::string& k, const std::string& v) {
    if (k == "n_sims") cfg.n_sims = static_cast<int>(to_int(k, v));
    else if (k == "n_jets") cfg.n_jets = static_cast<int>(to_int(k, v));
    else if (k == "n_probes") cfg.n_probes = static_cast<int>(to_int(k, v));
    else if (k == "alpha") cfg.weights.alpha = to_double(k, v);
    else if (k == "beta") cfg.weights.beta = to_double(k, v);
    else if (k == "n_actions") cfg.n_actions = static_cast<int>(to_int(k, v));
    else if (k == "episodes") cfg.episodes = static_cast<int>(to_int(k, v));
    else if (k == "stats_window_cu") cfg.stats_window_cu = to_double(k, v);
    else if (k == "obs_scale") cfg.obs_scale = to_double(k, v);
    else if (k == "plateau_stop") cfg.plateau_stop = to_bool(k, v);
    else if (k == "plateau_improve") cfg.plateau_improve = to_double(k, v);
    else if (k == "plateau_lookback") cfg.plateau_lookback = static_cast<int>(to_int(k, v));
    else if (k == "plateau_window") cfg.plateau_window = static_cast<int>(to_int(k, v));
    else if (k == "min_episodes") cfg.min_episodes = static_cast<int>(to_int(k, v));
    else throw ConfigError("config: unknown key 'marl-harness." + k + "'");
  };

  setters["lbm-flow"] = [&cfg, &jets_cleared](const std::string& k, const std::string& v) {
    auto& f = cfg.flow;
    auto jet_pair = [&]() -> lbm::JetPairDef& {
      if (!jets_cleared) {
        f.jets.clear();
        f.jets.push_back({});
        jets_cleared = true;
      }
      return f.jets[0];
    };
    if (k == "reynolds") f.reynolds = to_double(k, v);
    else if (k == "inflow_speed") f.inflow_speed = to_double(k, v);
    else if (k == "chord_cells") f.chord_cells = static_cast<int>(to_int(k, v));
    else if (k == "nx") f.nx = static_cast<int>(to_int(k, v));
    else if (k == "ny") f.ny = static_cast<int>(to_int(k, v));
    else if (k == "aoa_deg") f.aoa_deg = to_double(k, v);
    else if (k == "obstacle") f.obstacle = lbm::obstacle_kind_from_name(v);
    else if (k == "center_x") f.center_x = to_double(k, v);
    else if (k == "center_y") f.center_y = to_double(k, v);
    else if (k == "init_perturbation") f.init_perturbation = to_double(k, v);
    else if (k == "jet_front_position") jet_pair().front.position = to_double(k, v);
    else if (k == "jet_front_width") jet_pair().front.width = to_double(k, v);
    else if (k == "jet_front_upper") jet_pair().front.upper_surface = to_bool(k, v);
    else if (k == "jet_rear_position") jet_pair().rear.position = to_double(k, v);
    else if (k == "jet_rear_width") jet_pair().rear.width = to_double(k, v);
    else if (k == "jet_rear_upper") jet_pair().rear.upper_surface = to_bool(k, v);
    else throw ConfigError("config: unknown key 'lbm-flow." + k + "'");
  };

  setters["surrogate-env"] = [&cfg](const std::string& k, const std::string& v) {
    auto& o = cfg.osc;
    if (k == "sigma") o.sigma = to_double(k, v);
    else if (k == "ell") o.ell = to_double(k, v);
    else if (k == "omega") o.omega = to_double(k, v);
    else if (k == "kappa") o.kappa = to_double(k, v);
    else if (k == "gain") o.gain = to_double(k, v);
    else if (k == "cd0") o.cd0 = to_double(k, v);
    else if (k == "c1") o.c1 = to_double(k, v);
    else if (k == "c2") o.c2 = to_double(k, v);
    else if (k == "dt") o.dt = to_double(k, v);
    else throw ConfigError("config: unknown key 'surrogate-env." + k + "'");
  };

  setters["ppo-agent"] = [&cfg](const std::string& k, const std::string& v) {
    auto& p = cfg.ppo;
    if (k == "hidden") p.hidden = static_cast<int>(to_int(k, v));
    else if (k == "clip_epsilon") p.clip_epsilon = to_double(k, v);
    else if (k == "gamma") p.gamma = to_double(k, v);
    else if (k == "gae_lambda") p.gae_lambda = to_double(k, v);
    else if (k == "learning_rate") p.learning_rate = to_double(k, v);
    else if (k == "epochs") p.epochs_per_update = static_cast<int>(to_int(k, v));
    else if (k == "minibatch") p.minibatch_size = static_cast<int>(to_int(k, v));
    else if (k == "entropy_coef") p.entropy_coefficient = to_double(k, v);
    else if (k == "value_coef") p.value_coefficient = to_double(k, v);
    else if (k == "max_grad_norm") p.max_grad_norm = to_double(k, v);
    else if (k == "initial_log_std") p.initial_log_std = to_double(k, v);
    else throw ConfigError("config: unknown key 'ppo-agent." + k + "'");
  };

  setters["exchange-bus"] = [&cfg](const std::string& k, const std::string& v) {
    if (k == "endpoint") cfg.bus_endpoint = v;
    else if (k == "worker_timeout_ms") cfg.worker_timeout_ms = to_int(k, v);
    else throw ConfigError("config: unknown key 'exchange-bus." + k + "'");
  };

  setters["cli"] = [&cfg](const std::string& k, const std::string& v) {
    if (k == "baseline_transient_cu") cfg.baseline_transient_cu = to_double(k, v);
    else if (k == "baseline_window_cu") cfg.baseline_window_cu = to_double(k, v);
    else if (k == "eval_horizon_cu") cfg.eval_horizon_cu = to_double(k, v);
    else if (k == "eval_transient_cu") cfg.eval_transient_cu = to_double(k, v);
    else if (k == "checkpoint_every") cfg.checkpoint_every = static_cast<int>(to_int(k, v));
    else throw ConfigError("config: unknown key 'cli." + k + "'");
  };

  std::string section;
  std::size_t start = 0;
  int line_no = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string line = trim(std::string_view(text).substr(start, end - start));
    start = end + 1;
    ++line_no;
    if (line.empty() || line[0] == '#' || line[0] == ';') {
      if (start > text.size()) break;
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config: bad section header on line " + std::to_string(line_no));
      section = trim(line.substr(1, line.size() - 2));
      if (setters.find(section) == setters.end())
        throw ConfigError("config: unknown section [" + section + "]");
      if (start > text.size()) break;
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: expected key = value on line " + std::to_string(line_no));
    const std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    const std::size_t comment = value.find_first_of("#;");
    if (comment != std::string::npos) value = trim(value.substr(0, comment));
    setters.at(section)(key, value);
    if (start > text.size()) break;
  }

  // mirror shared knobs into the flow config
  cfg.flow.n_probes = cfg.n_probes;
  cfg.flow.apply_default_jets();
  cfg.validate();
  return cfg;
}

RunConfig parse_run_config(const std::filesystem::path& path) {
  return parse_run_config_text(read_text_file(path));
}

std::string render_run_config(const RunConfig& c) {
  std::string s;
  auto kv = [&s](const std::string& k, const std::string& v) { s += k + " = " + v + "\n"; };
  auto kvd = [&](const std::string& k, double v) { kv(k, fmt_double(v)); };
  auto kvi = [&](const std::string& k, std::int64_t v) { kv(k, std::to_string(v)); };
  auto kvb = [&](const std::string& k, bool v) { kv(k, v ? "true" : "false"); };

  kv("environment", c.environment);
  kvi("seed", static_cast<std::int64_t>(c.seed));
  kv("out", c.out_dir);

  s += "\n[marl-harness]\n";
  kvi("n_sims", c.n_sims);
  kvi("n_jets", c.n_jets);
  kvi("n_probes", c.n_probes);
  kvd("alpha", c.weights.alpha);
  kvd("beta", c.weights.beta);
  kvi("n_actions", c.n_actions);
  kvi("episodes", c.episodes);
  kvd("stats_window_cu", c.stats_window_cu);
  kvd("obs_scale", c.obs_scale);
  kvb("plateau_stop", c.plateau_stop);
  kvd("plateau_improve", c.plateau_improve);
  kvi("plateau_lookback", c.plateau_lookback);
  kvi("plateau_window", c.plateau_window);
  kvi("min_episodes", c.min_episodes);

  s += "\n[lbm-flow]\n";
  kvd("reynolds", c.flow.reynolds);
  kvd("inflow_speed", c.flow.inflow_speed);
  kvi("chord_cells", c.flow.chord_cells);
  kvi("nx", c.flow.nx);
  kvi("ny", c.flow.ny);
  kvd("aoa_deg", c.flow.aoa_deg);
  kv("obstacle", lbm::obstacle_kind_name(c.flow.obstacle));
  kvd("center_x", c.flow.center_x);
  kvd("center_y", c.flow.center_y);
  kvd("init_perturbation", c.flow.init_perturbation);
  if (!c.flow.jets.empty()) {
    kvd("jet_front_position", c.flow.jets[0].front.position);
    kvd("jet_front_width", c.flow.jets[0].front.width);
    kvb("jet_front_upper", c.flow.jets[0].front.upper_surface);
    kvd("jet_rear_position", c.flow.jets[0].rear.position);
    kvd("jet_rear_width", c.flow.jets[0].rear.width);
    kvb("jet_rear_upper", c.flow.jets[0].rear.upper_surface);
  }

  s += "\n[surrogate-env]\n";
  kvd("sigma", c.osc.sigma);
  kvd("ell", c.osc.ell);
  kvd("omega", c.osc.omega);
  kvd("kappa", c.osc.kappa);
  kvd("gain", c.osc.gain);
  kvd("cd0", c.osc.cd0);
  kvd("c1", c.osc.c1);
  kvd("c2", c.osc.c2);
  kvd("dt", c.osc.dt);

  s += "\n[ppo-agent]\n";
  kvi("hidden", c.ppo.hidden);
  kvd("clip_epsilon", c.ppo.clip_epsilon);
  kvd("gamma", c.ppo.gamma);
  kvd("gae_lambda", c.ppo.gae_lambda);
  kvd("learning_rate", c.ppo.learning_rate);
  kvi("epochs", c.ppo.epochs_per_update);
  kvi("minibatch", c.ppo.minibatch_size);
  kvd("entropy_coef", c.ppo.entropy_coefficient);
  kvd("value_coef", c.ppo.value_coefficient);
  kvd("max_grad_norm", c.ppo.max_grad_norm);
  kvd("initial_log_std", c.ppo.initial_log_std);

  s += "\n[exchange-bus]\n";
  kv("endpoint", c.bus_endpoint);
  kvi("worker_timeout_ms", c.worker_timeout_ms);

  s += "\n[cli]\n";
  kvd("baseline_transient_cu", c.baseline_transient_cu);
  kvd("baseline_window_cu", c.baseline_window_cu);
  kvd("eval_horizon_cu", c.eval_horizon_cu);
  kvd("eval_transient_cu", c.eval_transient_cu);
  kvi("checkpoint_every", c.checkpoint_every);
  return s;
}

void write_resolved_config(const RunConfig& config, const std::filesystem::path& path) {
  write_text_file(path, render_run_config(config));
}

}  // namespace afc::run
