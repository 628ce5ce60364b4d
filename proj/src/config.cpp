#include "deeptraj/config.hpp"

#include <charconv>

#include "deeptraj/error.hpp"
#include "deeptraj/io.hpp"
#include "deeptraj/rng.hpp"

namespace deeptraj {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <typename Int>
Int parse_int(std::string_view text, std::string_view key) {
  Int v{};
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  require(res.ec == std::errc() && res.ptr == text.data() + text.size() && !text.empty(),
          ErrorKind::InvalidArgument, std::string(key) + ": '" + std::string(text) + "' is not a non-negative integer");
  return v;
}

double parse_real(std::string_view text, std::string_view key) {
  try {
    return parse_double(text, std::string(key));
  } catch (const Error& e) {
    throw Error(ErrorKind::InvalidArgument, e.what());
  }
}

bool parse_bool(std::string_view text, std::string_view key) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw Error(ErrorKind::InvalidArgument, std::string(key) + ": '" + std::string(text) + "' is not a boolean");
}

std::vector<std::string> parse_list(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    if (comma == std::string_view::npos) comma = text.size();
    const auto item = trim(text.substr(start, comma - start));
    if (!item.empty()) out.emplace_back(item);
    start = comma + 1;
  }
  return out;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? "," : "") + items[i];
  return out;
}

std::string bool_text(bool b) { return b ? "true" : "false"; }

// Field builders: each binds a key to a member through accessor lambdas.
template <typename Access>
ConfigField text_field(std::string key, std::string help, Access access) {
  return {std::move(key), std::move(help),
          [access](const RunConfig& c) { return access(c); },
          [access](RunConfig& c, std::string_view v) { access(c) = std::string(v); }};
}

template <typename Access>
ConfigField size_field(std::string key, std::string help, Access access) {
  return {key, std::move(help), [access](const RunConfig& c) { return std::to_string(access(c)); },
          [access, key](RunConfig& c, std::string_view v) { access(c) = parse_int<std::size_t>(v, key); }};
}

template <typename Access>
ConfigField real_field(std::string key, std::string help, Access access) {
  return {key, std::move(help), [access](const RunConfig& c) { return format_double(access(c)); },
          [access, key](RunConfig& c, std::string_view v) { access(c) = parse_real(v, key); }};
}

template <typename Access>
ConfigField bool_field(std::string key, std::string help, Access access) {
  return {key, std::move(help), [access](const RunConfig& c) { return bool_text(access(c)); },
          [access, key](RunConfig& c, std::string_view v) { access(c) = parse_bool(v, key); }};
}

template <typename Access>
ConfigField list_field(std::string key, std::string help, Access access) {
  return {std::move(key), std::move(help), [access](const RunConfig& c) { return join(access(c)); },
          [access](RunConfig& c, std::string_view v) { access(c) = parse_list(v); }};
}

std::vector<ConfigField> build_fields() {
  std::vector<ConfigField> f;
  f.push_back({"seed", "run seed; every stage seed derives from it",
               [](const RunConfig& c) { return std::to_string(c.seed); },
               [](RunConfig& c, std::string_view v) { c.seed = parse_int<std::uint64_t>(v, "seed"); }});
  f.push_back(text_field("out", "output directory", [](auto& c) -> auto& { return c.out; }));
  f.push_back(text_field("data.trajectories", "trajectory CSV (subject_id,t0,...)",
                         [](auto& c) -> auto& { return c.data.trajectories; }));
  f.push_back(text_field("data.labels", "optional ground-truth CSV (subject_id,group)",
                         [](auto& c) -> auto& { return c.data.labels; }));

  f.push_back(size_field("sim.n_a", "group A subjects", [](auto& c) -> auto& { return c.sim.n_a; }));
  f.push_back(size_field("sim.n_b", "group B subjects", [](auto& c) -> auto& { return c.sim.n_b; }));
  f.push_back(size_field("sim.timesteps", "time points T", [](auto& c) -> auto& { return c.sim.timesteps; }));
  f.push_back(real_field("sim.dt", "time step", [](auto& c) -> auto& { return c.sim.dt; }));
  f.push_back(real_field("sim.amplitude", "sine amplitude", [](auto& c) -> auto& { return c.sim.amplitude; }));
  f.push_back(real_field("sim.baseline", "baseline level", [](auto& c) -> auto& { return c.sim.baseline; }));
  f.push_back(real_field("sim.angular", "angular factor", [](auto& c) -> auto& { return c.sim.angular; }));
  f.push_back(real_field("sim.phase_range", "phase drawn from U(-r, r)",
                         [](auto& c) -> auto& { return c.sim.phase_range; }));
  f.push_back(real_field("sim.noise_sd", "noise standard deviation", [](auto& c) -> auto& { return c.sim.noise_sd; }));
  f.push_back(bool_field("sim.noise", "add noise", [](auto& c) -> auto& { return c.sim.noise; }));
  f.push_back(bool_field("sim.phase", "draw a phase per subject", [](auto& c) -> auto& { return c.sim.phase; }));

  f.push_back(size_field("model.hidden", "LSTM hidden size", [](auto& c) -> auto& { return c.model.hidden_size; }));
  f.push_back(size_field("model.embed_dim", "embedding dimension", [](auto& c) -> auto& { return c.model.embed_dim; }));
  f.push_back({"model.decoder_widths", "decoder MLP widths, comma separated",
               [](const RunConfig& c) {
                 std::vector<std::string> w;
                 for (std::size_t x : c.model.decoder_widths) w.push_back(std::to_string(x));
                 return join(w);
               },
               [](RunConfig& c, std::string_view v) {
                 c.model.decoder_widths.clear();
                 for (const auto& item : parse_list(v))
                   c.model.decoder_widths.push_back(parse_int<std::size_t>(item, "model.decoder_widths"));
               }});
  f.push_back({"model.decoder_activation", "tanh | identity",
               [](const RunConfig& c) { return std::string(to_string(c.model.decoder_activation)); },
               [](RunConfig& c, std::string_view v) { c.model.decoder_activation = parse_activation(v); }});
  f.push_back(text_field("model.path", "model file to read (embed) or write (train)",
                         [](auto& c) -> auto& { return c.model_path; }));

  f.push_back(real_field("train.learning_rate", "RMSProp step size", [](auto& c) -> auto& { return c.train.learning_rate; }));
  f.push_back(real_field("train.rho", "RMSProp decay", [](auto& c) -> auto& { return c.train.rho; }));
  f.push_back(real_field("train.epsilon", "RMSProp epsilon", [](auto& c) -> auto& { return c.train.epsilon; }));
  f.push_back(size_field("train.epochs", "training epochs", [](auto& c) -> auto& { return c.train.epochs; }));
  f.push_back(size_field("train.batch_size", "mini-batch size, 0 = full batch",
                         [](auto& c) -> auto& { return c.train.batch_size; }));
  f.push_back(bool_field("train.deterministic", "fixed-order reductions", [](auto& c) -> auto& { return c.train.deterministic; }));
  f.push_back(bool_field("train.clip_gradients", "clip the global gradient norm",
                         [](auto& c) -> auto& { return c.train.clip_gradients; }));
  f.push_back(real_field("train.clip_norm", "clipping threshold", [](auto& c) -> auto& { return c.train.clip_norm; }));

  f.push_back(text_field("cluster.method", "agglomerative | kmeans", [](auto& c) -> auto& { return c.cluster.method; }));
  f.push_back(size_field("cluster.k", "number of clusters", [](auto& c) -> auto& { return c.cluster.k; }));
  f.push_back(size_field("cluster.restarts", "kmeans restarts", [](auto& c) -> auto& { return c.cluster.restarts; }));
  f.push_back({"cluster.linkage", "single | complete | average",
               [](const RunConfig& c) { return std::string(to_string(c.cluster.linkage)); },
               [](RunConfig& c, std::string_view v) { c.cluster.linkage = parse_linkage(v); }});
  f.push_back(text_field("cluster.embedding", "embedding CSV to cluster",
                         [](auto& c) -> auto& { return c.cluster.embedding; }));

  f.push_back({"kml.metric", "l1 | l2 | dtw | frechet",
               [](const RunConfig& c) { return std::string(to_string(c.kml.metric)); },
               [](RunConfig& c, std::string_view v) { c.kml.metric = parse_metric(v); }});
  f.push_back(size_field("kml.k_min", "smallest k of the sweep", [](auto& c) -> auto& { return c.kml.k_min; }));
  f.push_back(size_field("kml.k_max", "largest k of the sweep", [](auto& c) -> auto& { return c.kml.k_max; }));
  f.push_back(size_field("kml.restarts", "restarts per k", [](auto& c) -> auto& { return c.kml.restarts; }));

  f.push_back(size_field("gbtm.k", "trajectory groups", [](auto& c) -> auto& { return c.gbtm.k; }));
  f.push_back(size_field("gbtm.order", "polynomial order", [](auto& c) -> auto& { return c.gbtm.order; }));
  f.push_back(size_field("gbtm.max_iters", "EM iteration cap", [](auto& c) -> auto& { return c.gbtm.max_iters; }));

  f.push_back(list_field("evaluate.memberships", "membership CSVs to correlate",
                         [](auto& c) -> auto& { return c.evaluate.memberships; }));
  f.push_back(list_field("evaluate.partitions", "partition CSVs to score",
                         [](auto& c) -> auto& { return c.evaluate.partitions; }));
  f.push_back(text_field("evaluate.points", "CSV of the clustered points (for Calinski-Harabasz)",
                         [](auto& c) -> auto& { return c.evaluate.points; }));

  f.push_back({"plot.kind", "trajectories | embedding_scatter | ch_bars | mean_curves",
               [](const RunConfig& c) { return std::string(to_string(c.plot.kind)); },
               [](RunConfig& c, std::string_view v) { c.plot.kind = parse_plot_kind(v); }});
  f.push_back(text_field("plot.input", "CSV to plot", [](auto& c) -> auto& { return c.plot.input; }));
  f.push_back(text_field("plot.labels", "optional groups CSV for colors", [](auto& c) -> auto& { return c.plot.labels; }));
  f.push_back(text_field("plot.title", "figure title", [](auto& c) -> auto& { return c.plot.title; }));
  return f;
}

}  // namespace

const std::vector<ConfigField>& config_fields() {
  static const std::vector<ConfigField> fields = build_fields();
  return fields;
}

void set_config_value(RunConfig& config, std::string_view key, std::string_view value) {
  for (const auto& field : config_fields()) {
    if (field.key == key) {
      field.set(config, trim(value));
      return;
    }
  }
  throw Error(ErrorKind::UnknownKey, "unknown configuration key '" + std::string(key) + "'");
}

RunConfig parse_config(std::string_view text, RunConfig base) {
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    require(eq != std::string_view::npos, ErrorKind::ParseError,
            "config line " + std::to_string(line_no) + ": expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    try {
      set_config_value(base, key, line.substr(eq + 1));
    } catch (const Error& e) {
      throw Error(e.kind(), "config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return base;
}

RunConfig load_config(const std::filesystem::path& path) { return parse_config(read_text(path)); }

std::string dump_config(const RunConfig& config) {
  std::string out;
  for (const auto& field : config_fields()) out += field.key + " = " + field.get(config) + '\n';
  return out;
}

std::uint64_t stage_seed(const RunConfig& config, Stage stage) {
  return derive_seed(config.seed, static_cast<std::uint64_t>(stage));
}

}  // namespace deeptraj
