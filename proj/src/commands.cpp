#include "deeptraj/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <sstream>
#include <unordered_map>

#include "deeptraj/error.hpp"
#include "deeptraj/evaluation.hpp"
#include "deeptraj/gbtm.hpp"
#include "deeptraj/io.hpp"
#include "deeptraj/kmeans.hpp"
#include "deeptraj/model_io.hpp"

namespace deeptraj {

namespace fs = std::filesystem;

namespace {

fs::path out_dir(const RunConfig& config) { return fs::path(config.out.empty() ? "." : config.out); }

void require_key(const std::string& value, const char* key) {
  require(!value.empty(), ErrorKind::InvalidArgument, std::string(key) + " is required for this command");
}

TrajectoryDataset load_data(const RunConfig& config) {
  require_key(config.data.trajectories, "data.trajectories");
  TrajectoryDataset ds = load_trajectories(config.data.trajectories);
  if (!config.data.labels.empty()) ds.labels = load_labels(config.data.labels, ds.subject_ids);
  return ds;
}

/// Color index per item: rank of its label among the sorted distinct labels.
std::vector<std::size_t> label_ranks(const std::vector<int>& labels) {
  std::map<int, std::size_t> rank;
  for (int l : labels) rank.emplace(l, 0);
  std::size_t r = 0;
  for (auto& [label, index] : rank) index = r++;
  std::vector<std::size_t> out;
  for (int l : labels) out.push_back(rank[l]);
  return out;
}

std::vector<std::size_t> color_groups(const std::optional<std::vector<int>>& labels) {
  return labels ? label_ranks(*labels) : std::vector<std::size_t>{};
}

std::optional<double> ari_against(const std::optional<std::vector<int>>& labels, const Partition& p) {
  if (!labels) return std::nullopt;
  return adjusted_rand_index(dense_labels(*labels), p.assignments);
}

std::string ari_text(std::optional<double> ari) { return ari ? format_double(*ari) : std::string("NA"); }

ModelDims dims_for(const RunConfig& config, std::size_t timesteps) {
  ModelDims d = config.model;
  d.input_size = 1;
  d.seq_len = timesteps;
  return d;
}

IdTable means_table(const Matrix& means, const char* prefix) {
  IdTable t{{"cluster"}, {}, means};
  for (std::size_t c = 0; c < means.cols(); ++c) t.header.push_back("t" + std::to_string(c));
  for (std::size_t j = 0; j < means.rows(); ++j) t.ids.push_back(prefix + std::to_string(j));
  return t;
}

Partition cluster_points(const RunConfig& config, const Matrix& points) {
  if (config.cluster.method == "kmeans")
    return kmeans_fit(points, config.cluster.k, config.cluster.restarts, stage_seed(config, Stage::Cluster));
  if (config.cluster.method == "agglomerative") return agglomerative_fit(points, config.cluster.k, config.cluster.linkage);
  throw Error(ErrorKind::InvalidArgument, "cluster.method must be agglomerative or kmeans, not '" +
                                              config.cluster.method + "'");
}

/// Rows of `m` reordered so that they follow `want`; `have` names m's rows.
Matrix align_rows(const Matrix& m, const std::vector<std::string>& have, const std::vector<std::string>& want,
                  const std::string& what) {
  if (have == want) return m;
  std::unordered_map<std::string, std::size_t> row_of;
  for (std::size_t r = 0; r < have.size(); ++r) row_of[have[r]] = r;
  require(have.size() == want.size(), ErrorKind::SizeMismatch, what + " covers a different number of subjects");
  Matrix out(want.size(), m.cols());
  for (std::size_t r = 0; r < want.size(); ++r) {
    const auto it = row_of.find(want[r]);
    require(it != row_of.end(), ErrorKind::SizeMismatch, what + " lacks subject '" + want[r] + "'");
    const auto src = m.row(it->second);
    std::copy(src.begin(), src.end(), out.row(r).begin());
  }
  return out;
}

// --- simulate -------------------------------------------------------------

TrajectoryDataset simulate_into(const RunConfig& config, const fs::path& out, std::ostream& log) {
  SimulationConfig sc = config.sim;
  sc.seed = stage_seed(config, Stage::Simulate);
  TrajectoryDataset ds = simulate_qol(sc);
  save_trajectories(out / "trajectories.csv", ds);
  save_labels(out / "labels.csv", ds.subject_ids, *ds.labels);
  write_svg(out / "trajectories.svg",
            render_trajectories(ds.values, color_groups(ds.labels), "Simulated quality of life (A blue, B red)"));
  log << "simulated " << ds.subjects() << " subjects x " << ds.timesteps() << " time points\n";
  return ds;
}

void cmd_simulate(const RunConfig& config, std::ostream& log) { simulate_into(config, out_dir(config), log); }

// --- train / embed --------------------------------------------------------

AutoencoderModel train_into(const RunConfig& config, const TrajectoryDataset& ds, const fs::path& out,
                            std::ostream& log) {
  TrainConfig tc = config.train;
  tc.seed = stage_seed(config, Stage::Train);
  const TrainResult res = train(ds, dims_for(config, ds.timesteps()), tc);
  save_model(config.model_path.empty() ? out / "model.txt" : fs::path(config.model_path), res.model);
  save_loss_history(out / "loss_history.csv", res.loss_history);
  log << "trained " << tc.epochs << " epochs, loss " << format_double(res.loss_history.front()) << " -> "
      << format_double(res.loss_history.back()) << '\n';
  return res.model;
}

Matrix embed_into(const AutoencoderModel& model, const TrajectoryDataset& ds, const fs::path& out) {
  require(ds.timesteps() == model.dims.seq_len, ErrorKind::LengthMismatch,
          "data has " + std::to_string(ds.timesteps()) + " time points, model expects " +
              std::to_string(model.dims.seq_len));
  const Matrix e = embed(model, ds.values);
  save_embedding(out / "embedding.csv", ds.subject_ids, e);
  if (e.cols() >= 2)
    write_svg(out / "embedding.svg", render_embedding_scatter(e, color_groups(ds.labels), "Embedding"));
  return e;
}

void cmd_train(const RunConfig& config, std::ostream& log) {
  const auto ds = load_data(config);
  const auto model = train_into(config, ds, out_dir(config), log);
  embed_into(model, ds, out_dir(config));
}

void cmd_embed(const RunConfig& config, std::ostream& log) {
  require_key(config.model_path, "model.path");
  const auto ds = load_data(config);
  const auto e = embed_into(load_model(config.model_path), ds, out_dir(config));
  log << "embedded " << e.rows() << " subjects in " << e.cols() << " dimensions\n";
}

// --- cluster --------------------------------------------------------------

Partition cluster_into(const RunConfig& config, const Matrix& points, const std::vector<std::string>& ids,
                       const std::optional<std::vector<int>>& labels, const fs::path& out,
                       const std::string& prefix, std::ostream& log) {
  const Partition p = cluster_points(config, points);
  save_partition(out / (prefix + "partition.csv"), ids, p);
  save_memberships(out / (prefix + "memberships.csv"), ids, gaussian_membership(points, p, "encod"));
  if (points.cols() >= 2)
    write_svg(out / (prefix + "clusters.svg"),
              render_embedding_scatter(points, p.assignments, "Embedding clusters (" + config.cluster.method + ")"));
  log << config.cluster.method << " k=" << p.k << " ARI " << ari_text(ari_against(labels, p)) << '\n';
  return p;
}

void cmd_cluster(const RunConfig& config, std::ostream& log) {
  require_key(config.cluster.embedding, "cluster.embedding");
  const IdTable table = read_id_table(config.cluster.embedding);
  std::optional<std::vector<int>> labels;
  if (!config.data.labels.empty()) labels = load_labels(config.data.labels, table.ids);
  cluster_into(config, table.values, table.ids, labels, out_dir(config), "", log);
}

// --- kml ------------------------------------------------------------------

Partition kml_into(const RunConfig& config, const TrajectoryDataset& ds, const fs::path& out,
                   const std::string& prefix, std::ostream& log) {
  const KmlSweep sweep = kml_sweep(ds.values, config.kml.k_min, config.kml.k_max, config.kml.metric,
                                   config.kml.restarts, stage_seed(config, Stage::Kml));
  const Partition& best = sweep.partitions[sweep.best];
  save_ch_sweep(out / (prefix + "ch_sweep.csv"), sweep);
  write_svg(out / (prefix + "ch_bars.svg"),
            render_ch_bars(sweep.ks, sweep.criterion, sweep.best, "Calinski-Harabasz by k"));
  save_partition(out / (prefix + "partition.csv"), ds.subject_ids, best);
  save_memberships(out / (prefix + "memberships.csv"), ds.subject_ids, gaussian_membership(ds.values, best, "kml"));
  write_id_table(out / (prefix + "cluster_means.csv"), means_table(best.centers, "kml."));
  write_svg(out / (prefix + "clusters.svg"),
            render_trajectories(ds.values, best.assignments, "kml partition, k=" + std::to_string(best.k)));
  write_svg(out / (prefix + "mean_curves.svg"), render_mean_curves(best.centers, "kml cluster means"));
  log << "kml (" << to_string(config.kml.metric) << ") selected k=" << best.k << " ARI "
      << ari_text(ari_against(ds.labels, best)) << '\n';
  return best;
}

void cmd_kml(const RunConfig& config, std::ostream& log) { kml_into(config, load_data(config), out_dir(config), "", log); }

// --- gbtm -----------------------------------------------------------------

void cmd_gbtm(const RunConfig& config, std::ostream& log) {
  const auto ds = load_data(config);
  const fs::path out = out_dir(config);
  const GbtmFit fit = gbtm_fit(ds.values, config.gbtm.k, config.gbtm.order, stage_seed(config, Stage::Gbtm),
                               config.gbtm.max_iters);
  const Matrix means = fit.model.mean_trajectories(ds.timesteps());
  Partition p = partition_from_assignments(ds.values, fit.memberships.hard_assignments(), fit.model.k);
  save_memberships(out / "memberships.csv", ds.subject_ids, fit.memberships);
  save_partition(out / "partition.csv", ds.subject_ids, p);
  write_id_table(out / "cluster_means.csv", means_table(means, "traj."));

  IdTable params{{"cluster", "weight", "variance"}, {}, Matrix(fit.model.k, fit.model.order + 3)};
  for (std::size_t q = 0; q <= fit.model.order; ++q) params.header.push_back("b" + std::to_string(q));
  for (std::size_t j = 0; j < fit.model.k; ++j) {
    params.ids.push_back("traj." + std::to_string(j));
    params.values(j, 0) = fit.model.weights[j];
    params.values(j, 1) = fit.model.variances[j];
    for (std::size_t q = 0; q <= fit.model.order; ++q) params.values(j, 2 + q) = fit.model.coefficients(j, q);
  }
  write_id_table(out / "gbtm_model.csv", params);

  std::string hist = "iteration,loglik\n";
  for (std::size_t i = 0; i < fit.loglik_history.size(); ++i)
    hist += std::to_string(i) + ',' + format_double(fit.loglik_history[i]) + '\n';
  write_text(out / "loglik.csv", hist);
  write_svg(out / "mean_curves.svg", render_mean_curves(means, "Group-based trajectory means"));
  log << "gbtm k=" << fit.model.k << " order " << fit.model.order << ", " << fit.loglik_history.size()
      << " E-steps, loglik " << format_double(fit.loglik_history.back()) << ", ARI "
      << ari_text(ari_against(ds.labels, p)) << '\n';
}

// --- evaluate -------------------------------------------------------------

void cmd_evaluate(const RunConfig& config, std::ostream& log) {
  const auto& ev = config.evaluate;
  require(!ev.memberships.empty() || !ev.partitions.empty(), ErrorKind::InvalidArgument,
          "evaluate needs evaluate.memberships and/or evaluate.partitions");
  const fs::path out = out_dir(config);

  if (!ev.memberships.empty()) {
    std::vector<MembershipMatrix> ms;
    std::vector<std::string> ref_ids;
    for (const auto& path : ev.memberships) {
      std::vector<std::string> ids;
      MembershipMatrix m = load_memberships(path, &ids);
      if (ms.empty()) ref_ids = ids;
      m.probabilities = align_rows(m.probabilities, ids, ref_ids, path);
      ms.push_back(std::move(m));
    }
    const CoherenceReport report = membership_correlation(ms);
    save_coherence_matrix(out / "coherence.csv", report);
    const std::string summary = coherence_summary(report);
    write_text(out / "coherence.txt", summary);
    log << summary;
  }

  if (!ev.partitions.empty()) {
    std::vector<std::string> ids = read_id_table(ev.partitions.front()).ids;
    std::optional<Matrix> points;
    if (!ev.points.empty()) {
      const IdTable t = read_id_table(ev.points);
      points = align_rows(t.values, t.ids, ids, ev.points);
    }
    std::optional<std::vector<int>> labels;
    if (!config.data.labels.empty()) labels = load_labels(config.data.labels, ids);
    std::string csv = "partition,k,calinski_harabasz,ari\n";
    for (const auto& path : ev.partitions) {
      const Partition p = load_partition(path, &ids);
      std::string ch = "NA";
      if (points) {
        try {
          ch = format_double(calinski_harabasz(*points, p));
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::DegeneratePartition) throw;
        }
      }
      const std::string ari = ari_text(ari_against(labels, p));
      csv += path + ',' + std::to_string(p.k) + ',' + ch + ',' + ari + '\n';
      log << path << ": k=" << p.k << " CH " << ch << " ARI " << ari << '\n';
    }
    write_text(out / "evaluation.csv", csv);
  }
}

// --- plot -----------------------------------------------------------------

void cmd_plot(const RunConfig& config, std::ostream& log) {
  require_key(config.plot.input, "plot.input");
  const IdTable table = read_id_table(config.plot.input);
  std::vector<std::size_t> groups;
  if (!config.plot.labels.empty()) groups = label_ranks(load_labels(config.plot.labels, table.ids));
  const std::string title = config.plot.title.empty() ? std::string(to_string(config.plot.kind)) : config.plot.title;

  std::string svg;
  switch (config.plot.kind) {
    case PlotKind::Trajectories:
      svg = render_trajectories(table.values, groups, title);
      break;
    case PlotKind::EmbeddingScatter:
      svg = render_embedding_scatter(table.values, groups, title);
      break;
    case PlotKind::ChBars: {
      std::vector<std::size_t> ks;
      for (const auto& id : table.ids) ks.push_back(static_cast<std::size_t>(parse_double(id, config.plot.input)));
      const Vector values = table.values.col(0);
      const std::size_t best = static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());
      svg = render_ch_bars(ks, values, best, title);
      break;
    }
    case PlotKind::MeanCurves: {
      if (groups.empty()) {
        svg = render_mean_curves(table.values, title);
        break;
      }
      const std::size_t k = *std::max_element(groups.begin(), groups.end()) + 1;
      svg = render_mean_curves(partition_from_assignments(table.values, groups, k).centers, title);
      break;
    }
  }
  const fs::path path = out_dir(config) / (std::string(to_string(config.plot.kind)) + ".svg");
  write_svg(path, svg);
  log << "wrote " << path.string() << '\n';
}

// --- reproduce-sim --------------------------------------------------------

void cmd_reproduce_sim(const RunConfig& config, std::ostream& log) {
  const fs::path out = out_dir(config);
  const TrajectoryDataset ds = simulate_into(config, out, log);
  const AutoencoderModel model = train_into(config, ds, out, log);
  const Matrix e = embed_into(model, ds, out);
  const Partition ae = cluster_into(config, e, ds.subject_ids, ds.labels, out, "ae_", log);
  const Partition kml = kml_into(config, ds, out, "kml_", log);

  std::vector<MembershipMatrix> ms;
  ms.push_back(gaussian_membership(e, ae, "encod"));
  ms.push_back(gaussian_membership(ds.values, kml, "kml"));
  const CoherenceReport report = membership_correlation(ms);
  save_coherence_matrix(out / "coherence.csv", report);

  std::ostringstream summary;
  summary << "subjects " << ds.subjects() << ", time points " << ds.timesteps() << '\n'
          << "autoencoder + " << config.cluster.method << " (k=" << ae.k << ") ARI "
          << ari_text(ari_against(ds.labels, ae)) << '\n'
          << "kml selected k=" << kml.k << " ARI " << ari_text(ari_against(ds.labels, kml)) << '\n'
          << coherence_summary(report);
  write_text(out / "summary.txt", summary.str());
  log << summary.str();
}

}  // namespace

const std::vector<Command>& commands() {
  static const std::vector<Command> list = {
      {"simulate", "generate the two-group quality-of-life dataset", cmd_simulate},
      {"train", "fit the recurrent autoencoder and embed the training data", cmd_train},
      {"embed", "embed trajectories with a saved model", cmd_embed},
      {"cluster", "cluster an embedding (agglomerative or kmeans)", cmd_cluster},
      {"kml", "longitudinal k-means over a range of k, chosen by Calinski-Harabasz", cmd_kml},
      {"gbtm", "group-based trajectory model fitted by EM", cmd_gbtm},
      {"evaluate", "membership coherence, Calinski-Harabasz and ARI", cmd_evaluate},
      {"plot", "render a CSV as an SVG figure", cmd_plot},
      {"reproduce-sim", "simulate, embed, cluster and compare with kml", cmd_reproduce_sim},
  };
  return list;
}

void run_command(std::string_view name, const RunConfig& config, std::ostream& log) {
  for (const auto& cmd : commands()) {
    if (cmd.name != name) continue;
    std::string manifest = "# deeptraj " + cmd.name + "\n# replay: deeptraj " + cmd.name + " --config manifest.cfg\n";
    manifest += dump_config(config);
    write_text(out_dir(config) / "manifest.cfg", manifest);
    cmd.run(config, log);
    return;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown command '" + std::string(name) + "'");
}

}  // namespace deeptraj
