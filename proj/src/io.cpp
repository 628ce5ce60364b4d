#include "deeptraj/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "deeptraj/error.hpp"

namespace deeptraj {

std::string format_double(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text, const std::string& where) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  if (first != last && *first == '+') ++first;
  const auto res = std::from_chars(first, last, value);
  require(res.ec == std::errc() && res.ptr == last && first != last, ErrorKind::ParseError,
          where + ": '" + std::string(text) + "' is not a number");
  require(std::isfinite(value), ErrorKind::NonFiniteValue, where + ": value is not finite");
  return value;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? comma : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  require(out.good(), ErrorKind::IoError, "cannot open '" + path.string() + "' for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  require(out.good(), ErrorKind::IoError, "failed writing '" + path.string() + "'");
}

void check_id(const std::string& id) {
  require(!id.empty() && id.find_first_of(",\n\r") == std::string::npos, ErrorKind::InvalidArgument,
          "subject id '" + id + "' cannot be written to CSV");
}

long to_index(double v, const std::string& where) {
  require(v == std::floor(v) && v >= 0.0, ErrorKind::ParseError,
          where + ": expected a non-negative integer");
  return static_cast<long>(v);
}

}  // namespace

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorKind::IoError, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  auto out = open_out(path);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  finish(out, path);
}

IdTable read_id_table(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  const std::string name = path.filename().string();
  IdTable table;
  std::vector<double> data;
  std::unordered_set<std::string> seen;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    const std::string_view line = trim(std::string_view(text).substr(start, end - start));
    start = end + 1;
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split(line);
    if (table.header.empty()) {
      for (auto f : fields) table.header.emplace_back(f);
      require(table.header.size() >= 2, ErrorKind::ParseError,
              name + " line " + std::to_string(line_no) + ": header needs an id column and a value column");
      continue;
    }
    std::string id(fields.front());
    require(!id.empty(), ErrorKind::ParseError, name + " line " + std::to_string(line_no) + ": empty id");
    require(fields.size() == table.header.size(), ErrorKind::RaggedRows,
            name + " line " + std::to_string(line_no) + ": subject '" + id + "' has " +
                std::to_string(fields.size() - 1) + " values, expected " +
                std::to_string(table.header.size() - 1));
    require(seen.insert(id).second, ErrorKind::DuplicateId,
            name + " line " + std::to_string(line_no) + ": duplicate subject '" + id + "'");
    for (std::size_t c = 1; c < fields.size(); ++c)
      data.push_back(parse_double(fields[c], name + " line " + std::to_string(line_no) + ", column " +
                                                  std::to_string(c + 1) + " (" + table.header[c] + ")"));
    table.ids.push_back(std::move(id));
  }
  require(!table.header.empty(), ErrorKind::ParseError, name + ": missing header");
  table.values = Matrix(table.ids.size(), table.header.size() - 1, std::move(data));
  return table;
}

void write_id_table(const std::filesystem::path& path, const IdTable& table) {
  require(table.header.size() == table.values.cols() + 1 && table.ids.size() == table.values.rows(),
          ErrorKind::ShapeMismatch, "table header/ids do not match its values");
  std::string text;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (c) text += ',';
    text += table.header[c];
  }
  text += '\n';
  for (std::size_t r = 0; r < table.ids.size(); ++r) {
    check_id(table.ids[r]);
    text += table.ids[r];
    for (double v : table.values.row(r)) {
      text += ',';
      text += format_double(v);
    }
    text += '\n';
  }
  write_text(path, text);
}

TrajectoryDataset load_trajectories(const std::filesystem::path& path) {
  IdTable table = read_id_table(path);
  require(table.values.rows() > 0, ErrorKind::EmptyDataset, path.string() + " holds no subjects");
  TrajectoryDataset ds{std::move(table.ids), std::move(table.values), std::nullopt};
  ds.validate();
  return ds;
}

void save_trajectories(const std::filesystem::path& path, const TrajectoryDataset& dataset) {
  dataset.validate();
  IdTable table{{"subject_id"}, dataset.subject_ids, dataset.values};
  for (std::size_t t = 0; t < dataset.timesteps(); ++t) table.header.push_back("t" + std::to_string(t));
  write_id_table(path, table);
}

void save_labels(const std::filesystem::path& path, const std::vector<std::string>& ids,
                 const std::vector<int>& labels) {
  require(ids.size() == labels.size(), ErrorKind::SizeMismatch, "labels and ids differ in length");
  std::string text = "subject_id,group\n";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    check_id(ids[i]);
    text += ids[i] + ',' + std::to_string(labels[i]) + '\n';
  }
  write_text(path, text);
}

std::vector<int> load_labels(const std::filesystem::path& path, const std::vector<std::string>& ids) {
  const IdTable table = read_id_table(path);
  require(table.values.cols() == 1, ErrorKind::ParseError, path.string() + ": expected subject_id,group");
  std::unordered_map<std::string, int> by_id;
  for (std::size_t r = 0; r < table.ids.size(); ++r) {
    const double v = table.values(r, 0);
    require(v == std::floor(v), ErrorKind::ParseError, path.string() + ": group labels must be integers");
    by_id[table.ids[r]] = static_cast<int>(v);
  }
  std::vector<int> out;
  for (const auto& id : ids) {
    const auto it = by_id.find(id);
    require(it != by_id.end(), ErrorKind::InvalidArgument, path.string() + ": no label for subject '" + id + "'");
    out.push_back(it->second);
  }
  return out;
}

void save_partition(const std::filesystem::path& path, const std::vector<std::string>& ids,
                    const Partition& partition) {
  require(ids.size() == partition.size(), ErrorKind::SizeMismatch, "partition and ids differ in length");
  std::string text = "subject_id,cluster\n";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    check_id(ids[i]);
    text += ids[i] + ',' + std::to_string(partition.assignments[i]) + '\n';
  }
  write_text(path, text);
}

Partition load_partition(const std::filesystem::path& path, const std::vector<std::string>* ids) {
  const IdTable table = read_id_table(path);
  require(table.values.cols() == 1, ErrorKind::ParseError, path.string() + ": expected subject_id,cluster");
  std::vector<std::size_t> assignments;
  if (ids) {
    std::unordered_map<std::string, std::size_t> row_of;
    for (std::size_t r = 0; r < table.ids.size(); ++r) row_of[table.ids[r]] = r;
    for (const auto& id : *ids) {
      const auto it = row_of.find(id);
      require(it != row_of.end(), ErrorKind::InvalidArgument,
              path.string() + ": no cluster for subject '" + id + "'");
      assignments.push_back(static_cast<std::size_t>(to_index(table.values(it->second, 0), path.string())));
    }
  } else {
    for (std::size_t r = 0; r < table.ids.size(); ++r)
      assignments.push_back(static_cast<std::size_t>(to_index(table.values(r, 0), path.string())));
  }
  Partition p;
  p.k = assignments.empty() ? 0 : *std::max_element(assignments.begin(), assignments.end()) + 1;
  p.assignments = std::move(assignments);
  return p;
}

void save_memberships(const std::filesystem::path& path, const std::vector<std::string>& ids,
                      const MembershipMatrix& memberships) {
  const auto labels = memberships.cluster_labels.size() == memberships.clusters()
                          ? memberships.cluster_labels
                          : default_cluster_labels(memberships.method, memberships.clusters());
  IdTable table{{"subject_id"}, ids, memberships.probabilities};
  table.header.insert(table.header.end(), labels.begin(), labels.end());
  write_id_table(path, table);
}

MembershipMatrix load_memberships(const std::filesystem::path& path, std::vector<std::string>* ids) {
  IdTable table = read_id_table(path);
  MembershipMatrix m;
  m.cluster_labels.assign(table.header.begin() + 1, table.header.end());
  std::string prefix;
  for (std::size_t c = 0; c < m.cluster_labels.size(); ++c) {
    const auto& label = m.cluster_labels[c];
    const auto dot = label.rfind('.');
    const std::string head = dot == std::string::npos ? std::string() : label.substr(0, dot);
    if (c == 0) prefix = head;
    else if (head != prefix) prefix.clear();
  }
  m.method = prefix.empty() ? path.stem().string() : prefix;
  m.probabilities = std::move(table.values);
  m.validate();
  if (ids) *ids = std::move(table.ids);
  return m;
}

void save_embedding(const std::filesystem::path& path, const std::vector<std::string>& ids,
                    const Matrix& embedding) {
  IdTable table{{"subject_id"}, ids, embedding};
  for (std::size_t j = 0; j < embedding.cols(); ++j) table.header.push_back("e" + std::to_string(j));
  write_id_table(path, table);
}

void save_loss_history(const std::filesystem::path& path, const std::vector<double>& losses) {
  std::string text = "epoch,loss\n";
  for (std::size_t e = 0; e < losses.size(); ++e) text += std::to_string(e + 1) + ',' + format_double(losses[e]) + '\n';
  write_text(path, text);
}

void save_ch_sweep(const std::filesystem::path& path, const KmlSweep& sweep) {
  std::string text = "k,calinski_harabasz\n";
  for (std::size_t i = 0; i < sweep.ks.size(); ++i)
    text += std::to_string(sweep.ks[i]) + ',' + format_double(sweep.criterion[i]) + '\n';
  write_text(path, text);
}

void save_coherence_matrix(const std::filesystem::path& path, const CoherenceReport& report) {
  std::string text = "cluster";
  for (const auto& l : report.column_labels) text += ',' + l;
  text += '\n';
  for (std::size_t r = 0; r < report.column_labels.size(); ++r) {
    text += report.column_labels[r];
    for (double v : report.correlation.row(r)) text += ',' + format_double(v);
    text += '\n';
  }
  write_text(path, text);
}

std::string coherence_summary(const CoherenceReport& report) {
  std::unordered_map<std::size_t, std::unordered_map<std::size_t, std::string>> label;
  for (std::size_t i = 0; i < report.columns.size(); ++i)
    label[report.columns[i].method][report.columns[i].cluster] = report.column_labels[i];
  const auto method_name = [&](std::size_t m) {
    const std::string& first = label[m][0];
    const auto dot = first.rfind('.');
    return dot == std::string::npos ? first : first.substr(0, dot);
  };
  std::ostringstream out;
  out << "matched clusters\n";
  for (const auto& m : report.matches)
    out << "  " << label[m.a.method][m.a.cluster] << " <-> " << label[m.b.method][m.b.cluster]
        << "  r = " << format_double(m.correlation) << '\n';
  if (!report.unmatched.empty()) {
    out << "unmatched clusters\n";
    for (const auto& u : report.unmatched)
      out << "  " << label[u.cluster.method][u.cluster.cluster] << " (against " << method_name(u.against) << ")\n";
  }
  out << "mean matched correlation: "
      << (report.mean_matched ? format_double(*report.mean_matched) : std::string("n/a")) << '\n';
  return out.str();
}

}  // namespace deeptraj
