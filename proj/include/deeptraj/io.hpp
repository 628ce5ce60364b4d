#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "deeptraj/dataset.hpp"
#include "deeptraj/evaluation.hpp"
#include "deeptraj/kmeans.hpp"
#include "deeptraj/matrix.hpp"
#include "deeptraj/partition.hpp"

namespace deeptraj {

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

/// Parses a whole field as a double; throws ParseError naming `where` on
/// malformed text and NonFiniteValue on inf/nan.
double parse_double(std::string_view text, const std::string& where);

/**
 * A CSV whose first column is a subject identifier and whose remaining
 * columns are numeric. Comma separated, no quoting, `.` decimal point.
 */
struct IdTable {
  std::vector<std::string> header;  ///< includes the identifier column
  std::vector<std::string> ids;
  Matrix values;
};

/// Throws IoError, ParseError (with row and column), RaggedRows (naming the
/// subject), NonFiniteValue or DuplicateId.
IdTable read_id_table(const std::filesystem::path& path);
void write_id_table(const std::filesystem::path& path, const IdTable& table);

/// Trajectory CSV: header `subject_id,t0,...,t{T-1}`, one row per subject.
TrajectoryDataset load_trajectories(const std::filesystem::path& path);
void save_trajectories(const std::filesystem::path& path, const TrajectoryDataset& dataset);

/// Labels CSV `subject_id,group`. Loading returns labels in the order of
/// `ids`; throws InvalidArgument when a subject is missing.
void save_labels(const std::filesystem::path& path, const std::vector<std::string>& ids,
                 const std::vector<int>& labels);
std::vector<int> load_labels(const std::filesystem::path& path, const std::vector<std::string>& ids);

/// Partition CSV `subject_id,cluster`.
void save_partition(const std::filesystem::path& path, const std::vector<std::string>& ids,
                    const Partition& partition);
/// Assignments aligned with `ids` when given, otherwise file order. k is one
/// more than the largest cluster index.
Partition load_partition(const std::filesystem::path& path,
                         const std::vector<std::string>* ids = nullptr);

/// Membership CSV `subject_id,<label_0>,...`; labels default to "<method>.j".
void save_memberships(const std::filesystem::path& path, const std::vector<std::string>& ids,
                      const MembershipMatrix& memberships);
/// The method tag is recovered from the column labels' common prefix
/// before the last '.', falling back to the file stem.
/// Subject IDs are stored in `ids` when given.
MembershipMatrix load_memberships(const std::filesystem::path& path, std::vector<std::string>* ids = nullptr);

/// Embedding CSV `subject_id,e0,...,e{d-1}`.
void save_embedding(const std::filesystem::path& path, const std::vector<std::string>& ids,
                    const Matrix& embedding);

/// Two-column `epoch,loss` history (epochs count from 1).
void save_loss_history(const std::filesystem::path& path, const std::vector<double>& losses);

/// `k,calinski_harabasz` for each k of a sweep.
void save_ch_sweep(const std::filesystem::path& path, const KmlSweep& sweep);

/// Full correlation matrix with labelled rows and columns.
void save_coherence_matrix(const std::filesystem::path& path, const CoherenceReport& report);
/// Matched pairs, unmatched clusters and the mean matched correlation.
std::string coherence_summary(const CoherenceReport& report);

/// Writes `text` verbatim; throws IoError.
void write_text(const std::filesystem::path& path, std::string_view text);
std::string read_text(const std::filesystem::path& path);

}  // namespace deeptraj
