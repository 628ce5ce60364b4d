#pragma once

#include <span>
#include <string_view>

namespace deeptraj {

enum class TrajectoryMetric { L1, L2, DTW, Frechet };

std::string_view to_string(TrajectoryMetric metric);
TrajectoryMetric parse_metric(std::string_view name);

/// L1 and L2 need equal lengths (LengthMismatch otherwise). DTW and discrete
/// Frechet accept unequal lengths; all metrics throw EmptyTrajectory on an
/// empty input. DTW uses |a_i - b_j| step costs and the three standard moves.
double traj_distance(std::span<const double> a, std::span<const double> b, TrajectoryMetric metric);

double l1_distance(std::span<const double> a, std::span<const double> b);
double l2_distance(std::span<const double> a, std::span<const double> b);
double dtw_distance(std::span<const double> a, std::span<const double> b);
double frechet_distance(std::span<const double> a, std::span<const double> b);

}  // namespace deeptraj
