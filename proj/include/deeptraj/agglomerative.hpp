#pragma once

#include <cstddef>
#include <string_view>

#include "deeptraj/matrix.hpp"
#include "deeptraj/partition.hpp"

namespace deeptraj {

enum class Linkage { Single, Complete, Average };

std::string_view to_string(Linkage linkage);
Linkage parse_linkage(std::string_view name);

/// Bottom-up merging under Euclidean distance until k clusters remain. Ties
/// merge the lowest-indexed pair. Clusters are numbered by their smallest
/// member index; centers are member means. Throws KTooLarge / EmptyInput.
Partition agglomerative_fit(const Matrix& points, std::size_t k, Linkage linkage);

}  // namespace deeptraj
