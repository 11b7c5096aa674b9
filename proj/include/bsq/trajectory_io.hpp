#pragma once

#include <filesystem>

#include "bsq/mild.hpp"

namespace bsq {

/// Writes one spectral snapshot per field and node (u_0000.bin, theta_0000.bin,
/// and b1_/b2_ when tracked) plus index.json listing nodes, scheme, step
/// count, dealias setting and config hash.
void save_trajectory(const std::filesystem::path& dir, const Trajectory& traj);
Trajectory load_trajectory(const std::filesystem::path& dir);

}  // namespace bsq
