#pragma once

#include <span>
#include <vector>

#include "adbound/model.hpp"

namespace adbound {

enum class MbMode { Upper, Lower, Estimate };

std::string to_string(MbMode mode);

struct MbConfig {
  /// Most variables (bucket variable included) per mini-bucket.
  int i_bound = 3;
  MbMode mode = MbMode::Upper;
};

struct MbResult {
  std::vector<double> values;
  MbMode mode = MbMode::Upper;
  std::vector<VariableId> order;
  /// Buckets that had to be split into more than one mini-bucket.
  int split_buckets = 0;
};

/// First-fit partition in input order: a factor joins the first mini-bucket
/// whose joint scope stays within i_bound variables, otherwise opens a new one.
std::vector<std::vector<Factor>> mb_partition(std::span<const Factor> bucket, int i_bound);

/// Mini-bucket elimination along the greedy fewest-fill order. The first
/// mini-bucket of every bucket is projected with the task's operator, the
/// others with max (Upper), min (Lower) or the arithmetic mean (Estimate).
MbResult mb_run(std::span<const Factor> factors, const Domains& domains, const Task& task, const MbConfig& cfg);

}  // namespace adbound
