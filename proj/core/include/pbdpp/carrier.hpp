#pragma once

#include <compare>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace pbdpp {

enum class AtomMetric { euclidean, all_distinct_one };

/// The carrier space: either the unit interval with |x-y|, or a finite
/// ordered atom set, with |x-y| or the discrete 0/1 metric. The induced
/// metric d0 is bounded by 1 in all cases.
class CarrierSpace {
 public:
  static CarrierSpace interval01();
  static CarrierSpace atom_set(std::vector<double> atoms,
                               AtomMetric metric = AtomMetric::euclidean);

  bool is_interval() const { return kind_ == Kind::interval01; }
  /// True when d0(x, y) = |x - y| on a subset of the line.
  bool is_line_metric() const {
    return kind_ == Kind::interval01 || metric_ == AtomMetric::euclidean;
  }
  const std::vector<double>& atoms() const { return atoms_; }
  AtomMetric atom_metric() const { return metric_; }

  bool contains(double x) const;
  /// d0; throws std::domain_error if either point is outside the space.
  double d0(double x, double y) const;

  bool operator==(const CarrierSpace&) const = default;

 private:
  enum class Kind { interval01, atom_set };
  CarrierSpace(Kind kind, std::vector<double> atoms, AtomMetric metric)
      : kind_(kind), atoms_(std::move(atoms)), metric_(metric) {}

  Kind kind_ = Kind::interval01;
  std::vector<double> atoms_;
  AtomMetric metric_ = AtomMetric::euclidean;
};

double metric_d0(const CarrierSpace& space, double x, double y);

/// A finite counting measure: sorted points with integer multiplicities >= 1.
class Configuration {
 public:
  Configuration() = default;
  static Configuration from_points(std::span<const double> points);

  void add(double point, long multiplicity = 1);
  /// Merge another configuration into this one (measure addition).
  void add(const Configuration& other);

  long size() const { return size_; }
  bool empty() const { return size_ == 0; }
  /// Sorted (point, multiplicity) pairs.
  const std::vector<std::pair<double, long>>& entries() const { return entries_; }
  long count_in(double lo, double hi, bool closed_left) const;

  bool operator==(const Configuration&) const = default;

 private:
  std::vector<std::pair<double, long>> entries_;
  long size_ = 0;
};

/// One partition cell (lo, hi] with its designated center. The first cell of
/// a partition is closed on the left: [0, hi].
struct PartitionCell {
  double lo = 0;
  double hi = 1;
  double center = 0.5;
};

/// An ordered interval partition of [0,1] with centers. mesh() is the exact
/// maximum over cells of sup_{s in cell} |s - center|.
class Partition {
 public:
  explicit Partition(std::vector<PartitionCell> cells);

  const std::vector<PartitionCell>& cells() const { return cells_; }
  std::size_t cell_count() const { return cells_.size(); }
  double mesh() const { return mesh_; }
  /// Index of the cell containing x in [0,1]. First cell is [0, hi],
  /// the rest are (lo, hi].
  std::size_t cell_index(double x) const;

 private:
  std::vector<PartitionCell> cells_;
  double mesh_ = 0;
};

/// 2^m equally spaced cells with midpoint centers; mesh = 2^-(m+1) exactly.
Partition dyadic_partition(int m);

/// Assembling mapping: move every point of config to the center of its cell.
/// Preserves total size and per-cell counts; idempotent.
Configuration assemble(const Partition& partition, const Configuration& config);

}  // namespace pbdpp
