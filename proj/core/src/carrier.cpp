#include "pbdpp/carrier.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pbdpp {

CarrierSpace CarrierSpace::interval01() {
  return CarrierSpace(Kind::interval01, {}, AtomMetric::euclidean);
}

CarrierSpace CarrierSpace::atom_set(std::vector<double> atoms, AtomMetric metric) {
  if (atoms.empty()) throw std::invalid_argument("atom_set: needs at least one atom");
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (!(atoms[i] >= 0.0 && atoms[i] <= 1.0))
      throw std::invalid_argument("atom_set: atoms must lie in [0,1]");
    if (i > 0 && !(atoms[i - 1] < atoms[i]))
      throw std::invalid_argument("atom_set: atoms must be strictly increasing");
  }
  return CarrierSpace(Kind::atom_set, std::move(atoms), metric);
}

bool CarrierSpace::contains(double x) const {
  if (kind_ == Kind::interval01) return x >= 0.0 && x <= 1.0;
  return std::binary_search(atoms_.begin(), atoms_.end(), x);
}

double CarrierSpace::d0(double x, double y) const {
  if (!contains(x) || !contains(y))
    throw std::domain_error("d0: point outside the carrier space");
  if (kind_ == Kind::atom_set && metric_ == AtomMetric::all_distinct_one)
    return x == y ? 0.0 : 1.0;
  return std::abs(x - y);
}

double metric_d0(const CarrierSpace& space, double x, double y) { return space.d0(x, y); }

Configuration Configuration::from_points(std::span<const double> points) {
  Configuration c;
  for (double p : points) c.add(p);
  return c;
}

void Configuration::add(double point, long multiplicity) {
  if (multiplicity < 0) throw std::invalid_argument("Configuration::add: negative multiplicity");
  if (multiplicity == 0) return;
  auto it = std::lower_bound(entries_.begin(), entries_.end(), point,
                             [](const auto& e, double p) { return e.first < p; });
  if (it != entries_.end() && it->first == point) {
    it->second += multiplicity;
  } else {
    entries_.insert(it, {point, multiplicity});
  }
  size_ += multiplicity;
}

void Configuration::add(const Configuration& other) {
  for (const auto& [p, m] : other.entries_) add(p, m);
}

long Configuration::count_in(double lo, double hi, bool closed_left) const {
  long n = 0;
  for (const auto& [p, m] : entries_) {
    const bool in = closed_left ? (p >= lo && p <= hi) : (p > lo && p <= hi);
    if (in) n += m;
  }
  return n;
}

Partition::Partition(std::vector<PartitionCell> cells) : cells_(std::move(cells)) {
  if (cells_.empty()) throw std::invalid_argument("Partition: needs at least one cell");
  if (cells_.front().lo != 0.0 || cells_.back().hi != 1.0)
    throw std::invalid_argument("Partition: cells must cover [0,1]");
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    const auto& c = cells_[i];
    if (!(c.lo < c.hi)) throw std::invalid_argument("Partition: empty cell");
    if (i > 0 && cells_[i - 1].hi != c.lo)
      throw std::invalid_argument("Partition: cells must be contiguous");
    if (!(c.center >= 0.0 && c.center <= 1.0))
      throw std::invalid_argument("Partition: center outside [0,1]");
    // sup over s in (lo,hi] of |s - center|; centers are taken as given.
    mesh_ = std::max(mesh_, std::max(c.center - c.lo, c.hi - c.center));
  }
}

std::size_t Partition::cell_index(double x) const {
  if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("cell_index: point outside [0,1]");
  // Smallest i with hi_i >= x; the first cell is closed at 0.
  std::size_t lo = 0, hi = cells_.size() - 1;
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (cells_[mid].hi >= x)
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

Partition dyadic_partition(int m) {
  if (m < 0) throw std::invalid_argument("dyadic_partition: depth must be nonnegative");
  const std::size_t k = std::size_t{1} << m;
  std::vector<PartitionCell> cells(k);
  const double w = std::ldexp(1.0, -m);
  for (std::size_t j = 0; j < k; ++j) {
    cells[j].lo = static_cast<double>(j) * w;
    cells[j].hi = (j + 1 == k) ? 1.0 : static_cast<double>(j + 1) * w;
    cells[j].center = (cells[j].lo + cells[j].hi) / 2;
  }
  return Partition(std::move(cells));
}

Configuration assemble(const Partition& partition, const Configuration& config) {
  Configuration out;
  for (const auto& [p, m] : config.entries()) {
    out.add(partition.cells()[partition.cell_index(p)].center, m);
  }
  return out;
}

}  // namespace pbdpp
