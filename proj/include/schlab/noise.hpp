#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "schlab/grid.hpp"

namespace schlab {

// Brownian-sheet cell increments on an m x n grid of space-time cells:
// dw(i, k) ~ N(0, (T/m)(pi/n)) is the increment over the rectangle
// [i T/m, (i+1) T/m] x [k pi/n, (k+1) pi/n].
//
// Values are a pure function of (seed, sample_index, m, n, T). Cell (i, k)
// draws its Gaussian from one Philox4x32-10 block with
//   counter = (idx_lo, idx_hi, sample_lo, sample_hi),  idx = i*n + k,
//   key     = (seed_lo, seed_hi),
// taking words 0 and 1 as a 53-bit uniform that is mapped through the
// AS 241 inverse normal CDF. The mapping is part of the reproducibility
// contract: regenerating with the same inputs is bit-for-bit identical,
// regardless of generation order or thread count.
class SheetIncrements {
 public:
  SheetIncrements(int m, int n, double T, std::uint64_t seed, std::uint64_t sample_index,
                  std::vector<double> dw);

  int m() const { return m_; }
  int n() const { return n_; }
  double T() const { return T_; }
  std::uint64_t seed() const { return seed_; }
  std::uint64_t sample_index() const { return sample_index_; }

  double dw(int i, int k) const {
    return dw_[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) +
               static_cast<std::size_t>(k)];
  }
  std::span<const double> row(int i) const {
    return std::span<const double>(dw_).subspan(
        static_cast<std::size_t>(i) * static_cast<std::size_t>(n_),
        static_cast<std::size_t>(n_));
  }
  std::span<const double> raw() const { return dw_; }

  double cell_variance() const { return (T_ / m_) * (kPi / n_); }

 private:
  int m_;
  int n_;
  double T_;
  std::uint64_t seed_;
  std::uint64_t sample_index_;
  std::vector<double> dw_;  // row-major, m rows of n cells
};

SheetIncrements generate_sheet(std::uint64_t seed, std::uint64_t sample_index, int m, int n,
                               double T);

// Exact aggregation to a nested coarser resolution: each coarse cell is the
// sum of its constituent fine cells. Transitive across repeated coarsening.
SheetIncrements coarsen(const SheetIncrements& s, int time_factor, int space_factor);

// Scaled increments dbeta_i^k = sqrt(n/pi) * dw(i, k), row-major m x n.
std::vector<double> to_beta(const SheetIncrements& s);

// Little-endian binary layout: magic "SCHS", i32 m, i32 n, f64 T, u64 seed,
// u64 sample_index, then m*n row-major f64 increments.
void dump_sheet(const SheetIncrements& s, std::ostream& out);
SheetIncrements load_sheet(std::istream& in);

}  // namespace schlab
