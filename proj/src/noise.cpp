#include "schlab/noise.hpp"

#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "schlab/philox.hpp"
#include "schlab/stats.hpp"

namespace schlab {

SheetIncrements::SheetIncrements(int m, int n, double T, std::uint64_t seed,
                                 std::uint64_t sample_index, std::vector<double> dw)
    : m_(m), n_(n), T_(T), seed_(seed), sample_index_(sample_index), dw_(std::move(dw)) {
  if (m_ < 1 || n_ < 1) throw std::invalid_argument("SheetIncrements: m, n must be >= 1");
  if (!(T_ > 0.0)) throw std::invalid_argument("SheetIncrements: T must be > 0");
  if (dw_.size() != static_cast<std::size_t>(m_) * static_cast<std::size_t>(n_))
    throw std::invalid_argument("SheetIncrements: dw dimensions must equal m x n");
}

SheetIncrements generate_sheet(std::uint64_t seed, std::uint64_t sample_index, int m, int n,
                               double T) {
  if (m < 1 || n < 1) throw std::invalid_argument("generate_sheet: m, n must be >= 1");
  if (!(T > 0.0)) throw std::invalid_argument("generate_sheet: T must be > 0");
  const double sd = std::sqrt((T / m) * (kPi / n));
  const std::array<std::uint32_t, 2> key{static_cast<std::uint32_t>(seed),
                                         static_cast<std::uint32_t>(seed >> 32)};
  std::vector<double> dw(static_cast<std::size_t>(m) * static_cast<std::size_t>(n));
  for (std::size_t idx = 0; idx < dw.size(); ++idx) {
    const std::array<std::uint32_t, 4> ctr{
        static_cast<std::uint32_t>(idx), static_cast<std::uint32_t>(idx >> 32),
        static_cast<std::uint32_t>(sample_index), static_cast<std::uint32_t>(sample_index >> 32)};
    const auto words = Philox4x32::block(ctr, key);
    const double u = uniform_from_words(words[0], words[1]);
    dw[idx] = sd * inverse_normal_cdf(u);
  }
  return SheetIncrements(m, n, T, seed, sample_index, std::move(dw));
}

SheetIncrements coarsen(const SheetIncrements& s, int time_factor, int space_factor) {
  if (time_factor < 1 || space_factor < 1)
    throw std::invalid_argument("coarsen: factors must be >= 1");
  if (s.m() % time_factor != 0)
    throw std::invalid_argument("coarsen: time_factor must divide m");
  if (s.n() % space_factor != 0)
    throw std::invalid_argument("coarsen: space_factor must divide n");
  const int mc = s.m() / time_factor;
  const int nc = s.n() / space_factor;
  std::vector<double> dw(static_cast<std::size_t>(mc) * static_cast<std::size_t>(nc), 0.0);
  for (int i = 0; i < s.m(); ++i) {
    const int ic = i / time_factor;
    for (int k = 0; k < s.n(); ++k) {
      const int kc = k / space_factor;
      dw[static_cast<std::size_t>(ic) * nc + kc] += s.dw(i, k);
    }
  }
  return SheetIncrements(mc, nc, s.T(), s.seed(), s.sample_index(), std::move(dw));
}

std::vector<double> to_beta(const SheetIncrements& s) {
  const double scale = std::sqrt(s.n() / kPi);
  std::vector<double> beta(s.raw().begin(), s.raw().end());
  for (double& b : beta) b *= scale;
  return beta;
}

namespace {

template <typename T>
void write_raw(std::ostream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_raw(std::istream& in) {
  T value;
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw std::runtime_error("load_sheet: truncated stream");
  return value;
}

constexpr char kMagic[4] = {'S', 'C', 'H', 'S'};

}  // namespace

void dump_sheet(const SheetIncrements& s, std::ostream& out) {
  out.write(kMagic, 4);
  write_raw(out, static_cast<std::int32_t>(s.m()));
  write_raw(out, static_cast<std::int32_t>(s.n()));
  write_raw(out, s.T());
  write_raw(out, s.seed());
  write_raw(out, s.sample_index());
  out.write(reinterpret_cast<const char*>(s.raw().data()),
            static_cast<std::streamsize>(s.raw().size() * sizeof(double)));
}

SheetIncrements load_sheet(std::istream& in) {
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error("load_sheet: bad magic");
  const auto m = read_raw<std::int32_t>(in);
  const auto n = read_raw<std::int32_t>(in);
  const auto T = read_raw<double>(in);
  const auto seed = read_raw<std::uint64_t>(in);
  const auto sample_index = read_raw<std::uint64_t>(in);
  std::vector<double> dw(static_cast<std::size_t>(m) * static_cast<std::size_t>(n));
  in.read(reinterpret_cast<char*>(dw.data()),
          static_cast<std::streamsize>(dw.size() * sizeof(double)));
  if (!in) throw std::runtime_error("load_sheet: truncated payload");
  return SheetIncrements(m, n, T, seed, sample_index, std::move(dw));
}

}  // namespace schlab
