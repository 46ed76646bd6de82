#pragma once

namespace schlab::windows {

// Expected-behavior windows used by the CLI studies and the verification
// suite. Slope targets sit at the proven orders; the margins absorb
// constants, preasymptotics, and reference bias.
struct SlopeWindow {
  double lo;
  double hi;
  double min_r2;
};

inline constexpr SlopeWindow kSpatialRate{-1.35, -0.75, 0.95};     // target -1
inline constexpr SlopeWindow kTemporalRate{-0.55, -0.25, 0.90};    // target -3/8
inline constexpr SlopeWindow kHolderTime{0.60, 0.90, 0.0};         // target 3/4
inline constexpr SlopeWindow kHolderSpace{1.60, 2.20, 0.0};        // target 2

// Per-doubling decay ratios of the kernel error functionals.
inline constexpr double kKernelL2RatioLo = 3.0;   // order-2 decay, target 4
inline constexpr double kKernelL2RatioHi = 5.5;
inline constexpr double kKernelL1RatioLo = 1.7;   // order-1 decay, target 2
inline constexpr double kKernelL1RatioHi = 2.6;
inline constexpr double kKernelSelfConvergence = 0.05;

inline constexpr double kMalliavinRateSlopeMax = -1.2;  // squared error, target -2
inline constexpr double kTangentFdRelTol = 1e-3;
inline constexpr double kNegativeMomentSeFraction = 0.20;
inline constexpr double kDensityViolationSlack = 0.10;
inline constexpr double kLinearExactnessTol = 1e-10;

}  // namespace schlab::windows
