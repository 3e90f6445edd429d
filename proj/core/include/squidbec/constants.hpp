#pragma once

// Physical constants (SI, CODATA 2018 / exact where the SI fixes them).

namespace squidbec {

inline constexpr double kPlanck = 6.62607015e-34;        // J s (exact)
inline constexpr double kHbar = 1.054571817e-34;         // J s
inline constexpr double kElementaryCharge = 1.602176634e-19;  // C (exact)
inline constexpr double kFluxQuantum = kPlanck / (2.0 * kElementaryCharge);  // Wb
inline constexpr double kMu0 = 1.25663706212e-6;         // N / A^2
inline constexpr double kBohrMagneton = 9.2740100783e-24;  // J / T
inline constexpr double kAtomicMassUnit = 1.66053906660e-27;  // kg

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

}  // namespace squidbec
