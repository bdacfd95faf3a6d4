#pragma once

// Monoisotopic mass constants, in Daltons.
//
// Residue masses are stored to 1e-5 Da. The knapsack table relies on every
// residue mass being an exact multiple of kMassQuantum; keep that true when
// editing. Bump kConstantsVersion whenever any value here changes: the
// index cache embeds a hash of the table and refuses to load on mismatch.

#include <cstdint>

namespace specnova::constants {

inline constexpr std::uint32_t kConstantsVersion = 1;

inline constexpr double kMassQuantum = 1e-5;

inline constexpr double kWater = 18.010565;
inline constexpr double kProton = 1.007276;

inline constexpr double kGly = 57.02146;
inline constexpr double kAla = 71.03711;
inline constexpr double kSer = 87.03203;
inline constexpr double kPro = 97.05276;
inline constexpr double kVal = 99.06841;
inline constexpr double kThr = 101.04768;
inline constexpr double kCys = 103.00919;
inline constexpr double kLeu = 113.08406;
inline constexpr double kIle = 113.08406;
inline constexpr double kAsn = 114.04293;
inline constexpr double kAsp = 115.02694;
inline constexpr double kGln = 128.05858;
inline constexpr double kLys = 128.09496;
inline constexpr double kGlu = 129.04259;
inline constexpr double kMet = 131.04049;
inline constexpr double kHis = 137.05891;
inline constexpr double kPhe = 147.06841;
inline constexpr double kArg = 156.10111;
inline constexpr double kTyr = 163.06333;
inline constexpr double kTrp = 186.07931;

inline constexpr double kCarbamidomethyl = 57.02146;
inline constexpr double kOxidation = 15.99491;
inline constexpr double kDeamidation = 0.98402;

}  // namespace specnova::constants
