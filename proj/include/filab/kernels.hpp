// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace filab::kernels {

// Number of interleaved residue classes advanced together by the fixed-point
// phase generator; lane L produces the phases of n = n0 + L + kLanes*m.
inline constexpr std::size_t kLanes = 4;

// Forward-difference tables for kLanes arithmetic progressions of a
// degree-`order` polynomial over Z/2^64. d[j*kLanes + L] is the j-th
// difference of lane L.
struct LaneTables {
  int order = 0;
  std::vector<std::uint64_t> d;
};

struct ExpSum {
  double re = 0.0;
  double im = 0.0;
};

enum class Isa { scalar, avx2, neon };

struct KernelTable {
  Isa isa;
  const char* name;
  // Writes rows*kLanes consecutive phases and advances the tables by rows.
  void (*fixed_phases)(LaneTables& t, std::uint64_t* out, std::size_t rows);
  // Converts raw fixed-point phases to signed turns, bit-identical across ISAs.
  void (*fixed_to_turns)(const std::uint64_t* in, double* out, std::size_t n);
  // Accumulates sum_i exp(2 pi i turns[i]) into acc.
  void (*exp_sum)(const double* turns, std::size_t n, ExpSum& acc);
};

const KernelTable& scalar_table();
// Null when the variant was not compiled in.
const KernelTable* avx2_table();
const KernelTable* neon_table();

bool isa_available(Isa isa);
// Best kernel for the running CPU, unless overridden by force_isa.
const KernelTable& active();
// Overrides runtime selection; throws InvalidParameter if unavailable.
void force_isa(Isa isa);
void reset_isa();

Isa parse_isa(const std::string& s);
std::string to_string(Isa isa);

}  // namespace filab::kernels
