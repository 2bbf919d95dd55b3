// Copyright 2026 The cvarbound Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <bitset>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cvarbound {

inline constexpr int kMaxQubits = 128;
using QubitMask = std::bitset<kMaxQubits>;

/// Low 64 bits of a mask. Callers guarantee n <= 64.
inline std::uint64_t low_word(const QubitMask& m) {
  static const QubitMask kLow{~std::uint64_t{0}};
  return (m & kLow).to_ullong();
}

/// n-qubit Pauli operator in X/Z bit-mask form with a tracked +-1 sign.
/// Y on qubit q is x[q] = z[q] = 1 (the Hermitian Y, not XZ).
class PauliString {
 public:
  PauliString() = default;
  /// Identity on n qubits.
  explicit PauliString(int n);
  PauliString(int n, const QubitMask& x, const QubitMask& z, int sign = 1);

  /// Parses "-XIZ": optional sign, most-significant qubit first, so the
  /// rightmost character is qubit 0.
  static PauliString from_label(std::string_view label);
  /// Single non-identity factor `pauli` in {'I','X','Y','Z'} on `qubit`.
  static PauliString single(int n, int qubit, char pauli);

  int num_qubits() const { return n_; }
  const QubitMask& x() const { return x_; }
  const QubitMask& z() const { return z_; }
  int sign() const { return sign_; }
  QubitMask support() const { return x_ | z_; }

  char at(int qubit) const;
  bool is_identity() const { return x_.none() && z_.none(); }
  /// Number of non-identity factors.
  int weight() const { return static_cast<int>(support().count()); }

  std::string label() const;

  PauliString with_sign(int sign) const;
  PauliString unsigned_copy() const { return with_sign(1); }

  friend bool operator==(const PauliString&, const PauliString&) = default;

 private:
  int n_ = 0;
  QubitMask x_;
  QubitMask z_;
  int sign_ = 1;
};

/// Product with the +-i phase dropped; the sign is the product of signs.
PauliString compose(const PauliString& a, const PauliString& b);

/// True iff the symplectic product of a and b is even.
bool commutes(const PauliString& a, const PauliString& b);

/// True iff on every qubit a and b are equal or one of them is I.
bool qubitwise_commutes(const PauliString& a, const PauliString& b);

struct CnotPair {
  int control = 0;
  int target = 0;
  friend bool operator==(const CnotPair&, const CnotPair&) = default;
};

/// Throws ValidationError if pairs overlap, contain a self-pair, or leave
/// [0, n).
void validate_cnot_layer(int n, std::span<const CnotPair> layer);

/// U p U^dagger for U the product of the CNOTs in `layer`, sign included.
PauliString conjugate_through_cnot_layer(const PauliString& p,
                                         std::span<const CnotPair> layer);

struct WeightedPauli {
  PauliString pauli;
  double weight = 1.0;
};

/// Single-qubit basis change applied before computational-basis readout.
/// kHSdg means S^dagger followed by H, which maps Y to Z.
enum class BasisRotation { kNone, kH, kHSdg };

struct CommutingGroup {
  std::vector<WeightedPauli> members;
  std::vector<BasisRotation> rotation;  // one entry per qubit
};

/// Greedy first-fit partition into qubit-wise commuting groups, in input
/// order. Each group carries the rotation that diagonalizes it.
std::vector<CommutingGroup> group_commuting(std::span<const WeightedPauli> terms);

/// A Z-type member after rotation: value on bit string x is
/// coefficient * (-1)^popcount(x & mask).
struct DiagonalTerm {
  QubitMask mask;
  double coefficient = 0.0;  // weight times sign
};

struct GroupDiagonalization {
  std::vector<BasisRotation> rotation;
  std::vector<DiagonalTerm> terms;
};

GroupDiagonalization diagonalize_group(const CommutingGroup& group);

/// h_j(x) for a diagonalized group; x holds qubit q in bit q.
double evaluate_diagonal(std::span<const DiagonalTerm> terms, std::uint64_t x);

}  // namespace cvarbound
