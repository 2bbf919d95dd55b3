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

#include "cvarbound/pauli.hpp"

#include <bit>
#include <string>

#include "cvarbound/errors.hpp"

namespace cvarbound {

namespace {

void check_qubit_count(int n) {
  if (n < 0 || n > kMaxQubits) {
    throw ValidationError("qubit count " + std::to_string(n) + " outside [0, " +
                          std::to_string(kMaxQubits) + "]");
  }
}

void check_same_size(const PauliString& a, const PauliString& b) {
  if (a.num_qubits() != b.num_qubits()) {
    throw ValidationError("Pauli size mismatch: " + std::to_string(a.num_qubits()) +
                          " vs " + std::to_string(b.num_qubits()));
  }
}

QubitMask range_mask(int n) {
  QubitMask m;
  for (int q = 0; q < n; ++q) m.set(q);
  return m;
}

}  // namespace

PauliString::PauliString(int n) : n_(n) { check_qubit_count(n); }

PauliString::PauliString(int n, const QubitMask& x, const QubitMask& z, int sign)
    : n_(n), x_(x), z_(z), sign_(sign) {
  check_qubit_count(n);
  if (sign != 1 && sign != -1) throw ValidationError("Pauli sign must be +1 or -1");
  const QubitMask outside = ~range_mask(n);
  if ((x & outside).any() || (z & outside).any()) {
    throw ValidationError("Pauli mask has bits at positions >= n = " + std::to_string(n));
  }
}

PauliString PauliString::from_label(std::string_view label) {
  int sign = 1;
  if (!label.empty() && (label.front() == '+' || label.front() == '-')) {
    sign = label.front() == '-' ? -1 : 1;
    label.remove_prefix(1);
  }
  const int n = static_cast<int>(label.size());
  check_qubit_count(n);
  QubitMask x, z;
  for (int i = 0; i < n; ++i) {
    const int q = n - 1 - i;
    switch (label[i]) {
      case 'I': break;
      case 'X': x.set(q); break;
      case 'Y': x.set(q); z.set(q); break;
      case 'Z': z.set(q); break;
      default:
        throw ValidationError("invalid Pauli label character '" + std::string(1, label[i]) +
                              "' in \"" + std::string(label) + "\"");
    }
  }
  return PauliString(n, x, z, sign);
}

PauliString PauliString::single(int n, int qubit, char pauli) {
  if (qubit < 0 || qubit >= n) {
    throw ValidationError("qubit index " + std::to_string(qubit) + " out of range");
  }
  QubitMask x, z;
  switch (pauli) {
    case 'I': break;
    case 'X': x.set(qubit); break;
    case 'Y': x.set(qubit); z.set(qubit); break;
    case 'Z': z.set(qubit); break;
    default: throw ValidationError("invalid Pauli '" + std::string(1, pauli) + "'");
  }
  return PauliString(n, x, z);
}

char PauliString::at(int qubit) const {
  const bool xb = x_.test(qubit);
  const bool zb = z_.test(qubit);
  if (xb && zb) return 'Y';
  if (xb) return 'X';
  if (zb) return 'Z';
  return 'I';
}

std::string PauliString::label() const {
  std::string s;
  s.reserve(n_ + 1);
  if (sign_ < 0) s.push_back('-');
  for (int q = n_ - 1; q >= 0; --q) s.push_back(at(q));
  return s;
}

PauliString PauliString::with_sign(int sign) const { return PauliString(n_, x_, z_, sign); }

PauliString compose(const PauliString& a, const PauliString& b) {
  check_same_size(a, b);
  return PauliString(a.num_qubits(), a.x() ^ b.x(), a.z() ^ b.z(), a.sign() * b.sign());
}

bool commutes(const PauliString& a, const PauliString& b) {
  check_same_size(a, b);
  return ((a.x() & b.z()) ^ (a.z() & b.x())).count() % 2 == 0;
}

bool qubitwise_commutes(const PauliString& a, const PauliString& b) {
  check_same_size(a, b);
  const QubitMask shared = a.support() & b.support();
  const QubitMask differ = (a.x() ^ b.x()) | (a.z() ^ b.z());
  return (shared & differ).none();
}

void validate_cnot_layer(int n, std::span<const CnotPair> layer) {
  QubitMask used;
  for (const auto& [c, t] : layer) {
    if (c < 0 || c >= n || t < 0 || t >= n) {
      throw ValidationError("CNOT (" + std::to_string(c) + "," + std::to_string(t) +
                            ") index out of range for n = " + std::to_string(n));
    }
    if (c == t) throw ValidationError("CNOT control equals target (" + std::to_string(c) + ")");
    if (used.test(c) || used.test(t)) {
      throw ValidationError("overlapping CNOT pairs on qubit " +
                            std::to_string(used.test(c) ? c : t));
    }
    used.set(c);
    used.set(t);
  }
}

PauliString conjugate_through_cnot_layer(const PauliString& p, std::span<const CnotPair> layer) {
  validate_cnot_layer(p.num_qubits(), layer);
  QubitMask x = p.x();
  QubitMask z = p.z();
  int sign = p.sign();
  for (const auto& [c, t] : layer) {
    const bool xc = x.test(c), zc = z.test(c), xt = x.test(t), zt = z.test(t);
    // Aaronson-Gottesman phase rule for CNOT with Hermitian Y.
    if (xc && zt && (xt == zc)) sign = -sign;
    x.set(t, xt != xc);
    z.set(c, zc != zt);
  }
  return PauliString(p.num_qubits(), x, z, sign);
}

std::vector<CommutingGroup> group_commuting(std::span<const WeightedPauli> terms) {
  std::vector<CommutingGroup> groups;
  if (terms.empty()) return groups;
  const int n = terms.front().pauli.num_qubits();
  // Per group: the merged non-identity Pauli on each qubit so far.
  std::vector<PauliString> footprints;
  for (const auto& term : terms) {
    if (term.pauli.num_qubits() != n) {
      throw ValidationError("group_commuting: terms have different qubit counts");
    }
    bool placed = false;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      if (!qubitwise_commutes(footprints[g], term.pauli)) continue;
      groups[g].members.push_back(term);
      footprints[g] = PauliString(n, footprints[g].x() | term.pauli.x(),
                                  footprints[g].z() | term.pauli.z());
      placed = true;
      break;
    }
    if (!placed) {
      groups.push_back({{term}, {}});
      footprints.push_back(term.pauli.unsigned_copy());
    }
  }
  for (std::size_t g = 0; g < groups.size(); ++g) {
    auto& rot = groups[g].rotation;
    rot.assign(n, BasisRotation::kNone);
    for (int q = 0; q < n; ++q) {
      switch (footprints[g].at(q)) {
        case 'X': rot[q] = BasisRotation::kH; break;
        case 'Y': rot[q] = BasisRotation::kHSdg; break;
        default: break;
      }
    }
  }
  return groups;
}

GroupDiagonalization diagonalize_group(const CommutingGroup& group) {
  GroupDiagonalization out;
  if (group.members.empty()) return out;
  const int n = group.members.front().pauli.num_qubits();
  for (std::size_t i = 0; i < group.members.size(); ++i) {
    for (std::size_t j = i + 1; j < group.members.size(); ++j) {
      if (!qubitwise_commutes(group.members[i].pauli, group.members[j].pauli)) {
        throw ValidationError("diagonalize_group: members " + std::to_string(i) + " and " +
                              std::to_string(j) + " are not qubit-wise commuting");
      }
    }
  }
  out.rotation = group.rotation;
  if (static_cast<int>(out.rotation.size()) != n) out.rotation.assign(n, BasisRotation::kNone);
  for (const auto& m : group.members) {
    for (int q = 0; q < n; ++q) {
      const char want = m.pauli.at(q);
      if (want == 'I') continue;
      const BasisRotation needed = want == 'X'   ? BasisRotation::kH
                                   : want == 'Y' ? BasisRotation::kHSdg
                                                 : BasisRotation::kNone;
      // A supplied rotation must agree with every member.
      if (out.rotation[q] != needed) {
        if (group.rotation.size() == static_cast<std::size_t>(n)) {
          throw ValidationError("diagonalize_group: rotation on qubit " + std::to_string(q) +
                                " does not diagonalize member " + m.pauli.label());
        }
        out.rotation[q] = needed;
      }
    }
    // H X H = Z and (H S^dag) Y (S H) = Z, both with sign +1.
    out.terms.push_back({m.pauli.support(), m.weight * m.pauli.sign()});
  }
  return out;
}

double evaluate_diagonal(std::span<const DiagonalTerm> terms, std::uint64_t x) {
  double value = 0.0;
  for (const auto& t : terms) {
    const int parity = std::popcount(low_word(t.mask) & x) & 1;
    value += parity ? -t.coefficient : t.coefficient;
  }
  return value;
}

}  // namespace cvarbound
