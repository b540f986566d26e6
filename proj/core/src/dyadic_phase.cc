// Copyright 2024 Google LLC.
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

#include "nnashor/dyadic_phase.h"

#include <cstdlib>
#include <string>

#include "absl/status/status.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"

namespace nnashor {
namespace {

using U128 = unsigned __int128;

U128 Mask(int exp) { return exp >= 128 ? ~U128{0} : (U128{1} << exp) - 1; }

std::string U128ToString(U128 v) {
  if (v == 0) return "0";
  std::string out;
  while (v > 0) {
    out.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  return std::string(out.rbegin(), out.rend());
}

bool ParseU128(const std::string& s, U128* out) {
  if (s.empty()) return false;
  U128 v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
    U128 next = v * 10 + static_cast<unsigned>(c - '0');
    if (next / 10 != v) return false;
    v = next;
  }
  *out = v;
  return true;
}

DyadicPhase Normalized(U128 num, int exp) {
  num &= Mask(exp);
  if (num == 0) return DyadicPhase();
  while ((num & 1) == 0) {
    num >>= 1;
    --exp;
  }
  return DyadicPhase::Make(static_cast<__int128>(num), exp);
}

}  // namespace

DyadicPhase DyadicPhase::Make(__int128 num, int exp) {
  if (exp < 0 || exp > kMaxExp) std::abort();
  // Two's complement wraparound gives the right residue mod 2^exp.
  U128 u = static_cast<U128>(num) & Mask(exp);
  if (u == 0) return DyadicPhase();
  while ((u & 1) == 0) {
    u >>= 1;
    --exp;
  }
  return DyadicPhase(static_cast<uint64_t>(u), exp);
}

DyadicPhase DyadicPhase::FromBig(const BigInt& num, int exp) {
  if (exp < 0) {
    return DyadicPhase();
  }
  BigInt modulus = BigInt(1) << exp;
  BigInt r = num % modulus;
  if (r < 0) r += modulus;
  if (exp <= kMaxExp) {
    return Make(static_cast<__int128>(static_cast<uint64_t>(r)), exp);
  }
  int shift = exp - kMaxExp;
  BigInt rounded = (r + (BigInt(1) << (shift - 1))) >> shift;
  rounded %= (BigInt(1) << kMaxExp);
  return Make(static_cast<__int128>(static_cast<uint64_t>(rounded)), kMaxExp);
}

absl::StatusOr<DyadicPhase> DyadicPhase::Parse(const std::string& text) {
  size_t slash = text.find('/');
  if (slash == std::string::npos) {
    U128 v;
    if (!ParseU128(text, &v) || v != 0) {
      return absl::InvalidArgumentError(absl::StrCat("bad phase '", text, "'"));
    }
    return DyadicPhase();
  }
  std::string num_text = text.substr(0, slash);
  std::string den_text = text.substr(slash + 1);
  bool negative = !num_text.empty() && num_text[0] == '-';
  if (negative) num_text = num_text.substr(1);
  U128 num;
  if (!ParseU128(num_text, &num)) {
    return absl::InvalidArgumentError(
        absl::StrCat("bad numerator in '", text, "'"));
  }
  int exp = 0;
  if (den_text.rfind("2^", 0) == 0) {
    if (!absl::SimpleAtoi(den_text.substr(2), &exp) || exp < 0 ||
        exp > kMaxExp) {
      return absl::InvalidArgumentError(
          absl::StrCat("bad exponent in '", text, "'"));
    }
  } else {
    U128 den;
    if (!ParseU128(den_text, &den) || den == 0 || (den & (den - 1)) != 0) {
      return absl::InvalidArgumentError(
          absl::StrCat("denominator is not a power of two in '", text, "'"));
    }
    while (den > 1) {
      den >>= 1;
      ++exp;
    }
    if (exp > kMaxExp) {
      return absl::InvalidArgumentError(
          absl::StrCat("denominator exceeds 2^64 in '", text, "'"));
    }
  }
  DyadicPhase p = Normalized(num, exp);
  return negative ? -p : p;
}

double DyadicPhase::Turns() const {
  if (num_ == 0) return 0.0;
  return static_cast<double>(num_) / static_cast<double>(U128{1} << exp_);
}

DyadicPhase DyadicPhase::operator+(const DyadicPhase& other) const {
  int e = exp_ > other.exp_ ? exp_ : other.exp_;
  U128 a = static_cast<U128>(num_) << (e - exp_);
  U128 b = static_cast<U128>(other.num_) << (e - other.exp_);
  return Normalized(a + b, e);
}

DyadicPhase DyadicPhase::operator-() const {
  if (num_ == 0) return *this;
  U128 full = U128{1} << exp_;
  return DyadicPhase(static_cast<uint64_t>(full - num_), exp_);
}

std::string DyadicPhase::ToString() const {
  return absl::StrCat(num_, "/", U128ToString(U128{1} << exp_));
}

}  // namespace nnashor
