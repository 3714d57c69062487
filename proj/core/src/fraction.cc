// Copyright 2026 The LSK Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lsk/fraction.h"

namespace lsk {

std::string Fraction::Format(int decimals) const {
  unsigned __int128 scale = 1;
  for (int i = 0; i < decimals; ++i) scale *= 10;
  // Round half up in integer arithmetic so output never depends on
  // floating-point formatting.
  const unsigned __int128 scaled =
      den == 0 ? 0
               : (static_cast<unsigned __int128>(num) * scale * 2 + den) /
                     (static_cast<unsigned __int128>(den) * 2);
  const auto whole = static_cast<std::uint64_t>(scaled / scale);
  auto frac = static_cast<std::uint64_t>(scaled % scale);
  std::string digits(static_cast<std::size_t>(decimals), '0');
  for (int i = decimals - 1; i >= 0; --i) {
    digits[static_cast<std::size_t>(i)] = static_cast<char>('0' + frac % 10);
    frac /= 10;
  }
  std::string out = std::to_string(whole);
  if (decimals > 0) out += "." + digits;
  return out;
}

}  // namespace lsk
