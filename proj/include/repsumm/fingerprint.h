// Copyright 2026 The repsumm Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef REPSUMM_FINGERPRINT_H_
#define REPSUMM_FINGERPRINT_H_

#include <cstdint>
#include <string>
#include <string_view>

namespace repsumm {

// 64-bit FNV-1a. Stable across platforms, used to tie artifacts together.
constexpr uint64_t Fnv1a64(std::string_view bytes) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

// 16 lowercase hex digits of Fnv1a64(bytes).
std::string Fingerprint(std::string_view bytes);

}  // namespace repsumm

#endif  // REPSUMM_FINGERPRINT_H_
