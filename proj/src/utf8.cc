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

#include "repsumm/utf8.h"

namespace repsumm::utf8 {
namespace {

constexpr char32_t kReplacement = 0xFFFD;

bool IsContinuation(unsigned char b) { return (b & 0xC0) == 0x80; }

}  // namespace

std::vector<CodePoint> Decode(std::string_view text) {
  std::vector<CodePoint> out;
  out.reserve(text.size());
  size_t i = 0;
  while (i < text.size()) {
    const auto lead = static_cast<unsigned char>(text[i]);
    size_t len = 1;
    char32_t value = lead;
    if (lead >= 0x80) {
      if ((lead & 0xE0) == 0xC0) {
        len = 2;
        value = lead & 0x1F;
      } else if ((lead & 0xF0) == 0xE0) {
        len = 3;
        value = lead & 0x0F;
      } else if ((lead & 0xF8) == 0xF0) {
        len = 4;
        value = lead & 0x07;
      } else {
        len = 0;
      }
      if (len == 0 || i + len > text.size()) {
        out.push_back({i, 1, kReplacement});
        ++i;
        continue;
      }
      bool ok = true;
      for (size_t k = 1; k < len; ++k) {
        const auto b = static_cast<unsigned char>(text[i + k]);
        if (!IsContinuation(b)) {
          ok = false;
          break;
        }
        value = (value << 6) | (b & 0x3F);
      }
      if (!ok) {
        out.push_back({i, 1, kReplacement});
        ++i;
        continue;
      }
    }
    out.push_back({i, len, value});
    i += len;
  }
  return out;
}

bool IsSpace(char32_t c) {
  switch (c) {
    case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D: case 0x20:
    case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return c >= 0x2000 && c <= 0x200A;
  }
}

bool IsCjk(char32_t c) {
  return (c >= 0x3000 && c <= 0x30FF) ||   // CJK punctuation, kana
         (c >= 0x3400 && c <= 0x4DBF) ||   // extension A
         (c >= 0x4E00 && c <= 0x9FFF) ||   // unified ideographs
         (c >= 0xF900 && c <= 0xFAFF) ||   // compatibility ideographs
         (c >= 0xFF00 && c <= 0xFFEF) ||   // full-width forms
         (c >= 0x20000 && c <= 0x2FA1F);
}

double CjkRatio(std::string_view text) {
  size_t visible = 0;
  size_t cjk = 0;
  for (const CodePoint& cp : Decode(text)) {
    if (IsSpace(cp.value)) continue;
    ++visible;
    if (IsCjk(cp.value)) ++cjk;
  }
  return visible == 0 ? 0.0 : static_cast<double>(cjk) / static_cast<double>(visible);
}

std::string_view TrimSpace(std::string_view text) {
  const std::vector<CodePoint> cps = Decode(text);
  size_t first = 0;
  while (first < cps.size() && IsSpace(cps[first].value)) ++first;
  if (first == cps.size()) return {};
  size_t last = cps.size();
  while (last > first && IsSpace(cps[last - 1].value)) --last;
  const size_t begin = cps[first].offset;
  const size_t end = cps[last - 1].offset + cps[last - 1].size;
  return text.substr(begin, end - begin);
}

}  // namespace repsumm::utf8
