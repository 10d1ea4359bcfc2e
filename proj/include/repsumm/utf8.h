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

#ifndef REPSUMM_UTF8_H_
#define REPSUMM_UTF8_H_

#include <string_view>
#include <vector>

namespace repsumm::utf8 {

// One code point of a UTF-8 string: its byte offset, byte length and value.
// Ill-formed bytes decode one at a time as U+FFFD so splitting is total.
struct CodePoint {
  size_t offset = 0;
  size_t size = 0;
  char32_t value = 0;
};

std::vector<CodePoint> Decode(std::string_view text);

bool IsSpace(char32_t c);

// Hiragana, katakana, CJK ideographs, CJK punctuation and full-width forms.
bool IsCjk(char32_t c);

// Share of CJK code points among the non-space code points of `text`
// (0 for text with no such code points).
double CjkRatio(std::string_view text);

std::string_view TrimSpace(std::string_view text);

}  // namespace repsumm::utf8

#endif  // REPSUMM_UTF8_H_
