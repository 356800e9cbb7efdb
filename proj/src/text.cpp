// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 RoK Contributors

#include "rok/text.hpp"

#include <unicode/uchar.h>
#include <unicode/uscript.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <cstdint>

namespace rok {
namespace {

std::vector<UChar32> decode(std::string_view s) {
  std::vector<UChar32> out;
  out.reserve(s.size());
  const auto *bytes = reinterpret_cast<const uint8_t *>(s.data());
  const auto length = static_cast<int32_t>(s.size());
  int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(bytes, i, length, c);
    out.push_back(c < 0 ? 0xFFFD : c);
  }
  return out;
}

void append_utf8(std::string *out, UChar32 c) {
  uint8_t buf[U8_MAX_LENGTH];
  int32_t len = 0;
  UBool error = false;
  U8_APPEND(buf, len, U8_MAX_LENGTH, c, error);
  if (!error) out->append(reinterpret_cast<const char *>(buf), len);
}

bool is_space(UChar32 c) { return u_isUWhiteSpace(c); }
bool is_punct(UChar32 c) { return u_ispunct(c); }

bool is_ideograph(UChar32 c) {
  if (u_hasBinaryProperty(c, UCHAR_IDEOGRAPHIC)) return true;
  UErrorCode status = U_ZERO_ERROR;
  const UScriptCode script = uscript_getScript(c, &status);
  return U_SUCCESS(status) &&
         (script == USCRIPT_HIRAGANA || script == USCRIPT_KATAKANA ||
          script == USCRIPT_HANGUL);
}

std::string encode(const std::vector<UChar32> &cps, size_t begin, size_t end) {
  std::string out;
  for (size_t i = begin; i < end; ++i) append_utf8(&out, cps[i]);
  return out;
}

}  // namespace

std::string normalize(std::string_view s) {
  std::vector<UChar32> folded;
  bool pending_space = false;
  for (UChar32 c : decode(s)) {
    if (is_space(c)) {
      pending_space = !folded.empty();
      continue;
    }
    if (pending_space) folded.push_back(' ');
    pending_space = false;
    folded.push_back(u_foldCase(c, U_FOLD_CASE_DEFAULT));
  }

  size_t begin = 0;
  size_t end = folded.size();
  auto strippable = [](UChar32 c) { return c == ' ' || is_punct(c); };
  while (begin < end && strippable(folded[begin])) ++begin;
  while (end > begin && strippable(folded[end - 1])) --end;
  return encode(folded, begin, end);
}

std::vector<std::string> tokenize(std::string_view normalized) {
  std::vector<std::string> tokens;
  const std::vector<UChar32> cps = decode(normalized);
  size_t i = 0;
  while (i < cps.size()) {
    while (i < cps.size() && is_space(cps[i])) ++i;
    size_t j = i;
    while (j < cps.size() && !is_space(cps[j])) ++j;

    // [i, j) is one whitespace-delimited word.
    size_t b = i, e = j;
    while (b < e && is_punct(cps[b])) ++b;
    while (e > b && is_punct(cps[e - 1])) --e;
    size_t run = b;
    for (size_t k = b; k < e; ++k) {
      if (!is_ideograph(cps[k])) continue;
      if (run < k) tokens.push_back(encode(cps, run, k));
      tokens.push_back(encode(cps, k, k + 1));
      run = k + 1;
    }
    if (run < e) tokens.push_back(encode(cps, run, e));
    i = j;
  }
  return tokens;
}

bool contains_token_run(std::string_view text, std::string_view needle) {
  const auto hay = tokenize(text);
  const auto pin = tokenize(needle);
  if (pin.empty()) return false;
  return std::search(hay.begin(), hay.end(), pin.begin(), pin.end()) !=
         hay.end();
}

bool is_valid_utf8(std::string_view s) {
  const auto *bytes = reinterpret_cast<const uint8_t *>(s.data());
  const auto length = static_cast<int32_t>(s.size());
  int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(bytes, i, length, c);
    if (c < 0) return false;
  }
  return true;
}

std::string_view trim(std::string_view s) {
  constexpr std::string_view kSpace = " \t\r\n\f\v";
  const auto b = s.find_first_not_of(kSpace);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(kSpace);
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.emplace_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace rok
