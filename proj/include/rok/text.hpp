// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 RoK Contributors

#ifndef ROK_TEXT_HPP_
#define ROK_TEXT_HPP_

#include <string>
#include <string_view>
#include <vector>

namespace rok {

// Canonical form used for entity identity and matching: Unicode simple case
// fold, internal whitespace runs collapsed to one ASCII space, leading and
// trailing whitespace and punctuation removed.
std::string normalize(std::string_view s);

// Tokens of an already-normalized string. Whitespace separates tokens;
// punctuation is trimmed from token ends; ideographic characters (CJK) are
// split into one token each so that whitespace-free scripts still produce
// usable token sets.
std::vector<std::string> tokenize(std::string_view normalized);

// True when `text` (normalized) contains `needle` (normalized) as a
// contiguous run of whole tokens.
bool contains_token_run(std::string_view text, std::string_view needle);

bool is_valid_utf8(std::string_view s);

// ASCII whitespace trim.
std::string_view trim(std::string_view s);

std::vector<std::string> split(std::string_view s, char sep);

}  // namespace rok

#endif  // ROK_TEXT_HPP_
