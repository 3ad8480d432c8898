#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace textgcn {

/// NFC-normalizes UTF-8 text. Invalid sequences are replaced by U+FFFD.
std::string nfc_normalize(std::string_view utf8);

/// Sentence-classification cleaning: lowercase, keep [a-z0-9(),!?'`], split
/// the clitics 's 've n't 're 'd 'll off their host word, pad , ! ( ) ? with
/// spaces and split on whitespace.
std::vector<std::string> tokenize(std::string_view raw_text);

std::string join(const std::vector<std::string>& tokens, std::string_view sep = " ");

}  // namespace textgcn
