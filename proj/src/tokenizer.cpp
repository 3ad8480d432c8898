#include "textgcn/tokenizer.hpp"

#include <unicode/normalizer2.h>
#include <unicode/unistr.h>

#include <array>
#include <utility>

#include "textgcn/error.hpp"

namespace textgcn {

namespace {

bool kept(char c) {
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '(' || c == ')' || c == ',' ||
         c == '!' || c == '?' || c == '\'' || c == '`';
}

void replace_all(std::string& s, std::string_view from, std::string_view to) {
  std::string out;
  out.reserve(s.size() + s.size() / 8);
  std::size_t pos = 0;
  while (true) {
    const auto hit = s.find(from, pos);
    if (hit == std::string::npos) break;
    out.append(s, pos, hit - pos);
    out.append(to);
    pos = hit + from.size();
  }
  out.append(s, pos, std::string::npos);
  s = std::move(out);
}

// Applied in order, each over the whole string, like a chain of regex substitutions.
constexpr std::array<std::pair<std::string_view, std::string_view>, 11> kRewrites{{
    {"'s", " 's"},
    {"'ve", " 've"},
    {"n't", " n't"},
    {"'re", " 're"},
    {"'d", " 'd"},
    {"'ll", " 'll"},
    {",", " , "},
    {"!", " ! "},
    {"(", " ( "},
    {")", " ) "},
    {"?", " ? "},
}};

}  // namespace

std::string nfc_normalize(std::string_view utf8) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw Error(ErrorCode::invalid_argument, "ICU NFC normalizer unavailable");
  const auto text = icu::UnicodeString::fromUTF8(
      icu::StringPiece(utf8.data(), static_cast<std::int32_t>(utf8.size())));
  const icu::UnicodeString normalized = nfc->normalize(text, status);
  if (U_FAILURE(status)) throw Error(ErrorCode::invalid_argument, "NFC normalization failed");
  std::string out;
  normalized.toUTF8String(out);
  return out;
}

std::vector<std::string> tokenize(std::string_view raw_text) {
  std::string s = nfc_normalize(raw_text);
  for (char& c : s) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    if (!kept(c)) c = ' ';
  }
  for (const auto& [from, to] : kRewrites) replace_all(s, from, to);

  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && s[i] == ' ') ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ') ++j;
    if (j > i) tokens.emplace_back(s, i, j - i);
    i = j;
  }
  return tokens;
}

std::string join(const std::vector<std::string>& tokens, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.append(sep);
    out.append(tokens[i]);
  }
  return out;
}

}  // namespace textgcn
