#pragma once

#include <algorithm>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "tweetcast/core/errors.hpp"
#include "tweetcast/text/tokenizer.hpp"

namespace tweetcast {

/// A keyword list. Terms are stored tokenized and lowercased; multi-word
/// terms match as consecutive token runs.
struct KeywordLexicon {
    std::string kind;
    std::vector<std::vector<std::string>> terms;  // deduplicated, each non-empty

    static KeywordLexicon from_terms(std::string kind, const std::vector<std::string>& raw) {
        KeywordLexicon lex;
        lex.kind = std::move(kind);
        std::set<std::vector<std::string>> seen;
        for (const auto& term : raw) {
            auto toks = tokenize(term);
            if (toks.empty()) continue;
            if (seen.insert(toks).second) lex.terms.push_back(std::move(toks));
        }
        if (lex.terms.empty()) throw ContractError("lexicon '" + lex.kind + "' is empty");
        return lex;
    }

    /// Plain text, one term per line, '#'-prefixed comment lines ignored.
    static KeywordLexicon load(const std::string& path, std::string kind) {
        std::ifstream in(path);
        if (!in) throw ParseError("cannot open lexicon " + path);
        std::vector<std::string> raw;
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty() || line[0] == '#') continue;
            raw.push_back(line);
        }
        return from_terms(std::move(kind), raw);
    }

    /// Any-match semantics: true if any term occurs in the token run.
    bool matches(const std::vector<std::string>& tokens) const {
        for (const auto& term : terms) {
            if (term.size() > tokens.size()) continue;
            for (std::size_t i = 0; i + term.size() <= tokens.size(); ++i) {
                if (std::equal(term.begin(), term.end(), tokens.begin() + static_cast<std::ptrdiff_t>(i))) {
                    return true;
                }
            }
        }
        return false;
    }

    bool matches_text(const std::string& text) const { return matches(tokenize(text)); }
};

} // namespace tweetcast
