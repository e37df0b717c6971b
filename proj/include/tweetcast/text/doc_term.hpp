#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "tweetcast/core/errors.hpp"
#include "tweetcast/core/matrix.hpp"
#include "tweetcast/text/tokenizer.hpp"

namespace tweetcast {

/// Sparse documents-by-terms count matrix. Vocabulary is sorted
/// lexicographically and filtered by a minimum corpus-wide count.
struct DocumentTermMatrix {
    std::size_t docs = 0;
    std::vector<std::string> vocabulary;
    // Per document: (vocabulary index, count), sorted by index.
    std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> rows;
    int min_count_threshold = 1;

    std::size_t vocab_size() const { return vocabulary.size(); }

    double total_count(std::size_t term_index) const {
        double total = 0.0;
        for (const auto& row : rows)
            for (const auto& [idx, count] : row)
                if (idx == term_index) total += count;
        return total;
    }

    /// Row sum: number of counted (in-vocabulary) tokens in the document.
    double doc_token_count(std::size_t doc) const {
        double total = 0.0;
        for (const auto& [idx, count] : rows[doc]) total += count;
        return total;
    }

    Matrix dense() const {
        Matrix a(docs, vocab_size());
        for (std::size_t d = 0; d < docs; ++d)
            for (const auto& [idx, count] : rows[d]) a.at(d, idx) = count;
        return a;
    }

    /// A * x for dense x (vocab x c).
    Matrix multiply_dense(const Matrix& x) const {
        if (x.rows != vocab_size())
            throw ShapeError("DocumentTermMatrix::multiply_dense: " + std::to_string(vocab_size()) +
                             " columns vs " + x.shape_str());
        Matrix out(docs, x.cols);
        for (std::size_t d = 0; d < docs; ++d)
            for (const auto& [idx, count] : rows[d])
                for (std::size_t j = 0; j < x.cols; ++j)
                    out.at(d, j) += static_cast<double>(count) * x.at(idx, j);
        return out;
    }

    /// A^T * y for dense y (docs x c).
    Matrix multiply_transposed_dense(const Matrix& y) const {
        if (y.rows != docs)
            throw ShapeError("DocumentTermMatrix::multiply_transposed_dense: " +
                             std::to_string(docs) + " docs vs " + y.shape_str());
        Matrix out(vocab_size(), y.cols);
        for (std::size_t d = 0; d < docs; ++d)
            for (const auto& [idx, count] : rows[d])
                for (std::size_t j = 0; j < y.cols; ++j)
                    out.at(idx, j) += static_cast<double>(count) * y.at(d, j);
        return out;
    }
};

/// Exact token counts over already-tokenized documents, with terms whose
/// corpus total falls below min_count removed from the vocabulary.
inline DocumentTermMatrix build_doc_term_matrix_tokens(
    const std::vector<std::vector<std::string>>& token_docs, int min_count) {
    if (min_count < 1) throw ContractError("build_doc_term_matrix: min_count must be >= 1");
    if (token_docs.empty()) throw ContractError("build_doc_term_matrix: empty corpus");

    std::map<std::string, std::uint64_t> totals;
    for (const auto& doc : token_docs)
        for (const auto& tok : doc) ++totals[tok];

    DocumentTermMatrix out;
    out.docs = token_docs.size();
    out.min_count_threshold = min_count;
    std::map<std::string, std::uint32_t> index;
    for (const auto& [term, total] : totals) {
        if (total >= static_cast<std::uint64_t>(min_count)) {
            index.emplace(term, static_cast<std::uint32_t>(out.vocabulary.size()));
            out.vocabulary.push_back(term);
        }
    }
    out.rows.resize(out.docs);
    for (std::size_t d = 0; d < token_docs.size(); ++d) {
        std::map<std::uint32_t, std::uint32_t> counts;
        for (const auto& tok : token_docs[d]) {
            auto it = index.find(tok);
            if (it != index.end()) ++counts[it->second];
        }
        out.rows[d].assign(counts.begin(), counts.end());
    }
    return out;
}

inline DocumentTermMatrix build_doc_term_matrix(const std::vector<std::string>& docs,
                                                int min_count) {
    std::vector<std::vector<std::string>> token_docs;
    token_docs.reserve(docs.size());
    for (const auto& text : docs) token_docs.push_back(tokenize(text));
    return build_doc_term_matrix_tokens(token_docs, min_count);
}

} // namespace tweetcast
