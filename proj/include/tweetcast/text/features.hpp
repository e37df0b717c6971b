#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tweetcast/core/errors.hpp"
#include "tweetcast/core/matrix.hpp"
#include "tweetcast/data/tensors.hpp"
#include "tweetcast/text/doc_term.hpp"
#include "tweetcast/text/lexicon.hpp"
#include "tweetcast/text/segments.hpp"
#include "tweetcast/text/svd.hpp"
#include "tweetcast/text/tweets.hpp"

namespace tweetcast {

/// Where each document landed: (segment index, bin index), or nothing if
/// it fell outside every segment radius or outside the study window.
struct DocBinAssignment {
    std::size_t segments = 0;
    std::size_t bins = 0;
    std::vector<std::optional<std::pair<std::size_t, std::size_t>>> slots;
};

/// Assign tweets to (segment, 15-minute bin) slots over a fixed grid.
inline DocBinAssignment assign_docs(const std::vector<TweetRecord>& tweets,
                                    const std::vector<SegmentCenter>& centers,
                                    std::int64_t start_epoch, std::size_t bins, double radius_km) {
    DocBinAssignment out;
    out.segments = centers.size();
    out.bins = bins;
    out.slots.resize(tweets.size());
    std::map<long, std::size_t> seg_index;
    for (std::size_t i = 0; i < centers.size(); ++i) seg_index[centers[i].id] = i;
    const std::int64_t end_epoch = start_epoch + static_cast<std::int64_t>(bins) * kBinSeconds;
    for (std::size_t i = 0; i < tweets.size(); ++i) {
        const auto& t = tweets[i];
        if (t.ts < start_epoch || t.ts >= end_epoch) continue;
        const auto seg = assign_to_segment(t, centers, radius_km);
        if (!seg) continue;
        const std::size_t bin = static_cast<std::size_t>((t.ts - start_epoch) / kBinSeconds);
        out.slots[i] = std::make_pair(seg_index.at(*seg), bin);
    }
    return out;
}

/// Per (bin, segment) count of documents matching the lexicon; a document
/// counts at most once however many terms it contains.
inline Matrix keyword_count(const std::vector<std::vector<std::string>>& token_docs,
                            const KeywordLexicon& lexicon, const DocBinAssignment& assignment) {
    if (token_docs.size() != assignment.slots.size())
        throw ContractError("keyword_count: document/assignment size mismatch");
    Matrix out(assignment.bins, assignment.segments);
    for (std::size_t d = 0; d < token_docs.size(); ++d) {
        if (!assignment.slots[d]) continue;
        if (!lexicon.matches(token_docs[d])) continue;
        const auto [seg, bin] = *assignment.slots[d];
        out.at(bin, seg) += 1.0;
    }
    return out;
}

/// Per (bin, segment) sum over assigned documents of the sum of their k
/// projected coordinates; empty cells are 0.
inline Matrix term_frequency_signal(const SvdFactors& factors, const DocBinAssignment& assignment) {
    if (factors.left.rows != assignment.slots.size())
        throw ContractError("term_frequency_signal: factor rows do not match documents");
    Matrix out(assignment.bins, assignment.segments);
    const Matrix coords = factors.transformed();
    for (std::size_t d = 0; d < coords.rows; ++d) {
        if (!assignment.slots[d]) continue;
        double s = 0.0;
        for (std::size_t j = 0; j < coords.cols; ++j) s += coords.at(d, j);
        const auto [seg, bin] = *assignment.slots[d];
        out.at(bin, seg) += s;
    }
    return out;
}

/// Raw-count alternative for the term-frequency channel: per-cell sum of
/// in-vocabulary token counts.
inline Matrix token_count_signal(const DocumentTermMatrix& dtm, const DocBinAssignment& assignment) {
    if (dtm.docs != assignment.slots.size())
        throw ContractError("token_count_signal: matrix rows do not match documents");
    Matrix out(assignment.bins, assignment.segments);
    for (std::size_t d = 0; d < dtm.docs; ++d) {
        if (!assignment.slots[d]) continue;
        const auto [seg, bin] = *assignment.slots[d];
        out.at(bin, seg) += dtm.doc_token_count(d);
    }
    return out;
}

enum class TermFreqMode { SvdSum, RawCounts };

struct FeaturePipelineConfig {
    int min_count = 3;
    std::size_t svd_k = 100;
    double radius_km = 5.0;
    TermFreqMode term_freq_mode = TermFreqMode::SvdSum;
    std::uint64_t svd_seed = 1;
};

struct FeaturePipelineResult {
    TweetFeatureTensor features;
    DocBinAssignment assignment;
    SvdFactors factors;   // empty (k = 0) when the corpus was too small
    std::size_t assigned_docs = 0;
};

/// The end-to-end tweet feature extraction: assignment, token counts,
/// rank-k compression, keyword channels.
inline FeaturePipelineResult build_tweet_features(const std::vector<TweetRecord>& tweets,
                                                  const std::vector<SegmentCenter>& centers_in,
                                                  const KeywordLexicon& accident,
                                                  const KeywordLexicon& culture,
                                                  std::int64_t start_epoch, std::size_t bins,
                                                  const FeaturePipelineConfig& cfg) {
    // Tensor columns are sorted by segment id; sort the centers up front so
    // assignment indices line up with the columns.
    std::vector<SegmentCenter> centers = centers_in;
    std::sort(centers.begin(), centers.end(),
              [](const SegmentCenter& a, const SegmentCenter& b) { return a.id < b.id; });

    FeaturePipelineResult r;
    r.assignment = assign_docs(tweets, centers, start_epoch, bins, cfg.radius_km);

    std::vector<std::vector<std::string>> token_docs(tweets.size());
    for (std::size_t i = 0; i < tweets.size(); ++i)
        if (r.assignment.slots[i]) {
            token_docs[i] = tokenize(tweets[i].text);
            ++r.assigned_docs;
        }

    TweetFeatureTensor& f = r.features;
    for (const auto& c : centers) f.segment_ids.push_back(c.id);
    f.start_epoch = start_epoch;
    f.term_freq = Matrix(bins, centers.size());
    f.accident = keyword_count(token_docs, accident, r.assignment);
    f.culture = keyword_count(token_docs, culture, r.assignment);

    if (r.assigned_docs > 0) {
        DocumentTermMatrix dtm = build_doc_term_matrix_tokens(token_docs, cfg.min_count);
        const std::size_t min_dim = std::min(dtm.docs, dtm.vocab_size());
        if (min_dim >= 1) {
            const std::size_t k = std::min(cfg.svd_k, min_dim);
            r.factors = truncated_svd(dtm, k, RngState(cfg.svd_seed));
            f.term_freq = cfg.term_freq_mode == TermFreqMode::SvdSum
                              ? term_frequency_signal(r.factors, r.assignment)
                              : token_count_signal(dtm, r.assignment);
        }
    }
    f.validate();
    return r;
}

} // namespace tweetcast
