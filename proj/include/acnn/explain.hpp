#pragma once

#include <map>
#include <string>
#include <vector>

#include "acnn/model.hpp"

namespace acnn {

struct TokenAttribution {
  std::string token;
  double score = 0.0;           // normalized over the sentence's real tokens
  Vector per_region;            // raw contribution from each region size
};

/// Word-level importance from window-level attention: every window splits its
/// weight evenly across its rows, padding rows get nothing, and the real-token
/// totals are renormalized to sum to 1.
std::vector<TokenAttribution> attribute(const ForwardTrace& trace, const EncodedSentence& sent,
                                        const ModelConfig& cfg, const Vocabulary& vocab);

struct WordObservation {
  int64_t sentence_id = 0;
  int label = 0;
  double score = 0.0;
};

struct WordWeightReport {
  std::string word;
  std::vector<WordObservation> observations;
  std::vector<double> bin_edges;                   // bins + 1 edges spanning [0, 1]
  std::vector<int64_t> counts;                     // one per bin
  std::map<int, std::vector<int64_t>> per_label_counts;
};

/// Attribution score of `word` in every dataset sentence containing it, with
/// a histogram over [0, 1] and per-label sub-histograms. Each occurrence is
/// one observation.
WordWeightReport word_distribution(const ModelParams& params, const ChannelSet& channels,
                                   const ModelConfig& cfg, const Dataset& data,
                                   const std::string& word, int bins);

enum class ReportFormat { csv, json_lines };
ReportFormat parse_report_format(const std::string& name);

std::string render_report(const WordWeightReport& report, ReportFormat format);
void export_report(const WordWeightReport& report, const std::string& path, ReportFormat format);

}  // namespace acnn
