#include "acnn/explain.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "acnn/training.hpp"

namespace acnn {

std::vector<TokenAttribution> attribute(const ForwardTrace& trace, const EncodedSentence& sent,
                                        const ModelConfig& cfg, const Vocabulary& vocab) {
  const int s = static_cast<int>(sent.ids.size());
  const int real = sent.true_len;
  if (real < 1 || real > s) throw std::invalid_argument("attribute: bad true_len");
  if (trace.ids != sent.ids) {
    throw std::invalid_argument("attribute: trace does not belong to this sentence");
  }
  if (trace.regions.size() != static_cast<size_t>(cfg.region_count())) {
    throw std::invalid_argument("attribute: trace/config region count mismatch");
  }

  const int M = cfg.region_count();
  std::vector<TokenAttribution> out(static_cast<size_t>(real));
  for (int t = 0; t < real; ++t) {
    out[static_cast<size_t>(t)].token = vocab.token(sent.ids[static_cast<size_t>(t)]);
    out[static_cast<size_t>(t)].per_region.assign(static_cast<size_t>(M), 0.0);
  }

  for (int ri = 0; ri < M; ++ri) {
    const int h = cfg.region_sizes[static_cast<size_t>(ri)];
    const int offset = cfg.padding == Padding::wide ? h - 1 : 0;
    const Vector& weights = trace.regions[static_cast<size_t>(ri)].weights;
    const double share = 1.0 / static_cast<double>(h);
    for (size_t pos = 0; pos < weights.size(); ++pos) {
      const int first = static_cast<int>(pos) - offset;
      for (int wr = 0; wr < h; ++wr) {
        const int row = first + wr;
        if (row < 0 || row >= real) continue;  // padding rows carry no credit
        out[static_cast<size_t>(row)].per_region[static_cast<size_t>(ri)] +=
            weights[pos] * share;
      }
    }
  }

  double total = 0.0;
  for (auto& attr : out) {
    double raw = 0.0;
    for (double x : attr.per_region) raw += x;
    attr.score = raw;
    total += raw;
  }
  if (total > 0.0) {
    for (auto& attr : out) attr.score /= total;
  } else {
    const double uniform = 1.0 / static_cast<double>(real);
    for (auto& attr : out) attr.score = uniform;
  }
  return out;
}

WordWeightReport word_distribution(const ModelParams& params, const ChannelSet& channels,
                                   const ModelConfig& cfg, const Dataset& data,
                                   const std::string& word, int bins) {
  if (bins < 2) throw std::invalid_argument("word_distribution: bins must be >= 2");
  const auto tokens = tokenize(word);
  if (tokens.size() != 1) {
    throw std::invalid_argument("word_distribution: '" + word + "' is not a single token");
  }
  if (!data.vocab->contains(tokens[0])) {
    throw std::invalid_argument("word_distribution: word '" + tokens[0] +
                                "' absent from vocabulary");
  }
  const int32_t word_id = static_cast<int32_t>(data.vocab->id(tokens[0]));

  WordWeightReport report;
  report.word = tokens[0];
  report.bin_edges.resize(static_cast<size_t>(bins) + 1);
  for (int b = 0; b <= bins; ++b) {
    report.bin_edges[static_cast<size_t>(b)] = static_cast<double>(b) / bins;
  }
  report.counts.assign(static_cast<size_t>(bins), 0);

  for (size_t i = 0; i < data.sentences.size(); ++i) {
    const EncodedSentence& sent = data.sentences[i];
    bool present = false;
    for (int t = 0; t < sent.true_len; ++t) {
      if (sent.ids[static_cast<size_t>(t)] == word_id) {
        present = true;
        break;
      }
    }
    if (!present) continue;
    const ForwardTrace trace = forward(sent, channels, params, cfg, false, nullptr);
    const auto attrs = attribute(trace, sent, cfg, *data.vocab);
    for (int t = 0; t < sent.true_len; ++t) {
      if (sent.ids[static_cast<size_t>(t)] != word_id) continue;
      const double score = attrs[static_cast<size_t>(t)].score;
      report.observations.push_back({static_cast<int64_t>(i), sent.label, score});
      int bin = static_cast<int>(score * bins);
      bin = std::clamp(bin, 0, bins - 1);
      report.counts[static_cast<size_t>(bin)] += 1;
      auto& label_counts = report.per_label_counts[sent.label];
      if (label_counts.empty()) label_counts.assign(static_cast<size_t>(bins), 0);
      label_counts[static_cast<size_t>(bin)] += 1;
    }
  }
  return report;
}

ReportFormat parse_report_format(const std::string& name) {
  if (name == "csv") return ReportFormat::csv;
  if (name == "json-lines" || name == "jsonl") return ReportFormat::json_lines;
  throw std::invalid_argument("unknown report format: " + name);
}

namespace {

std::string render_csv(const WordWeightReport& report) {
  std::string out = "word,sentence_id,label,score\n";
  for (const auto& obs : report.observations) {
    out += report.word + "," + std::to_string(obs.sentence_id) + "," +
           std::to_string(obs.label) + "," + csv_num(obs.score) + "\n";
  }
  if (report.observations.empty()) return out;

  out += "\nbin_lo,bin_hi,count\n";
  for (size_t b = 0; b < report.counts.size(); ++b) {
    out += csv_num(report.bin_edges[b]) + "," + csv_num(report.bin_edges[b + 1]) + "," +
           std::to_string(report.counts[b]) + "\n";
  }
  out += "\nlabel,bin_lo,bin_hi,count\n";
  for (const auto& [label, counts] : report.per_label_counts) {
    for (size_t b = 0; b < counts.size(); ++b) {
      out += std::to_string(label) + "," + csv_num(report.bin_edges[b]) + "," +
             csv_num(report.bin_edges[b + 1]) + "," + std::to_string(counts[b]) + "\n";
    }
  }
  return out;
}

std::string render_json_lines(const WordWeightReport& report) {
  using nlohmann::json;
  std::string out;
  for (const auto& obs : report.observations) {
    out += json{{"type", "observation"},
                {"word", report.word},
                {"sentence_id", obs.sentence_id},
                {"label", obs.label},
                {"score", obs.score}}
               .dump();
    out += "\n";
  }
  if (report.observations.empty()) return out;
  for (size_t b = 0; b < report.counts.size(); ++b) {
    out += json{{"type", "histogram_bin"},
                {"bin_lo", report.bin_edges[b]},
                {"bin_hi", report.bin_edges[b + 1]},
                {"count", report.counts[b]}}
               .dump();
    out += "\n";
  }
  for (const auto& [label, counts] : report.per_label_counts) {
    for (size_t b = 0; b < counts.size(); ++b) {
      out += json{{"type", "label_histogram_bin"},
                  {"label", label},
                  {"bin_lo", report.bin_edges[b]},
                  {"bin_hi", report.bin_edges[b + 1]},
                  {"count", counts[b]}}
                 .dump();
      out += "\n";
    }
  }
  return out;
}

}  // namespace

std::string render_report(const WordWeightReport& report, ReportFormat format) {
  return format == ReportFormat::csv ? render_csv(report) : render_json_lines(report);
}

void export_report(const WordWeightReport& report, const std::string& path,
                   ReportFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write report: " + path);
  out << render_report(report, format);
  if (!out) throw std::runtime_error("failed writing report: " + path);
}

}  // namespace acnn
