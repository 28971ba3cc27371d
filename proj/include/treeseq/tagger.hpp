#pragma once

// Sequence tagger for the label encodings: an averaged perceptron that
// classifies each word independently from the window features.
//
// Three passes are supported:
//   Psi       predicts the collapsed leaf unary chain of each word;
//   Phi       predicts (n, c) labels from PoS tags enriched with Psi output;
//   PhiPrime  predicts (n, c, u) labels in a single pass.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "treeseq/decoding.hpp"
#include "treeseq/encoding.hpp"
#include "treeseq/error.hpp"
#include "treeseq/features.hpp"
#include "treeseq/io.hpp"
#include "treeseq/perceptron.hpp"

namespace treeseq {

enum class Pass { Psi, Phi, PhiPrime };

inline std::string_view pass_name(Pass p) {
  switch (p) {
    case Pass::Psi: return "psi";
    case Pass::Phi: return "phi";
    case Pass::PhiPrime: return "phi-prime";
  }
  return {};
}

inline Pass parse_pass(std::string_view s) {
  if (s == "psi") return Pass::Psi;
  if (s == "phi") return Pass::Phi;
  if (s == "phi-prime") return Pass::PhiPrime;
  throw Error(ErrorKind::MalformedInput, "unknown pass '" + std::string(s) + "'");
}

inline constexpr int kModelVersion = 1;

struct TaggerModel {
  Pass pass = Pass::Phi;
  Scheme scheme;
  int epochs = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> labels;  // inventory, first-occurrence order
  std::unordered_map<std::string, std::vector<double>> weights;  // averaged
};

struct TrainOptions {
  Pass pass = Pass::Phi;
  int epochs = 20;
  std::uint64_t seed = 42;
  // Scale metadata stored in the model; inferred from the labels if unset.
  std::optional<Scheme> scheme;
  // Folds used to produce predicted leaf chains for Phi training data.
  std::size_t jackknife_folds = 4;
};

namespace detail {

inline bool is_final_label(std::string_view tag) {
  return tag.substr(0, kEosSymbol.size() + 1) == std::string(kEosSymbol) + "|";
}

// Label indices permitted at a position: Phi passes only emit the dummy at
// the last word, and never elsewhere.
struct Candidates {
  std::vector<std::uint32_t> inner, last;

  Candidates(const std::vector<std::string>& labels, Pass pass) {
    if (pass == Pass::Psi) return;
    for (std::uint32_t l = 0; l < labels.size(); ++l)
      (is_final_label(labels[l]) ? last : inner).push_back(l);
  }

  std::span<const std::uint32_t> at(std::size_t i, std::size_t n) const {
    return i + 1 == n ? last : inner;
  }
};

inline std::string predict_one(const TaggerModel& m,
                               const std::vector<std::string>& feats,
                               std::span<const std::uint32_t> allowed,
                               bool restricted) {
  std::vector<double> scores(m.labels.size(), 0.0);
  for (const auto& f : feats) {
    auto it = m.weights.find(f);
    if (it == m.weights.end()) continue;
    for (std::size_t l = 0; l < scores.size(); ++l) scores[l] += it->second[l];
  }
  std::optional<std::size_t> arg;
  auto consider = [&](std::size_t l) {
    if (!arg || scores[l] > scores[*arg]) arg = l;
  };
  if (restricted)
    for (auto l : allowed) consider(l);
  else
    for (std::size_t l = 0; l < scores.size(); ++l) consider(l);
  if (!arg) return {};
  return m.labels[*arg];
}

}  // namespace detail

// Raw tag strings, one per token.
inline std::vector<std::string> predict_tags(const TaggerModel& m,
                                             const std::vector<Token>& tokens) {
  const auto padded = pad_sentence(tokens);
  const detail::Candidates cand(m.labels, m.pass);
  const bool restricted = m.pass != Pass::Psi;
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    auto feats = extract_features(padded, i + 1);
    out.push_back(detail::predict_one(m, feats, cand.at(i, tokens.size()),
                                      restricted));
  }
  return out;
}

inline std::vector<std::optional<std::string>> predict_psi(
    const TaggerModel& m, const std::vector<Token>& tokens) {
  std::vector<std::optional<std::string>> out;
  for (const auto& t : predict_tags(m, tokens))
    out.push_back(t.empty() ? std::nullopt : parse_psi_tag(t));
  return out;
}

// Labels for a Phi or PhiPrime model. The last word always gets the dummy;
// an empty inventory falls back to attaching every word to the root.
inline std::vector<Label> predict(const TaggerModel& m,
                                  const std::vector<Token>& tokens) {
  auto tags = predict_tags(m, tokens);
  std::vector<Label> out;
  out.reserve(tags.size());
  for (std::size_t i = 0; i < tags.size(); ++i) {
    const bool last = i + 1 == tags.size();
    if (tags[i].empty()) {
      out.push_back(last ? Label::eos() : Label{Level::root(), "X", {}});
      continue;
    }
    Label l = parse_label(tags[i]);
    if (last && !l.is_eos()) l = Label::eos(l.leaf_unary);
    out.push_back(std::move(l));
  }
  return out;
}

// Generic training over string tags.
inline TaggerModel train_tags(const std::vector<TaggedSentence>& corpus,
                              const TrainOptions& opts) {
  if (corpus.empty()) throw Error(ErrorKind::EmptyCorpus, "no training sentences");

  TaggerModel model;
  model.pass = opts.pass;
  model.scheme = opts.scheme.value_or(Scheme{});
  model.epochs = opts.epochs;
  model.seed = opts.seed;

  std::unordered_map<std::string, std::uint32_t> label_id;
  for (const auto& s : corpus) {
    if (s.tags.size() != s.tokens.size())
      throw Error(ErrorKind::LengthMismatch, "tag count differs from token count");
    for (const auto& t : s.tags)
      if (label_id.try_emplace(t, static_cast<std::uint32_t>(model.labels.size()))
              .second)
        model.labels.push_back(t);
  }

  AveragedPerceptron perceptron(model.labels.size());
  const detail::Candidates cand(model.labels, opts.pass);

  struct Instance {
    std::vector<std::uint32_t> features;
    std::uint32_t gold;
  };
  std::vector<std::vector<Instance>> data;
  data.reserve(corpus.size());
  for (const auto& s : corpus) {
    const auto padded = pad_sentence(s.tokens);
    auto& sent = data.emplace_back();
    for (std::size_t i = 0; i < s.tokens.size(); ++i) {
      Instance inst{{}, label_id.at(s.tags[i])};
      for (const auto& f : extract_features(padded, i + 1))
        inst.features.push_back(perceptron.intern(f));
      sent.push_back(std::move(inst));
    }
  }

  std::mt19937_64 rng(opts.seed);
  std::vector<std::size_t> order(data.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (int epoch = 0; epoch < opts.epochs; ++epoch) {
    // Fisher-Yates with explicit modulo draws, identical on every platform.
    for (std::size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[rng() % i]);
    for (auto idx : order) {
      const auto& sent = data[idx];
      for (std::size_t i = 0; i < sent.size(); ++i)
        perceptron.learn(sent[i].features, sent[i].gold,
                         cand.at(i, sent.size()));
    }
  }
  model.weights = perceptron.averaged();
  return model;
}

namespace detail {

inline std::optional<std::string> leaf_chain(const Token& tok, const Label& l) {
  auto cut = tok.pos.rfind(kChainSep);
  if (cut != std::string::npos) return tok.pos.substr(0, cut);
  return l.leaf_unary;
}

inline TaggedSentence psi_view(const LabeledSentence& s) {
  TaggedSentence out;
  for (std::size_t i = 0; i < s.tokens.size(); ++i) {
    out.tokens.push_back({s.tokens[i].word, base_pos(s.tokens[i].pos)});
    out.tags.push_back(psi_tag(leaf_chain(s.tokens[i], s.labels[i])));
  }
  return out;
}

// Scale family seen in the data; nullopt when no content label says.
inline Scheme infer_scheme(const std::vector<LabeledSentence>& corpus,
                           Pass pass) {
  bool abs = false, rel = false, root = false, neg = false;
  for (const auto& s : corpus) {
    if (s.labels.size() != s.tokens.size())
      throw Error(ErrorKind::LengthMismatch, "label count differs from token count");
    for (std::size_t i = 0; i < s.labels.size(); ++i) {
      const auto& l = s.labels[i];
      switch (l.level.kind) {
        case LevelKind::Absolute: abs = true; break;
        case LevelKind::Relative: rel = true; break;
        case LevelKind::Root: root = true; break;
        case LevelKind::Neg: neg = true; break;
        case LevelKind::Eos: break;
      }
      if (pass == Pass::Phi && l.leaf_unary)
        throw Error(ErrorKind::MixedSchemes,
                    "3-tuple labels given to a two-pass Phi trainer");
      if (pass == Pass::PhiPrime &&
          s.tokens[i].pos.find(kChainSep) != std::string::npos)
        throw Error(ErrorKind::MixedSchemes,
                    "chain-enriched PoS tags given to a single-pass trainer");
    }
  }
  if (abs && (rel || neg))
    throw Error(ErrorKind::MixedSchemes, "absolute and relative labels mixed");
  if (root && neg)
    throw Error(ErrorKind::MixedSchemes, "ROOT and NEG labels mixed");
  Scheme sc;
  sc.unaries = pass == Pass::PhiPrime ? UnaryStrategy::Extended
                                      : UnaryStrategy::TwoPass;
  if (abs)
    sc.scale = Scale::Absolute;
  else if (neg)
    sc.scale = Scale::KAry;
  else if (root)
    sc.scale = Scale::RelativeWithRoot;
  else
    sc.scale = Scale::Relative;
  return sc;
}

inline bool same_family(Scale a, Scale b) {
  return (a == Scale::Absolute) == (b == Scale::Absolute);
}

}  // namespace detail

// Leaf-chain predictions for every sentence, each produced by a model that
// did not see that sentence (a single model when the corpus is too small).
inline std::vector<std::vector<std::optional<std::string>>> jackknife_psi(
    const std::vector<TaggedSentence>& psi_data, const TrainOptions& opts) {
  TrainOptions psi_opts = opts;
  psi_opts.pass = Pass::Psi;
  const std::size_t folds = std::min(opts.jackknife_folds, psi_data.size());
  std::vector<std::vector<std::optional<std::string>>> out(psi_data.size());
  if (folds < 2) {
    auto m = train_tags(psi_data, psi_opts);
    for (std::size_t i = 0; i < psi_data.size(); ++i)
      out[i] = predict_psi(m, psi_data[i].tokens);
    return out;
  }
  for (std::size_t f = 0; f < folds; ++f) {
    std::vector<TaggedSentence> rest;
    for (std::size_t i = 0; i < psi_data.size(); ++i)
      if (i % folds != f) rest.push_back(psi_data[i]);
    auto m = train_tags(rest, psi_opts);
    for (std::size_t i = f; i < psi_data.size(); i += folds)
      out[i] = predict_psi(m, psi_data[i].tokens);
  }
  return out;
}

// Builds the per-pass view of a labeled corpus and trains on it.
//   Psi:      bare PoS -> leaf chain (from enriched PoS or the u fields)
//   Phi:      PoS enriched with jackknifed Psi predictions -> (n, c)
//   PhiPrime: bare PoS -> (n, c, u)
inline TaggerModel train(const std::vector<LabeledSentence>& corpus,
                         const TrainOptions& opts) {
  if (corpus.empty()) throw Error(ErrorKind::EmptyCorpus, "no training sentences");
  Scheme inferred = detail::infer_scheme(corpus, opts.pass);
  TrainOptions o = opts;
  if (o.scheme) {
    if (!detail::same_family(o.scheme->scale, inferred.scale))
      throw Error(ErrorKind::MixedSchemes,
                  "labels do not match scale '" +
                      std::string(scale_name(o.scheme->scale)) + "'");
    o.scheme->unaries = inferred.unaries;
  } else {
    o.scheme = inferred;
  }

  std::vector<TaggedSentence> view;
  view.reserve(corpus.size());
  switch (o.pass) {
    case Pass::Psi:
      for (const auto& s : corpus) view.push_back(detail::psi_view(s));
      break;
    case Pass::Phi: {
      std::vector<TaggedSentence> psi_data;
      for (const auto& s : corpus) psi_data.push_back(detail::psi_view(s));
      auto predicted = jackknife_psi(psi_data, o);
      for (std::size_t i = 0; i < corpus.size(); ++i) {
        TaggedSentence t;
        t.tokens = merge_psi(psi_data[i].tokens, predicted[i]);
        for (const auto& l : corpus[i].labels) t.tags.push_back(to_string(l));
        view.push_back(std::move(t));
      }
      break;
    }
    case Pass::PhiPrime:
      for (const auto& s : corpus) {
        TaggedSentence t{s.tokens, {}};
        for (const auto& l : s.labels) t.tags.push_back(to_string(l));
        view.push_back(std::move(t));
      }
      break;
  }
  return train_tags(view, o);
}

// ---------------------------------------------------------------------------
// Model files: "key=value" header lines, then feature<TAB>label<TAB>weight.

inline void save_model(const TaggerModel& m, std::ostream& out) {
  out << "version=" << kModelVersion << '\n'
      << "pass=" << pass_name(m.pass) << '\n'
      << "scale=" << scale_name(m.scheme.scale) << '\n'
      << "k=" << m.scheme.k << '\n'
      << "epochs=" << m.epochs << '\n'
      << "seed=" << m.seed << '\n'
      << "labels=" << m.labels.size() << '\n';
  for (const auto& l : m.labels) out << "label=" << l << '\n';

  std::vector<const std::string*> keys;
  keys.reserve(m.weights.size());
  for (const auto& [f, row] : m.weights) keys.push_back(&f);
  std::sort(keys.begin(), keys.end(),
            [](const std::string* a, const std::string* b) { return *a < *b; });
  char buf[64];
  for (const auto* f : keys) {
    const auto& row = m.weights.at(*f);
    for (std::size_t l = 0; l < row.size(); ++l) {
      if (row[l] == 0.0) continue;
      std::snprintf(buf, sizeof buf, "%.17g", row[l]);
      out << *f << '\t' << m.labels[l] << '\t' << buf << '\n';
    }
  }
}

inline void save_model(const TaggerModel& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::UnreadableFile, "cannot write '" + path + "'");
  save_model(m, out);
  if (!out) throw Error(ErrorKind::UnreadableFile, "write failed for '" + path + "'");
}

inline TaggerModel load_model(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) ||
      line != "version=" + std::to_string(kModelVersion))
    throw Error(ErrorKind::VersionMismatch,
                "expected 'version=" + std::to_string(kModelVersion) + "' header");

  TaggerModel m;
  std::unordered_map<std::string, std::size_t> label_id;
  std::size_t declared_labels = 0;
  std::size_t line_no = 1;
  auto bad = [&](const std::string& why) {
    return Error(ErrorKind::MalformedInput,
                 "model line " + std::to_string(line_no) + ": " + why);
  };
  bool in_header = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (in_header && line.find('\t') == std::string::npos) {
      auto eq = line.find('=');
      if (eq == std::string::npos) throw bad("expected key=value");
      const std::string key = line.substr(0, eq), value = line.substr(eq + 1);
      try {
        if (key == "pass") m.pass = parse_pass(value);
        else if (key == "scale") m.scheme.scale = parse_scale(value);
        else if (key == "k") m.scheme.k = std::stoi(value);
        else if (key == "epochs") m.epochs = std::stoi(value);
        else if (key == "seed") m.seed = std::stoull(value);
        else if (key == "labels") declared_labels = std::stoul(value);
        else if (key == "label") {
          label_id.emplace(value, m.labels.size());
          m.labels.push_back(value);
        } else throw bad("unknown key '" + key + "'");
      } catch (const std::logic_error&) {
        throw bad("bad value for '" + key + "'");
      }
      continue;
    }
    if (in_header) {
      in_header = false;
      if (declared_labels != m.labels.size()) throw bad("label count mismatch");
    }
    auto t1 = line.find('\t');
    auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos) throw bad("expected feature<TAB>label<TAB>weight");
    auto lid = label_id.find(line.substr(t1 + 1, t2 - t1 - 1));
    if (lid == label_id.end()) throw bad("unknown label");
    auto& row = m.weights[line.substr(0, t1)];
    row.resize(m.labels.size(), 0.0);
    row[lid->second] = std::strtod(line.c_str() + t2 + 1, nullptr);
  }
  if (in_header && declared_labels != m.labels.size())
    throw bad("label count mismatch");
  m.scheme.unaries = m.pass == Pass::PhiPrime ? UnaryStrategy::Extended
                                              : UnaryStrategy::TwoPass;
  return m;
}

inline TaggerModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::UnreadableFile, "cannot open '" + path + "'");
  return load_model(in);
}

// ---------------------------------------------------------------------------
// Full parsing pipeline.

// With a Psi model: predict leaf chains, enrich PoS, predict (n, c), decode.
// With a single PhiPrime model: predict (n, c, u) and decode.
inline Tree parse_sentence(const std::vector<Token>& tokens, const TaggerModel& phi,
                           const TaggerModel* psi = nullptr) {
  if (phi.pass == Pass::PhiPrime) {
    return decode_extended(tokens, predict(phi, tokens), phi.scheme);
  }
  std::vector<Token> enriched = tokens;
  if (psi) enriched = merge_psi(tokens, predict_psi(*psi, tokens));
  return uncollapse_unaries(
      CollapsedTree{decode(enriched, predict(phi, enriched), phi.scheme)});
}

}  // namespace treeseq
