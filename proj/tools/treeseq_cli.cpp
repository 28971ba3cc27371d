// treeseq: constituent parsing as sequence labeling, from the command line.
//
// Exit status: 0 on success, 1 on a data/model error, 2 on a usage error.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "treeseq/treeseq.hpp"

namespace {

using namespace treeseq;

struct SchemeFlags {
  std::string scale = "rel-root";
  int k = 2;
  std::string unaries = "two-pass";
  bool collapse = true;
  bool binarize = false;

  Scheme scheme() const {
    Scheme s;
    s.scale = parse_scale(scale);
    s.k = k;
    s.unaries = unaries == "extended" ? UnaryStrategy::Extended
                                      : UnaryStrategy::TwoPass;
    return s;
  }
};

void add_scheme_flags(CLI::App* cmd, SchemeFlags& f) {
  cmd->add_option("--scale", f.scale, "Count scale")
      ->check(CLI::IsMember({"abs", "rel", "rel-root", "kary"}))
      ->capture_default_str();
  cmd->add_option("--k", f.k, "Children per node for --scale kary")
      ->check(CLI::Range(2, 64))
      ->capture_default_str();
  cmd->add_option("--unaries", f.unaries,
                  "Leaf unary chains: separate Psi pass, or 3-tuple labels")
      ->check(CLI::IsMember({"two-pass", "extended"}))
      ->capture_default_str();
  cmd->add_flag("--collapse,!--no-collapse", f.collapse,
                "Collapse unary chains before encoding (default on)");
  cmd->add_flag("--binarize", f.binarize,
                "Right-binarize after collapsing (decode: debinarize)");
}

// Input/output streams: "-" means stdin/stdout.
class Input {
 public:
  explicit Input(const std::string& path) {
    if (path == "-") return;
    file_ = std::make_unique<std::ifstream>(path, std::ios::binary);
    if (!*file_) throw Error(ErrorKind::UnreadableFile, "cannot open '" + path + "'");
  }
  std::istream& get() { return file_ ? *file_ : std::cin; }

 private:
  std::unique_ptr<std::ifstream> file_;
};

class Output {
 public:
  explicit Output(const std::string& path) {
    if (path == "-" || path.empty()) return;
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file_) throw Error(ErrorKind::UnreadableFile, "cannot write '" + path + "'");
  }
  std::ostream& get() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

// Applies `fn` to every item using up to `threads` workers; results keep
// input order.
template <typename In, typename Fn>
auto ordered_map(const std::vector<In>& items, Fn fn, unsigned threads) {
  using Out = decltype(fn(items.front()));
  std::vector<Out> out(items.size());
  if (threads <= 1 || items.size() < 2) {
    for (std::size_t i = 0; i < items.size(); ++i) out[i] = fn(items[i]);
    return out;
  }
  const std::size_t chunk = (items.size() + threads - 1) / threads;
  std::vector<std::future<void>> jobs;
  for (std::size_t begin = 0; begin < items.size(); begin += chunk) {
    const std::size_t end = std::min(items.size(), begin + chunk);
    jobs.push_back(std::async(std::launch::async, [&, begin, end] {
      for (std::size_t i = begin; i < end; ++i) out[i] = fn(items[i]);
    }));
  }
  for (auto& j : jobs) j.get();
  return out;
}

constexpr std::size_t kBatch = 512;

Tree prepare_tree(const Tree& t, const SchemeFlags& f) {
  Tree out = f.collapse ? collapse_unaries(t).tree : t;
  if (f.binarize) out = binarize(out);
  return out;
}

LabeledSentence encode_tree(const Tree& t, const SchemeFlags& f) {
  return encode(prepare_tree(t, f), f.scheme());
}

Tree decode_sentence(const LabeledSentence& s, const SchemeFlags& f) {
  const Scheme scheme = f.scheme();
  std::vector<Token> tokens = s.tokens;
  std::vector<Label> core = s.labels;
  if (scheme.unaries == UnaryStrategy::Extended) {
    std::vector<std::optional<std::string>> psi;
    for (auto& l : core) psi.push_back(std::exchange(l.leaf_unary, std::nullopt));
    tokens = merge_psi(std::move(tokens), psi);
  }
  Tree t = decode(tokens, core, scheme);
  if (f.binarize) t = debinarize(t);
  if (f.collapse) t = uncollapse_unaries(CollapsedTree{t});
  return t;
}

ParseOptions tree_options(const SchemeFlags& f) {
  return ParseOptions{.allow_chains = !f.collapse};
}

// ---------------------------------------------------------------------------

struct EncodeArgs {
  std::string input = "-", output = "-", psi_output;
  SchemeFlags scheme;
  unsigned threads = 1;
};

int run_encode(const EncodeArgs& a) {
  Input in(a.input);
  Output out(a.output);
  const bool two_pass = a.scheme.unaries == "two-pass";
  std::string psi_path = a.psi_output;
  if (psi_path.empty() && two_pass && a.output != "-") psi_path = a.output + ".psi";
  std::optional<Output> psi_out;
  if (two_pass && !psi_path.empty()) psi_out.emplace(psi_path);

  std::vector<std::pair<std::size_t, Tree>> batch;
  auto flush = [&] {
    auto encoded = ordered_map(
        batch,
        [&](const std::pair<std::size_t, Tree>& item) {
          try {
            return encode_tree(item.second, a.scheme);
          } catch (const Error& e) {
            throw Error(e.kind(), "line " + std::to_string(item.first) + ": " + e.what());
          }
        },
        a.threads);
    for (const auto& s : encoded) {
      write_labeled(out.get(), s);
      if (psi_out) {
        TaggedSentence p;
        auto chains = encode_leaf_unaries_psi(s.tokens);
        for (std::size_t i = 0; i < s.tokens.size(); ++i) {
          p.tokens.push_back({s.tokens[i].word, base_pos(s.tokens[i].pos)});
          p.tags.push_back(psi_tag(chains[i]));
        }
        write_tagged(psi_out->get(), p);
      }
    }
    batch.clear();
  };
  for_each_tree(in.get(), [&](std::size_t line, Tree t) {
    batch.emplace_back(line, std::move(t));
    if (batch.size() == kBatch) flush();
  }, tree_options(a.scheme));
  flush();
  return 0;
}

struct DecodeArgs {
  std::string input = "-", output = "-";
  SchemeFlags scheme;
  unsigned threads = 1;
};

int run_decode(const DecodeArgs& a) {
  Input in(a.input);
  Output out(a.output);
  BlockReader reader(in.get());
  std::vector<LabeledSentence> batch;
  auto flush = [&] {
    auto trees = ordered_map(
        batch, [&](const LabeledSentence& s) { return decode_sentence(s, a.scheme); },
        a.threads);
    for (const auto& t : trees) out.get() << serialize_bracketed(t) << '\n';
    batch.clear();
  };
  while (auto s = read_labeled_sentence(reader)) {
    batch.push_back(std::move(*s));
    if (batch.size() == kBatch) flush();
  }
  flush();
  return 0;
}

struct TrainArgs {
  std::string input, model;
  std::string pass = "phi";
  int epochs = 20;
  std::uint64_t seed = 42;
  std::optional<std::string> scale;
  int k = 2;
};

bool looks_like_psi_file(const std::string& path) {
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto tab = line.rfind('\t');
    return tab != std::string::npos && line.find('|', tab) == std::string::npos;
  }
  return false;
}

int run_train(const TrainArgs& a) {
  TrainOptions opts;
  opts.pass = parse_pass(a.pass);
  opts.epochs = a.epochs;
  opts.seed = a.seed;
  if (a.scale) {
    Scheme s;
    s.scale = parse_scale(*a.scale);
    s.k = a.k;
    opts.scheme = s;
  }
  TaggerModel model;
  if (opts.pass == Pass::Psi && looks_like_psi_file(a.input)) {
    Input in(a.input);
    BlockReader reader(in.get());
    std::vector<TaggedSentence> corpus;
    while (auto s = read_psi_sentence(reader)) corpus.push_back(std::move(*s));
    model = train_tags(corpus, opts);
  } else {
    Input in(a.input);
    model = train(read_labeled(in.get()), opts);
  }
  save_model(model, a.model);
  std::cerr << "trained " << pass_name(model.pass) << " model: "
            << model.labels.size() << " labels, " << model.weights.size()
            << " features\n";
  return 0;
}

struct PredictArgs {
  std::string input = "-", output = "-", model;
  std::optional<std::string> psi_model;
};

int run_predict(const PredictArgs& a) {
  const TaggerModel model = load_model(a.model);
  std::optional<TaggerModel> psi;
  if (a.psi_model) psi = load_model(*a.psi_model);
  Input in(a.input);
  Output out(a.output);
  BlockReader reader(in.get());
  while (auto tokens = read_tagged_sentence(reader)) {
    if (psi) *tokens = merge_psi(std::move(*tokens), predict_psi(*psi, *tokens));
    if (model.pass == Pass::Psi) {
      write_tagged(out.get(), TaggedSentence{*tokens, predict_tags(model, *tokens)});
    } else {
      write_labeled(out.get(), LabeledSentence{*tokens, predict(model, *tokens)});
    }
  }
  return 0;
}

struct ParseArgs {
  std::string input = "-", output = "-", model;
  std::optional<std::string> psi_model;
  unsigned threads = 1;
};

int run_parse(const ParseArgs& a) {
  const TaggerModel model = load_model(a.model);
  if (model.pass == Pass::Psi)
    throw Error(ErrorKind::MalformedInput,
                "--model must be a phi or phi-prime model; pass the psi model "
                "with --psi-model");
  std::optional<TaggerModel> psi;
  if (a.psi_model) {
    psi = load_model(*a.psi_model);
    if (psi->pass != Pass::Psi)
      throw Error(ErrorKind::MalformedInput, "--psi-model is not a psi model");
  }
  Input in(a.input);
  Output out(a.output);
  BlockReader reader(in.get());
  std::vector<std::vector<Token>> batch;
  auto flush = [&] {
    auto trees = ordered_map(
        batch,
        [&](const std::vector<Token>& toks) {
          return parse_sentence(toks, model, psi ? &*psi : nullptr);
        },
        a.threads);
    for (const auto& t : trees) out.get() << serialize_bracketed(t) << '\n';
    batch.clear();
  };
  while (auto tokens = read_tagged_sentence(reader)) {
    batch.push_back(std::move(*tokens));
    if (batch.size() == kBatch) flush();
  }
  flush();
  return 0;
}

struct EvalArgs {
  std::string gold, pred;
  std::optional<std::string> delete_labels;
  bool machine = false;
  SchemeFlags scheme;
};

LabelSet parse_label_list(const std::string& s) {
  LabelSet out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.insert(item);
  return out;
}

int run_eval(const EvalArgs& a) {
  Input gin(a.gold), pin(a.pred);
  const auto gold = read_treebank(gin.get(), tree_options(a.scheme));
  const auto pred = read_treebank(pin.get(), tree_options(a.scheme));
  const LabelSet deleted =
      a.delete_labels ? parse_label_list(*a.delete_labels) : default_deleted_labels();
  EvalReport report = bracketing_score(gold, pred, deleted);

  try {
    std::vector<LabeledSentence> gl, pl;
    for (const auto& t : gold) gl.push_back(encode_tree(t, a.scheme));
    for (const auto& t : pred) pl.push_back(encode_tree(t, a.scheme));
    report.label_accuracy = label_accuracy(gl, pl);
  } catch (const Error& e) {
    std::cerr << "label accuracy unavailable: " << e.what() << '\n';
  }

  std::cout << format_report(report);
  if (a.machine) std::cout << machine_line(report) << '\n';
  return 0;
}

struct RoundtripArgs {
  std::string input;
  std::optional<std::string> labels;
  SchemeFlags scheme;
};

int run_roundtrip(const RoundtripArgs& a) {
  Input in(a.input);
  std::optional<Input> label_in;
  std::optional<BlockReader> reader;
  if (a.labels) {
    label_in.emplace(*a.labels);
    reader.emplace(label_in->get());
  }
  std::size_t checked = 0;
  std::optional<std::size_t> bad_line;
  std::string detail;
  for_each_tree(in.get(), [&](std::size_t line, Tree t) {
    if (bad_line) return;
    LabeledSentence s;
    if (reader) {
      auto next = read_labeled_sentence(*reader);
      if (!next) {
        bad_line = line;
        detail = "label file ends early";
        return;
      }
      s = std::move(*next);
    } else {
      std::stringstream text;
      write_labeled(text, encode_tree(t, a.scheme));
      BlockReader back(text);
      s = *read_labeled_sentence(back);
    }
    Tree decoded;
    try {
      decoded = decode_sentence(s, a.scheme);
    } catch (const Error& e) {
      bad_line = line;
      detail = e.what();
      return;
    }
    ++checked;
    if (!(decoded == t)) {
      bad_line = line;
      detail = "decoded " + serialize_bracketed(decoded);
    }
  }, tree_options(a.scheme));

  if (bad_line) {
    std::cout << "FAIL line " << *bad_line << ": " << detail << '\n';
    return 1;
  }
  std::cout << "OK " << checked << " trees\n";
  return 0;
}

struct ToyArgs {
  std::uint64_t seed = 42;
  std::size_t train = 2000, test = 200;
  std::string out_dir = ".";
};

int run_toy(const ToyArgs& a) {
  const auto corpus = toy::make_corpus(a.seed, a.train, a.test);
  std::filesystem::create_directories(a.out_dir);
  auto dump = [&](const std::vector<Tree>& trees, const std::string& name) {
    Output out((std::filesystem::path(a.out_dir) / name).string());
    for (const auto& t : trees) out.get() << serialize_bracketed(t) << '\n';
  };
  dump(corpus.train, "train.trees");
  dump(corpus.test, "test.trees");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constituent parsing as sequence labeling"};
  app.require_subcommand(1);

  EncodeArgs enc;
  auto* c_enc = app.add_subcommand("encode", "Trees -> label file");
  c_enc->add_option("input", enc.input, "Treebank file ('-' for stdin)");
  c_enc->add_option("-o,--output", enc.output, "Label file ('-' for stdout)");
  c_enc->add_option("--psi-out", enc.psi_output,
                    "Leaf-chain file for two-pass mode (default: <output>.psi)");
  c_enc->add_option("--threads", enc.threads, "Worker threads")->check(CLI::Range(1u, 256u));
  add_scheme_flags(c_enc, enc.scheme);

  DecodeArgs dec;
  auto* c_dec = app.add_subcommand("decode", "Label file -> trees");
  c_dec->add_option("input", dec.input, "Label file ('-' for stdin)");
  c_dec->add_option("-o,--output", dec.output, "Treebank file ('-' for stdout)");
  c_dec->add_option("--threads", dec.threads, "Worker threads")->check(CLI::Range(1u, 256u));
  add_scheme_flags(c_dec, dec.scheme);

  TrainArgs tr;
  auto* c_tr = app.add_subcommand("train", "Train a tagger model");
  c_tr->add_option("input", tr.input, "Label file (or .psi file for --pass psi)")
      ->required();
  c_tr->add_option("--model", tr.model, "Output model file")->required();
  c_tr->add_option("--pass", tr.pass, "Which labels to learn")
      ->check(CLI::IsMember({"psi", "phi", "phi-prime"}))
      ->capture_default_str();
  c_tr->add_option("--epochs", tr.epochs, "Training epochs")
      ->check(CLI::Range(1, 1000))
      ->capture_default_str();
  c_tr->add_option("--seed", tr.seed, "Shuffling seed")->capture_default_str();
  c_tr->add_option("--scale", tr.scale, "Scale recorded in the model (inferred if omitted)")
      ->check(CLI::IsMember({"abs", "rel", "rel-root", "kary"}));
  c_tr->add_option("--k", tr.k, "Children per node for --scale kary")->check(CLI::Range(2, 64));

  PredictArgs pr;
  auto* c_pr = app.add_subcommand("predict", "Tag word<TAB>pos input with a model");
  c_pr->add_option("input", pr.input, "PoS-tagged input ('-' for stdin)");
  c_pr->add_option("--model", pr.model, "Model file")->required();
  c_pr->add_option("--psi-model", pr.psi_model, "Enrich PoS tags with this psi model first");
  c_pr->add_option("-o,--output", pr.output, "Output ('-' for stdout)");

  ParseArgs pa;
  auto* c_pa = app.add_subcommand("parse", "PoS-tagged input -> trees");
  c_pa->add_option("input", pa.input, "PoS-tagged input ('-' for stdin)");
  c_pa->add_option("--model", pa.model, "phi or phi-prime model")->required();
  c_pa->add_option("--psi-model", pa.psi_model, "psi model (two-pass pipeline)");
  c_pa->add_option("-o,--output", pa.output, "Treebank output ('-' for stdout)");
  c_pa->add_option("--threads", pa.threads, "Worker threads")->check(CLI::Range(1u, 256u));

  EvalArgs ev;
  auto* c_ev = app.add_subcommand("eval", "Bracketing P/R/F1 of predicted trees");
  c_ev->add_option("gold", ev.gold, "Gold treebank")->required();
  c_ev->add_option("pred", ev.pred, "Predicted treebank")->required();
  c_ev->add_option("--delete-labels", ev.delete_labels,
                   "Comma-separated labels to ignore (default: TOP,S1,-NONE-,\",\",:,``,'',.)");
  c_ev->add_flag("--machine", ev.machine, "Also print one P=.. R=.. F1=.. line");
  add_scheme_flags(c_ev, ev.scheme);

  RoundtripArgs rt;
  auto* c_rt = app.add_subcommand("roundtrip", "Check decode(encode(t)) == t over a treebank");
  c_rt->add_option("input", rt.input, "Treebank file")->required();
  c_rt->add_option("--labels", rt.labels, "Decode this label file instead of re-encoding");
  add_scheme_flags(c_rt, rt.scheme);

  ToyArgs toy;
  auto* c_toy = app.add_subcommand("toy-corpus", "Write the seeded toy PCFG corpus");
  c_toy->add_option("--seed", toy.seed, "Generator seed")->capture_default_str();
  c_toy->add_option("--train", toy.train, "Training sentences")->capture_default_str();
  c_toy->add_option("--test", toy.test, "Test sentences")->capture_default_str();
  c_toy->add_option("--out-dir", toy.out_dir, "Output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 2;
  }

  try {
    if (*c_enc) return run_encode(enc);
    if (*c_dec) return run_decode(dec);
    if (*c_tr) return run_train(tr);
    if (*c_pr) return run_predict(pr);
    if (*c_pa) return run_parse(pa);
    if (*c_ev) return run_eval(ev);
    if (*c_rt) return run_roundtrip(rt);
    if (*c_toy) return run_toy(toy);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
