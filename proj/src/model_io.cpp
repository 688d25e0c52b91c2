#include "dmt/model_io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "dmt/error.hpp"
#include "text_util.hpp"

namespace dmt {

namespace {

using detail::format_double;
using detail::quote;

std::string join_doubles(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out.push_back(',');
    out += format_double(values[i]);
  }
  return out;
}

std::vector<double> parse_doubles(std::string_view csv) {
  std::vector<double> out;
  for (const auto part : detail::split(csv, ','))
    out.push_back(detail::parse_double_or_throw(part, "count"));
  return out;
}

void write_node(std::ostream& os, const DecisionTree& t, std::int32_t idx, int depth,
                const std::string& branch) {
  const auto& node = t.nodes[static_cast<std::size_t>(idx)];
  os << std::string(static_cast<std::size_t>(depth) * 2, ' ') << "node";
  if (!branch.empty()) os << " branch=" << quote(branch);
  if (node.is_leaf()) {
    os << " kind=leaf class="
       << quote(t.classes[static_cast<std::size_t>(node.leaf_class)]);
  } else {
    os << " kind=split attr=" << quote(node.attribute);
    if (node.continuous)
      os << " test=threshold value=" << format_double(node.threshold);
    else
      os << " test=categorical";
    os << " majority=" << node.majority_branch;
  }
  os << " counts=" << join_doubles(node.class_counts) << '\n';

  if (node.is_leaf()) return;
  for (std::size_t b = 0; b < node.children.size(); ++b) {
    const std::string child_branch =
        node.continuous ? (b == 0 ? "le" : "gt") : node.branch_categories[b];
    write_node(os, t, node.children[b], depth + 1, child_branch);
  }
}

struct Line {
  int depth = 0;
  std::vector<std::string> tokens;
};

std::vector<Line> read_lines(std::istream& is) {
  std::vector<Line> lines;
  std::string raw;
  while (std::getline(is, raw)) {
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    std::size_t spaces = 0;
    while (spaces < raw.size() && raw[spaces] == ' ') ++spaces;
    if (spaces == raw.size()) continue;
    if (spaces % 2 != 0) throw Error("model: odd indentation in line '" + raw + "'");
    Line line;
    line.depth = static_cast<int>(spaces / 2);
    line.tokens = detail::tokenize_quoted(raw.substr(spaces));
    lines.push_back(std::move(line));
  }
  return lines;
}

std::map<std::string, std::string> key_values(const std::vector<std::string>& tokens,
                                              std::size_t from) {
  std::map<std::string, std::string> kv;
  for (std::size_t i = from; i < tokens.size(); ++i) {
    const auto eq = tokens[i].find('=');
    if (eq == std::string::npos)
      throw Error("model: expected key=value, got '" + tokens[i] + "'");
    kv[tokens[i].substr(0, eq)] = tokens[i].substr(eq + 1);
  }
  return kv;
}

const std::string& require(const std::map<std::string, std::string>& kv,
                           const std::string& key) {
  auto it = kv.find(key);
  if (it == kv.end()) throw Error("model: missing key '" + key + "'");
  return it->second;
}

// Reads one "tree" block starting at `pos`; advances pos past the block.
DecisionTree read_tree_block(const std::vector<Line>& lines, std::size_t& pos,
                             const std::vector<std::string>& classes,
                             const std::vector<double>& priors) {
  if (pos >= lines.size() || lines[pos].tokens[0] != "tree")
    throw Error("model: expected a tree block");
  ++pos;

  DecisionTree tree;
  tree.classes = classes;
  tree.class_priors = priors;

  std::vector<std::int32_t> stack;  // node index per depth (depth 1 = root)
  while (pos < lines.size() && lines[pos].tokens[0] == "node") {
    const Line& line = lines[pos];
    if (line.depth < 1 || static_cast<std::size_t>(line.depth) > stack.size() + 1)
      throw Error("model: bad node nesting");
    const auto kv = key_values(line.tokens, 1);

    DecisionTree::Node node;
    node.class_counts = parse_doubles(require(kv, "counts"));
    const std::string& kind = require(kv, "kind");
    if (kind == "leaf") {
      const std::string& label = require(kv, "class");
      const auto it = std::find(classes.begin(), classes.end(), label);
      if (it == classes.end()) throw Error("model: unknown class '" + label + "'");
      node.leaf_class = static_cast<std::int32_t>(it - classes.begin());
    } else if (kind == "split") {
      node.attribute = require(kv, "attr");
      const std::string& test = require(kv, "test");
      node.continuous = test == "threshold";
      if (!node.continuous && test != "categorical")
        throw Error("model: unknown test kind '" + test + "'");
      if (node.continuous)
        node.threshold = detail::parse_double_or_throw(require(kv, "value"), "threshold");
      node.majority_branch =
          static_cast<std::int32_t>(detail::parse_long_or_throw(require(kv, "majority"),
                                                                "majority"));
    } else {
      throw Error("model: unknown node kind '" + kind + "'");
    }

    const auto index = static_cast<std::int32_t>(tree.nodes.size());
    stack.resize(static_cast<std::size_t>(line.depth));
    stack.back() = index;
    if (line.depth > 1) {
      auto& parent = tree.nodes[static_cast<std::size_t>(stack[static_cast<std::size_t>(
          line.depth - 2)])];
      parent.children.push_back(index);
      if (!parent.continuous) parent.branch_categories.push_back(require(kv, "branch"));
    }
    tree.nodes.push_back(std::move(node));
    ++pos;
  }
  if (tree.nodes.empty()) throw Error("model: empty tree block");
  return tree;
}

const char* kind_of(const TrainedModel& m) {
  if (std::holds_alternative<DecisionTree>(m)) return "c45";
  if (std::holds_alternative<DmtModel>(m)) return "dmt";
  return ensemble_kind_name(std::get<EnsembleModel>(m).kind);
}

}  // namespace

void write_tree(std::ostream& os, const DecisionTree& t, int indent) {
  os << std::string(static_cast<std::size_t>(indent) * 2, ' ') << "tree size="
     << t.size() << '\n';
  write_node(os, t, 0, indent + 1, "");
}

void write_model(std::ostream& os, const TrainedModel& m) {
  os << "dmt-model v1\n";
  os << "kind " << kind_of(m) << '\n';

  const std::vector<std::string>* classes = nullptr;
  const std::vector<double>* priors = nullptr;
  std::visit(
      [&](const auto& model) {
        classes = &model.classes;
        priors = &model.class_priors;
      },
      m);

  os << "classes";
  for (const auto& c : *classes) os << ' ' << quote(c);
  os << '\n';
  os << "priors";
  for (double p : *priors) os << ' ' << format_double(p);
  os << '\n';

  if (const auto* dmt_model = std::get_if<DmtModel>(&m)) {
    os << "scheme " << vote_scheme_name(dmt_model->scheme) << '\n';
    os << "support-literal " << (dmt_model->literal_support ? "true" : "false") << '\n';
    os << "training-size " << dmt_model->training_size << '\n';
    os << "trees " << dmt_model->trees.size() << '\n';
    for (const auto& tree : dmt_model->trees) write_tree(os, tree, 0);
  } else if (const auto* ensemble = std::get_if<EnsembleModel>(&m)) {
    os << "aggregation " << (ensemble->weighted_vote ? "weighted" : "majority") << '\n';
    os << "member-weights";
    for (double w : ensemble->member_weights) os << ' ' << format_double(w);
    os << '\n';
    os << "seed " << ensemble->rng_seed << '\n';
    os << "trees " << ensemble->members.size() << '\n';
    for (const auto& tree : ensemble->members) write_tree(os, tree, 0);
  } else {
    os << "trees 1\n";
    write_tree(os, std::get<DecisionTree>(m), 0);
  }
  os << "end\n";
}

TrainedModel read_model(std::istream& is) {
  const auto lines = read_lines(is);
  if (lines.empty() || lines[0].tokens.size() < 2 || lines[0].tokens[0] != "dmt-model" ||
      lines[0].tokens[1] != "v1")
    throw Error("model: not a dmt-model v1 file");

  std::string kind;
  std::vector<std::string> classes;
  std::vector<double> priors;
  std::string scheme = "simple";
  bool literal_support = false;
  std::size_t training_size = 0;
  bool weighted = false;
  std::vector<double> member_weights;
  std::uint64_t seed = 0;
  std::size_t tree_count = 0;

  std::size_t pos = 1;
  for (; pos < lines.size(); ++pos) {
    const auto& tokens = lines[pos].tokens;
    const std::string& head = tokens[0];
    if (head == "tree") break;
    if (head == "kind") kind = tokens.at(1);
    else if (head == "classes") classes.assign(tokens.begin() + 1, tokens.end());
    else if (head == "priors")
      for (std::size_t i = 1; i < tokens.size(); ++i)
        priors.push_back(detail::parse_double_or_throw(tokens[i], "prior"));
    else if (head == "scheme") scheme = tokens.at(1);
    else if (head == "support-literal") literal_support = tokens.at(1) == "true";
    else if (head == "training-size")
      training_size = static_cast<std::size_t>(
          detail::parse_long_or_throw(tokens.at(1), "training-size"));
    else if (head == "aggregation") weighted = tokens.at(1) == "weighted";
    else if (head == "member-weights")
      for (std::size_t i = 1; i < tokens.size(); ++i)
        member_weights.push_back(detail::parse_double_or_throw(tokens[i], "weight"));
    else if (head == "seed")
      seed = detail::parse_u64_or_throw(tokens.at(1), "seed");
    else if (head == "trees")
      tree_count = static_cast<std::size_t>(
          detail::parse_long_or_throw(tokens.at(1), "trees"));
    else if (head == "end") break;
    else throw Error("model: unknown header line '" + head + "'");
  }
  if (classes.empty()) throw Error("model: missing classes");
  if (priors.size() != classes.size()) throw Error("model: priors/classes mismatch");
  if (tree_count == 0) throw Error("model: missing tree count");

  std::vector<DecisionTree> trees;
  trees.reserve(tree_count);
  for (std::size_t t = 0; t < tree_count; ++t)
    trees.push_back(read_tree_block(lines, pos, classes, priors));

  if (kind == "c45") {
    if (trees.size() != 1) throw Error("model: c45 model must hold exactly one tree");
    return trees.front();
  }
  if (kind == "dmt") {
    DmtModel m;
    m.trees = std::move(trees);
    m.scheme = vote_scheme_from_name(scheme);
    m.literal_support = literal_support;
    m.classes = std::move(classes);
    m.class_priors = std::move(priors);
    m.training_size = training_size;
    return m;
  }

  EnsembleModel e;
  if (kind == "bagging") e.kind = EnsembleKind::Bagging;
  else if (kind == "adaboost") e.kind = EnsembleKind::AdaBoost;
  else if (kind == "random_forest") e.kind = EnsembleKind::RandomForest;
  else if (kind == "random_tree") e.kind = EnsembleKind::RandomTree;
  else throw Error("model: unknown kind '" + kind + "'");
  e.members = std::move(trees);
  e.member_weights = std::move(member_weights);
  e.weighted_vote = weighted;
  e.classes = std::move(classes);
  e.class_priors = std::move(priors);
  e.rng_seed = seed;
  if (e.member_weights.size() != e.members.size())
    throw Error("model: member weight count mismatch");
  return e;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot write file: " + tmp.string());
    f << content;
    if (!f.good()) throw Error("failed writing file: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void save_model(const TrainedModel& m, const std::filesystem::path& path) {
  std::ostringstream out;
  write_model(out, m);
  write_file_atomic(path, out.str());
}

TrainedModel load_model(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open model file: " + path.string());
  return read_model(f);
}

}  // namespace dmt
