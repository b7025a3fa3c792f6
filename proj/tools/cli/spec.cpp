#include "spec.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "unisgd/data.hpp"
#include "unisgd/errors.hpp"

namespace unisgd::cli {

namespace {

namespace pt = boost::property_tree;

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// Key lookup that remembers which keys were consumed so leftovers can be
// reported as unknown fields.
class Section {
 public:
  Section(std::string name, const pt::ptree& tree) : name_(std::move(name)), tree_(tree) {}

  std::optional<std::string> text(const std::string& key) {
    used_.insert(key);
    auto child = tree_.get_child_optional(pt::ptree::path_type(key, '\0'));
    if (!child) return std::nullopt;
    return trim(child->data());
  }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    throw ConfigError("[" + name_ + "] " + key + ": " + what);
  }

  std::optional<double> number(const std::string& key) {
    auto t = text(key);
    if (!t) return std::nullopt;
    return to_number(key, *t);
  }

  double to_number(const std::string& key, const std::string& t) const {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) fail(key, "expected a number, got '" + t + "'");
    return v;
  }

  std::optional<std::size_t> count(const std::string& key) {
    auto t = text(key);
    if (!t) return std::nullopt;
    // Accept 1e5-style literals when they denote integers.
    const double v = to_number(key, *t);
    if (v < 0 || v != std::floor(v) || v > 1e15) fail(key, "expected a non-negative integer, got '" + *t + "'");
    return static_cast<std::size_t>(v);
  }

  std::optional<bool> flag(const std::string& key) {
    auto t = text(key);
    if (!t) return std::nullopt;
    if (*t == "true" || *t == "yes" || *t == "1") return true;
    if (*t == "false" || *t == "no" || *t == "0") return false;
    fail(key, "expected true or false, got '" + *t + "'");
  }

  void reject_unknown() const {
    for (const auto& [key, value] : tree_) {
      (void)value;
      if (!used_.count(key)) fail(key, "unknown field");
    }
  }

 private:
  std::string name_;
  const pt::ptree& tree_;
  std::set<std::string> used_;
};

Regularizer parse_regularizer(Section& s) {
  const std::string kind = s.text("regularizer").value_or("none");
  const double param = s.number("regularizer_parameter").value_or(1.0);
  try {
    if (kind == "none") return Regularizer::none();
    if (kind == "l2") return Regularizer::l2(param);
    if (kind == "ball") return Regularizer::ball(param);
  } catch (const std::invalid_argument& e) {
    s.fail("regularizer_parameter", e.what());
  }
  s.fail("regularizer", "expected none, l2 or ball, got '" + kind + "'");
}

ProblemSpec parse_problem(Section s, const std::filesystem::path& base) {
  ProblemSpec p;
  const std::string source = s.text("source").value_or("synthetic");
  if (source == "libsvm") {
    p.source = ProblemSpec::Source::libsvm;
    auto path = s.text("path");
    if (!path) s.fail("path", "required for libsvm sources");
    p.path = base / *path;
    p.dimension = s.count("dimension");
    p.loss = Loss::logistic;
  } else if (source == "synthetic") {
    p.source = ProblemSpec::Source::synthetic;
    p.synthetic_type = static_cast<int>(s.count("type").value_or(1));
    if (p.synthetic_type < 1 || p.synthetic_type > 4) s.fail("type", "expected 1, 2, 3 or 4");
    auto n = s.count("n");
    auto d = s.count("d");
    if (!n || *n == 0) s.fail("n", "required positive integer");
    if (!d || *d == 0) s.fail("d", "required positive integer");
    p.n = *n;
    p.d = *d;
    p.loss = Loss::squared;
  } else {
    s.fail("source", "expected libsvm or synthetic, got '" + source + "'");
  }
  if (auto loss = s.text("loss")) {
    if (*loss == "squared") p.loss = Loss::squared;
    else if (*loss == "logistic") p.loss = Loss::logistic;
    else s.fail("loss", "expected squared or logistic, got '" + *loss + "'");
  }
  p.lambda = s.number("lambda").value_or(0.0);
  if (p.lambda < 0) s.fail("lambda", "must be non-negative");
  p.rescale = s.flag("rescale").value_or(false);
  p.rescale_seed = s.count("rescale_seed").value_or(1);
  p.normalize_rows = s.flag("normalize_rows").value_or(false);
  p.data_seed = s.count("seed").value_or(1);
  if (auto labels = s.text("labels")) {
    if (*labels == "ones") p.labels = ProblemSpec::Labels::ones;
    else if (*labels == "consistent") p.labels = ProblemSpec::Labels::consistent;
    else if (*labels == "signs") p.labels = ProblemSpec::Labels::signs;
    else s.fail("labels", "expected ones, consistent or signs");
  }
  p.regularizer = parse_regularizer(s);
  s.reject_unknown();
  return p;
}

Quantizer parse_quantizer(Section& s) {
  const std::string q = s.text("quantizer").value_or("identity");
  if (q == "identity") return Quantizer::identity();
  if (q == "dithering") return Quantizer::dithering();
  if (q.rfind("rand_k:", 0) == 0) {
    const double k = s.to_number("quantizer", q.substr(7));
    if (k < 1 || k != std::floor(k)) s.fail("quantizer", "rand_k needs a positive integer k");
    return Quantizer::rand_k(static_cast<std::size_t>(k));
  }
  s.fail("quantizer", "expected identity, dithering or rand_k:<k>, got '" + q + "'");
}

struct RawMethod {
  MethodEntry entry;
  std::vector<std::string> parts;
};

RawMethod parse_method_section(Section s, const std::string& label) {
  RawMethod raw;
  MethodEntry& m = raw.entry;
  m.label = label;
  auto id = s.text("id");
  if (!id) s.fail("id", "required");
  try {
    m.config.method = parse_method(*id);
  } catch (const ConfigError& e) {
    s.fail("id", e.what());
  }
  if (auto step = s.text("step"); step && *step != "theory") m.step = s.to_number("step", *step);
  m.lyapunov_weight = s.number("lyapunov_weight");
  if (auto probs = s.text("probabilities")) {
    if (*probs == "uniform") m.config.probabilities = ProbabilityRule::uniform;
    else if (*probs == "importance") m.config.probabilities = ProbabilityRule::importance;
    else
      for (const auto& item : split_list(*probs)) m.config.explicit_probabilities.push_back(s.to_number("probabilities", item));
  }
  m.config.minibatch = s.count("minibatch").value_or(1);
  m.config.noise_variance = s.number("noise_variance").value_or(0.0);
  m.config.epoch_length = s.count("epoch_length").value_or(0);
  m.config.refresh_probability = s.number("refresh_probability").value_or(0.0);
  m.config.quantizer = parse_quantizer(s);
  m.config.alpha = s.number("alpha").value_or(0.0);
  m.config.nodes = s.count("nodes").value_or(1);
  m.config.variant = static_cast<int>(s.count("variant").value_or(1));
  if (auto parts = s.text("parts")) raw.parts = split_list(*parts);
  if (auto weights = s.text("weights"))
    for (const auto& w : split_list(*weights)) m.config.weights.push_back(s.to_number("weights", w));
  if (auto comp = s.text("composition")) {
    if (*comp == "independent") m.config.independent = true;
    else if (*comp == "dependent") m.config.independent = false;
    else s.fail("composition", "expected independent or dependent");
  }
  m.standalone = s.flag("standalone").value_or(true);
  m.scale_A = s.number("scale_A").value_or(1.0);
  s.reject_unknown();
  return raw;
}

MethodConfig assemble(const std::string& label, const std::map<std::string, RawMethod>& raw, int depth) {
  if (depth > 16) throw ConfigError("[method " + label + "] parts: nesting too deep or cyclic");
  const RawMethod& r = raw.at(label);
  MethodConfig c = r.entry.config;
  c.children.clear();
  for (const auto& part : r.parts) {
    if (!raw.count(part)) throw ConfigError("[method " + label + "] parts: unknown method '" + part + "'");
    c.children.push_back(assemble(part, raw, depth + 1));
  }
  return c;
}

}  // namespace

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  for (const auto& item : split_list(text)) {
    const auto dash = item.find('-');
    auto parse = [&](const std::string& t) {
      std::uint64_t v = 0;
      auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
      if (ec != std::errc() || ptr != t.data() + t.size()) throw ConfigError("[run] seeds: invalid seed '" + t + "'");
      return v;
    };
    if (dash == std::string::npos) {
      seeds.push_back(parse(item));
    } else {
      const auto lo = parse(trim(item.substr(0, dash)));
      const auto hi = parse(trim(item.substr(dash + 1)));
      if (hi < lo) throw ConfigError("[run] seeds: empty range '" + item + "'");
      for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
    }
  }
  std::set<std::uint64_t> distinct(seeds.begin(), seeds.end());
  if (seeds.empty()) throw ConfigError("[run] seeds: no seeds given");
  if (distinct.size() != seeds.size()) throw ConfigError("[run] seeds: seeds must be distinct");
  return seeds;
}

ExperimentSpec parse_spec(std::istream& in, const std::filesystem::path& base_dir) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ParseError(e.line(), e.message());
  }
  ExperimentSpec spec;
  bool have_problem = false;
  std::map<std::string, RawMethod> raw;
  std::vector<std::string> order;
  for (const auto& [name, section] : tree) {
    if (section.empty() && !section.data().empty()) throw ConfigError("field '" + name + "' outside of any section");
    if (name == "problem") {
      spec.problem = parse_problem(Section(name, section), base_dir);
      have_problem = true;
    } else if (name == "run") {
      Section s(name, section);
      spec.iterations = s.count("iterations").value_or(spec.iterations);
      if (spec.iterations == 0) s.fail("iterations", "must be at least 1");
      if (auto seeds = s.text("seeds")) spec.seeds = parse_seed_list(*seeds);
      spec.record_every = s.count("record_every").value_or(0);
      if (auto diag = s.text("diagnostics")) {
        if (*diag == "lyapunov") spec.diagnostics = true;
        else if (*diag == "none") spec.diagnostics = false;
        else s.fail("diagnostics", "expected lyapunov or none");
      }
      if (auto out = s.text("output")) spec.output = base_dir / *out;
      spec.threads = s.count("threads").value_or(0);
      s.reject_unknown();
    } else if (name == "check") {
      Section s(name, section);
      spec.check.samples = s.count("samples").value_or(spec.check.samples);
      spec.check.states = s.count("states").value_or(spec.check.states);
      spec.check.seed = s.count("seed").value_or(spec.check.seed);
      s.reject_unknown();
    } else if (name.rfind("method ", 0) == 0) {
      const std::string label = trim(name.substr(7));
      if (label.empty()) throw ConfigError("[" + name + "] method label is empty");
      raw.emplace(label, parse_method_section(Section(name, section), label));
      order.push_back(label);
    } else {
      throw ConfigError("unknown section [" + name + "]");
    }
  }
  if (!have_problem) throw ConfigError("missing [problem] section");
  for (const auto& label : order) {
    MethodEntry entry = raw.at(label).entry;
    entry.config = assemble(label, raw, 0);
    spec.methods.push_back(std::move(entry));
  }
  const bool any = std::any_of(spec.methods.begin(), spec.methods.end(), [](const auto& m) { return m.standalone; });
  if (!any) throw ConfigError("method list is empty");
  return spec;
}

ExperimentSpec load_spec(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open spec file " + file.string());
  return parse_spec(in, file.parent_path().empty() ? std::filesystem::path(".") : file.parent_path());
}

Problem build_problem(const ProblemSpec& spec) {
  if (spec.source == ProblemSpec::Source::libsvm) {
    Dataset data = load_libsvm(spec.path.string(), spec.dimension);
    if (spec.rescale) {
      SeededSource rng(spec.rescale_seed);
      data = rescale_rows(std::move(data), rng);
    }
    RowMatrix a = data.dense();
    if (spec.normalize_rows) a = normalize_rows(std::move(a));
    return Problem(spec.loss, std::move(a), data.labels(), spec.lambda, spec.regularizer);
  }
  SeededSource rng(spec.data_seed);
  auto generated = generate_least_squares(static_cast<SyntheticType>(spec.synthetic_type), spec.n, spec.d, rng);
  RowMatrix a = spec.normalize_rows ? normalize_rows(std::move(generated.features)) : std::move(generated.features);
  Vector b = std::move(generated.labels);
  if (spec.labels != ProblemSpec::Labels::ones) {
    Vector truth(static_cast<Eigen::Index>(spec.d));
    for (Eigen::Index j = 0; j < truth.size(); ++j) truth(j) = rng.normal(Stream::noise);
    b = a * truth;
    if (spec.labels == ProblemSpec::Labels::signs) b = b.unaryExpr([](double v) { return v >= 0 ? 1.0 : -1.0; });
  }
  return Problem(spec.loss, std::move(a), std::move(b), spec.lambda, spec.regularizer);
}

}  // namespace unisgd::cli
