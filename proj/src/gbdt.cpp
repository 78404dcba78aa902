#include "aipse/gbdt.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "aipse/errors.hpp"

namespace aipse::gbdt {

namespace {

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    double e = std::exp(z);
    return e / (1.0 + e);
}

double clamp_proba(double p) {
    return std::min(std::max(p, 1e-15), 1.0 - 1e-15);
}

double log_loss(int y, double p) {
    p = clamp_proba(p);
    return y == 1 ? -std::log(p) : -std::log(1.0 - p);
}

void validate(const LabeledDataset& data, const TrainConfig& cfg) {
    if (cfg.n_rounds < 1) throw InvalidConfig("n_rounds must be >= 1");
    if (cfg.max_depth < 1) throw InvalidConfig("max_depth must be >= 1");
    if (!(cfg.learning_rate > 0.0 && cfg.learning_rate <= 1.0))
        throw InvalidConfig("learning_rate must be in (0, 1]");
    if (cfg.min_leaf < 1) throw InvalidConfig("min_leaf must be >= 1");
    if (cfg.l2_lambda < 0.0) throw InvalidConfig("l2_lambda must be >= 0");

    if (data.rows.empty()) throw DegenerateData("empty dataset");
    const auto width = data.feature_names.size();
    bool has_pos = false, has_neg = false;
    for (const auto& row : data.rows) {
        if (row.x.size() != width)
            throw InvalidConfig("row width != feature_names size");
        if (row.y == 1)
            has_pos = true;
        else if (row.y == 0)
            has_neg = true;
        else
            throw InvalidConfig("labels must be 0 or 1");
    }
    if (!has_pos || !has_neg) throw DegenerateData("training data has a single class");
}

struct SplitCandidate {
    bool found = false;
    double gain = -std::numeric_limits<double>::infinity();
    int feature = -1;
    double threshold = 0.0;
};

// Grows one regression tree on the current gradient/hessian state. All loops
// run over indices in canonical order, which makes the result independent of
// the caller's row order.
class TreeBuilder {
public:
    TreeBuilder(const std::vector<LabeledRow>& rows, const std::vector<double>& grad,
                const std::vector<double>& hess, const TrainConfig& cfg)
        : rows_(rows), grad_(grad), hess_(hess), cfg_(cfg) {}

    Tree build(const std::vector<int>& idx) {
        Tree t;
        grow(t, idx, 0);
        return t;
    }

private:
    int grow(Tree& t, const std::vector<int>& idx, int depth) {
        int self = static_cast<int>(t.nodes.size());
        t.nodes.emplace_back();

        double g_sum = 0.0, h_sum = 0.0;
        for (int i : idx) {
            g_sum += grad_[i];
            h_sum += hess_[i];
        }

        SplitCandidate best;
        if (depth < cfg_.max_depth &&
            idx.size() >= 2 * static_cast<std::size_t>(cfg_.min_leaf))
            best = best_split(idx, g_sum, h_sum);

        if (!best.found || best.gain < 0.0) {
            t.nodes[self].value = -g_sum / (h_sum + cfg_.l2_lambda);
            return self;
        }

        std::vector<int> left, right;
        for (int i : idx)
            (rows_[i].x[best.feature] < best.threshold ? left : right).push_back(i);

        t.nodes[self].feature = best.feature;
        t.nodes[self].threshold = best.threshold;
        t.nodes[self].left = grow(t, left, depth + 1);
        t.nodes[self].right = grow(t, right, depth + 1);
        return self;
    }

    // Exact greedy over midpoints of consecutive distinct values; strictly
    // greater gain wins, so ties resolve to the lowest feature index and
    // lowest threshold by scan order.
    SplitCandidate best_split(const std::vector<int>& idx, double g_sum, double h_sum) const {
        SplitCandidate best;
        const double lambda = cfg_.l2_lambda;
        const double parent = g_sum * g_sum / (h_sum + lambda);
        const auto n = idx.size();
        const auto n_features = rows_[idx.front()].x.size();

        std::vector<int> order(idx);
        for (std::size_t f = 0; f < n_features; ++f) {
            std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
                return rows_[a].x[f] < rows_[b].x[f];
            });
            double gl = 0.0, hl = 0.0;
            for (std::size_t k = 0; k + 1 < n; ++k) {
                gl += grad_[order[k]];
                hl += hess_[order[k]];
                double v = rows_[order[k]].x[f];
                double next = rows_[order[k + 1]].x[f];
                if (v == next) continue;
                if (k + 1 < static_cast<std::size_t>(cfg_.min_leaf) ||
                    n - k - 1 < static_cast<std::size_t>(cfg_.min_leaf))
                    continue;
                double gr = g_sum - gl, hr = h_sum - hl;
                double gain = 0.5 * (gl * gl / (hl + lambda) + gr * gr / (hr + lambda) - parent);
                if (gain > best.gain) {
                    best.found = true;
                    best.gain = gain;
                    best.feature = static_cast<int>(f);
                    best.threshold = v + (next - v) / 2.0;
                }
            }
        }
        return best;
    }

    const std::vector<LabeledRow>& rows_;
    const std::vector<double>& grad_;
    const std::vector<double>& hess_;
    const TrainConfig& cfg_;
};

}  // namespace

double Tree::eval(const std::vector<double>& x) const {
    int at = 0;
    while (nodes[at].feature >= 0)
        at = x[nodes[at].feature] < nodes[at].threshold ? nodes[at].left : nodes[at].right;
    return nodes[at].value;
}

GbdtModel train(const LabeledDataset& data, const TrainConfig& cfg, TrainReport* report) {
    validate(data, cfg);

    const auto n = data.rows.size();

    // Canonical row order: lexicographic by (features, label). Summation and
    // partitioning always run in this order, so shuffled input produces a
    // bit-identical model.
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
        const auto& ra = data.rows[a];
        const auto& rb = data.rows[b];
        if (ra.x != rb.x) return ra.x < rb.x;
        return ra.y < rb.y;
    });

    std::size_t n_pos = 0;
    for (const auto& row : data.rows) n_pos += static_cast<std::size_t>(row.y == 1);
    const double p_prior = static_cast<double>(n_pos) / static_cast<double>(n);

    GbdtModel m;
    m.feature_names = data.feature_names;
    m.base_score = std::log(p_prior / (1.0 - p_prior));
    m.learning_rate = cfg.learning_rate;
    m.max_depth = cfg.max_depth;
    m.n_rounds = cfg.n_rounds;
    m.min_leaf = cfg.min_leaf;
    m.l2_lambda = cfg.l2_lambda;

    std::vector<double> margin(n, m.base_score);
    std::vector<double> grad(n), hess(n);

    auto training_loss = [&]() {
        double total = 0.0;
        for (int i : idx) total += log_loss(data.rows[i].y, sigmoid(margin[i]));
        return total / static_cast<double>(n);
    };
    if (report) {
        report->round_loss.clear();
        report->round_loss.push_back(training_loss());
    }

    for (int round = 0; round < cfg.n_rounds; ++round) {
        for (int i : idx) {
            double p = sigmoid(margin[i]);
            grad[i] = p - data.rows[i].y;
            hess[i] = p * (1.0 - p);
        }
        TreeBuilder builder(data.rows, grad, hess, cfg);
        m.trees.push_back(builder.build(idx));
        for (int i : idx) margin[i] += cfg.learning_rate * m.trees.back().eval(data.rows[i].x);
        if (report) report->round_loss.push_back(training_loss());
    }
    return m;
}

double predict_proba(const GbdtModel& m, const std::vector<double>& x) {
    if (x.size() != m.feature_names.size())
        throw FeatureLengthMismatch("expected " + std::to_string(m.feature_names.size()) +
                                    " features, got " + std::to_string(x.size()));
    double score = m.base_score;
    for (const auto& tree : m.trees) score += m.learning_rate * tree.eval(x);
    return clamp_proba(sigmoid(score));
}

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_node(const Tree& t, int at, std::ostream& out) {
    const auto& n = t.nodes[at];
    if (n.feature < 0) {
        out << "L " << fmt_double(n.value) << "\n";
        return;
    }
    out << "S " << n.feature << " " << fmt_double(n.threshold) << "\n";
    write_node(t, n.left, out);
    write_node(t, n.right, out);
}

class TokenReader {
public:
    explicit TokenReader(std::istream& in) : in_(in) {}

    std::string next() {
        std::string tok;
        if (!(in_ >> tok)) throw CorruptModel("unexpected end of model file");
        return tok;
    }

    int next_int() {
        try {
            return std::stoi(next());
        } catch (const std::logic_error&) {
            throw CorruptModel("expected integer");
        }
    }

    double next_double() {
        try {
            return std::stod(next());
        } catch (const std::logic_error&) {
            throw CorruptModel("expected number");
        }
    }

    bool at_end() {
        std::string tok;
        return !(in_ >> tok);
    }

private:
    std::istream& in_;
};

int read_node(TokenReader& r, Tree& t, std::size_t n_features) {
    auto kind = r.next();
    int self = static_cast<int>(t.nodes.size());
    t.nodes.emplace_back();
    if (kind == "L") {
        t.nodes[self].value = r.next_double();
    } else if (kind == "S") {
        int feat = r.next_int();
        if (feat < 0 || static_cast<std::size_t>(feat) >= n_features)
            throw CorruptModel("split feature index out of range");
        double thr = r.next_double();
        t.nodes[self].feature = feat;
        t.nodes[self].threshold = thr;
        t.nodes[self].left = read_node(r, t, n_features);
        t.nodes[self].right = read_node(r, t, n_features);
    } else {
        throw CorruptModel("expected node tag S or L, got '" + kind + "'");
    }
    return self;
}

}  // namespace

void write_model(const GbdtModel& m, std::ostream& out) {
    out << "aipse-gbdt v1\n";
    out << "n_rounds " << m.n_rounds << "\n";
    out << "max_depth " << m.max_depth << "\n";
    out << "min_leaf " << m.min_leaf << "\n";
    out << "learning_rate " << fmt_double(m.learning_rate) << "\n";
    out << "l2_lambda " << fmt_double(m.l2_lambda) << "\n";
    out << "base_score " << fmt_double(m.base_score) << "\n";
    out << "features";
    for (const auto& name : m.feature_names) out << " " << name;
    out << "\n";
    out << "trees " << m.trees.size() << "\n";
    for (std::size_t i = 0; i < m.trees.size(); ++i) {
        out << "tree " << i << "\n";
        write_node(m.trees[i], 0, out);
    }
    out << "end\n";
}

GbdtModel read_model(std::istream& in) {
    TokenReader r(in);
    if (r.next() != "aipse-gbdt" || r.next() != "v1")
        throw CorruptModel("bad magic; not an aipse-gbdt v1 file");

    GbdtModel m;
    auto expect_key = [&](const char* key) {
        if (r.next() != key) throw CorruptModel(std::string("expected header key ") + key);
    };
    expect_key("n_rounds");
    m.n_rounds = r.next_int();
    expect_key("max_depth");
    m.max_depth = r.next_int();
    expect_key("min_leaf");
    m.min_leaf = r.next_int();
    expect_key("learning_rate");
    m.learning_rate = r.next_double();
    expect_key("l2_lambda");
    m.l2_lambda = r.next_double();
    expect_key("base_score");
    m.base_score = r.next_double();
    expect_key("features");

    std::string tok = r.next();
    while (tok != "trees") {
        m.feature_names.push_back(tok);
        tok = r.next();
    }
    if (m.feature_names.empty()) throw CorruptModel("no feature names");

    int n_trees = r.next_int();
    if (n_trees < 0) throw CorruptModel("negative tree count");
    for (int i = 0; i < n_trees; ++i) {
        expect_key("tree");
        if (r.next_int() != i) throw CorruptModel("tree blocks out of order");
        Tree t;
        read_node(r, t, m.feature_names.size());
        m.trees.push_back(std::move(t));
    }
    if (r.next() != "end") throw CorruptModel("missing end marker");
    if (!r.at_end()) throw CorruptModel("trailing content after end marker");
    if (static_cast<int>(m.trees.size()) > m.n_rounds)
        throw CorruptModel("more trees than n_rounds");
    return m;
}

void save_model(const GbdtModel& m, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write model file: " + path);
    write_model(m, out);
}

GbdtModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CorruptModel("cannot open model file: " + path);
    return read_model(in);
}

std::vector<std::pair<std::string, int>> load_url_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open training CSV: " + path);
    std::string line;
    if (!std::getline(in, line)) throw Error("empty training CSV: " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "url,label") throw Error("training CSV must start with header 'url,label'");

    std::vector<std::pair<std::string, int>> out;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto comma = line.rfind(',');
        if (comma == std::string::npos) throw Error("bad CSV line: " + line);
        auto label = line.substr(comma + 1);
        if (label != "0" && label != "1") throw Error("label must be 0 or 1: " + line);
        out.emplace_back(line.substr(0, comma), label == "1" ? 1 : 0);
    }
    return out;
}

}  // namespace aipse::gbdt
