#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace aipse::gbdt {

struct LabeledRow {
    std::vector<double> x;
    int y = 0;  // 0 = legitimate, 1 = phishing
};

struct LabeledDataset {
    std::vector<std::string> feature_names;
    std::vector<LabeledRow> rows;
};

// Flattened binary tree; node 0 is the root. A node is a leaf when
// feature < 0. Split predicate: x[feature] < threshold goes left.
struct TreeNode {
    int feature = -1;
    double threshold = 0.0;
    double value = 0.0;
    int left = -1;
    int right = -1;
};

struct Tree {
    std::vector<TreeNode> nodes;

    double eval(const std::vector<double>& x) const;
};

struct TrainConfig {
    int n_rounds = 100;
    int max_depth = 4;
    double learning_rate = 0.1;
    int min_leaf = 5;
    double l2_lambda = 1.0;
};

// Training log-loss curve, filled by train() when requested. Entry 0 is the
// prior-only loss, entry k the loss after k trees.
struct TrainReport {
    std::vector<double> round_loss;
};

struct GbdtModel {
    std::vector<std::string> feature_names;
    double base_score = 0.0;  // log-odds prior
    double learning_rate = 0.1;
    int max_depth = 4;
    int n_rounds = 0;
    int min_leaf = 5;
    double l2_lambda = 1.0;
    std::vector<Tree> trees;
};

// Logistic-loss gradient boosting with exact greedy splits. Trees are grown
// on Newton statistics: leaf value = sum(y - p) / (sum(p(1-p)) + lambda).
// Splits maximize the usual gain over midpoints of consecutive distinct
// values; ties break to the lowest (feature index, threshold). Rows are
// canonicalized internally, so row order never affects the result.
// Throws DegenerateData (single class) and InvalidConfig.
GbdtModel train(const LabeledDataset& data, const TrainConfig& cfg = TrainConfig{},
                TrainReport* report = nullptr);

// sigmoid(base + rate * sum of trees); strictly inside (0,1).
// Throws FeatureLengthMismatch when x.size() != feature_names.size().
double predict_proba(const GbdtModel& m, const std::vector<double>& x);

inline bool classify_phishing(const GbdtModel& m, const std::vector<double>& x) {
    return predict_proba(m, x) >= 0.5;
}

// Line-oriented text format: header (version, hyperparameters, base_score,
// feature names), then one preorder block per tree ("S <feat> <thr>" /
// "L <value>"). Round-trips reproduce predictions bit-exactly.
void save_model(const GbdtModel& m, const std::string& path);
GbdtModel load_model(const std::string& path);  // throws CorruptModel

void write_model(const GbdtModel& m, std::ostream& out);
GbdtModel read_model(std::istream& in);

// Training CSV with header "url,label". Feature extraction happens
// elsewhere; this reads the raw (url, label) pairs.
std::vector<std::pair<std::string, int>> load_url_csv(const std::string& path);

}  // namespace aipse::gbdt
