#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "aipse/risk.hpp"

namespace aipse::metrics {

enum class Strategy { None, PromptOnly, Agent };

std::string_view to_string(Strategy s);
std::optional<Strategy> strategy_from_string(std::string_view text);

struct UrlOutcome {
    std::string url;
    bool ground_truth_malicious = false;
    bool flagged_risky = false;
};

struct DefenseRun {
    std::string engine_name;
    std::string query_id;
    Strategy strategy = Strategy::None;
    risk::RiskLevel pre_level = risk::RiskLevel::None;
    risk::RiskLevel post_level = risk::RiskLevel::None;
    std::vector<UrlOutcome> per_url;
};

struct CountPercent {
    long count = 0;
    double percent = 0.0;  // of the relevant denominator, half-up, 2 decimals
};

struct DefenseSummary {
    long total_queries = 0;
    CountPercent still_high;      // of total_queries
    long url_total = 0;
    CountPercent risky;           // flagged, of url_total
    CountPercent false_positive;  // flagged but benign, of url_total
    CountPercent false_negative;  // unflagged but malicious, of url_total
};

// 100 * count / denominator, rounded half-up to 2 decimals; 0.00 when the
// denominator is 0.
double percent_of(long count, long denominator);

// Aggregates runs of a single strategy. A run still counts as high risk
// when post_level stays High; identifying a specific risk (downgrade to
// Medium) counts as mitigated. Throws MixedStrategies when the runs
// disagree on strategy.
DefenseSummary summarize_defense(const std::vector<DefenseRun>& runs);

// Runs file (JSON): {"runs": [{engine, query_id, strategy, pre_level,
// post_level, urls: [{url, malicious, flagged}]}]}. Validates that
// strategy "none" leaves post_level == pre_level.
std::vector<DefenseRun> load_runs(const std::string& path);

// Aligned text tables (query table and URL table, per strategy) or CSV.
void write_tables(const std::vector<DefenseRun>& runs, std::ostream& out);
void write_csv(const std::vector<DefenseRun>& runs, std::ostream& out);

}  // namespace aipse::metrics
