// aipseguard: command-line front end for the defense toolkit.
//
// Subcommands: features, train, detect, defend, ingest, evaluate,
// hash-templates. Network access (live probes, live LLM backend) is always
// opt-in; the default is fixtures and mock scripts.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "aipse/agent.hpp"
#include "aipse/corpus.hpp"
#include "aipse/errors.hpp"
#include "aipse/evidence.hpp"
#include "aipse/features.hpp"
#include "aipse/gbdt.hpp"
#include "aipse/live_probe.hpp"
#include "aipse/llm_backend.hpp"
#include "aipse/metrics.hpp"
#include "aipse/prompts.hpp"
#include "aipse/response_io.hpp"
#include "aipse/risk.hpp"
#include "aipse/url_record.hpp"

namespace {

using namespace aipse;

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

struct EvidenceOptions {
    std::string fixtures_dir;
    std::string as_of;
    bool live = false;
};

void add_evidence_flags(CLI::App* cmd, EvidenceOptions& opts) {
    cmd->add_option("--fixtures", opts.fixtures_dir, "Evidence fixture directory");
    cmd->add_option("--as-of", opts.as_of, "Reference date YYYY-MM-DD for age math");
    cmd->add_flag("--live", opts.live, "Probe DNS/WHOIS/HTTP over the network (opt-in)");
}

struct FeatureOptions {
    std::string shorteners_path;
    url::FeatureConfig cfg;
};

void add_feature_flags(CLI::App* cmd, FeatureOptions& opts) {
    cmd->add_option("--shorteners", opts.shorteners_path,
                    "Shortener domain list (one per line)");
    cmd->add_option("--age-months", opts.cfg.age_threshold_months,
                    "Domain_Age window in months");
    cmd->add_option("--end-months", opts.cfg.end_threshold_months,
                    "Domain_End window in months");
    cmd->add_option("--forwards-threshold", opts.cfg.forwards_threshold,
                    "Redirects above this count set Web_Forwards");
    cmd->add_option("--length-threshold", opts.cfg.length_threshold,
                    "URL_Length flag cutoff in characters");
}

url::FeatureConfig make_feature_config(const FeatureOptions& opts) {
    auto cfg = opts.cfg;
    if (!opts.shorteners_path.empty())
        cfg.shorteners = url::FeatureConfig::load_shorteners(opts.shorteners_path);
    return cfg;
}

std::shared_ptr<url::EvidenceProvider> make_evidence_provider(const EvidenceOptions& opts) {
    std::optional<dates::Date> as_of;
    if (!opts.as_of.empty()) {
        as_of = dates::parse_iso(opts.as_of);
        if (!as_of) throw InvalidConfig("--as-of must be YYYY-MM-DD");
    }
    if (opts.live) {
        url::LiveEvidenceProvider::Options live;
        live.as_of = as_of;
        return std::make_shared<url::LiveEvidenceProvider>(live);
    }
    if (!opts.fixtures_dir.empty())
        return std::make_shared<url::FixtureEvidenceProvider>(opts.fixtures_dir, as_of);
    if (!as_of) throw InvalidConfig("offline mode needs --fixtures and/or --as-of");
    return std::make_shared<url::AbsentEvidenceProvider>(*as_of);
}

struct BackendOptions {
    std::string kind = "mock";
    std::string mock_script;
    std::string endpoint = "https://api.openai.com";
    std::string model = "gpt-4o";
    std::string api_key_env = "AIPSE_LLM_API_KEY";
};

void add_backend_flags(CLI::App* cmd, BackendOptions& opts) {
    cmd->add_option("--backend", opts.kind, "LLM backend: live or mock")
        ->check(CLI::IsMember({"live", "mock"}));
    cmd->add_option("--mock-script", opts.mock_script, "Canned replies for the mock backend");
    cmd->add_option("--endpoint", opts.endpoint, "Chat-completion endpoint for --backend live");
    cmd->add_option("--llm-model", opts.model, "Model id for --backend live");
    cmd->add_option("--api-key-env", opts.api_key_env, "Env var holding the API key");
}

std::unique_ptr<llm::LlmBackend> make_backend(const BackendOptions& opts) {
    if (opts.kind == "live") {
        llm::HttpChatBackend::Options http;
        http.endpoint = opts.endpoint;
        http.model = opts.model;
        http.api_key_env = opts.api_key_env;
        return std::make_unique<llm::HttpChatBackend>(http);
    }
    if (opts.mock_script.empty())
        throw InvalidConfig("--backend mock needs --mock-script");
    return std::make_unique<llm::ScriptedBackend>(
        llm::ScriptedBackend::from_script_file(opts.mock_script));
}

gbdt::LabeledDataset featurize_csv(const std::string& csv_path, url::EvidenceProvider& evidence,
                                   const url::FeatureConfig& cfg) {
    auto pairs = gbdt::load_url_csv(csv_path);
    gbdt::LabeledDataset data;
    data.feature_names.assign(url::kFeatureNames.begin(), url::kFeatureNames.end());
    for (const auto& [raw, label] : pairs) {
        auto rec = url::parse_url(raw);
        auto v = url::extract_all(rec, evidence.lookup(rec.host), cfg);
        data.rows.push_back({v.to_doubles(), label});
    }
    return data;
}

int cmd_features(const std::string& raw, const EvidenceOptions& ev_opts,
                 const FeatureOptions& f_opts) {
    auto provider = make_evidence_provider(ev_opts);
    auto rec = url::parse_url(raw);
    auto v = url::extract_all(rec, provider->lookup(rec.host), make_feature_config(f_opts));
    std::cout << "domain_key=" << v.domain_key << "\n";
    for (std::size_t i = 0; i < url::kFeatureCount; ++i)
        std::cout << url::kFeatureNames[i] << "=" << v.f[i] << "\n";
    return 0;
}

int cmd_train(const std::string& data_csv, const std::string& model_out,
              const EvidenceOptions& ev_opts, const FeatureOptions& f_opts,
              const gbdt::TrainConfig& cfg) {
    auto provider = make_evidence_provider(ev_opts);
    auto data = featurize_csv(data_csv, *provider, make_feature_config(f_opts));
    gbdt::TrainReport report;
    auto model = gbdt::train(data, cfg, &report);
    gbdt::save_model(model, model_out);

    int hits = 0;
    for (const auto& row : data.rows)
        hits += (gbdt::predict_proba(model, row.x) >= 0.5 ? 1 : 0) == row.y;
    std::printf("trained %zu rows, %d rounds; final log-loss %.6f; train accuracy %.4f\n",
                data.rows.size(), cfg.n_rounds, report.round_loss.back(),
                static_cast<double>(hits) / static_cast<double>(data.rows.size()));
    std::printf("model written to %s\n", model_out.c_str());
    return 0;
}

int cmd_detect(const std::string& model_path, const std::vector<std::string>& urls,
               const EvidenceOptions& ev_opts, const FeatureOptions& f_opts) {
    auto model = std::make_shared<gbdt::GbdtModel>(gbdt::load_model(model_path));
    auto provider = make_evidence_provider(ev_opts);
    auto tool = agent::make_url_detector_tool(model, provider, make_feature_config(f_opts));
    std::cout << tool.invoke(nlohmann::json{{"urls", urls}}) << "\n";
    return 0;
}

int cmd_defend(const std::string& query, const std::string& response_file,
               const std::string& model_path, const EvidenceOptions& ev_opts,
               const FeatureOptions& f_opts, const BackendOptions& be_opts,
               const std::string& transcript_out) {
    auto lr = risk::load_labeled_response(response_file);
    auto backend = make_backend(be_opts);
    auto feature_cfg = make_feature_config(f_opts);

    std::shared_ptr<gbdt::GbdtModel> model;
    if (!model_path.empty()) {
        model = std::make_shared<gbdt::GbdtModel>(gbdt::load_model(model_path));
    } else {
        // No model given: train on the bundled desk corpus. Address-bar
        // features carry the signal; absent evidence is uniform across rows.
        auto as_of = dates::parse_iso("2025-01-15");
        url::AbsentEvidenceProvider absent(*as_of);
        auto data = featurize_csv(std::string(AIPSE_DESK_CORPUS), absent, feature_cfg);
        model = std::make_shared<gbdt::GbdtModel>(gbdt::train(data));
    }

    agent::ToolRegistry registry;
    registry.add(agent::make_refine_tool(*backend));
    registry.add(
        agent::make_url_detector_tool(model, make_evidence_provider(ev_opts), feature_cfg));

    auto transcript = agent::run_agent(query, lr.response, *backend, registry);

    if (!transcript_out.empty()) {
        std::ofstream out(transcript_out);
        if (!out) throw Error("cannot write transcript: " + transcript_out);
        agent::write_transcript(transcript, out);
    }

    if (transcript.final_answer)
        std::cout << *transcript.final_answer << "\n";
    else
        std::cout << "(agent stopped without a final answer)\n";
    std::cout << "\nSafe URLs:\n";
    if (transcript.safe_urls.empty()) std::cout << "  (none)\n";
    for (const auto& u : transcript.safe_urls) std::cout << "  " << u << "\n";
    for (const auto& [tool, count] : transcript.tool_failures)
        std::cerr << "note: tool '" << tool << "' failed " << count << " time(s)\n";
    return 0;
}

// Probe fixtures share the per-host key=value format with evidence
// fixtures; ingest reads status_code / cert_valid / category / keywords /
// html_path.
struct ProbeFixture {
    corpus::CandidateSite site;
    bool found = false;
};

ProbeFixture read_probe_fixture(const std::string& dir, const std::string& host) {
    ProbeFixture out;
    std::ifstream in(dir + "/" + host + ".txt");
    if (!in) return out;
    out.found = true;
    std::string line;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto key = line.substr(0, eq);
        auto value = line.substr(eq + 1);
        auto trim = [](std::string s) {
            auto b = s.find_first_not_of(" \t\r\n");
            if (b == std::string::npos) return std::string{};
            auto e = s.find_last_not_of(" \t\r\n");
            return s.substr(b, e - b + 1);
        };
        key = trim(key);
        value = trim(value);
        if (key == "status_code") {
            out.site.probe.status_code = std::stoi(value);
        } else if (key == "cert_valid") {
            out.site.probe.cert_valid = value == "true" || value == "1";
        } else if (key == "category") {
            out.site.category = corpus::category_from_string(value);
        } else if (key == "keywords") {
            std::vector<std::string> kws;
            std::istringstream parts(value);
            std::string part;
            while (std::getline(parts, part, ',')) kws.push_back(trim(part));
            out.site.keywords = std::move(kws);
        } else if (key == "html_path") {
            std::ifstream html(dir + "/" + value, std::ios::binary);
            if (html) {
                std::ostringstream body;
                body << html.rdbuf();
                out.site.html = body.str();
            }
        }
    }
    return out;
}

std::optional<std::vector<std::string>> generate_keywords(llm::LlmBackend& backend,
                                                          const std::string& website_info) {
    auto prompt = prompts::render_keyword_extraction_prompt(website_info);
    auto reply = backend.send(prompt.system + "\n\n" + prompt.user);
    std::vector<std::string> kws;
    std::istringstream parts(reply);
    std::string part;
    while (std::getline(parts, part, ',')) {
        auto b = part.find_first_not_of(" \t\r\n");
        if (b == std::string::npos) continue;
        auto e = part.find_last_not_of(" \t\r\n");
        kws.push_back(part.substr(b, e - b + 1));
    }
    if (kws.size() != 5) return std::nullopt;
    return kws;
}

int cmd_ingest(const std::string& in_csv, const std::string& fixtures_dir,
               const std::string& out_csv, const BackendOptions& be_opts, bool use_backend,
               bool live, int delay_ms) {
    std::ifstream in(in_csv);
    if (!in) throw Error("cannot open input CSV: " + in_csv);
    std::ofstream out(out_csv);
    if (!out) throw Error("cannot write output CSV: " + out_csv);

    std::unique_ptr<llm::LlmBackend> backend;
    if (use_backend) backend = make_backend(be_opts);

    out << "url,k1,k2,k3,k4,k5,kept,drop_reason\n";

    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (first && (line == "url" || line.rfind("url,", 0) == 0)) {
            first = false;
            continue;  // header
        }
        first = false;
        auto comma = line.find(',');
        auto raw = comma == std::string::npos ? line : line.substr(0, comma);

        corpus::CandidateSite site;
        site.url = raw;
        std::string host;
        try {
            host = url::parse_url(raw).host;
        } catch (const MalformedUrl&) {
            out << raw << ",,,,,,false,malformed-url\n";
            continue;
        }

        if (live) {
            std::this_thread::sleep_for(std::chrono::milliseconds(delay_ms));
            auto probed = url::probe_site(host, 10);
            site.probe.status_code = probed.status;
            site.probe.cert_valid = probed.cert_valid;
            site.html = probed.body;
        } else {
            auto fixture = read_probe_fixture(fixtures_dir, host);
            if (!fixture.found) {
                out << raw << ",,,,,,false,no-probe-fixture\n";
                continue;
            }
            site = fixture.site;
            site.url = raw;
        }
        if (!site.category) site.category = corpus::classify_category(host);

        auto decision = corpus::filter_candidate(site);
        if (decision.kept && !site.keywords && site.html && backend)
            site.keywords = generate_keywords(*backend, corpus::extract_site_fields(*site.html));
        if (decision.kept && site.keywords) {
            auto kw_decision = corpus::filter_keywords(*site.keywords);
            if (!kw_decision.kept)
                decision = corpus::FilterDecision::drop("keyword:" + kw_decision.reason);
        }

        std::array<std::string, 5> kws{};
        if (site.keywords)
            for (std::size_t i = 0; i < 5 && i < site.keywords->size(); ++i)
                kws[i] = (*site.keywords)[i];
        out << raw;
        for (const auto& k : kws) out << "," << k;
        out << "," << (decision.kept ? "true" : "false") << "," << decision.reason << "\n";
    }
    std::cout << "wrote " << out_csv << "\n";
    return 0;
}

int cmd_evaluate(const std::string& runs_path, const std::string& format) {
    auto runs = metrics::load_runs(runs_path);
    if (format == "csv")
        metrics::write_csv(runs, std::cout);
    else
        metrics::write_tables(runs, std::cout);
    return 0;
}

int cmd_hash_templates() {
    auto show = [](const char* name, std::string_view text) {
        std::printf("%-22s 0x%016llx  (%zu bytes)\n", name,
                    static_cast<unsigned long long>(fnv1a64(text)), text.size());
    };
    std::printf("template version %d\n", prompts::kTemplateVersion);
    show("react", prompts::kReactTemplate);
    show("agent-instruction", prompts::kAgentInstructionTemplate);
    show("refine", prompts::kRefineTemplate);
    show("keyword-system", prompts::kKeywordExtractionSystem);
    show("keyword-user", prompts::kKeywordExtractionUserTemplate);
    show("nl-query", prompts::kNlQueryTemplate);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Defense toolkit for AI-powered search engine responses"};
    app.require_subcommand(1);

    // features
    auto* features = app.add_subcommand("features", "Extract URL features");
    std::string features_url;
    EvidenceOptions features_ev;
    FeatureOptions features_f;
    features->add_option("--url", features_url, "URL to featurize")->required();
    add_evidence_flags(features, features_ev);
    add_feature_flags(features, features_f);

    // train
    auto* train = app.add_subcommand("train", "Train the URL detector from a url,label CSV");
    std::string train_csv, train_out;
    EvidenceOptions train_ev;
    gbdt::TrainConfig train_cfg;
    train->add_option("--data", train_csv, "Training CSV (header url,label)")->required();
    train->add_option("--model", train_out, "Output model file")->required();
    train->add_option("--rounds", train_cfg.n_rounds, "Boosting rounds");
    train->add_option("--depth", train_cfg.max_depth, "Max tree depth");
    train->add_option("--rate", train_cfg.learning_rate, "Learning rate");
    train->add_option("--min-leaf", train_cfg.min_leaf, "Minimum rows per leaf");
    train->add_option("--lambda", train_cfg.l2_lambda, "L2 leaf regularization");
    add_evidence_flags(train, train_ev);
    FeatureOptions train_f;
    add_feature_flags(train, train_f);

    // detect
    auto* detect = app.add_subcommand("detect", "Classify URLs with a trained model");
    std::string detect_model;
    std::vector<std::string> detect_urls;
    EvidenceOptions detect_ev;
    detect->add_option("--model", detect_model, "Model file")->required();
    detect->add_option("--url", detect_urls, "URL(s) to classify")->required();
    add_evidence_flags(detect, detect_ev);
    FeatureOptions detect_f;
    add_feature_flags(detect, detect_f);

    // defend
    auto* defend = app.add_subcommand("defend", "Run the agent defense over a response");
    std::string defend_query, defend_response, defend_model, defend_transcript;
    EvidenceOptions defend_ev;
    BackendOptions defend_be;
    defend->add_option("--query", defend_query, "Original user query")->required();
    defend->add_option("--response-file", defend_response, "Response JSON file")->required();
    defend->add_option("--model", defend_model, "Detector model (default: desk-corpus model)");
    defend->add_option("--transcript-out", defend_transcript, "Write the step transcript here");
    add_evidence_flags(defend, defend_ev);
    FeatureOptions defend_f;
    add_feature_flags(defend, defend_f);
    add_backend_flags(defend, defend_be);

    // ingest
    auto* ingest = app.add_subcommand("ingest", "Filter candidate sites into a corpus CSV");
    std::string ingest_in, ingest_fixtures, ingest_out;
    BackendOptions ingest_be;
    bool ingest_live = false;
    ingest->add_option("--in", ingest_in, "Input CSV url[,source]")->required();
    ingest->add_option("--fixtures", ingest_fixtures, "Probe fixture directory");
    ingest->add_option("--out", ingest_out, "Output CSV")->required();
    ingest->add_flag("--live", ingest_live, "Probe sites over the network (opt-in)");
    int ingest_delay_ms = 500;
    ingest->add_option("--delay-ms", ingest_delay_ms,
                       "Politeness delay between live probes (ms)");
    add_backend_flags(ingest, ingest_be);

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "Summarize labeled defense runs");
    std::string eval_runs, eval_format = "table";
    evaluate->add_option("--runs", eval_runs, "Runs JSON file")->required();
    evaluate->add_option("--format", eval_format, "table or csv")
        ->check(CLI::IsMember({"table", "csv"}));

    // hash-templates
    auto* hash = app.add_subcommand("hash-templates", "Print template asset hashes");

    CLI11_PARSE(app, argc, argv);

    try {
        if (features->parsed()) return cmd_features(features_url, features_ev, features_f);
        if (train->parsed())
            return cmd_train(train_csv, train_out, train_ev, train_f, train_cfg);
        if (detect->parsed())
            return cmd_detect(detect_model, detect_urls, detect_ev, detect_f);
        if (defend->parsed())
            return cmd_defend(defend_query, defend_response, defend_model, defend_ev, defend_f,
                              defend_be, defend_transcript);
        if (ingest->parsed())
            return cmd_ingest(ingest_in, ingest_fixtures, ingest_out, ingest_be,
                              !ingest_be.mock_script.empty() || ingest_be.kind == "live",
                              ingest_live, ingest_delay_ms);
        if (evaluate->parsed()) return cmd_evaluate(eval_runs, eval_format);
        if (hash->parsed()) return cmd_hash_templates();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
