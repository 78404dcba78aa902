#include "aipse/evidence.hpp"

#include <fstream>
#include <sstream>

#include "aipse/errors.hpp"

namespace aipse::url {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error("cannot open file: " + p.string());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

dates::Date parse_date_or_throw(const std::string& value, const std::string& key) {
    auto d = dates::parse_iso(value);
    if (!d) throw InvalidConfig("bad " + key + " date: " + value);
    return *d;
}

}  // namespace

void validate_evidence(const Evidence& e) {
    if (e.creation_date && e.expiration_date && *e.expiration_date < *e.creation_date)
        throw InvalidConfig("creation_date after expiration_date");
}

FixtureEvidenceProvider::FixtureEvidenceProvider(std::filesystem::path dir,
                                                 std::optional<dates::Date> default_fetched_at)
    : dir_(std::move(dir)), default_fetched_at_(default_fetched_at) {}

Evidence FixtureEvidenceProvider::lookup(const std::string& host) {
    Evidence e;
    std::optional<dates::Date> fetched = default_fetched_at_;

    auto path = dir_ / (host + ".txt");
    if (std::filesystem::exists(path)) {
        std::ifstream in(path);
        std::string line;
        while (std::getline(in, line)) {
            if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
            auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            auto key = trim(line.substr(0, eq));
            auto value = trim(line.substr(eq + 1));
            if (key.empty() || value.empty()) continue;

            if (key == "html_path") {
                e.html = read_file(dir_ / value);
            } else if (key == "dns_resolves") {
                e.dns_resolves = (value == "true" || value == "1");
            } else if (key == "creation_date") {
                e.creation_date = parse_date_or_throw(value, key);
            } else if (key == "expiration_date") {
                e.expiration_date = parse_date_or_throw(value, key);
            } else if (key == "redirect_count") {
                e.redirect_count = std::stoi(value);
            } else if (key == "fetched_at") {
                fetched = parse_date_or_throw(value, key);
            }
            // Unknown keys are ignored; corpus probe fixtures share the format.
        }
    }

    if (!fetched)
        throw InvalidConfig("no fetched_at for host '" + host + "' and no default given");
    e.fetched_at = *fetched;
    validate_evidence(e);
    return e;
}

}  // namespace aipse::url
