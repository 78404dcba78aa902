#include <doctest.h>

#include <fstream>
#include <sstream>

#include "aipse/errors.hpp"
#include "aipse/evidence.hpp"
#include "aipse/features.hpp"
#include "aipse/url_record.hpp"
#include "test_support.hpp"

using namespace aipse;
using namespace aipse::url;

namespace {

dates::Date d(int y, unsigned m, unsigned day) {
    return dates::Date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{day}};
}

Evidence benign_evidence() {
    Evidence e;
    e.html = "<html><body>hello</body></html>";
    e.dns_resolves = true;
    e.creation_date = d(2019, 1, 1);
    e.expiration_date = d(2027, 1, 1);
    e.redirect_count = 0;
    e.fetched_at = d(2025, 1, 15);
    return e;
}

}  // namespace

TEST_CASE("parse_url decomposes scheme, host and path") {
    auto u = parse_url("http://a.com/x/y");
    CHECK(u.scheme == "http");
    CHECK(u.host == "a.com");
    CHECK(u.path_segments == std::vector<std::string>{"x", "y"});
    CHECK(u.registered_domain == "a.com");
}

TEST_CASE("parse_url strips leading www for the registered domain") {
    CHECK(parse_url("https://www.hsfaisz.org").registered_domain == "hsfaisz.org");
}

TEST_CASE("parse_url rejects input without a host") {
    CHECK_THROWS_AS(parse_url("not a url"), MalformedUrl);
    CHECK_THROWS_AS(parse_url(""), MalformedUrl);
    CHECK_THROWS_AS(parse_url("http://"), MalformedUrl);
    CHECK_THROWS_AS(parse_url("foo"), MalformedUrl);
}

TEST_CASE("parse_url handles userinfo, ports, queries and empty segments") {
    auto u = parse_url("http://user@evil.example:8080/a//b?q=1#frag");
    CHECK(u.host == "evil.example");
    CHECK(u.path_segments == std::vector<std::string>{"a", "b"});

    CHECK(parse_url("http://[::1]/x").host == "[::1]");
    CHECK(parse_url("HTTP://MiXeD.Example/Path").host == "mixed.example");
    CHECK(parse_url("HTTP://MiXeD.Example/Path").path_segments ==
          std::vector<std::string>{"Path"});
}

TEST_CASE("address-bar features follow the rules") {
    auto feats = [](const std::string& raw) { return extract_addressbar_features(parse_url(raw)); };

    CHECK(feats("http://192.168.0.1/login").f[kHaveIp] == 1);
    CHECK(feats("http://a.com/x").f[kHaveIp] == 0);
    CHECK(feats("http://user@evil.example/p").f[kHaveAt] == 1);
    CHECK(feats("http://pay-pal.example/").f[kPrefixSuffix] == 1);
    CHECK(feats("http://bit.ly/abc").f[kTinyUrl] == 1);

    auto v = feats("http://a.com/x/y");
    CHECK(v.f[kUrlDepth] == 2);
    CHECK(v.f[kUrlLength] == 0);

    CHECK(feats("http://example.com/a/b//c").f[kRedirection] == 1);
    CHECK(feats("https://a.com/x").f[kRedirection] == 0);
    CHECK(feats("https://secure-login-https.account.example/update").f[kHttpsDomain] == 1);
    CHECK(feats("http://a.com/x").f[kHttpsDomain] == 0);
}

TEST_CASE("domain features map missing or bad evidence to suspicious") {
    auto u = parse_url("http://a.com/");

    Evidence e = benign_evidence();
    FeatureVector v = extract_addressbar_features(u);

    SUBCASE("dns failure") {
        e.dns_resolves = false;
        extract_domain_features(u, e, v);
        CHECK(v.f[kDnsRecord] == 1);
    }
    SUBCASE("old domain is not flagged") {
        e.creation_date = d(2020, 1, 1);
        e.fetched_at = d(2024, 1, 1);
        extract_domain_features(u, e, v);
        CHECK(v.f[kDomainAge] == 0);
    }
    SUBCASE("young domain is flagged") {
        e.creation_date = d(2024, 10, 1);
        extract_domain_features(u, e, v);
        CHECK(v.f[kDomainAge] == 1);
    }
    SUBCASE("absent expiration is flagged") {
        e.expiration_date.reset();
        extract_domain_features(u, e, v);
        CHECK(v.f[kDomainEnd] == 1);
    }
    SUBCASE("expiring soon is flagged") {
        e.expiration_date = d(2025, 5, 1);
        extract_domain_features(u, e, v);
        CHECK(v.f[kDomainEnd] == 1);
    }
}

TEST_CASE("html features") {
    Evidence e = benign_evidence();
    FeatureVector v;

    SUBCASE("clean page scores zero") {
        e.html = "<html></html>";
        extract_html_features(e, v);
        CHECK(v.f[kIFrame] == 0);
        CHECK(v.f[kMouseOver] == 0);
        CHECK(v.f[kRightClick] == 0);
        CHECK(v.f[kWebForwards] == 0);
    }
    SUBCASE("status-bar mouseover is flagged") {
        e.html = "<a onmouseover=\"window.status='x'\">y</a>";
        extract_html_features(e, v);
        CHECK(v.f[kMouseOver] == 1);
    }
    SUBCASE("hidden iframe is flagged, visible is not") {
        e.html = "<iframe src=\"a\" frameborder=\"0\"></iframe>";
        extract_html_features(e, v);
        CHECK(v.f[kIFrame] == 1);
        e.html = "<iframe src=\"a\" width=\"300\"></iframe>";
        extract_html_features(e, v);
        CHECK(v.f[kIFrame] == 0);
    }
    SUBCASE("right-click guard is flagged") {
        e.html = "<script>if (event.button == 2) return false;</script>";
        extract_html_features(e, v);
        CHECK(v.f[kRightClick] == 1);
    }
    SUBCASE("absent html forces all four") {
        e.html.reset();
        e.redirect_count = 0;
        extract_html_features(e, v);
        CHECK(v.f[kIFrame] == 1);
        CHECK(v.f[kMouseOver] == 1);
        CHECK(v.f[kRightClick] == 1);
        CHECK(v.f[kWebForwards] == 1);
    }
    SUBCASE("redirect count above threshold") {
        e.html = "<html></html>";
        e.redirect_count = 5;
        extract_html_features(e, v);
        CHECK(v.f[kWebForwards] == 1);
    }
}

TEST_CASE("extract_all composes the three extractors") {
    SUBCASE("benign evidence yields the zero vector") {
        auto v = extract_all(parse_url("http://a.com/"), benign_evidence());
        for (std::size_t i = 0; i < kFeatureCount; ++i) CHECK(v.f[i] == 0);
        CHECK(v.domain_key == "a.com");
    }
    SUBCASE("shortener with userinfo and no html") {
        Evidence e = benign_evidence();
        e.html.reset();
        auto v = extract_all(parse_url("http://user@bit.ly/x"), e);
        CHECK(v.f[kHaveAt] == 1);
        CHECK(v.f[kTinyUrl] == 1);
        CHECK(v.f[kIFrame] == 1);
        CHECK(v.f[kMouseOver] == 1);
        CHECK(v.f[kRightClick] == 1);
        CHECK(v.f[kWebForwards] == 1);
    }
    SUBCASE("deterministic on repeated calls") {
        auto u = parse_url("https://203.0.113.9//p/q");
        Evidence e = benign_evidence();
        auto a = extract_all(u, e);
        auto b = extract_all(u, e);
        CHECK(a.f == b.f);
        CHECK(a.domain_key == b.domain_key);
    }
}

TEST_CASE("removing evidence never decreases a feature (monotone missingness)") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        Evidence e;
        e.fetched_at = d(2025, 1, 15);
        if (rng() & 1) e.html = (rng() & 1) ? "<iframe frameborder=0>" : "<html>ok</html>";
        if (rng() & 1) e.dns_resolves = (rng() & 1) != 0;
        if (rng() & 1) e.creation_date = d(2019 + static_cast<int>(rng() % 6), 1, 1);
        if (rng() & 1) e.expiration_date = d(2025, 1, 20);
        if (rng() & 1) e.redirect_count = static_cast<int>(rng() % 5);

        auto u = parse_url("http://probe.example/x");
        auto base = extract_all(u, e);

        for (int field = 0; field < 5; ++field) {
            Evidence stripped = e;
            switch (field) {
                case 0: stripped.html.reset(); break;
                case 1: stripped.dns_resolves.reset(); break;
                case 2: stripped.creation_date.reset(); break;
                case 3: stripped.expiration_date.reset(); break;
                case 4: stripped.redirect_count.reset(); break;
            }
            auto sparse = extract_all(u, stripped);
            for (std::size_t i = 0; i < kFeatureCount; ++i) {
                CAPTURE(trial);
                CAPTURE(field);
                CAPTURE(i);
                CHECK(sparse.f[i] >= base.f[i]);
            }
        }
    }
}

TEST_CASE("golden 20-URL fixture matches the hand-derived vectors") {
    FixtureEvidenceProvider provider(testsupport::fixture_path("evidence"));
    std::ifstream in(testsupport::fixture_path("golden_features.csv"));
    REQUIRE(in.good());

    std::string line;
    REQUIRE(std::getline(in, line));  // header
    int checked = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto comma = line.find(',');
        auto raw = line.substr(0, comma);
        std::istringstream nums(line.substr(comma + 1));

        auto rec = parse_url(raw);
        auto v = extract_all(rec, provider.lookup(rec.host));
        for (std::size_t i = 0; i < kFeatureCount; ++i) {
            int expected = -1;
            nums >> expected;
            CAPTURE(raw);
            CAPTURE(kFeatureNames[i]);
            CHECK(v.f[i] == expected);
        }
        ++checked;
    }
    CHECK(checked == 20);
}

TEST_CASE("fixture provider validation") {
    FixtureEvidenceProvider no_default(testsupport::fixture_path("evidence"));
    CHECK_THROWS_AS(no_default.lookup("unknown-host.example"), InvalidConfig);

    FixtureEvidenceProvider with_default(testsupport::fixture_path("evidence"), d(2025, 1, 15));
    auto e = with_default.lookup("unknown-host.example");
    CHECK_FALSE(e.html.has_value());
    CHECK(e.fetched_at == d(2025, 1, 15));

    Evidence bad;
    bad.fetched_at = d(2025, 1, 15);
    bad.creation_date = d(2026, 1, 1);
    bad.expiration_date = d(2020, 1, 1);
    CHECK_THROWS_AS(validate_evidence(bad), InvalidConfig);
}

TEST_CASE("the shipped shortener list matches the built-in seed") {
    auto shipped =
        FeatureConfig::load_shorteners(testsupport::asset_path("config/shorteners.txt"));
    CHECK(shipped == FeatureConfig::default_shorteners());
    CHECK(shipped.count("bit.ly") == 1);
    CHECK(shipped.count("tinyurl.com") == 1);
    CHECK_THROWS_AS(FeatureConfig::load_shorteners("/nonexistent.txt"), InvalidConfig);
}

TEST_CASE("the canonical feature order is pinned") {
    REQUIRE(kFeatureCount == 15);
    CHECK(kFeatureNames.front() == "Have_IP");
    CHECK(kFeatureNames[kUrlDepth] == "URL_Depth");
    CHECK(kFeatureNames[kDnsRecord] == "DNS_Record");
    CHECK(kFeatureNames[kIFrame] == "iFrame");
    CHECK(kFeatureNames.back() == "Web_Forwards");

    FeatureVector v;
    v.f = {0, 1, 0, 3, 0, 0, 1, 0, 1, 1, 0, 1, 0, 0, 1};
    auto doubles = v.to_doubles();
    REQUIRE(doubles.size() == kFeatureCount);
    for (std::size_t i = 0; i < kFeatureCount; ++i)
        CHECK(doubles[i] == static_cast<double>(v.f[i]));
}

TEST_CASE("iso dates parse and month arithmetic clamps") {
    CHECK(dates::parse_iso("2025-08-31").has_value());
    CHECK_FALSE(dates::parse_iso("2025-13-01").has_value());
    CHECK_FALSE(dates::parse_iso("20250831").has_value());
    CHECK_FALSE(dates::parse_iso("2025-02-30").has_value());

    CHECK(dates::add_months(d(2025, 8, 31), 6) == d(2026, 2, 28));
    CHECK(dates::add_months(d(2024, 1, 1), 6) == d(2024, 7, 1));
    CHECK(dates::to_iso(d(2024, 7, 1)) == "2024-07-01");
}
