#include <doctest.h>

#include "unseen/campaign.hpp"

using namespace unseen::oracle;

TEST_CASE("the published campaign has no falsifications") {
    const auto report = run_campaign();
    REQUIRE(report.lines.size() == 9);
    for (const auto& line : report.lines) {
        CAPTURE(line.name);
        CAPTURE(line.first_failure);
        CHECK(line.falsified == 0);
        CHECK(line.passed());
    }
    CHECK(report.falsifications() == 0);
    CHECK(report.passed());
}

TEST_CASE("campaign groups reach their instance counts") {
    const CampaignConfig cfg;
    CHECK(campaign_decoupling_lower(cfg).instances == 100);
    CHECK(campaign_decoupling_upper(cfg).instances == 100);
    CHECK(campaign_domination(cfg).instances == 100);
    CHECK(campaign_charpoly(cfg).instances == 200);
    CHECK(campaign_moment_bound(cfg).instances == 100);
    CHECK(campaign_degree2(cfg).instances == 100);
    CHECK(campaign_conditional_moment(cfg).instances == 100);
    CHECK(campaign_negative_regression(cfg).instances == 100);
    CHECK(campaign_cauchy_schwarz().instances == 192);
}

TEST_CASE("campaign is deterministic and seed dependent") {
    CampaignConfig cfg;
    cfg.instances = 20;
    const auto a = campaign_degree2(cfg);
    const auto b = campaign_degree2(cfg);
    CHECK(a.min_margin == b.min_margin);
    CHECK(a.checks == b.checks);
    cfg.seed += 1;
    CHECK(campaign_degree2(cfg).min_margin != a.min_margin);
}

TEST_CASE("other seeds stay clean") {
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        CampaignConfig cfg;
        cfg.seed = seed;
        cfg.instances = 50;
        const auto report = run_campaign(cfg);
        for (const auto& line : report.lines) {
            CAPTURE(seed);
            CAPTURE(line.first_failure);
            CHECK(line.falsified == 0);
        }
    }
}
