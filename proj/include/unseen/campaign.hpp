#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "unseen/oracle.hpp"

namespace unseen::oracle {

struct CampaignConfig {
    std::uint64_t seed = 20190707;
    /// Certified instances per randomized group (the characteristic-polynomial
    /// group uses twice this many).
    std::size_t instances = 100;
    double tail_tolerance = 1e-12;
    /// Attempts per wanted instance for groups whose hypotheses can fail.
    std::size_t attempts_per_instance = 200;
};

/// Aggregate over one lemma or theorem.
struct CampaignLine {
    std::string name;
    std::size_t instances = 0;  ///< instances whose checks all ran
    std::size_t checks = 0;     ///< individual certificates evaluated
    std::size_t falsified = 0;
    std::size_t skipped = 0;
    double min_margin = 0.0;
    /// Largest slack / max(|lhs|, |rhs|) over the evaluated checks.
    double max_relative_slack = 0.0;
    /// Checks that hold only because of the slack (negative raw margin).
    std::size_t within_slack = 0;
    std::string first_failure;

    bool passed() const noexcept { return falsified == 0 && instances > 0; }
};

struct CampaignReport {
    std::vector<CampaignLine> lines;
    double seconds = 0.0;

    std::size_t falsifications() const noexcept;
    bool passed() const noexcept;
};

/// Runs every certification group. Deterministic for a fixed config.
CampaignReport run_campaign(const CampaignConfig& cfg = {});

/// Individual groups, exposed for targeted tests.
CampaignLine campaign_decoupling_lower(const CampaignConfig& cfg);
CampaignLine campaign_decoupling_upper(const CampaignConfig& cfg);
CampaignLine campaign_domination(const CampaignConfig& cfg);
CampaignLine campaign_charpoly(const CampaignConfig& cfg);
CampaignLine campaign_moment_bound(const CampaignConfig& cfg);
CampaignLine campaign_degree2(const CampaignConfig& cfg);
CampaignLine campaign_conditional_moment(const CampaignConfig& cfg);
CampaignLine campaign_negative_regression(const CampaignConfig& cfg);
CampaignLine campaign_cauchy_schwarz();

}  // namespace unseen::oracle
