#include <gtest/gtest.h>

#include <set>

#include "riemann/audit.hpp"

using namespace riemann;

namespace {

const audit::AuditReport& default_report()
{
    static const audit::AuditReport report = audit::run_audit(RunConfig{}, Curve::preset("w2z6"));
    return report;
}

} // namespace

TEST(Audit, RegistryIdsUnique)
{
    std::set<std::string> ids;
    for (const auto& c : audit::registry()) {
        EXPECT_TRUE(ids.insert(c.id).second) << c.id;
        if (c.kind == audit::Kind::asserted) {
            EXPECT_FALSE(std::isnan(c.tolerance)) << c.id;
        }
    }
}

TEST(Audit, DefaultRunAssertedClaimsPass)
{
    const auto& report = default_report();
    for (const auto& r : report.results) {
        if (r.kind == audit::Kind::asserted) {
            EXPECT_EQ(r.verdict, audit::Verdict::pass) << r.id << " metric " << r.evidence.metric << " " << r.error;
        } else {
            EXPECT_EQ(r.verdict, audit::Verdict::value) << r.id << " " << r.error;
        }
    }
    EXPECT_EQ(report.asserted_failures(), 0);
    EXPECT_EQ(report.document["claims"].size(), audit::registry().size());
}

TEST(Audit, ContestedEvidence)
{
    const auto& doc = default_report().document;
    auto find = [&](const std::string& id) {
        for (const auto& c : doc["claims"])
            if (c["id"] == id)
                return c;
        return nlohmann::json();
    };
    const auto omega = find("omega-nondegenerate-on-S");
    EXPECT_EQ(omega["values"]["points"].size(), 20u);
    EXPECT_LE(omega["metric"].get<double>(), 1e-9);

    EXPECT_EQ(find("surface-torus-quotient")["values"]["genus"], 2);
    EXPECT_GT(find("hamiltonian-field-stated-form")["metric"].get<double>(), 1e-3);
    EXPECT_GT(find("triangle-image")["metric"].get<double>(), 1e-3);
    EXPECT_EQ(find("stellated-formula-index")["metric"].get<double>(), 0.0);
    EXPECT_NEAR(find("hexagon-edge-factor")["metric"].get<double>(), 2.0, 1e-9);
    EXPECT_GT(find("delta-right-inverse")["metric"].get<double>(), 0.1);
}

TEST(Audit, DeterministicForFixedSeed)
{
    const auto again = audit::run_audit(RunConfig{}, Curve::preset("w2z6"));
    EXPECT_EQ(again.document.dump(2), default_report().document.dump(2));
    EXPECT_EQ(again.document.dump().find("wall_time"), std::string::npos);
}

TEST(Audit, EvaluatorExceptionBecomesError)
{
    const audit::Claim broken{"broken", "always throws", audit::Kind::asserted, 1.0,
                              [](audit::Context&) -> audit::Evidence { throw std::runtime_error("boom"); }};
    const Curve curve = Curve::preset("w2z6");
    const SheetTracker tracker(curve);
    const auto r = audit::evaluate_claim(broken, RunConfig{}, curve, tracker);
    EXPECT_EQ(r.verdict, audit::Verdict::error);
    EXPECT_EQ(r.error, "boom");
}

TEST(Audit, MarkdownListsEveryClaim)
{
    const std::string md = audit::to_markdown(default_report().document);
    for (const auto& c : audit::registry())
        EXPECT_NE(md.find("`" + c.id + "`"), std::string::npos) << c.id;
}
