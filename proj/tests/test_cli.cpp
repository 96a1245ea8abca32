#include <gtest/gtest.h>

#include "hpmult/cli.hpp"

using namespace hpmult;

namespace {

ExperimentConfig config(const std::string& text) { return resolve_config(parse_config_text(text)); }

}  // namespace

TEST(Config, Parsing) {
    const auto raw = parse_config_text("# comment\ncommand = decay\n  n=2 # trailing\n\nparam.m = -1\n");
    EXPECT_EQ(raw.at("command"), "decay");
    EXPECT_EQ(raw.at("n"), "2");
    EXPECT_EQ(raw.at("param.m"), "-1");
    EXPECT_THROW(parse_config_text("no equals sign"), ConfigError);
    EXPECT_THROW(parse_config_text(" = 3"), ConfigError);
    EXPECT_THROW(read_config_file("/nonexistent/file.cfg"), ConfigError);
}

TEST(Config, DefaultsAndValidation) {
    const auto v = config("command = verify");
    EXPECT_EQ(v.symbol, "gaussian_x");
    EXPECT_EQ(v.lambda, 10);
    EXPECT_EQ(v.quadrature_size(10), 36);
    const auto k = config("command = cks");
    EXPECT_EQ(k.lambda, shell_degrees(6, 1).hi);
    EXPECT_THROW(config(""), ConfigError);
    EXPECT_THROW(config("command = fly"), ConfigError);
    EXPECT_THROW(config("command = verify\nbogus = 1"), ConfigError);
    EXPECT_THROW(config("command = verify\nn = two"), ConfigError);
    EXPECT_THROW(config("command = verify\nn = 0"), ConfigError);
    EXPECT_THROW(config("command = decay\njmin = 5\njmax = 4"), ConfigError);
    EXPECT_THROW(config("command = verify\nsymbol = nope"), ConfigError);
    EXPECT_THROW(config("command = verify\nsymbol = power\nparam.q = 1"), ConfigError);
    EXPECT_THROW(config("command = verify\ntol_id = 0"), ConfigError);
    EXPECT_THROW(config("command = normsweep\nlambdas = 8,x"), ConfigError);
    EXPECT_THROW(config("command = verify\nseed = -1"), ConfigError);
}

TEST(Config, HashIsCanonical) {
    EXPECT_EQ(config("command = verify\nn = 2\nseed = 3").hash(), config("seed=3\nn=2\ncommand=verify").hash());
    EXPECT_NE(config("command = verify\nseed = 3").hash(), config("command = verify\nseed = 4").hash());
    EXPECT_EQ(config("command = verify").hash().size(), 16u);
}

TEST(Run, VerifyPassesAndCorruptionFails) {
    const auto ok = run_experiment(config("command = verify\nlambda = 6\norders = 2\nseed = 5"));
    EXPECT_EQ(ok.exit_code, kExitPass) << to_json_text(ok.report);
    EXPECT_TRUE(ok.report["failing"].empty());
    EXPECT_EQ(ok.files.count("identities.csv"), 1u);
    const auto bad = run_experiment(config("command = verify\nlambda = 6\norders = 2\nseed = 5\ncorrupt_coefficient = true"));
    EXPECT_EQ(bad.exit_code, kExitFail);
    ASSERT_FALSE(bad.report["failing"].empty());
    EXPECT_EQ(bad.report["failing"][0].get<std::string>(), "frequency_by_parts_1");
}

TEST(Run, BudgetExitCode) {
    const auto r = run_experiment(config("command = verify\nn = 3\nlambda = 40\nquad = 20"));
    EXPECT_EQ(r.exit_code, kExitConfig);
    EXPECT_EQ(r.report["error"]["kind"], "budget");
    const auto big = run_experiment(config("command = transfer\nn = 3\nlambda = 60"));
    EXPECT_EQ(big.exit_code, kExitConfig);
}

TEST(Run, Deterministic) {
    const auto c = config("command = verify\nn = 2\nlambda = 5\norders = 2\nseed = 7");
    const auto a = run_experiment(c), b = run_experiment(c);
    EXPECT_EQ(to_json_text(a.report), to_json_text(b.report));
    EXPECT_EQ(a.files.at("identities.csv"), b.files.at("identities.csv"));
}

TEST(Run, OtherCommands) {
    const auto t = run_experiment(config("command = transfer\nsymbol = sin_gaussian\nlambda = 8"));
    EXPECT_EQ(t.exit_code, kExitPass) << to_json_text(t.report);
    const auto n = run_experiment(config("command = normsweep\nsymbol = power\nparam.m = -2\nlambdas = 4,8,16"));
    EXPECT_EQ(n.exit_code, kExitPass) << to_json_text(n.report);
    const auto d = run_experiment(config("command = decay\njmin = 2\njmax = 5\norders = 1"));
    EXPECT_EQ(d.exit_code, kExitPass) << to_json_text(d.report);
    EXPECT_EQ(d.files.count("decay.csv"), 1u);
}
