#include <gtest/gtest.h>

#include <cstdlib>

#include "hpmult/io.hpp"

using namespace hpmult;

TEST(Json, SeventeenDigits) {
    Json j;
    j["b"] = 0.1;
    j["a"] = 1.0 / 3.0;
    j["inf"] = std::numeric_limits<double>::infinity();
    const std::string t = to_json_text(j);
    EXPECT_NE(t.find("0.10000000000000001"), std::string::npos);
    EXPECT_NE(t.find("0.33333333333333331"), std::string::npos);
    EXPECT_NE(t.find("\"inf\""), std::string::npos);
    EXPECT_LT(t.find("\"a\""), t.find("\"b\""));
    // round trip through the parser
    EXPECT_EQ(Json::parse(t)["a"].get<double>(), 1.0 / 3.0);
    EXPECT_EQ(format_double(std::nan("")), "nan");
}

TEST(Csv, HeaderAndRows) {
    CsvTable t({"j", "value"});
    t.row() << 3 << 0.5;
    t.row() << 4 << 2.0;
    const std::string s = t.text(hex64(fnv1a("x")));
    EXPECT_EQ(s.rfind("# hpmult 0.1.0 config=", 0), 0u);
    EXPECT_NE(s.find("\nj,value\n3,0.5\n4,2\n"), std::string::npos);
    CsvTable bad({"a", "b"});
    bad.row() << 1;
    EXPECT_THROW(bad.text("0"), std::logic_error);
    EXPECT_THROW(CsvTable({"a"}) << 1, std::logic_error);
}

TEST(Hash, Fnv1a) {
    EXPECT_EQ(fnv1a(""), 14695981039346656037ull);
    EXPECT_EQ(hex64(fnv1a("a")), "af63dc4c8601ec8c");
}

TEST(Matrix, BinaryRoundTrip) {
    OperatorMatrix M;
    M.spec = std::make_shared<const BasisSpec>(2, 3);
    const auto D = static_cast<Eigen::Index>(M.spec->size());
    M.m = Eigen::MatrixXcd::Random(D, D);
    const std::string bytes = matrix_binary(M);
    EXPECT_EQ(bytes.size(), 8 + 4 + 4 + 8 + static_cast<std::size_t>(D * D) * 16);
    const auto back = read_matrix_binary(bytes);
    EXPECT_EQ(back.spec->dim(), 2);
    EXPECT_EQ(back.spec->max_degree(), 3);
    EXPECT_EQ((back.m - M.m).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_THROW(read_matrix_binary("garbage"), std::runtime_error);
    EXPECT_THROW(read_matrix_binary(bytes.substr(0, bytes.size() - 3)), std::runtime_error);
    EXPECT_THROW(read_matrix_binary(bytes + "x"), std::runtime_error);
}

TEST(Matrix, CsvLayout) {
    Eigen::MatrixXcd m(1, 2);
    m << std::complex<double>(1, -2), std::complex<double>(0.5, 0);
    EXPECT_EQ(matrix_csv(m), "1,-2,0.5,0\n");
}

TEST(Expansion, Json) {
    HermiteExpansion f(1, 3);
    f.set({2}, cd(1.5, -1.0));
    const Json j = expansion_json(f);
    ASSERT_EQ(j["terms"].size(), 1u);
    EXPECT_EQ(j["terms"][0]["index"][0], 2);
    EXPECT_EQ(j["terms"][0]["im"].get<double>(), -1.0);
}
