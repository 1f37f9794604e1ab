#include <doctest.h>

#include "ncmatsaev/io_json.hpp"

using namespace ncm;
using ncm::io::json;

TEST_CASE("matrix schema round trip") {
    ComplexMatrix m(2, 3);
    m << cplx(1, 2), 0.5, cplx(0, -1), 3.0, cplx(-2, 0.25), 7.0;
    const json j = io::to_json(m);
    CHECK(j["rows"] == 2);
    CHECK(j["cols"] == 3);
    CHECK(j["data"][1][0] == 0.5); // row-major
    CHECK(io::complex_matrix_from_json(j) == m);
    CHECK_THROWS_AS(io::real_matrix_from_json(j), Error);

    const json plain = json::parse(R"({"rows": 2, "cols": 2, "data": [1, [0, 0], 0.5, 2]})");
    RealMatrix expected(2, 2);
    expected << 1.0, 0.0, 0.5, 2.0;
    CHECK(io::real_matrix_from_json(plain) == expected);
    CHECK_THROWS_AS(io::complex_matrix_from_json(json::parse(R"({"rows": 2, "cols": 2, "data": [1]})")), Error);
}

TEST_CASE("block vectors and records") {
    const auto x = BlockVector::from_blocks({ComplexMatrix::Identity(2, 2), ComplexMatrix::Ones(2, 2)});
    const auto back = io::block_vector_from_json(io::to_json(x));
    CHECK(back.stacked() == x.stacked());
    CHECK(io::p_from_json(json("inf")) == std::numeric_limits<double>::infinity());
    CHECK(io::p_to_json(std::numeric_limits<double>::infinity()) == "inf");
    CHECK_THROWS_AS(io::p_from_json(json("two")), Error);
}

TEST_CASE("group, semigroup and kernel specs") {
    CHECK(io::group_from_json(json::parse(R"({"kind": "cyclic", "n": 5})")).order() == 5);
    CHECK(io::group_from_json(json::parse(R"({"kind": "dihedral", "n": 3})")).order() == 6);
    const auto g = io::group_from_json(json::parse(R"({"kind": "table", "table": [[0, 1], [1, 0]]})"));
    CHECK(g.mul(1, 1) == 0);
    CHECK(io::to_json(cyclic_group(4)) == json::parse(R"({"kind": "cyclic", "n": 4})"));
    CHECK_THROWS_AS(io::group_from_json(json::parse(R"({"kind": "table", "table": [[0, 1], [0, 1]]})")), Error);

    const auto s = io::semigroup_from_json(json::parse(R"({"alphas": [[0, 0], [1, 0], [0, 2]]})"));
    CHECK(s.size() == 3);
    CHECK(s.squared_distances()(1, 2) == 5.0);
    CHECK(io::semigroup_from_json(io::to_json(s)).alphas == s.alphas);

    const auto k = io::kernel_from_json(json::parse(R"({"kind": "triangle", "center": 1, "half_width": 1})"));
    CHECK(k(1.0) == 1.0);
    CHECK(io::kernel_from_json(io::to_json(k))(0.5) == 0.5);
    const auto e = io::kernel_from_json(json::parse(R"({"kind": "exp", "rate": 2})"));
    CHECK(std::isinf(e.support_end));
    CHECK_THROWS_AS(io::kernel_from_json(json::parse(R"({"kind": "gauss"})")), Error);
}

TEST_CASE("profile csv") {
    NormProfile profile;
    profile.entries.push_back({8, 1.5, true, true, 0.0});
    const auto csv = io::profile_csv(profile);
    CHECK(csv == "n,value,converged\n8,1.5,true\n");
}
