#include <doctest.h>

#include <sstream>

#include "symkron/json_io.hpp"
#include "symkron/prng.hpp"

using namespace symkron;
using json = nlohmann::json;

TEST_CASE("complex scalars are strict [re, im] pairs") {
  CHECK(io::encode_complex(cplx{1.5, -2.0}) == json::array({1.5, -2.0}));
  CHECK(io::decode_complex(json::array({0.25, 3.0})) == cplx{0.25, 3.0});
  CHECK_THROWS_AS(io::decode_complex(json(1.0)), ShapeError);
  CHECK_THROWS_AS(io::decode_complex(json::array({1.0})), ShapeError);
  CHECK_THROWS_AS(io::decode_complex(json::array({"1", "2"})), ShapeError);
}

TEST_CASE("matrices round trip through the wire format") {
  SplitMix64 rng(60);
  ComplexMatrix m = random_complex_matrix(3, rng);
  json j = io::encode_matrix(m);
  ComplexMatrix back = io::decode_matrix(j);
  CHECK((m - back).norm() == 0.0);

  // serialize-parse cycle preserves every bit
  json reparsed = json::parse(j.dump());
  CHECK((io::decode_matrix(reparsed) - m).norm() == 0.0);

  CHECK_THROWS_AS(io::decode_matrix(json::parse("[[ [1,2] ],[ ]]")), ShapeError);
}

TEST_CASE("compressed vectors round trip, with and without labels") {
  SplitMix64 rng(61);
  SymVec v = make_sym_vec(3, 2);
  for (auto& z : v.data) z = rng.complex_normal();

  SymVec plain = io::decode_sym_vec(json::parse(io::encode_sym_vec(v).dump()));
  CHECK(plain.dim == 3);
  CHECK(plain.data == v.data);

  SymVec labelled =
      io::decode_sym_vec(json::parse(io::encode_sym_vec(v, true).dump()));
  CHECK(labelled.data == v.data);
}

TEST_CASE("labelled input may arrive permuted") {
  json j;
  j["dim"] = 2;
  j["order"] = 2;
  j["labels"] = json::array({json::array({0, 2}), json::array({2, 0}),
                             json::array({1, 1})});
  j["data"] = json::array({json::array({3.0, 0.0}), json::array({1.0, 0.0}),
                           json::array({2.0, 0.0})});
  SymVec v = io::decode_sym_vec(j);
  CHECK(v.data == std::vector<cplx>{cplx{1.0}, cplx{2.0}, cplx{3.0}});

  j["labels"][1] = json::array({0, 2});  // duplicate
  CHECK_THROWS_AS(io::decode_sym_vec(j), ShapeError);
}

TEST_CASE("wrong-length data is rejected") {
  json j;
  j["dim"] = 2;
  j["order"] = 2;
  j["data"] = json::array({json::array({1.0, 0.0})});
  CHECK_THROWS_AS(io::decode_sym_vec(j), ShapeError);
}

TEST_CASE("basis export carries 1-based triplets and round trips") {
  BasisMatrix P = build_P(2, 2);
  json j = io::encode_basis(P);
  CHECK(j["rows"] == 3);
  CHECK(j["cols"] == 4);
  REQUIRE(j["triplets"].size() == 4);
  // first triplet: row 1, column 1, value 1
  CHECK(j["triplets"][0] == json::array({1, 1, 1.0}));

  BasisMatrix back = io::decode_basis(json::parse(j.dump()));
  CHECK(back.rows == P.rows);
  CHECK(back.cols == P.cols);
  CHECK(back.values == P.values);
  CHECK(back.columns == P.columns);

  json single = io::encode_basis(build_P(1, 6));
  CHECK(single["triplets"] == json::array({json::array({1, 1, 1.0})}));
}

TEST_CASE("parameter sets round trip") {
  SplitMix64 rng(62);
  hagedorn::ParamPair p = hagedorn::random_valid_pair(2, 0.5, rng);
  hagedorn::ParamPair back =
      io::decode_params(json::parse(io::encode_params(p).dump()));
  CHECK(back.dim == 2);
  CHECK(back.hbar == 0.5);
  CHECK((back.A - p.A).norm() == 0.0);
  CHECK((back.B - p.B).norm() == 0.0);

  json j = io::encode_params(p);
  j["A"] = io::encode_matrix(complex_identity(3));
  CHECK_THROWS_AS(io::decode_params(j), ShapeError);
}

TEST_CASE("points csv reader") {
  std::istringstream in("0.5,1.25\n-1.0,2.0\n\n3.5,-0.125\n");
  RealMatrix pts = io::read_points_csv(in, 2);
  REQUIRE(pts.rows() == 3);
  CHECK(pts(0, 0) == 0.5);
  CHECK(pts(2, 1) == -0.125);

  std::istringstream ragged("1.0,2.0\n3.0\n");
  CHECK_THROWS_AS(io::read_points_csv(ragged), ShapeError);
  std::istringstream wrong("1.0,2.0\n");
  CHECK_THROWS_AS(io::read_points_csv(wrong, 3), ShapeError);
}

TEST_CASE("doubles print round-trip safe") {
  double v = 0.1 + 0.2;
  std::string s = io::format_double(v);
  CHECK(std::stod(s) == v);
  CHECK(io::format_double(1.0) == "1");
}
