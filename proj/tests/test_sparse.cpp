#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "rfddes/oracle.hpp"
#include "rfddes/rng.hpp"
#include "rfddes/sparse.hpp"

using namespace rfddes;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path);
  out << body;
}

} // namespace

TEST_CASE("matrix market: 3x3 identity, symmetric qualifier") {
  const auto path = temp_file("rfddes_identity.mtx");
  write_file(path,
             "%%MatrixMarket matrix coordinate real symmetric\n"
             "% comment line\n"
             "3 3 3\n"
             "1 1 1.0\n"
             "2 2 1.0\n"
             "3 3 1.0\n");
  const SparseSym a = load_matrix_market(path.string());
  CHECK(a.n == 3);
  CHECK(a.nnz() == 3);
  for (int i = 0; i < 3; ++i) CHECK(a.coeff(i, i) == 1.0);
}

TEST_CASE("matrix market: symmetric off-diagonals are mirrored") {
  const auto path = temp_file("rfddes_mirror.mtx");
  write_file(path,
             "%%MatrixMarket matrix coordinate real symmetric\n"
             "2 2 2\n"
             "1 1 4.0\n"
             "2 1 -1.0\n");
  const SparseSym a = load_matrix_market(path.string());
  CHECK(a.nnz() == 3);
  CHECK(a.coeff(0, 1) == -1.0);
  CHECK(a.coeff(1, 0) == -1.0);
}

TEST_CASE("matrix market: malformed and unsupported inputs are rejected") {
  const auto declared = temp_file("rfddes_short.mtx");
  write_file(declared,
             "%%MatrixMarket matrix coordinate real general\n"
             "3 3 5\n"
             "1 1 1.0\n"
             "2 2 1.0\n"
             "3 3 1.0\n"
             "1 2 0.5\n");
  CHECK_THROWS_AS(load_matrix_market(declared.string()), ParseError);

  const auto rect = temp_file("rfddes_rect.mtx");
  write_file(rect,
             "%%MatrixMarket matrix coordinate real general\n"
             "2 3 1\n"
             "1 1 1.0\n");
  CHECK_THROWS_AS(load_matrix_market(rect.string()), ParseError);

  const auto cplx = temp_file("rfddes_cplx.mtx");
  write_file(cplx,
             "%%MatrixMarket matrix coordinate complex symmetric\n"
             "1 1 1\n"
             "1 1 1.0 0.0\n");
  CHECK_THROWS_AS(load_matrix_market(cplx.string()), ParseError);

  const auto asym = temp_file("rfddes_asym.mtx");
  write_file(asym,
             "%%MatrixMarket matrix coordinate real general\n"
             "2 2 3\n"
             "1 1 1.0\n"
             "1 2 2.0\n"
             "2 1 3.0\n");
  CHECK_THROWS_AS(load_matrix_market(asym.string()), ParseError);

  CHECK_THROWS_AS(load_matrix_market("/nonexistent/file.mtx"), ParseError);
}

TEST_CASE("matrix market write/read round trip") {
  const SparseSym a = gen_fd_laplacian(4, 3);
  const auto path = temp_file("rfddes_roundtrip.mtx");
  save_matrix_market(a, path.string());
  const SparseSym b = load_matrix_market(path.string());
  REQUIRE(b.n == a.n);
  REQUIRE(b.nnz() == a.nnz());
  CHECK(b.col_indices == a.col_indices);
  CHECK(b.values == a.values);
}

TEST_CASE("fd laplacian: single node and stencil row sums") {
  const SparseSym one = gen_fd_laplacian(1, 1);
  CHECK(one.n == 1);
  CHECK(one.coeff(0, 0) == 4.0);

  const SparseSym grid = gen_fd_laplacian(3, 3);
  CHECK(grid.n == 9);
  const Eigen::VectorXd sums = spmv(grid, Eigen::VectorXd::Ones(9));
  // corners keep 2, edges 1, the center 0
  CHECK(sums[0] == 2.0);
  CHECK(sums[1] == 1.0);
  CHECK(sums[4] == 0.0);
  CHECK(sums[8] == 2.0);

  CHECK_THROWS(gen_fd_laplacian(0, 3));
}

TEST_CASE("fd laplacian matches the analytic spectrum") {
  const SparseSym a = gen_fd_laplacian(3, 3);
  const FullEigenReference ref = dense_gen_eig(a, SparseSym::identity(9));
  CHECK(ref.values[0] == doctest::Approx(4.0 - 2.0 * std::sqrt(2.0)).epsilon(1e-12));

  for (auto [nx, ny] : {std::pair{7, 5}, std::pair{12, 9}, std::pair{40, 40}}) {
    const SparseSym grid = gen_fd_laplacian(nx, ny);
    const FullEigenReference dense = dense_gen_eig(grid, SparseSym::identity(grid.n));
    const MeshModes modes = fd_mesh_modes(nx, ny);
    double worst = 0.0;
    for (int i = 0; i < grid.n; ++i)
      worst = std::max(worst, std::abs(dense.values[i] - modes.values[i]) / modes.values[i]);
    CHECK(worst <= 1e-12);
  }
}

TEST_CASE("spmv basics and dense agreement") {
  const SparseSym id = SparseSym::identity(5);
  Eigen::VectorXd x(5);
  x << 1, -2, 3, -4, 5;
  CHECK((spmv(id, x) - x).norm() == 0.0);

  const SparseSym a = gen_fd_laplacian(6, 4);
  for (int j : {0, 5, 23}) {
    const Eigen::VectorXd ej = Eigen::VectorXd::Unit(a.n, j);
    const Eigen::VectorXd col = spmv(a, ej);
    for (int i = 0; i < a.n; ++i) CHECK(col[i] == a.coeff(i, j));
  }

  auto [ra, rm] = random_sparse_pencil(200, 3, 17);
  const Eigen::MatrixXd dense = to_dense(ra);
  Rng rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::VectorXd v = rng.gaussian_vector(200);
    const Eigen::VectorXd lhs = spmv(ra, v);
    const Eigen::VectorXd rhs = dense * v;
    CHECK((lhs - rhs).norm() <= 1e-14 * rhs.norm());
  }

  CHECK_THROWS(spmv(a, Eigen::VectorXd::Ones(3)));
}

TEST_CASE("to_dense cap and round trip") {
  const SparseSym small = SparseSym::from_entries(2, {{0, 0, 4}, {0, 1, -1}, {1, 0, -1}, {1, 1, 4}});
  const Eigen::MatrixXd d = to_dense(small);
  CHECK(d(0, 0) == 4.0);
  CHECK(d(0, 1) == -1.0);

  const SparseSym back = from_dense(d);
  CHECK(back.col_indices == small.col_indices);
  CHECK(back.values == small.values);

  const SparseSym big = gen_fd_laplacian(100, 60);
  CHECK_THROWS(to_dense(big));
  CHECK_THROWS(to_dense_pencil(big, SparseSym::identity(big.n)));
}

TEST_CASE("generated and random matrices are exactly symmetric") {
  CHECK(max_asymmetry(gen_fd_laplacian(13, 7)) == 0.0);
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    auto [a, m] = random_sparse_pencil(80, 4, seed);
    CHECK(max_asymmetry(a) == 0.0);
    CHECK(max_asymmetry(m) == 0.0);
  }
}
