#include "doctest.h"

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "fedcodec/errors.hpp"
#include "fedcodec/io.hpp"

using namespace fedcodec;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) : path("io_test_" + name) {}
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("io: vector files round-trip through f32") {
  TempFile f("vec.fvec");
  std::vector<double> v = {0.0, 1.5, -2.25, 0.1, 1e-8, -3e7};
  write_vector_file(f.path, v);

  std::vector<uint8_t> raw = read_bytes(f.path);
  REQUIRE(raw.size() == 8 + 4 * v.size());
  CHECK(raw[0] == 'F');
  CHECK(raw[1] == 'V');
  CHECK(raw[2] == 'E');
  CHECK(raw[3] == 'C');
  CHECK(raw[4] == v.size());
  CHECK(raw[5] == 0);

  std::vector<double> back = read_vector_file(f.path);
  REQUIRE(back.size() == v.size());
  for (size_t i = 0; i < v.size(); ++i)
    CHECK(back[i] == static_cast<double>(static_cast<float>(v[i])));
  // 0.1 is not representable in f32, so the round-trip is lossy by design.
  CHECK(back[3] != 0.1);
}

TEST_CASE("io: empty vector file") {
  TempFile f("empty.fvec");
  write_vector_file(f.path, std::vector<double>{});
  CHECK(read_bytes(f.path).size() == 8);
  CHECK(read_vector_file(f.path).empty());
}

TEST_CASE("io: corrupt vector files carry byte offsets") {
  TempFile f("bad.fvec");
  std::vector<double> v = {1.0, 2.0};
  write_vector_file(f.path, v);
  std::vector<uint8_t> raw = read_bytes(f.path);

  SUBCASE("bad magic at offset 0") {
    raw[0] = 'X';
    write_bytes(f.path, raw);
    try {
      read_vector_file(f.path);
      FAIL("expected CorruptStreamError");
    } catch (const CorruptStreamError& e) {
      CHECK(e.offset() == 0);
    }
  }
  SUBCASE("count/length mismatch at offset 8") {
    raw[4] = 9;
    write_bytes(f.path, raw);
    try {
      read_vector_file(f.path);
      FAIL("expected CorruptStreamError");
    } catch (const CorruptStreamError& e) {
      CHECK(e.offset() == 8);
    }
  }
  SUBCASE("truncated payload") {
    raw.pop_back();
    write_bytes(f.path, raw);
    CHECK_THROWS_AS(read_vector_file(f.path), CorruptStreamError);
  }
  SUBCASE("short header") {
    write_bytes(f.path, std::vector<uint8_t>{'F', 'V'});
    CHECK_THROWS_AS(read_vector_file(f.path), CorruptStreamError);
  }
}

TEST_CASE("io: missing files raise IoError") {
  CHECK_THROWS_AS(read_bytes("does_not_exist.bin"), IoError);
  CHECK_THROWS_AS(read_vector_file("does_not_exist.fvec"), IoError);
  CHECK_THROWS_AS(read_text("does_not_exist.txt"), IoError);
}

TEST_CASE("io: bytes and text round-trip") {
  TempFile f("blob.bin");
  std::vector<uint8_t> blob = {0, 255, 10, 13, 0, 7};
  write_bytes(f.path, blob);
  CHECK(read_bytes(f.path) == blob);

  TempFile g("note.txt");
  std::string text = "line one\nline two\n";
  write_text(g.path, text);
  CHECK(read_text(g.path) == text);
}
