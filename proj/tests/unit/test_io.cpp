#include <filesystem>
#include <fstream>
#include <sstream>

#include "attndisco/attention.hpp"
#include "attndisco/io.hpp"
#include "doctest.h"

using namespace attndisco;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "attndisco_io_test" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

const char* kDoc = R"({"doc_id": "x",
  "edus": [{"id": 1, "sent": 0, "para": 0, "text": "a"}, {"id": 2, "sent": 0, "para": 0}],
  "layers": [{"layer": 0, "heads": [[[0.1, 0.9], [0.8, 0.2]]]}]})";

}  // namespace

TEST_CASE("document JSON") {
  const auto doc = io::parse_document(kDoc);
  CHECK(doc.doc_id == "x");
  CHECK(doc.size() == 2);
  CHECK(doc.edus[0].text == "a");
  CHECK(doc.layers[0].heads[0].at(1, 0) == 0.8);
  const auto again = io::parse_document(io::document_to_json(doc));
  CHECK(again.layers[0].heads[0] == doc.layers[0].heads[0]);
  CHECK(again.edus.size() == 2);

  CHECK_THROWS_WITH_AS(io::parse_document("{\"doc_id\": "), doctest::Contains("malformed JSON"),
                       DataError);
  CHECK_THROWS_WITH_AS(
      io::parse_document(R"({"doc_id": "y", "edus": [{"id": 1, "sent": 0}, {"id": 2, "sent": 0}],
                          "layers": [{"layer": 0, "heads": [[[1, 0, 0], [0, 1, 0]]]}]})"),
      doctest::Contains("matrix dimension mismatch"), DataError);
  CHECK_THROWS_AS(io::parse_document(R"({"doc_id": "z", "edus": [{"id": 1, "sent": 0}]})"),
                  DataError);
  CHECK_NOTHROW(io::parse_document(R"({"doc_id": "z", "edus": [{"id": 1, "sent": 0}]})", {},
                                   false));
}

TEST_CASE("binary sidecar") {
  const fs::path dir = scratch("adm");
  std::vector<AttentionLayer> layers = {
      {0, {AttentionMatrix::from_rows({{0.25, 0.75}, {0.5, 0.5}}), AttentionMatrix::identity(2)}},
      {1, {AttentionMatrix::uniform(2, 0.5), AttentionMatrix::identity(2)}}};
  {
    std::ofstream out(dir / "x.adm", std::ios::binary);
    io::write_adm(out, layers);
  }
  std::ifstream in(dir / "x.adm", std::ios::binary);
  const auto back = io::read_adm(in);
  REQUIRE(back.size() == 2);
  CHECK(back[0].heads[0] == layers[0].heads[0]);
  CHECK(back[1].heads[1] == layers[1].heads[1]);

  {
    std::ofstream doc(dir / "x.json");
    doc << R"({"doc_id": "x", "edus": [{"id": 1, "sent": 0}, {"id": 2, "sent": 0}],
              "layers_file": "x.adm"})";
  }
  const auto doc = io::load_document(dir / "x.json");
  CHECK(doc.layers.size() == 2);
  CHECK(select_matrix(doc, HeadSelector::single(0, 0)) == layers[0].heads[0]);

  std::istringstream bad(std::string("ADM0\x02\0\0\0", 8));
  CHECK_THROWS_AS(io::read_adm(bad), DataError);
}

TEST_CASE("constituency file") {
  std::istringstream in(
      "# a\n(NS (leaf 1) (SN (leaf 2) (leaf 3)))\n\n# b\n(leaf 1)\n"
      "(NN (leaf 1) (leaf 2)) (leaf 3)\n");
  const auto recs = io::read_const_trees(in);
  REQUIRE(recs.size() == 3);
  CHECK(recs[0].doc_id == "a");
  CHECK(recs[1].doc_id == "b");
  CHECK(recs[2].doc_id == "doc3");
  CHECK(recs[2].forest.size() == 2);
  const auto t = binarize_right(recs[0].forest);
  CHECK(io::format_const_tree(t) == "(NS (leaf 1) (SN (leaf 2) (leaf 3)))");
  std::ostringstream out;
  io::write_const_tree(out, "a", t);
  CHECK(out.str() == "# a\n(NS (leaf 1) (SN (leaf 2) (leaf 3)))\n");

  CHECK_THROWS_AS(io::parse_bracketed("(NS (leaf 1) (leaf 3))"), DataError);
  CHECK_THROWS_AS(io::parse_bracketed("(NS (leaf 1) (leaf 2)"), DataError);
  CHECK_THROWS_AS(io::parse_bracketed("(SS (leaf 1) (leaf 2))"), DataError);
  CHECK_THROWS_AS(io::parse_bracketed("(NSN (leaf 1) (leaf 2))"), DataError);
}

TEST_CASE("dependency file") {
  std::istringstream in("# a\n1\t2\n2\t0\n\n# b\n1\t0\n2\t1\n3\t1\n");
  const auto recs = io::read_dep_trees(in);
  REQUIRE(recs.size() == 2);
  CHECK(recs[0].tree.heads() == std::vector<int>{2, 0});
  CHECK(recs[1].tree.heads() == std::vector<int>{0, 1, 1});
  std::ostringstream out;
  io::write_dep_tree(out, "a", recs[0].tree);
  CHECK(out.str() == "# a\n1\t2\n2\t0\n\n");

  std::istringstream cycle("# c\n1\t2\n2\t1\n");
  CHECK_THROWS_AS(io::read_dep_trees(cycle), DataError);
  std::istringstream gap("# c\n1\t0\n3\t1\n");
  CHECK_THROWS_AS(io::read_dep_trees(gap), DataError);
}

TEST_CASE("file kind detection and listing") {
  const fs::path dir = scratch("kinds");
  std::ofstream(dir / "c.txt") << "# a\n(NS (leaf 1) (leaf 2))\n";
  std::ofstream(dir / "d.txt") << "# a\n1\t0\n2\t1\n";
  std::ofstream(dir / "e.txt") << "# nothing\n";
  CHECK(io::detect_tree_file(dir / "c.txt") == io::TreeFileKind::kConstituency);
  CHECK(io::detect_tree_file(dir / "d.txt") == io::TreeFileKind::kDependency);
  CHECK(io::detect_tree_file(dir / "e.txt") == io::TreeFileKind::kEmpty);

  std::ofstream(dir / "b.json") << "{}";
  std::ofstream(dir / "a.json") << "{}";
  const auto files = io::list_documents(dir);
  REQUIRE(files.size() == 2);
  CHECK(files[0].filename() == "a.json");
  CHECK_THROWS_AS(io::list_documents(dir / "missing"), DataError);
}
