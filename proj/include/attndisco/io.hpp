#ifndef ATTNDISCO_IO_HPP_
#define ATTNDISCO_IO_HPP_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "attndisco/core.hpp"
#include "attndisco/treeops.hpp"

namespace attndisco::io {

// Document JSON:
//   {"doc_id": "...",
//    "edus": [{"id": 1, "sent": 0, "para": 0, "text": "..."}, ...],
//    "layers": [{"layer": 0, "heads": [[[...n floats...], ...], ...]}, ...]}
// Instead of "layers" a document may name a binary sidecar with
// "layers_file": "<path relative to the JSON file>" (see read_adm).
// With require_attention=false, documents without layers are accepted.
AnnotatedDocument load_document(const std::filesystem::path& path,
                                bool require_attention = true);
AnnotatedDocument parse_document(const std::string& json_text,
                                 const std::filesystem::path& base_dir = {},
                                 bool require_attention = true);
std::string document_to_json(const AnnotatedDocument& doc);

// A file yields itself; a directory yields its *.json files sorted by name.
std::vector<std::filesystem::path> list_documents(const std::filesystem::path& input);

// Binary attention sidecar: one record per layer, each record is
// "ADM1", u32 n, u32 H, then H*n*n little-endian float32 values
// (head-major, then row-major).
std::vector<AttentionLayer> read_adm(std::istream& in);
void write_adm(std::ostream& out, const std::vector<AttentionLayer>& layers);

// Bracketed constituency trees, one document per line:
//   # doc_id
//   (NS (leaf 1) (SN (leaf 2) (leaf 3)))
// Labels give one N/S mark per child (NN, NS, SN for binary nodes) or "??"
// when unlabeled. Several trees on one line form a forest.
struct ConstRecord {
  std::string doc_id;
  NaryForest forest;
};

std::vector<ConstRecord> read_const_trees(std::istream& in);
std::vector<ConstRecord> read_const_trees(const std::filesystem::path& path);
NaryForest parse_bracketed(const std::string& line);
std::string format_const_tree(const ConstituencyTree& tree);
void write_const_tree(std::ostream& out, const std::string& doc_id,
                      const ConstituencyTree& tree);

// Dependency blocks: "# doc_id", then "edu<TAB>head" lines, blank line after.
struct DepRecord {
  std::string doc_id;
  DependencyTree tree;
};

std::vector<DepRecord> read_dep_trees(std::istream& in);
std::vector<DepRecord> read_dep_trees(const std::filesystem::path& path);
void write_dep_tree(std::ostream& out, const std::string& doc_id,
                    const DependencyTree& tree);

enum class TreeFileKind { kConstituency, kDependency, kEmpty };

// Sniffs the first non-comment line: '(' means constituency.
TreeFileKind detect_tree_file(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);

}  // namespace attndisco::io

#endif  // ATTNDISCO_IO_HPP_
