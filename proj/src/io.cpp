#include "attndisco/io.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace attndisco::io {

namespace fs = std::filesystem;
using nlohmann::json;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// ---------------------------------------------------------------------------
// Documents

namespace {

int get_int(const json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_number_integer()) {
    throw DataError(where + ": missing integer field \"" + key + "\"");
  }
  return it->get<int>();
}

AttentionMatrix matrix_from_json(const json& rows, const std::string& where) {
  if (!rows.is_array()) throw DataError(where + ": head must be an array of rows");
  std::vector<std::vector<double>> values;
  values.reserve(rows.size());
  for (const json& row : rows) {
    if (!row.is_array()) throw DataError(where + ": row must be an array of numbers");
    std::vector<double> r;
    r.reserve(row.size());
    for (const json& v : row) {
      if (!v.is_number()) throw DataError(where + ": non-numeric attention entry");
      r.push_back(v.get<double>());
    }
    values.push_back(std::move(r));
  }
  try {
    return AttentionMatrix::from_rows(values);
  } catch (const DataError& e) {
    throw DataError(where + ": " + e.what());
  }
}

std::uint32_t read_u32(std::istream& in) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) throw DataError("truncated ADM1 record");
  return static_cast<std::uint32_t>(b[0]) | static_cast<std::uint32_t>(b[1]) << 8 |
         static_cast<std::uint32_t>(b[2]) << 16 | static_cast<std::uint32_t>(b[3]) << 24;
}

void write_u32(std::ostream& out, std::uint32_t v) {
  const unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                              static_cast<unsigned char>(v >> 16),
                              static_cast<unsigned char>(v >> 24)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

}  // namespace

AnnotatedDocument parse_document(const std::string& json_text, const fs::path& base_dir,
                                 bool require_attention) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("malformed JSON: ") + e.what());
  }
  if (!root.is_object()) throw DataError("malformed JSON: document must be an object");

  AnnotatedDocument doc;
  const auto id = root.find("doc_id");
  if (id == root.end() || !id->is_string()) {
    throw DataError("malformed JSON: missing string field \"doc_id\"");
  }
  doc.doc_id = id->get<std::string>();
  const std::string where = "document '" + doc.doc_id + "'";

  const auto edus = root.find("edus");
  if (edus == root.end() || !edus->is_array()) {
    throw DataError(where + ": missing array field \"edus\"");
  }
  for (const json& e : *edus) {
    if (!e.is_object()) throw DataError(where + ": EDU entries must be objects");
    EduInfo edu;
    edu.position = get_int(e, "id", where);
    edu.sent_id = get_int(e, "sent", where);
    edu.para_id = e.contains("para") ? get_int(e, "para", where) : 0;
    if (const auto t = e.find("text"); t != e.end() && t->is_string()) {
      edu.text = t->get<std::string>();
    }
    doc.edus.push_back(std::move(edu));
  }

  if (const auto layers = root.find("layers"); layers != root.end()) {
    if (!layers->is_array()) throw DataError(where + ": \"layers\" must be an array");
    for (std::size_t l = 0; l < layers->size(); ++l) {
      const json& layer = (*layers)[l];
      AttentionLayer out;
      out.layer_index = layer.contains("layer") ? get_int(layer, "layer", where)
                                                : static_cast<int>(l);
      const auto heads = layer.find("heads");
      if (heads == layer.end() || !heads->is_array()) {
        throw DataError(where + ": layer " + std::to_string(l) + " lacks \"heads\"");
      }
      for (std::size_t h = 0; h < heads->size(); ++h) {
        out.heads.push_back(matrix_from_json(
            (*heads)[h], where + " layer " + std::to_string(out.layer_index) + " head " +
                             std::to_string(h)));
      }
      doc.layers.push_back(std::move(out));
    }
  } else if (const auto side = root.find("layers_file"); side != root.end()) {
    if (!side->is_string()) throw DataError(where + ": \"layers_file\" must be a string");
    const fs::path path = base_dir / side->get<std::string>();
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError(where + ": cannot open sidecar " + path.string());
    try {
      doc.layers = read_adm(in);
    } catch (const DataError& e) {
      throw DataError(where + ": " + e.what());
    }
  }

  if (require_attention && doc.layers.empty()) {
    throw DataError(where + ": document has no attention layers");
  }
  require_valid(doc);
  return doc;
}

AnnotatedDocument load_document(const fs::path& path, bool require_attention) {
  try {
    return parse_document(read_file(path), path.parent_path(), require_attention);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::string document_to_json(const AnnotatedDocument& doc) {
  json root;
  root["doc_id"] = doc.doc_id;
  json edus = json::array();
  for (const EduInfo& e : doc.edus) {
    json j{{"id", e.position}, {"sent", e.sent_id}, {"para", e.para_id}};
    if (e.text) j["text"] = *e.text;
    edus.push_back(std::move(j));
  }
  root["edus"] = std::move(edus);
  json layers = json::array();
  for (const AttentionLayer& layer : doc.layers) {
    json heads = json::array();
    for (const AttentionMatrix& m : layer.heads) {
      json rows = json::array();
      for (std::size_t i = 0; i < m.size(); ++i) {
        const auto r = m.row(i);
        rows.push_back(std::vector<double>(r.begin(), r.end()));
      }
      heads.push_back(std::move(rows));
    }
    layers.push_back(json{{"layer", layer.layer_index}, {"heads", std::move(heads)}});
  }
  root["layers"] = std::move(layers);
  return root.dump();
}

std::vector<fs::path> list_documents(const fs::path& input) {
  std::error_code ec;
  if (fs::is_regular_file(input, ec)) return {input};
  if (!fs::is_directory(input, ec)) throw DataError("no such input: " + input.string());
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(input)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      out.push_back(entry.path());
    }
  }
  std::sort(out.begin(), out.end());
  if (out.empty()) throw DataError("no *.json documents in " + input.string());
  return out;
}

std::vector<AttentionLayer> read_adm(std::istream& in) {
  std::vector<AttentionLayer> layers;
  while (in.peek() != std::char_traits<char>::eof()) {
    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, "ADM1", 4) != 0) {
      throw DataError("bad ADM1 magic in layer " + std::to_string(layers.size()));
    }
    const std::uint32_t n = read_u32(in);
    const std::uint32_t h = read_u32(in);
    if (n == 0 || h == 0) throw DataError("ADM1 record with zero dimension");
    AttentionLayer layer;
    layer.layer_index = static_cast<int>(layers.size());
    std::vector<unsigned char> raw(static_cast<std::size_t>(n) * n * 4);
    for (std::uint32_t k = 0; k < h; ++k) {
      if (!in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()))) {
        throw DataError("truncated ADM1 record");
      }
      std::vector<double> values(static_cast<std::size_t>(n) * n);
      for (std::size_t v = 0; v < values.size(); ++v) {
        const std::uint32_t bits = static_cast<std::uint32_t>(raw[4 * v]) |
                                   static_cast<std::uint32_t>(raw[4 * v + 1]) << 8 |
                                   static_cast<std::uint32_t>(raw[4 * v + 2]) << 16 |
                                   static_cast<std::uint32_t>(raw[4 * v + 3]) << 24;
        values[v] = static_cast<double>(std::bit_cast<float>(bits));
      }
      layer.heads.emplace_back(n, std::move(values));
    }
    layers.push_back(std::move(layer));
  }
  return layers;
}

void write_adm(std::ostream& out, const std::vector<AttentionLayer>& layers) {
  for (const AttentionLayer& layer : layers) {
    if (layer.heads.empty()) throw DataError("cannot write a layer without heads");
    const auto n = static_cast<std::uint32_t>(layer.heads.front().size());
    out.write("ADM1", 4);
    write_u32(out, n);
    write_u32(out, static_cast<std::uint32_t>(layer.heads.size()));
    for (const AttentionMatrix& m : layer.heads) {
      if (m.size() != n) throw DataError("matrix dimension mismatch across heads");
      for (double v : m.values()) write_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
    }
  }
}

// ---------------------------------------------------------------------------
// Constituency trees

namespace {

class BracketParser {
 public:
  explicit BracketParser(const std::string& text) : text_(text) {}

  NaryForest parse_forest() {
    NaryForest forest;
    skip_space();
    while (pos_ < text_.size()) {
      forest.push_back(parse_node());
      skip_space();
    }
    if (forest.empty()) fail("empty tree line");
    return forest;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw DataError("bracketed tree, column " + std::to_string(pos_ + 1) + ": " + what);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  void expect(char c) {
    skip_space();
    if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string atom() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] != '(' && text_[pos_] != ')' &&
           !std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
    if (start == pos_) fail("expected a label");
    return text_.substr(start, pos_ - start);
  }

  NaryNode parse_node() {
    expect('(');
    const std::string label = atom();
    if (label == "leaf") {
      const std::string num = atom();
      int position = 0;
      try {
        std::size_t used = 0;
        position = std::stoi(num, &used);
        if (used != num.size()) throw std::invalid_argument(num);
      } catch (const std::exception&) {
        fail("bad leaf index '" + num + "'");
      }
      expect(')');
      return NaryNode::leaf(position);
    }
    std::vector<NaryNode> children;
    skip_space();
    while (pos_ < text_.size() && text_[pos_] == '(') {
      children.push_back(parse_node());
      skip_space();
    }
    expect(')');
    if (children.size() < 2) fail("internal node '" + label + "' needs two or more children");
    const bool unlabeled = label.find_first_not_of('?') == std::string::npos;
    if (!unlabeled) {
      if (label.size() != children.size()) {
        fail("label '" + label + "' does not match " + std::to_string(children.size()) +
             " children");
      }
      for (std::size_t k = 0; k < label.size(); ++k) {
        if (label[k] == 'N') {
          children[k].role = Role::kNucleus;
        } else if (label[k] == 'S') {
          children[k].role = Role::kSatellite;
        } else {
          fail("bad nuclearity label '" + label + "'");
        }
      }
      if (label.find('N') == std::string::npos) fail("label '" + label + "' has no nucleus");
    }
    return NaryNode::internal(std::move(children));
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

void format_node(const ConstituencyTree& tree, int idx, std::string& out) {
  const ConstituencyNode& node = tree.node(idx);
  if (node.is_leaf()) {
    out += "(leaf " + std::to_string(node.first) + ")";
    return;
  }
  out += "(";
  out += node.nuclearity ? to_string(*node.nuclearity) : "??";
  out += " ";
  format_node(tree, node.left, out);
  out += " ";
  format_node(tree, node.right, out);
  out += ")";
}

}  // namespace

NaryForest parse_bracketed(const std::string& line) {
  NaryForest forest = BracketParser(line).parse_forest();
  check_forest(forest);
  return forest;
}

std::vector<ConstRecord> read_const_trees(std::istream& in) {
  std::vector<ConstRecord> out;
  std::string line, pending_id;
  bool have_id = false;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '#') {
      pending_id = trim(t.substr(1));
      have_id = true;
      continue;
    }
    ConstRecord rec;
    rec.doc_id = have_id ? pending_id : "doc" + std::to_string(out.size() + 1);
    try {
      rec.forest = parse_bracketed(t);
    } catch (const DataError& e) {
      throw DataError("line " + std::to_string(line_no) + " (" + rec.doc_id + "): " + e.what());
    }
    out.push_back(std::move(rec));
    have_id = false;
  }
  return out;
}

std::vector<ConstRecord> read_const_trees(const fs::path& path) {
  std::istringstream in(read_file(path));
  try {
    return read_const_trees(in);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::string format_const_tree(const ConstituencyTree& tree) {
  std::string out;
  format_node(tree, tree.root_index(), out);
  return out;
}

void write_const_tree(std::ostream& out, const std::string& doc_id,
                      const ConstituencyTree& tree) {
  out << "# " << doc_id << "\n" << format_const_tree(tree) << "\n";
}

// ---------------------------------------------------------------------------
// Dependency trees

std::vector<DepRecord> read_dep_trees(std::istream& in) {
  std::vector<DepRecord> out;
  std::string line, doc_id;
  std::vector<int> heads;
  bool open = false;
  int line_no = 0;
  const auto flush = [&] {
    if (!open) return;
    if (heads.empty()) throw DataError("document '" + doc_id + "' has no EDUs");
    try {
      out.push_back({doc_id, DependencyTree(heads)});
    } catch (const DataError& e) {
      throw DataError("document '" + doc_id + "': " + e.what());
    }
    heads.clear();
    open = false;
  };
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty()) {
      flush();
      continue;
    }
    if (t.front() == '#') {
      flush();
      doc_id = trim(t.substr(1));
      open = true;
      continue;
    }
    if (t.front() == '(') {
      throw DataError("line " + std::to_string(line_no) +
                      ": found a constituency tree where a dependency block was expected");
    }
    if (!open) {
      doc_id = "doc" + std::to_string(out.size() + 1);
      open = true;
    }
    std::istringstream fields(t);
    int edu = 0, head = 0;
    std::string rest;
    if (!(fields >> edu >> head) || (fields >> rest)) {
      throw DataError("line " + std::to_string(line_no) + ": expected 'edu<TAB>head'");
    }
    if (edu != static_cast<int>(heads.size()) + 1) {
      throw DataError("line " + std::to_string(line_no) + ": expected EDU " +
                      std::to_string(heads.size() + 1) + ", found " + std::to_string(edu));
    }
    heads.push_back(head);
  }
  flush();
  return out;
}

std::vector<DepRecord> read_dep_trees(const fs::path& path) {
  std::istringstream in(read_file(path));
  try {
    return read_dep_trees(in);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void write_dep_tree(std::ostream& out, const std::string& doc_id, const DependencyTree& tree) {
  out << "# " << doc_id << "\n";
  for (int d = 1; d <= static_cast<int>(tree.size()); ++d) {
    out << d << "\t" << tree.head(d) << "\n";
  }
  out << "\n";
}

TreeFileKind detect_tree_file(const fs::path& path) {
  std::istringstream in(read_file(path));
  std::string line;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    return t.front() == '(' ? TreeFileKind::kConstituency : TreeFileKind::kDependency;
  }
  return TreeFileKind::kEmpty;
}

}  // namespace attndisco::io
