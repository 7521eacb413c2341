#include "prolfa/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

namespace prolfa {
namespace {

constexpr char kDatasetMagic[4] = {'P', 'L', 'F', 'A'};
constexpr char kModelMagic[4] = {'P', 'L', 'F', 'M'};
constexpr char kMetaTag[4] = {'M', 'E', 'T', 'A'};
constexpr std::uint64_t kMaxElements = 1ull << 33;  // per-matrix element cap

class Writer {
 public:
  explicit Writer(const std::string& path) : out_(path, std::ios::binary), path_(path) {
    if (!out_) throw Error("cannot open '" + path + "' for writing");
  }
  void bytes(const void* p, std::size_t n) {
    out_.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
  }
  void u8(std::uint8_t v) { bytes(&v, 1); }
  void u16(std::uint16_t v) {
    const std::uint8_t b[2] = {std::uint8_t(v & 0xff), std::uint8_t(v >> 8)};
    bytes(b, 2);
  }
  void u32(std::uint32_t v) {
    std::uint8_t b[4];
    for (int i = 0; i < 4; ++i) b[i] = std::uint8_t((v >> (8 * i)) & 0xff);
    bytes(b, 4);
  }
  void f64(double v) {
    const auto u = std::bit_cast<std::uint64_t>(v);
    std::uint8_t b[8];
    for (int i = 0; i < 8; ++i) b[i] = std::uint8_t((u >> (8 * i)) & 0xff);
    bytes(b, 8);
  }
  void close() {
    out_.flush();
    if (!out_) throw Error("write to '" + path_ + "' failed");
    out_.close();
  }

 private:
  std::ofstream out_;
  std::string path_;
};

class Reader {
 public:
  explicit Reader(const std::string& path) : in_(path, std::ios::binary), path_(path) {
    if (!in_) throw Error("cannot open '" + path + "' for reading");
  }
  void bytes(void* p, std::size_t n) {
    in_.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n)
      throw Error("truncated payload in '" + path_ + "'");
  }
  std::uint8_t u8() {
    std::uint8_t v;
    bytes(&v, 1);
    return v;
  }
  std::uint16_t u16() {
    std::uint8_t b[2];
    bytes(b, 2);
    return static_cast<std::uint16_t>(b[0] | (std::uint16_t(b[1]) << 8));
  }
  std::uint32_t u32() {
    std::uint8_t b[4];
    bytes(b, 4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t(b[i]) << (8 * i);
    return v;
  }
  double f64() {
    std::uint8_t b[8];
    bytes(b, 8);
    std::uint64_t u = 0;
    for (int i = 0; i < 8; ++i) u |= std::uint64_t(b[i]) << (8 * i);
    return std::bit_cast<double>(u);
  }
  bool at_end() {
    return in_.peek() == std::char_traits<char>::eof();
  }

 private:
  std::ifstream in_;
  std::string path_;
};

void write_matrix_col_major(Writer& w, const Matrix& m) {
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i) w.f64(m(i, j));
}

void write_matrix_row_major(Writer& w, const Matrix& m) {
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) w.f64(m(i, j));
}

Matrix read_matrix_col_major(Reader& r, Index rows, Index cols) {
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = r.f64();
  return m;
}

Matrix read_matrix_row_major(Reader& r, Index rows, Index cols) {
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = r.f64();
  return m;
}

void write_meta_block(Writer& w, const std::string& meta) {
  if (meta.empty()) return;
  w.bytes(kMetaTag, 4);
  w.u32(static_cast<std::uint32_t>(meta.size()));
  w.bytes(meta.data(), meta.size());
}

std::string read_meta_block(Reader& r) {
  if (r.at_end()) return {};
  char tag[4];
  r.bytes(tag, 4);
  if (std::memcmp(tag, kMetaTag, 4) != 0) throw Error("unknown trailing block tag");
  const std::uint32_t len = r.u32();
  std::string meta(len, '\0');
  if (len > 0) r.bytes(meta.data(), len);
  return meta;
}

void check_element_count(std::uint64_t rows, std::uint64_t cols, const char* what) {
  if (rows * cols > kMaxElements)
    throw Error(std::string("dimension overflow in ") + what + " (" + std::to_string(rows) + " x " +
                std::to_string(cols) + ")");
}

}  // namespace

void write_descriptor_file(const DescriptorDataset& ds, const std::string& path) {
  Writer w(path);
  w.bytes(kDatasetMagic, 4);
  w.u16(kDatasetFormatVersion);
  w.u32(static_cast<std::uint32_t>(ds.dim()));
  w.u32(static_cast<std::uint32_t>(ds.descriptor_count()));
  w.u32(static_cast<std::uint32_t>(ds.sample_count()));
  w.u32(static_cast<std::uint32_t>(ds.response_dim()));
  std::uint8_t flags = 0;
  if (ds.has_responses()) flags |= 1;
  if (ds.has_label_mask()) flags |= 2;
  w.u8(flags);
  for (auto n : ds.partition) w.u32(n);
  write_matrix_col_major(w, ds.descriptors);
  if (ds.has_responses()) write_matrix_row_major(w, ds.responses);
  if (ds.has_label_mask())
    for (auto v : ds.label_mask) w.u8(v ? 1 : 0);
  write_meta_block(w, ds.metadata);
  w.close();
}

DescriptorDataset read_descriptor_file(const std::string& path) {
  Reader r(path);
  char magic[4];
  r.bytes(magic, 4);
  if (std::memcmp(magic, kDatasetMagic, 4) != 0) throw Error("bad magic in '" + path + "'");
  const std::uint16_t version = r.u16();
  if (version != kDatasetFormatVersion)
    throw Error("unsupported dataset format version " + std::to_string(version) + " (expected " +
                std::to_string(kDatasetFormatVersion) + ")");
  const std::uint32_t d = r.u32();
  const std::uint32_t n = r.u32();
  const std::uint32_t m = r.u32();
  const std::uint32_t c = r.u32();
  check_element_count(d, n, "descriptors");
  check_element_count(m, c, "responses");
  const std::uint8_t flags = r.u8();

  DescriptorDataset ds;
  ds.partition.resize(m);
  for (std::uint32_t i = 0; i < m; ++i) ds.partition[i] = r.u32();
  ds.descriptors = read_matrix_col_major(r, d, n);
  if (flags & 1) ds.responses = read_matrix_row_major(r, m, c);
  if (flags & 2) {
    ds.label_mask.resize(m);
    for (std::uint32_t i = 0; i < m; ++i) ds.label_mask[i] = r.u8();
  }
  ds.metadata = read_meta_block(r);
  return ds;
}

void save_model(const PrototypeModel& model, const std::string& path,
                const Matrix* training_descriptors) {
  if (model.prototype_book.cols() != static_cast<Index>(model.hyper.prototypes))
    throw Error("model prototype book has " + std::to_string(model.prototype_book.cols()) +
                " columns, hyperparameters say " + std::to_string(model.hyper.prototypes));
  if (model.has_selection() && training_descriptors != nullptr) {
    const Matrix rebuilt = *training_descriptors * model.selection;
    const double ref = std::max(1.0, rebuilt.norm());
    const double err = (rebuilt - model.prototype_book).norm() / ref;
    if (err > 1e-10)
      throw Error("refusing to save: prototype book differs from descriptors * selection by " +
                  std::to_string(err) + " relative Frobenius error");
  }

  Writer w(path);
  w.bytes(kModelMagic, 4);
  w.u16(model.format_version);
  w.u32(model.descriptor_dim);
  w.u32(static_cast<std::uint32_t>(model.prototype_book.cols()));
  w.u32(model.response_dim);
  w.u32(model.descriptor_count);
  w.u32(model.sample_count);
  const Hyperparameters& h = model.hyper;
  w.f64(h.lambda1);
  w.f64(h.lambda2);
  w.f64(h.mu);
  w.f64(h.eps_reweight);
  w.f64(h.tol_inner_row);
  w.f64(h.tol_admm);
  w.f64(h.tol_outer);
  w.f64(0.0);  // reserved
  w.u32(h.max_inner_row);
  w.u32(h.max_admm);
  w.u32(h.max_outer);
  w.u32(h.seed);
  write_matrix_col_major(w, model.prototype_book);
  write_matrix_row_major(w, model.projection);
  w.u8(model.has_selection() ? 1 : 0);
  if (model.has_selection()) {
    write_matrix_col_major(w, model.selection);
    for (Index j = 0; j < model.selection.cols(); ++j)
      w.u32(j < static_cast<Index>(model.selection_peak.size()) ? model.selection_peak[static_cast<std::size_t>(j)]
                                                                : 0);
  }
  write_meta_block(w, model.metadata);
  w.close();
}

PrototypeModel load_model(const std::string& path) {
  Reader r(path);
  char magic[4];
  r.bytes(magic, 4);
  if (std::memcmp(magic, kModelMagic, 4) != 0) throw Error("bad magic in '" + path + "'");
  const std::uint16_t version = r.u16();
  if (version != kModelFormatVersion)
    throw Error("unsupported model format version " + std::to_string(version) + " (expected " +
                std::to_string(kModelFormatVersion) + ")");

  PrototypeModel model;
  model.format_version = version;
  model.descriptor_dim = r.u32();
  const std::uint32_t d_bar = r.u32();
  model.response_dim = r.u32();
  model.descriptor_count = r.u32();
  model.sample_count = r.u32();
  check_element_count(model.descriptor_dim, d_bar, "prototype book");
  check_element_count(model.descriptor_count, d_bar, "selection");

  Hyperparameters& h = model.hyper;
  h.lambda1 = r.f64();
  h.lambda2 = r.f64();
  h.mu = r.f64();
  h.eps_reweight = r.f64();
  h.tol_inner_row = r.f64();
  h.tol_admm = r.f64();
  h.tol_outer = r.f64();
  (void)r.f64();  // reserved
  h.max_inner_row = r.u32();
  h.max_admm = r.u32();
  h.max_outer = r.u32();
  h.seed = r.u32();
  h.prototypes = d_bar;

  model.prototype_book = read_matrix_col_major(r, model.descriptor_dim, d_bar);
  model.projection = read_matrix_row_major(r, d_bar, model.response_dim);
  const std::uint8_t flags = r.u8();
  if (flags & 1) {
    model.selection = read_matrix_col_major(r, model.descriptor_count, d_bar);
    model.selection_peak.resize(d_bar);
    for (std::uint32_t j = 0; j < d_bar; ++j) model.selection_peak[j] = r.u32();
  }
  model.metadata = read_meta_block(r);
  return model;
}

DescriptorDataset read_descriptor_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "' for reading");

  std::vector<std::vector<double>> columns;
  std::vector<std::uint32_t> partition;
  std::string current_id;
  bool have_sample = false;
  Index dim = -1;
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> seen_ids;

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() < 2)
      throw Error("line " + std::to_string(line_no) + ": expected sample id plus coordinates");
    const std::string& id = cells[0];
    const Index d = static_cast<Index>(cells.size()) - 1;
    if (dim < 0) dim = d;
    if (d != dim)
      throw Error("line " + std::to_string(line_no) + ": descriptor has " + std::to_string(d) +
                  " coordinates, expected " + std::to_string(dim));

    if (!have_sample || id != current_id) {
      for (const auto& prev : seen_ids)
        if (prev == id)
          throw Error("line " + std::to_string(line_no) + ": sample id '" + id +
                      "' reappears after other samples; rows of one sample must be consecutive");
      seen_ids.push_back(id);
      partition.push_back(0);
      current_id = id;
      have_sample = true;
    }
    ++partition.back();
    columns.emplace_back();
    columns.back().reserve(static_cast<std::size_t>(dim));
    for (Index k = 0; k < dim; ++k) {
      try {
        std::size_t used = 0;
        const double v = std::stod(cells[static_cast<std::size_t>(k) + 1], &used);
        columns.back().push_back(v);
      } catch (const std::exception&) {
        throw Error("line " + std::to_string(line_no) + ": cannot parse coordinate '" +
                    cells[static_cast<std::size_t>(k) + 1] + "'");
      }
    }
  }
  if (columns.empty()) throw Error("'" + path + "' contains no descriptors");

  DescriptorDataset ds;
  ds.partition = std::move(partition);
  ds.descriptors.resize(dim, static_cast<Index>(columns.size()));
  for (std::size_t j = 0; j < columns.size(); ++j)
    for (Index i = 0; i < dim; ++i) ds.descriptors(i, static_cast<Index>(j)) = columns[j][static_cast<std::size_t>(i)];
  return ds;
}

}  // namespace prolfa
