#include "deeptraj/model_io.hpp"

#include <sstream>

#include "deeptraj/error.hpp"
#include "deeptraj/io.hpp"

namespace deeptraj {

namespace {

constexpr const char* kMagic = "deeptraj-model";
constexpr int kVersion = 1;

class Reader {
 public:
  explicit Reader(const std::string& text) : in_(text) {}

  std::string word(const char* what) {
    std::string w;
    require(static_cast<bool>(in_ >> w), ErrorKind::ParseError, std::string("model file: missing ") + what);
    return w;
  }

  void expect(const std::string& key) {
    const std::string w = word(key.c_str());
    require(w == key, ErrorKind::ParseError, "model file: expected '" + key + "', found '" + w + "'");
  }

  std::size_t count(const char* what) {
    const std::string w = word(what);
    std::size_t v = 0;
    try {
      std::size_t used = 0;
      v = std::stoul(w, &used);
      require(used == w.size(), ErrorKind::ParseError, "");
    } catch (const std::exception&) {
      throw Error(ErrorKind::ParseError, std::string("model file: bad ") + what + " '" + w + "'");
    }
    return v;
  }

  double real(const std::string& what) { return parse_double(word(what.c_str()), "model file " + what); }

  std::string rest_of_line() {
    std::string line;
    std::getline(in_, line);
    return line;
  }

 private:
  std::istringstream in_;
};

}  // namespace

std::vector<std::string> tensor_names(const ModelDims& dims) {
  std::vector<std::string> names;
  for (const char* gate : {"forget", "input", "output", "cell"})
    for (const char* part : {"W", "U", "b"}) names.push_back(std::string("encoder.") + gate + '.' + part);
  names.push_back("bottleneck.W");
  names.push_back("bottleneck.b");
  for (std::size_t l = 0; l < dims.decoder_widths.size(); ++l) {
    names.push_back("decoder." + std::to_string(l) + ".W");
    names.push_back("decoder." + std::to_string(l) + ".b");
  }
  names.push_back("head.W");
  names.push_back("head.b");
  return names;
}

std::string serialize_model(const AutoencoderModel& model) {
  model.validate();
  const ModelDims& d = model.dims;
  std::string out = std::string(kMagic) + ' ' + std::to_string(kVersion) + '\n';
  out += "input_size " + std::to_string(d.input_size) + '\n';
  out += "hidden_size " + std::to_string(d.hidden_size) + '\n';
  out += "embed_dim " + std::to_string(d.embed_dim) + '\n';
  out += "seq_len " + std::to_string(d.seq_len) + '\n';
  out += "decoder_widths";
  for (std::size_t w : d.decoder_widths) out += ' ' + std::to_string(w);
  out += '\n';
  out += "decoder_activation " + std::string(to_string(d.decoder_activation)) + '\n';
  out += "norm_mean " + format_double(model.norm.mean) + '\n';
  out += "norm_sd " + format_double(model.norm.sd) + '\n';
  const auto names = tensor_names(d);
  const auto tensors = model.params.tensors();
  for (std::size_t t = 0; t < tensors.size(); ++t) {
    const Matrix& m = *tensors[t];
    out += "tensor " + names[t] + ' ' + std::to_string(m.rows()) + ' ' + std::to_string(m.cols()) + '\n';
    for (std::size_t r = 0; r < m.rows(); ++r) {
      for (std::size_t c = 0; c < m.cols(); ++c) {
        if (c) out += ' ';
        out += format_double(m(r, c));
      }
      out += '\n';
    }
  }
  return out;
}

AutoencoderModel deserialize_model(const std::string& text) {
  Reader in(text);
  in.expect(kMagic);
  const std::size_t version = in.count("version");
  require(version == kVersion, ErrorKind::ParseError, "model file: unsupported version " + std::to_string(version));
  ModelDims d;
  in.expect("input_size");
  d.input_size = in.count("input_size");
  in.expect("hidden_size");
  d.hidden_size = in.count("hidden_size");
  in.expect("embed_dim");
  d.embed_dim = in.count("embed_dim");
  in.expect("seq_len");
  d.seq_len = in.count("seq_len");
  in.expect("decoder_widths");
  d.decoder_widths.clear();
  {
    std::istringstream widths(in.rest_of_line());
    std::string w;
    while (widths >> w) {
      try {
        d.decoder_widths.push_back(std::stoul(w));
      } catch (const std::exception&) {
        throw Error(ErrorKind::ParseError, "model file: bad decoder width '" + w + "'");
      }
    }
  }
  in.expect("decoder_activation");
  d.decoder_activation = parse_activation(in.word("decoder_activation"));

  AutoencoderModel model(d);
  in.expect("norm_mean");
  model.norm.mean = in.real("norm_mean");
  in.expect("norm_sd");
  model.norm.sd = in.real("norm_sd");

  const auto names = tensor_names(d);
  auto tensors = model.params.tensors();
  for (std::size_t t = 0; t < tensors.size(); ++t) {
    in.expect("tensor");
    in.expect(names[t]);
    const std::size_t rows = in.count("rows");
    const std::size_t cols = in.count("cols");
    Matrix& m = *tensors[t];
    require(rows == m.rows() && cols == m.cols(), ErrorKind::ShapeMismatch,
            "model file: tensor " + names[t] + " has the wrong shape");
    for (double& v : m.values()) v = in.real(names[t]);
  }
  model.validate();
  return model;
}

void save_model(const std::filesystem::path& path, const AutoencoderModel& model) {
  write_text(path, serialize_model(model));
}

AutoencoderModel load_model(const std::filesystem::path& path) { return deserialize_model(read_text(path)); }

}  // namespace deeptraj
