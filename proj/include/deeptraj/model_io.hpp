#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "deeptraj/autoencoder.hpp"

namespace deeptraj {

/// Names of the model tensors in serialization order, e.g.
/// "encoder.forget.W", "decoder.1.b", "head.W".
std::vector<std::string> tensor_names(const ModelDims& dims);

/**
 * Text model format:
 *
 *   deeptraj-model 1
 *   input_size 1
 *   hidden_size 32
 *   embed_dim 2
 *   seq_len 20
 *   decoder_widths 32 32
 *   decoder_activation tanh
 *   norm_mean <x>
 *   norm_sd <x>
 *   tensor <name> <rows> <cols>
 *   <row-major values, one row per line>
 *   ...
 *
 * Values are written in shortest round-trip form, so save/load is bit-exact.
 */
std::string serialize_model(const AutoencoderModel& model);
AutoencoderModel deserialize_model(const std::string& text);

void save_model(const std::filesystem::path& path, const AutoencoderModel& model);
/// Throws IoError, ParseError or ShapeMismatch.
AutoencoderModel load_model(const std::filesystem::path& path);

}  // namespace deeptraj
